#pragma once

#include <functional>
#include <string>
#include <vector>

#include "meshpix/geometry.hpp"
#include "meshpix/simd/kernels.hpp"

namespace meshpix {

using KernelKind = kern::Radial;

KernelKind kernel_from_name(const std::string& name);
std::string kernel_name(KernelKind k);

// Radial kernel with shape parameter c. c is required > 0 for gaussian, mq
// and imq; tps ignores it.
struct Kernel {
    KernelKind kind = KernelKind::mq;
    double c = 0.5;
};

// phi applied to a squared distance r2 (r = sqrt(r2)):
//   gaussian  exp(-c^2 r2)
//   mq        sqrt(r2 + c^2)
//   imq       1 / sqrt(r2 + c^2)
//   tps       r^2 ln r = 0.5 r2 ln r2, with the limit value 0 at r2 = 0
double kernel_eval(const Kernel& k, double r2);

// Squared-distance functional used for system assembly/evaluation.
using Dist2Fn = std::function<double(const Point2&, const Point2&)>;

// Small dense symmetric system A w = f with A[j][i] = phi(d2(x_j, x_i)).
struct RbfMatrix {
    int n = 0;
    std::vector<double> a;  // row-major n x n
    std::vector<double> rhs;
};

RbfMatrix assemble(const std::vector<Point2>& centers,
                   const std::vector<double>& values, const Kernel& kernel,
                   const Dist2Fn& dist2fn);

struct SolveResult {
    std::vector<double> weights;
    bool regularized = false;
};

// Dense LU with partial pivoting. A pivot ratio min|p|/max|p| below 1e-12
// triggers a Tikhonov re-solve with A + mu I, mu = 1e-8 trace(A)/N, and the
// result is flagged regularized. Throws NumericError when the system stays
// singular even then.
SolveResult solve(const RbfMatrix& system);

// A solved local interpolation problem.
struct RbfSystem {
    std::vector<Point2> centers;
    std::vector<double> values;
    Kernel kernel;
    std::vector<double> weights;
    bool regularized = false;
};

RbfSystem solve_system(std::vector<Point2> centers, std::vector<double> values,
                       const Kernel& kernel, const Dist2Fn& dist2fn);

// s(x) = sum_i w_i phi(d2(x, x_i)).
double evaluate(const RbfSystem& system, const Point2& x, const Dist2Fn& dist2fn);

// Euclidean squared distance as a Dist2Fn.
Dist2Fn euclidean_dist2();

}  // namespace meshpix
