#include "meshpix/rbf.hpp"

#include <cmath>

#include "meshpix/errors.hpp"

namespace meshpix {
namespace {

constexpr double kPivotRatioFloor = 1e-12;
constexpr double kTikhonovScale = 1e-8;

// Plain LU with partial pivoting; returns false when a pivot is too small
// to divide by. pivot_ratio receives min|pivot| / max|pivot|.
bool lu_solve(std::vector<double> a, std::vector<double> b, int n,
              std::vector<double>& x, double& pivot_ratio) {
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;

    double min_piv = 0.0, max_piv = 0.0;
    for (int k = 0; k < n; ++k) {
        int piv = k;
        double best = std::fabs(a[static_cast<std::size_t>(perm[k]) * n + k]);
        for (int r = k + 1; r < n; ++r) {
            const double v = std::fabs(a[static_cast<std::size_t>(perm[r]) * n + k]);
            if (v > best) {
                best = v;
                piv = r;
            }
        }
        std::swap(perm[k], perm[piv]);
        const double pk = a[static_cast<std::size_t>(perm[k]) * n + k];
        if (pk == 0.0) {
            pivot_ratio = 0.0;
            return false;
        }
        const double apk = std::fabs(pk);
        min_piv = k == 0 ? apk : std::min(min_piv, apk);
        max_piv = k == 0 ? apk : std::max(max_piv, apk);
        for (int r = k + 1; r < n; ++r) {
            double* row = &a[static_cast<std::size_t>(perm[r]) * n];
            const double m = row[k] / pk;
            row[k] = m;
            if (m == 0.0) continue;
            const double* prow = &a[static_cast<std::size_t>(perm[k]) * n];
            for (int c = k + 1; c < n; ++c) row[c] -= m * prow[c];
            b[perm[r]] -= m * b[perm[k]];
        }
    }
    pivot_ratio = max_piv > 0.0 ? min_piv / max_piv : 0.0;

    x.assign(n, 0.0);
    for (int i = n - 1; i >= 0; --i) {
        double s = b[perm[i]];
        const double* row = &a[static_cast<std::size_t>(perm[i]) * n];
        for (int c = i + 1; c < n; ++c) s -= row[c] * x[c];
        x[i] = s / row[i];
    }
    return true;
}

}  // namespace

KernelKind kernel_from_name(const std::string& name) {
    if (name == "gaussian") return KernelKind::gaussian;
    if (name == "mq") return KernelKind::mq;
    if (name == "imq") return KernelKind::imq;
    if (name == "tps") return KernelKind::tps;
    throw InputError("unknown kernel '" + name + "' (gaussian|mq|imq|tps)");
}

std::string kernel_name(KernelKind k) {
    switch (k) {
        case KernelKind::gaussian: return "gaussian";
        case KernelKind::mq: return "mq";
        case KernelKind::imq: return "imq";
        case KernelKind::tps: return "tps";
    }
    return "?";
}

double kernel_eval(const Kernel& k, double r2) {
    switch (k.kind) {
        case KernelKind::gaussian: return std::exp(-(k.c * k.c) * r2);
        case KernelKind::mq: return std::sqrt(r2 + k.c * k.c);
        case KernelKind::imq: return 1.0 / std::sqrt(r2 + k.c * k.c);
        case KernelKind::tps: return r2 > 0.0 ? 0.5 * r2 * std::log(r2) : 0.0;
    }
    return 0.0;
}

RbfMatrix assemble(const std::vector<Point2>& centers,
                   const std::vector<double>& values, const Kernel& kernel,
                   const Dist2Fn& dist2fn) {
    const int n = static_cast<int>(centers.size());
    RbfMatrix m;
    m.n = n;
    m.a.resize(static_cast<std::size_t>(n) * n);
    m.rhs = values;
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i <= j; ++i) {
            const double v = kernel_eval(kernel, dist2fn(centers[j], centers[i]));
            m.a[static_cast<std::size_t>(j) * n + i] = v;
            m.a[static_cast<std::size_t>(i) * n + j] = v;
        }
    }
    return m;
}

SolveResult solve(const RbfMatrix& system) {
    const int n = system.n;
    if (n <= 0) throw NumericError("solve: empty system");

    SolveResult res;
    double ratio = 0.0;
    if (lu_solve(system.a, system.rhs, n, res.weights, ratio) &&
        ratio >= kPivotRatioFloor)
        return res;

    // Near-singular: Tikhonov fallback on the original matrix.
    double trace = 0.0;
    for (int i = 0; i < n; ++i) trace += system.a[static_cast<std::size_t>(i) * n + i];
    const double mu = kTikhonovScale * trace / n;
    std::vector<double> areg = system.a;
    for (int i = 0; i < n; ++i) areg[static_cast<std::size_t>(i) * n + i] += mu;

    res.regularized = true;
    if (!lu_solve(areg, system.rhs, n, res.weights, ratio) || ratio == 0.0)
        throw NumericError("rbf system singular even after regularization");
    return res;
}

RbfSystem solve_system(std::vector<Point2> centers, std::vector<double> values,
                       const Kernel& kernel, const Dist2Fn& dist2fn) {
    RbfSystem sys;
    sys.kernel = kernel;
    const SolveResult sr = solve(assemble(centers, values, kernel, dist2fn));
    sys.centers = std::move(centers);
    sys.values = std::move(values);
    sys.weights = sr.weights;
    sys.regularized = sr.regularized;
    return sys;
}

double evaluate(const RbfSystem& system, const Point2& x, const Dist2Fn& dist2fn) {
    double s = 0.0;
    for (std::size_t i = 0; i < system.centers.size(); ++i)
        s += system.weights[i] * kernel_eval(system.kernel, dist2fn(x, system.centers[i]));
    return s;
}

Dist2Fn euclidean_dist2() {
    return [](const Point2& a, const Point2& b) { return dist2(a, b); };
}

}  // namespace meshpix
