#pragma once

#include <vector>

#include "meshpix/geometry.hpp"
#include "meshpix/image.hpp"

namespace meshpix {

// Symmetric 2x2 metric (t11 t12; t12 t22).
struct Metric2 {
    double t11 = 1.0;
    double t12 = 0.0;
    double t22 = 1.0;
};

inline Metric2 identity_metric() { return {}; }

// Squared anisotropic distance (p-q)^T T (p-q). With the identity metric
// this is the squared Euclidean distance.
inline double anisotropic_dist2(const Point2& p, const Point2& q, const Metric2& m) {
    const double dx = p.x - q.x;
    const double dy = p.y - q.y;
    return m.t11 * dx * dx + 2.0 * m.t12 * dx * dy + m.t22 * dy * dy;
}

struct GradientField {
    int width = 0, height = 0;
    std::vector<double> gx, gy;
};

// Raw (unconditioned) smoothed structure tensor entries per pixel.
struct RawTensor {
    int width = 0, height = 0;
    std::vector<double> s11, s12, s22;
};

// Conditioned per-pixel metric field. Entries interpolate bilinearly; SPD is
// preserved under the convex combination.
struct TensorField {
    int width = 0, height = 0;
    std::vector<double> t11, t12, t22;

    Metric2 at_pixel(int x, int y) const {
        const std::size_t i = static_cast<std::size_t>(y) * width + x;
        return {t11[i], t12[i], t22[i]};
    }
    // Bilinear sample at real coordinates (clamped). Integer coordinates
    // return the stored entries unchanged.
    Metric2 at(double x, double y) const;
};

// Eigen-decomposition of a symmetric 2x2 matrix. lambda1 >= lambda2; e1 is
// the unit eigenvector of lambda1 (the edge normal for structure tensors),
// e2 = rot90(e1).
struct SymEigen2 {
    double lambda1 = 0.0, lambda2 = 0.0;
    double e1x = 1.0, e1y = 0.0;
};
SymEigen2 sym_eigen2(double s11, double s12, double s22);

// Central differences in the interior, one-sided at the borders.
// gx = dI/dx (columns), gy = dI/dy (rows).
GradientField gradient(const GrayImage& img);

// Gaussian-smoothed outer product of the gradient. sigma == 0 skips the
// smoothing; the Gaussian is truncated at radius ceil(3 sigma) and
// renormalized at the borders.
RawTensor structure_tensor(const GrayImage& img, double sigma);

// Conditioned anisotropic metric from raw tensor entries:
//   lambda1_hat = 1 + kappa * [lambda1/(lambda1+lambda2+1e-8)]
//                           * [lambda1/(lambda1+tau^2)],
//   lambda2_hat = 1,
// reassembled as T = [e1 e2] diag(lambda_hat) [e1 e2]^T. The first factor is
// the directional dominance, the second gates it by absolute edge strength
// (tau in gray levels per pixel) so smooth shading stays near-isotropic.
// Flat regions give exactly the identity; kappa == 0 gives the identity
// everywhere.
Metric2 condition_tensor(double s11, double s12, double s22, double kappa,
                         double tau = 16.0);

// Full pipeline: gradient -> structure tensor -> conditioned metric field.
TensorField build_tensor_field(const GrayImage& img, double sigma, double kappa,
                               double tau = 16.0);

// Identity metric field with the given dimensions (the isotropic decode path).
TensorField identity_tensor_field(int width, int height);

// Normalized Gaussian taps for the separable passes: taps[j], j = 0..radius.
std::vector<double> gaussian_taps(double sigma, int& radius);

// Separable Gaussian smoothing of an arbitrary channel (used by sampling too).
void gaussian_smooth(const double* src, double* dst, int w, int h, double sigma);

}  // namespace meshpix
