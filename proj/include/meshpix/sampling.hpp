#pragma once

#include <vector>

#include "meshpix/geometry.hpp"
#include "meshpix/image.hpp"

namespace meshpix {

enum class SampleTag { canny, halftone, uniform };

// The three sample-point populations plus the edge polylines that become
// triangulation constraints. edge_chains index into points and refer only
// to canny-tagged entries.
struct SamplePointSet {
    std::vector<Point2> points;
    std::vector<SampleTag> tags;
    std::vector<std::vector<int>> edge_chains;
};

struct SamplingConfig {
    double canny_sigma = 1.4;
    double canny_low = 0.10;   // fraction of the max gradient magnitude
    double canny_high = 0.25;  // fraction of the max gradient magnitude
    int pca_window = 11;
    double pca_dense_spacing = 3.0;
    double pca_sparse_spacing = 10.0;
    double pca_anisotropy_threshold = 0.08;
    double halftone_fraction = 0.07;
    double uniform_spacing = 4.0;
    double min_separation = 1.5;

    void validate() const;  // throws InputError on bad parameters
};

// Canny detector: Gaussian smoothing, Sobel gradients, non-maximum
// suppression, double-threshold hysteresis, then linking of the surviving
// pixels into maximal simple 8-connected chains. low/high are fractions of
// the maximum gradient magnitude. Flat images yield an empty list.
std::vector<std::vector<Point2>> canny_edges(const GrayImage& img, double low,
                                             double high, double sigma);

struct ThinnedChains {
    std::vector<Point2> points;             // kept canny points
    std::vector<std::vector<int>> chains;   // indices into points, in order
};

// Curvature-adaptive decimation of edge chains. For each chain point the
// eigenvalue ratio mu = lmin/lmax of the covariance of the surrounding
// window of chain points serves as a curvature proxy; the kept-point
// spacing interpolates linearly from sparse_spacing at mu = 0 to
// dense_spacing at mu >= anisotropy_threshold. Chain endpoints are always
// kept.
ThinnedChains pca_thin(const std::vector<std::vector<Point2>>& chains, int window,
                       double dense_spacing, double sparse_spacing,
                       double anisotropy_threshold);

// Error-diffusion sampling of |LoG| (Laplacian of the Gaussian-smoothed
// image): the density map is normalized, scaled to target_fraction of the
// pixel count, and halftoned with serpentine Floyd-Steinberg. Deterministic.
std::vector<Point2> halftone_points(const GrayImage& img, double target_fraction,
                                    double sigma = 1.0);

// Regular grid of pitch `spacing` (plus the final row/column at the image
// border). A grid point is emitted iff no existing point lies within
// `spacing` and no previously emitted grid point lies within spacing/2.
// The four image corners are appended whenever nothing covers them.
std::vector<Point2> uniform_points(const GrayImage& img,
                                   const std::vector<Point2>& existing,
                                   double spacing);

// Full sampler: canny -> halftone -> uniform with global min_separation
// dedup (canny > halftone > uniform priority) and guaranteed image-corner
// coverage.
SamplePointSet build_samples(const GrayImage& img, const SamplingConfig& cfg);

}  // namespace meshpix
