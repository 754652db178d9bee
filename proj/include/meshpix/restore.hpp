#pragma once

#include <string>
#include <vector>

#include "meshpix/image.hpp"
#include "meshpix/mesh.hpp"
#include "meshpix/rbf.hpp"
#include "meshpix/tensor.hpp"

namespace meshpix {

// Interpolation support of one triangle: the triangle itself plus every
// triangle sharing at least one vertex with it (ascending indices).
struct Neighborhood {
    int triangle = 0;
    std::vector<int> support;
};

std::vector<Neighborhood> find_neighbors(const TriMesh& mesh);

// k nearest triangle centers (by Euclidean distance from each centroid,
// ties by index); the triangle itself is always included.
std::vector<Neighborhood> knn_neighbors(const TriMesh& mesh, int k);

// Encoder-side sampling of the per-triangle interpolation values: the mean
// of the source pixels whose centers fall inside each triangle (pixels on
// shared edges count for the lowest-index triangle). Triangles with no
// interior pixel center sample the source bilinearly at their centroid.
std::vector<double> center_intensities(const GrayImage& img, const TriMesh& mesh);

enum class Method { piecewise, vertex_iso_rbf, triangle_iso_rbf, triangle_arbf };
Method method_from_name(const std::string& name);
std::string method_name(Method m);

enum class SupportPolicy { one_ring, knn };

// Where the anisotropic metric is evaluated on the right-hand side of the
// interpolation: at each output pixel (default) or frozen at the triangle
// centroid used for the coefficient solve.
enum class MetricEval { pixel, centroid };

struct RestoreConfig {
    Method method = Method::triangle_arbf;
    Kernel kernel{KernelKind::mq, 0.5};
    double scale = 1.0;  // super-resolution factor, >= 1
    SupportPolicy support = SupportPolicy::one_ring;
    int knn_k = 13;
    MetricEval metric_eval = MetricEval::centroid;
};

struct RestoreStats {
    int regularized_systems = 0;
    int fallback_triangles = 0;  // piecewise value used after a failed solve
    int solve_count = 0;
};

// For every output pixel, the lowest-index triangle containing its mesh
// coordinate. Output pixel (u, v) maps to mesh coordinates
// (u*(w-1)/(W-1), v*(h-1)/(H-1)); at scale 1 this is the identity. Throws
// NumericError if any pixel is uncovered (cannot happen when the image
// corners are mesh vertices).
std::vector<int> triangle_index_map(const TriMesh& mesh, int out_w, int out_h);

// Decode the mesh into an out_w x out_h image. `tensor` (in the encoded
// image's frame) is required for triangle_arbf; vertex_values (one per mesh
// vertex) is required for vertex_iso_rbf. Output intensities are clamped to
// [0, 255] at the very end; no intermediate clamping.
GrayImage restore(const TriMesh& mesh, const TensorField* tensor,
                  const RestoreConfig& cfg, int out_w, int out_h,
                  RestoreStats* stats = nullptr,
                  const std::vector<double>* vertex_values = nullptr);

}  // namespace meshpix
