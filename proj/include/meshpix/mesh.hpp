#pragma once

#include <array>
#include <string>
#include <vector>

#include "meshpix/geometry.hpp"

namespace meshpix {

// Triangular mesh over an image. Triangles are stored counterclockwise;
// centers are the vertex centroids and center_intensity holds the encoded
// per-triangle value (the interpolation data of the codec).
struct TriMesh {
    int image_width = 0;
    int image_height = 0;
    std::vector<Point2> vertices;
    std::vector<std::array<int, 3>> triangles;
    std::vector<std::array<int, 2>> constrained_edges;
    std::vector<Point2> centers;
    std::vector<double> center_intensity;
};

// Centroid of each triangle.
std::vector<Point2> triangle_centers(const TriMesh& mesh);

// Recompute mesh.centers from the current vertices/triangles.
void refresh_centers(TriMesh& mesh);

// Text format (see save_mesh for the layout). Round-trips exactly:
// load_mesh(save_mesh(m)) reproduces vertex order, triangle order,
// constraint flags and coordinates bit-for-bit.
void save_mesh(const TriMesh& mesh, const std::string& path);
TriMesh load_mesh(const std::string& path);

}  // namespace meshpix
