#pragma once

#include <string>

#include "meshpix/image.hpp"
#include "meshpix/mesh.hpp"

namespace meshpix {

// RMSE over all pixels: sqrt(sum (a-b)^2 / (M*N)). Throws InputError on a
// dimension mismatch. Accumulation is compensated, so the value matches a
// wide-accumulator reference to full precision.
double rmse(const GrayImage& a, const GrayImage& b);

// 20 log10(255 / rmse); +infinity for identical images.
double psnr(const GrayImage& a, const GrayImage& b);

// Mesh vertex count over pixel count of the source image.
double compression_ratio(const TriMesh& mesh, const GrayImage& img);

struct QualityReport {
    std::string image;
    std::string method;
    std::string kernel;
    double shape_c = 0.0;
    double compression_ratio = 0.0;
    double psnr_db = 0.0;       // against the quantized decode (the headline)
    double rmse = 0.0;          // against the quantized decode
    double psnr_pre_db = 0.0;   // against the real-valued decode (diagnostic)
    double wall_time_seconds = 0.0;
    int regularized_systems = 0;
    int fallback_triangles = 0;

    // Single-line key=value record.
    std::string to_kv() const;
    // Row for the fixed CSV schema:
    // image,method,kernel,c,ratio,psnr_db,rmse,time_s,regularized_systems,fallback_triangles
    std::string to_csv_row() const;
    static std::string csv_header();
};

// Format a double the way reports do ("inf" for infinities).
std::string format_db(double v);

}  // namespace meshpix
