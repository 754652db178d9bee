#include "meshpix/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "meshpix/errors.hpp"
#include "meshpix/simd/kernels.hpp"

namespace meshpix {

double rmse(const GrayImage& a, const GrayImage& b) {
    if (a.width != b.width || a.height != b.height)
        throw InputError("rmse: image dimensions differ");
    if (a.pixel_count() == 0) throw InputError("rmse: empty images");
    const double ssd = kern::sum_sq_diff(a.data.data(), b.data.data(), a.pixel_count());
    return std::sqrt(ssd / static_cast<double>(a.pixel_count()));
}

double psnr(const GrayImage& a, const GrayImage& b) {
    const double e = rmse(a, b);
    if (e == 0.0) return std::numeric_limits<double>::infinity();
    return 20.0 * std::log10(255.0 / e);
}

double compression_ratio(const TriMesh& mesh, const GrayImage& img) {
    return static_cast<double>(mesh.vertices.size()) /
           static_cast<double>(img.pixel_count());
}

std::string format_db(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

std::string QualityReport::to_kv() const {
    std::ostringstream os;
    os << "image=" << image << " method=" << method << " kernel=" << kernel
       << " c=" << shape_c << " ratio=" << compression_ratio
       << " psnr_db=" << format_db(psnr_db) << " rmse=" << rmse
       << " psnr_pre_db=" << format_db(psnr_pre_db) << " time_s=" << wall_time_seconds
       << " regularized_systems=" << regularized_systems
       << " fallback_triangles=" << fallback_triangles;
    return os.str();
}

std::string QualityReport::csv_header() {
    return "image,method,kernel,c,ratio,psnr_db,rmse,time_s,regularized_systems,"
           "fallback_triangles";
}

std::string QualityReport::to_csv_row() const {
    std::ostringstream os;
    os << image << "," << method << "," << kernel << "," << shape_c << ","
       << compression_ratio << "," << format_db(psnr_db) << "," << rmse << ","
       << wall_time_seconds << "," << regularized_systems << ","
       << fallback_triangles;
    return os.str();
}

}  // namespace meshpix
