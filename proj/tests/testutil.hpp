#pragma once

#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "meshpix/image.hpp"

namespace testutil {

using meshpix::GrayImage;

// Fresh directory under the system temp root, removed when the guard dies.
struct TempDir {
    std::filesystem::path path;
    explicit TempDir(const std::string& tag) {
        path = std::filesystem::temp_directory_path() /
               ("meshpix_" + tag + "_" + std::to_string(::getpid()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

inline GrayImage constant_image(int w, int h, double v) { return GrayImage(w, h, v); }

// Left half lo, right half hi; the step sits between columns step_col-1 and
// step_col.
inline GrayImage step_image(int w, int h, int step_col, double lo = 0.0,
                            double hi = 255.0) {
    GrayImage img(w, h, lo);
    for (int y = 0; y < h; ++y)
        for (int x = step_col; x < w; ++x) img.at(x, y) = hi;
    return img;
}

inline GrayImage disk_image(int w, int h, double cx, double cy, double r,
                            double fg = 255.0, double bg = 0.0) {
    GrayImage img(w, h, bg);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            if ((x - cx) * (x - cx) + (y - cy) * (y - cy) <= r * r)
                img.at(x, y) = fg;
    return img;
}

inline GrayImage random_image(int w, int h, unsigned seed, double lo = 0.0,
                              double hi = 255.0) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> dist(lo, hi);
    GrayImage img(w, h);
    for (double& v : img.data) v = dist(rng);
    return img;
}

inline GrayImage random_int_image(int w, int h, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> dist(0, 255);
    GrayImage img(w, h);
    for (double& v : img.data) v = static_cast<double>(dist(rng));
    return img;
}

// Deterministic 256x256 stand-in for a natural test image: smooth shaded
// background with several high-contrast shapes (disk, ring, rotated bar,
// triangle wedge) so both smooth regions and sharp edges are represented.
GrayImage standard_image_256();

// Larger variant (arbitrary dims) used for timing and multi-image checks.
GrayImage synthetic_scene(int w, int h, unsigned seed);

// Smooth shading only (sinusoid + Gaussian bumps, no sharp edges): the
// decode of this image is a smooth interpolant everywhere.
GrayImage smooth_scene(int w, int h);

// Naive long-double sum of squared differences (metrics oracle).
inline long double naive_ssd(const GrayImage& a, const GrayImage& b) {
    long double s = 0.0L;
    for (std::size_t i = 0; i < a.data.size(); ++i) {
        const long double d = static_cast<long double>(a.data[i]) - b.data[i];
        s += d * d;
    }
    return s;
}

}  // namespace testutil
