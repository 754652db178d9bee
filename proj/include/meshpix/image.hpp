#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace meshpix {

// Grayscale image with real-valued intensities in [0, 255]. Intensities stay
// real internally (interpolated decodes are sub-integer); quantization to
// 8 bits happens only when a file is written.
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<double> data;  // row-major, data[y * width + x]

    GrayImage() = default;
    GrayImage(int w, int h, double fill = 0.0)
        : width(w), height(h),
          data(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), fill) {}

    double& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
    double at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }

    std::size_t pixel_count() const { return data.size(); }
};

// Round half away from zero, then clamp to [0, 255].
std::uint8_t quantize_intensity(double v);

// Quantized copy (applies quantize_intensity per pixel, stored back as reals).
GrayImage quantized(const GrayImage& img);

// Bilinear sample at real coordinates; coordinates are clamped to the image.
double sample_bilinear(const GrayImage& img, double x, double y);

// Reads PGM (P2/P5, 8-bit) or PNG (8-bit, non-interlaced). Color input is
// converted by luminance 0.299 R + 0.587 G + 0.114 B.
GrayImage load_image(const std::string& path);

// Writes PGM (P5) or PNG depending on the file extension (.png -> PNG,
// anything else -> PGM). Intensities are quantized on the way out.
void save_image(const GrayImage& img, const std::string& path);

namespace pngio {
// 8-bit PNG support on top of zlib. gray==true writes color type 0.
void write_png(const std::string& path, const std::uint8_t* pixels, int w, int h,
               int channels);
// Returns interleaved 8-bit samples and the channel count (1, 2, 3 or 4).
std::vector<std::uint8_t> read_png(const std::string& path, int& w, int& h,
                                   int& channels);
}  // namespace pngio

}  // namespace meshpix
