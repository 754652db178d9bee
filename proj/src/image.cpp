#include "meshpix/image.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "meshpix/errors.hpp"

namespace meshpix {
namespace {

bool has_suffix(const std::string& s, const std::string& suffix) {
    if (s.size() < suffix.size()) return false;
    for (std::size_t i = 0; i < suffix.size(); ++i) {
        const char a = static_cast<char>(std::tolower(static_cast<unsigned char>(
            s[s.size() - suffix.size() + i])));
        if (a != suffix[i]) return false;
    }
    return true;
}

// Next whitespace-delimited token in a PGM header/body, skipping '#' comments.
bool next_pgm_token(std::istream& in, std::string& tok) {
    tok.clear();
    int ch;
    while ((ch = in.get()) != EOF) {
        if (ch == '#') {
            while ((ch = in.get()) != EOF && ch != '\n') {}
            continue;
        }
        if (std::isspace(ch)) {
            if (!tok.empty()) return true;
            continue;
        }
        tok.push_back(static_cast<char>(ch));
    }
    return !tok.empty();
}

long parse_pgm_int(std::istream& in, const std::string& what) {
    std::string tok;
    if (!next_pgm_token(in, tok)) throw InputError("truncated pgm header: missing " + what);
    try {
        std::size_t pos = 0;
        const long v = std::stol(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw InputError("malformed pgm " + what + ": '" + tok + "'");
    }
}

GrayImage load_pgm(const std::string& path, std::ifstream& in) {
    char magic[2] = {0, 0};
    in.read(magic, 2);
    const bool ascii = magic[1] == '2';
    if (magic[0] != 'P' || (magic[1] != '2' && magic[1] != '5'))
        throw InputError("unsupported format (expected PGM P2/P5 or PNG): " + path);

    const long w = parse_pgm_int(in, "width");
    const long h = parse_pgm_int(in, "height");
    const long maxval = parse_pgm_int(in, "maxval");
    if (w <= 0 || h <= 0) throw InputError("zero-dimension image: " + path);
    if (maxval <= 0 || maxval > 255)
        throw InputError("unsupported pgm maxval (8-bit only): " + path);

    GrayImage img(static_cast<int>(w), static_cast<int>(h));
    if (ascii) {
        for (std::size_t i = 0; i < img.pixel_count(); ++i) {
            const long v = parse_pgm_int(in, "pixel");
            if (v < 0 || v > maxval) throw InputError("pgm pixel out of range: " + path);
            img.data[i] = static_cast<double>(v);
        }
    } else {
        // P5: exactly one whitespace byte after maxval, then raw bytes.
        std::vector<std::uint8_t> raw(img.pixel_count());
        in.read(reinterpret_cast<char*>(raw.data()),
                static_cast<std::streamsize>(raw.size()));
        if (static_cast<std::size_t>(in.gcount()) != raw.size())
            throw InputError("truncated pgm pixel data: " + path);
        for (std::size_t i = 0; i < raw.size(); ++i)
            img.data[i] = static_cast<double>(raw[i]);
    }
    return img;
}

GrayImage from_samples(const std::vector<std::uint8_t>& px, int w, int h, int channels,
                       const std::string& path) {
    if (w <= 0 || h <= 0) throw InputError("zero-dimension image: " + path);
    GrayImage img(w, h);
    const std::size_t n = img.pixel_count();
    switch (channels) {
        case 1:
        case 2:  // gray + alpha; alpha ignored
            for (std::size_t i = 0; i < n; ++i)
                img.data[i] = static_cast<double>(px[i * channels]);
            break;
        case 3:
        case 4:
            for (std::size_t i = 0; i < n; ++i) {
                const double r = px[i * channels + 0];
                const double g = px[i * channels + 1];
                const double b = px[i * channels + 2];
                img.data[i] = 0.299 * r + 0.587 * g + 0.114 * b;
            }
            break;
        default:
            throw InputError("unsupported channel count in " + path);
    }
    return img;
}

}  // namespace

std::uint8_t quantize_intensity(double v) {
    const double r = std::round(v);  // halfway cases away from zero
    if (r <= 0.0) return 0;
    if (r >= 255.0) return 255;
    return static_cast<std::uint8_t>(r);
}

GrayImage quantized(const GrayImage& img) {
    GrayImage out(img.width, img.height);
    for (std::size_t i = 0; i < img.pixel_count(); ++i)
        out.data[i] = static_cast<double>(quantize_intensity(img.data[i]));
    return out;
}

double sample_bilinear(const GrayImage& img, double x, double y) {
    if (x < 0.0) x = 0.0;
    if (y < 0.0) y = 0.0;
    if (x > img.width - 1) x = img.width - 1;
    if (y > img.height - 1) y = img.height - 1;
    const int x0 = static_cast<int>(x);
    const int y0 = static_cast<int>(y);
    const int x1 = x0 + 1 < img.width ? x0 + 1 : x0;
    const int y1 = y0 + 1 < img.height ? y0 + 1 : y0;
    const double fx = x - x0;
    const double fy = y - y0;
    const double top = img.at(x0, y0) + fx * (img.at(x1, y0) - img.at(x0, y0));
    const double bot = img.at(x0, y1) + fx * (img.at(x1, y1) - img.at(x0, y1));
    return top + fy * (bot - top);
}

GrayImage load_image(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("unreadable file: " + path);
    int c0 = in.peek();
    if (c0 == EOF) throw InputError("unreadable file (empty): " + path);
    if (c0 == 0x89) {
        int w = 0, h = 0, channels = 0;
        in.close();
        const auto px = pngio::read_png(path, w, h, channels);
        return from_samples(px, w, h, channels, path);
    }
    return load_pgm(path, in);
}

void save_image(const GrayImage& img, const std::string& path) {
    if (img.width <= 0 || img.height <= 0 ||
        img.pixel_count() != static_cast<std::size_t>(img.width) * img.height)
        throw InputError("cannot save empty or inconsistent image");

    std::vector<std::uint8_t> bytes(img.pixel_count());
    for (std::size_t i = 0; i < bytes.size(); ++i)
        bytes[i] = quantize_intensity(img.data[i]);

    if (has_suffix(path, ".png")) {
        pngio::write_png(path, bytes.data(), img.width, img.height, 1);
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot open for writing: " + path);
    out << "P5\n" << img.width << " " << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw InputError("write failure: " + path);
}

}  // namespace meshpix
