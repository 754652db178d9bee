#include <zlib.h>

#include <cstring>
#include <fstream>

#include "meshpix/errors.hpp"
#include "meshpix/image.hpp"

// Minimal PNG codec for the formats this project needs: 8-bit samples,
// no interlacing. Reading accepts gray, gray+alpha, RGB, RGBA and palette
// images; writing emits gray or RGB with filter type 0 on every row.

namespace meshpix::pngio {
namespace {

constexpr std::uint8_t kSig[8] = {137, 80, 78, 71, 13, 10, 26, 10};

std::uint32_t be32(const std::uint8_t* p) {
    return (static_cast<std::uint32_t>(p[0]) << 24) |
           (static_cast<std::uint32_t>(p[1]) << 16) |
           (static_cast<std::uint32_t>(p[2]) << 8) | p[3];
}

void put_be32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

void write_chunk(std::ofstream& out, const char type[4],
                 const std::uint8_t* data, std::uint32_t len) {
    std::vector<std::uint8_t> buf;
    buf.reserve(len + 12);
    put_be32(buf, len);
    buf.insert(buf.end(), type, type + 4);
    if (len) buf.insert(buf.end(), data, data + len);
    std::uint32_t crc = crc32(0L, Z_NULL, 0);
    crc = crc32(crc, buf.data() + 4, len + 4);
    put_be32(buf, crc);
    out.write(reinterpret_cast<const char*>(buf.data()),
              static_cast<std::streamsize>(buf.size()));
}

int paeth(int a, int b, int c) {
    const int p = a + b - c;
    const int pa = std::abs(p - a), pb = std::abs(p - b), pc = std::abs(p - c);
    if (pa <= pb && pa <= pc) return a;
    if (pb <= pc) return b;
    return c;
}

void unfilter(std::vector<std::uint8_t>& raw, int w, int h, int bpp,
              const std::string& path) {
    const std::size_t stride = static_cast<std::size_t>(w) * bpp;
    for (int y = 0; y < h; ++y) {
        std::uint8_t* row = raw.data() + static_cast<std::size_t>(y) * (stride + 1);
        const std::uint8_t filter = row[0];
        std::uint8_t* cur = row + 1;
        const std::uint8_t* prev =
            y > 0 ? raw.data() + static_cast<std::size_t>(y - 1) * (stride + 1) + 1
                  : nullptr;
        switch (filter) {
            case 0:
                break;
            case 1:
                for (std::size_t i = bpp; i < stride; ++i) cur[i] += cur[i - bpp];
                break;
            case 2:
                if (prev)
                    for (std::size_t i = 0; i < stride; ++i) cur[i] += prev[i];
                break;
            case 3:
                for (std::size_t i = 0; i < stride; ++i) {
                    const int left = i >= static_cast<std::size_t>(bpp) ? cur[i - bpp] : 0;
                    const int up = prev ? prev[i] : 0;
                    cur[i] = static_cast<std::uint8_t>(cur[i] + ((left + up) >> 1));
                }
                break;
            case 4:
                for (std::size_t i = 0; i < stride; ++i) {
                    const int left = i >= static_cast<std::size_t>(bpp) ? cur[i - bpp] : 0;
                    const int up = prev ? prev[i] : 0;
                    const int ul = (prev && i >= static_cast<std::size_t>(bpp))
                                       ? prev[i - bpp]
                                       : 0;
                    cur[i] = static_cast<std::uint8_t>(cur[i] + paeth(left, up, ul));
                }
                break;
            default:
                throw InputError("png: unknown filter type in " + path);
        }
    }
}

}  // namespace

std::vector<std::uint8_t> read_png(const std::string& path, int& w, int& h,
                                   int& channels) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("unreadable file: " + path);
    std::uint8_t sig[8];
    in.read(reinterpret_cast<char*>(sig), 8);
    if (in.gcount() != 8 || std::memcmp(sig, kSig, 8) != 0)
        throw InputError("not a png file: " + path);

    int bitdepth = 0, colortype = 0;
    std::vector<std::uint8_t> idat;
    std::vector<std::uint8_t> palette;  // rgb triples
    w = h = 0;

    for (;;) {
        std::uint8_t head[8];
        in.read(reinterpret_cast<char*>(head), 8);
        if (in.gcount() != 8) throw InputError("png: truncated chunk in " + path);
        const std::uint32_t len = be32(head);
        char type[5] = {static_cast<char>(head[4]), static_cast<char>(head[5]),
                        static_cast<char>(head[6]), static_cast<char>(head[7]), 0};
        std::vector<std::uint8_t> data(len);
        if (len) {
            in.read(reinterpret_cast<char*>(data.data()), len);
            if (static_cast<std::uint32_t>(in.gcount()) != len)
                throw InputError("png: truncated chunk data in " + path);
        }
        in.ignore(4);  // crc

        if (std::strcmp(type, "IHDR") == 0) {
            if (len != 13) throw InputError("png: bad IHDR in " + path);
            w = static_cast<int>(be32(data.data()));
            h = static_cast<int>(be32(data.data() + 4));
            bitdepth = data[8];
            colortype = data[9];
            if (bitdepth != 8)
                throw InputError("png: only 8-bit samples supported: " + path);
            if (data[12] != 0)
                throw InputError("png: interlaced images not supported: " + path);
        } else if (std::strcmp(type, "PLTE") == 0) {
            palette = data;
        } else if (std::strcmp(type, "IDAT") == 0) {
            idat.insert(idat.end(), data.begin(), data.end());
        } else if (std::strcmp(type, "IEND") == 0) {
            break;
        }
        // ancillary chunks skipped
    }
    if (w <= 0 || h <= 0) throw InputError("png: missing IHDR in " + path);

    int bpp;
    switch (colortype) {
        case 0: bpp = 1; break;
        case 2: bpp = 3; break;
        case 3: bpp = 1; break;
        case 4: bpp = 2; break;
        case 6: bpp = 4; break;
        default: throw InputError("png: unsupported color type in " + path);
    }

    const std::size_t stride = static_cast<std::size_t>(w) * bpp;
    std::vector<std::uint8_t> raw((stride + 1) * h);
    uLongf raw_len = static_cast<uLongf>(raw.size());
    const int zrc = uncompress(raw.data(), &raw_len, idat.data(),
                               static_cast<uLong>(idat.size()));
    if (zrc != Z_OK || raw_len != raw.size())
        throw InputError("png: corrupt compressed data in " + path);
    unfilter(raw, w, h, bpp, path);

    if (colortype == 3) {
        if (palette.empty()) throw InputError("png: palette missing in " + path);
        channels = 3;
        std::vector<std::uint8_t> px(static_cast<std::size_t>(w) * h * 3);
        for (int y = 0; y < h; ++y) {
            const std::uint8_t* row = raw.data() + static_cast<std::size_t>(y) * (stride + 1) + 1;
            for (int x = 0; x < w; ++x) {
                const std::size_t pi = static_cast<std::size_t>(row[x]) * 3;
                if (pi + 2 >= palette.size())
                    throw InputError("png: palette index out of range in " + path);
                const std::size_t o = (static_cast<std::size_t>(y) * w + x) * 3;
                px[o] = palette[pi];
                px[o + 1] = palette[pi + 1];
                px[o + 2] = palette[pi + 2];
            }
        }
        return px;
    }

    channels = bpp;
    std::vector<std::uint8_t> px(static_cast<std::size_t>(w) * h * bpp);
    for (int y = 0; y < h; ++y)
        std::memcpy(px.data() + static_cast<std::size_t>(y) * stride,
                    raw.data() + static_cast<std::size_t>(y) * (stride + 1) + 1, stride);
    return px;
}

void write_png(const std::string& path, const std::uint8_t* pixels, int w, int h,
               int channels) {
    if (w <= 0 || h <= 0) throw InputError("cannot write zero-dimension png");
    if (channels != 1 && channels != 3)
        throw InputError("png writer supports 1 or 3 channels");

    const std::size_t stride = static_cast<std::size_t>(w) * channels;
    std::vector<std::uint8_t> raw((stride + 1) * h);
    for (int y = 0; y < h; ++y) {
        std::uint8_t* row = raw.data() + static_cast<std::size_t>(y) * (stride + 1);
        row[0] = 0;  // filter: none
        std::memcpy(row + 1, pixels + static_cast<std::size_t>(y) * stride, stride);
    }

    uLongf bound = compressBound(static_cast<uLong>(raw.size()));
    std::vector<std::uint8_t> compressed(bound);
    if (compress2(compressed.data(), &bound, raw.data(),
                  static_cast<uLong>(raw.size()), 6) != Z_OK)
        throw NumericError("png: deflate failed");
    compressed.resize(bound);

    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot open for writing: " + path);
    out.write(reinterpret_cast<const char*>(kSig), 8);

    std::vector<std::uint8_t> ihdr;
    put_be32(ihdr, static_cast<std::uint32_t>(w));
    put_be32(ihdr, static_cast<std::uint32_t>(h));
    ihdr.push_back(8);                                    // bit depth
    ihdr.push_back(channels == 1 ? 0 : 2);                // color type
    ihdr.push_back(0);                                    // compression
    ihdr.push_back(0);                                    // filter
    ihdr.push_back(0);                                    // interlace
    write_chunk(out, "IHDR", ihdr.data(), static_cast<std::uint32_t>(ihdr.size()));
    write_chunk(out, "IDAT", compressed.data(),
                static_cast<std::uint32_t>(compressed.size()));
    write_chunk(out, "IEND", nullptr, 0);
    if (!out) throw InputError("write failure: " + path);
}

}  // namespace meshpix::pngio
