#include <cmath>

#include "kern_internal.hpp"

namespace meshpix::kern::detail {

double conv_row_edge(const double* row, int w, int x, const double* taps,
                     int radius) {
    double acc = 0.0;
    double wsum = 0.0;
    for (int j = -radius; j <= radius; ++j) {
        const int xx = x + j;
        if (xx < 0 || xx >= w) continue;
        const double t = taps[j < 0 ? -j : j];
        acc = std::fma(t, row[xx], acc);
        wsum += t;
    }
    return acc / wsum;
}

double conv_col_edge(const double* src, int w, int h, int x, int y,
                     const double* taps, int radius) {
    double acc = 0.0;
    double wsum = 0.0;
    for (int j = -radius; j <= radius; ++j) {
        const int yy = y + j;
        if (yy < 0 || yy >= h) continue;
        const double t = taps[j < 0 ? -j : j];
        acc = std::fma(t, src[static_cast<std::size_t>(yy) * w + x], acc);
        wsum += t;
    }
    return acc / wsum;
}

void conv_rows_scalar(const double* src, double* dst, int w, int h,
                      const double* taps, int radius) {
    for (int y = 0; y < h; ++y) {
        const double* row = src + static_cast<std::size_t>(y) * w;
        double* out = dst + static_cast<std::size_t>(y) * w;
        const int lo = radius < w ? radius : w;
        const int hi = w - radius > lo ? w - radius : lo;
        for (int x = 0; x < lo; ++x) out[x] = conv_row_edge(row, w, x, taps, radius);
        for (int x = lo; x < hi; ++x) {
            double acc = 0.0;
            for (int j = -radius; j <= radius; ++j)
                acc = std::fma(taps[j < 0 ? -j : j], row[x + j], acc);
            out[x] = acc;
        }
        for (int x = hi; x < w; ++x) out[x] = conv_row_edge(row, w, x, taps, radius);
    }
}

void conv_cols_scalar(const double* src, double* dst, int w, int h,
                      const double* taps, int radius) {
    const int lo = radius < h ? radius : h;
    const int hi = h - radius > lo ? h - radius : lo;
    for (int y = 0; y < lo; ++y)
        for (int x = 0; x < w; ++x)
            dst[static_cast<std::size_t>(y) * w + x] =
                conv_col_edge(src, w, h, x, y, taps, radius);
    for (int y = lo; y < hi; ++y) {
        double* out = dst + static_cast<std::size_t>(y) * w;
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int j = -radius; j <= radius; ++j)
                acc = std::fma(taps[j < 0 ? -j : j],
                               src[static_cast<std::size_t>(y + j) * w + x], acc);
            out[x] = acc;
        }
    }
    for (int y = hi; y < h; ++y)
        for (int x = 0; x < w; ++x)
            dst[static_cast<std::size_t>(y) * w + x] =
                conv_col_edge(src, w, h, x, y, taps, radius);
}

double sum_sq_diff_scalar(const double* a, const double* b, std::size_t n) {
    // Kahan-compensated so the result tracks a wide-accumulator oracle.
    double sum = 0.0, comp = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = a[i] - b[i];
        const double term = d * d;
        const double y = term - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

double rbf_accum_scalar(Radial kind, double c, double px, double py,
                        double t11, double t12, double t22,
                        const double* cx, const double* cy, const double* w,
                        int n) {
    const double c2 = c * c;
    double acc = 0.0;
    switch (kind) {
        case Radial::mq:
            for (int i = 0; i < n; ++i) {
                const double dx = px - cx[i], dy = py - cy[i];
                const double q = t11 * dx * dx + 2.0 * t12 * dx * dy + t22 * dy * dy;
                acc += w[i] * std::sqrt(q + c2);
            }
            break;
        case Radial::imq:
            for (int i = 0; i < n; ++i) {
                const double dx = px - cx[i], dy = py - cy[i];
                const double q = t11 * dx * dx + 2.0 * t12 * dx * dy + t22 * dy * dy;
                acc += w[i] / std::sqrt(q + c2);
            }
            break;
        case Radial::gaussian:
            for (int i = 0; i < n; ++i) {
                const double dx = px - cx[i], dy = py - cy[i];
                const double q = t11 * dx * dx + 2.0 * t12 * dx * dy + t22 * dy * dy;
                acc += w[i] * std::exp(-c2 * q);
            }
            break;
        case Radial::tps:
            for (int i = 0; i < n; ++i) {
                const double dx = px - cx[i], dy = py - cy[i];
                const double q = t11 * dx * dx + 2.0 * t12 * dx * dy + t22 * dy * dy;
                if (q > 0.0) acc += w[i] * (0.5 * q * std::log(q));
            }
            break;
    }
    return acc;
}

}  // namespace meshpix::kern::detail
