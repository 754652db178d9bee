#include "kern_internal.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cmath>

// AVX2+FMA variants. This translation unit is compiled with -mavx2 -mfma;
// nothing here runs unless the dispatcher verified cpu support.
//
// The convolutions process four output elements per iteration with the same
// per-element tap order as the scalar reference, so interior results are
// bit-identical across backends. The reductions (sum_sq_diff, rbf_accum)
// use lane-parallel partial sums and therefore agree with the scalar
// reference only to rounding; tests bound the difference.

namespace meshpix::kern::detail {
namespace {

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s2 = _mm_add_pd(lo, hi);
    const __m128d s1 = _mm_add_sd(s2, _mm_unpackhi_pd(s2, s2));
    return _mm_cvtsd_f64(s1);
}

}  // namespace

void conv_rows_avx2(const double* src, double* dst, int w, int h,
                    const double* taps, int radius) {
    for (int y = 0; y < h; ++y) {
        const double* row = src + static_cast<std::size_t>(y) * w;
        double* out = dst + static_cast<std::size_t>(y) * w;
        const int lo = radius < w ? radius : w;
        const int hi = w - radius > lo ? w - radius : lo;
        for (int x = 0; x < lo; ++x) out[x] = conv_row_edge(row, w, x, taps, radius);
        int x = lo;
        for (; x + 4 <= hi; x += 4) {
            __m256d acc = _mm256_setzero_pd();
            for (int j = -radius; j <= radius; ++j) {
                const __m256d t = _mm256_set1_pd(taps[j < 0 ? -j : j]);
                const __m256d v = _mm256_loadu_pd(row + x + j);
                acc = _mm256_fmadd_pd(t, v, acc);
            }
            _mm256_storeu_pd(out + x, acc);
        }
        for (; x < hi; ++x) {
            double acc = 0.0;
            for (int j = -radius; j <= radius; ++j)
                acc = std::fma(taps[j < 0 ? -j : j], row[x + j], acc);
            out[x] = acc;
        }
        for (x = hi; x < w; ++x) out[x] = conv_row_edge(row, w, x, taps, radius);
    }
}

void conv_cols_avx2(const double* src, double* dst, int w, int h,
                    const double* taps, int radius) {
    const int lo = radius < h ? radius : h;
    const int hi = h - radius > lo ? h - radius : lo;
    for (int y = 0; y < lo; ++y)
        for (int x = 0; x < w; ++x)
            dst[static_cast<std::size_t>(y) * w + x] =
                conv_col_edge(src, w, h, x, y, taps, radius);
    for (int y = lo; y < hi; ++y) {
        double* out = dst + static_cast<std::size_t>(y) * w;
        int x = 0;
        for (; x + 4 <= w; x += 4) {
            __m256d acc = _mm256_setzero_pd();
            for (int j = -radius; j <= radius; ++j) {
                const __m256d t = _mm256_set1_pd(taps[j < 0 ? -j : j]);
                const __m256d v = _mm256_loadu_pd(
                    src + static_cast<std::size_t>(y + j) * w + x);
                acc = _mm256_fmadd_pd(t, v, acc);
            }
            _mm256_storeu_pd(out + x, acc);
        }
        for (; x < w; ++x) {
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

double sum_sq_diff_avx2(const double* a, const double* b, std::size_t n) {
    // Four independent Kahan accumulators, one per lane.
    __m256d sum = _mm256_setzero_pd();
    __m256d comp = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        const __m256d term = _mm256_mul_pd(d, d);
        const __m256d y = _mm256_sub_pd(term, comp);
        const __m256d t = _mm256_add_pd(sum, y);
        comp = _mm256_sub_pd(_mm256_sub_pd(t, sum), y);
        sum = t;
    }
    alignas(32) double lanes_sum[4], lanes_comp[4];
    _mm256_store_pd(lanes_sum, sum);
    _mm256_store_pd(lanes_comp, comp);

    double s = 0.0, c = 0.0;
    auto kahan_add = [&](double term) {
        const double y = term - c;
        const double t = s + y;
        c = (t - s) - y;
        s = t;
    };
    for (int k = 0; k < 4; ++k) kahan_add(lanes_sum[k] - lanes_comp[k]);
    for (; i < n; ++i) {
        const double d = a[i] - b[i];
        kahan_add(d * d);
    }
    return s;
}

double rbf_accum_avx2(Radial kind, double c, double px, double py,
                      double t11, double t12, double t22,
                      const double* cx, const double* cy, const double* w,
                      int n) {
    if (kind == Radial::gaussian || kind == Radial::tps)
        return rbf_accum_scalar(kind, c, px, py, t11, t12, t22, cx, cy, w, n);

    const __m256d vpx = _mm256_set1_pd(px), vpy = _mm256_set1_pd(py);
    const __m256d v11 = _mm256_set1_pd(t11), v22 = _mm256_set1_pd(t22);
    const __m256d v12x2 = _mm256_set1_pd(2.0 * t12);
    const __m256d vc2 = _mm256_set1_pd(c * c);
    __m256d acc = _mm256_setzero_pd();

    int i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d dx = _mm256_sub_pd(vpx, _mm256_loadu_pd(cx + i));
        const __m256d dy = _mm256_sub_pd(vpy, _mm256_loadu_pd(cy + i));
        __m256d q = _mm256_mul_pd(_mm256_mul_pd(v11, dx), dx);
        q = _mm256_fmadd_pd(_mm256_mul_pd(v12x2, dx), dy, q);
        q = _mm256_fmadd_pd(_mm256_mul_pd(v22, dy), dy, q);
        const __m256d root = _mm256_sqrt_pd(_mm256_add_pd(q, vc2));
        const __m256d wi = _mm256_loadu_pd(w + i);
        if (kind == Radial::mq) {
            acc = _mm256_fmadd_pd(wi, root, acc);
        } else {
            acc = _mm256_add_pd(acc, _mm256_div_pd(wi, root));
        }
    }
    double total = hsum(acc);
    const double c2 = c * c;
    for (; i < n; ++i) {
        const double dx = px - cx[i], dy = py - cy[i];
        const double q = t11 * dx * dx + 2.0 * t12 * dx * dy + t22 * dy * dy;
        total += kind == Radial::mq ? w[i] * std::sqrt(q + c2)
                                    : w[i] / std::sqrt(q + c2);
    }
    return total;
}

}  // namespace meshpix::kern::detail

#endif  // x86_64
