#include <cstdlib>
#include <cstring>
#include <optional>

#include "kern_internal.hpp"
#include "meshpix/errors.hpp"

namespace meshpix::kern {
namespace {

std::optional<Backend> g_forced;

Backend detect() {
    if (const char* env = std::getenv("MESHPIX_SIMD")) {
        if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
        if (std::strcmp(env, "avx2") == 0) return Backend::avx2;
    }
    return cpu_has_avx2() ? Backend::avx2 : Backend::scalar;
}

}  // namespace

bool cpu_has_avx2() {
#if defined(MESHPIX_HAVE_AVX2_BUILD) && defined(__GNUC__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Backend active_backend() {
    if (g_forced) return *g_forced;
    static const Backend detected = detect();
    return detected;
}

void force_backend(Backend b) {
    if (b == Backend::avx2 && !cpu_has_avx2())
        throw InputError("avx2 backend not available on this cpu");
    g_forced = b;
}

void clear_forced_backend() { g_forced.reset(); }

void conv_rows(const double* src, double* dst, int w, int h,
               const double* taps, int radius) {
#ifdef MESHPIX_HAVE_AVX2_BUILD
    if (active_backend() == Backend::avx2)
        return detail::conv_rows_avx2(src, dst, w, h, taps, radius);
#endif
    detail::conv_rows_scalar(src, dst, w, h, taps, radius);
}

void conv_cols(const double* src, double* dst, int w, int h,
               const double* taps, int radius) {
#ifdef MESHPIX_HAVE_AVX2_BUILD
    if (active_backend() == Backend::avx2)
        return detail::conv_cols_avx2(src, dst, w, h, taps, radius);
#endif
    detail::conv_cols_scalar(src, dst, w, h, taps, radius);
}

double sum_sq_diff(const double* a, const double* b, std::size_t n) {
#ifdef MESHPIX_HAVE_AVX2_BUILD
    if (active_backend() == Backend::avx2)
        return detail::sum_sq_diff_avx2(a, b, n);
#endif
    return detail::sum_sq_diff_scalar(a, b, n);
}

double rbf_accum(Radial kind, double c, double px, double py,
                 double t11, double t12, double t22,
                 const double* cx, const double* cy, const double* w, int n) {
#ifdef MESHPIX_HAVE_AVX2_BUILD
    if (active_backend() == Backend::avx2)
        return detail::rbf_accum_avx2(kind, c, px, py, t11, t12, t22, cx, cy, w, n);
#endif
    return detail::rbf_accum_scalar(kind, c, px, py, t11, t12, t22, cx, cy, w, n);
}

}  // namespace meshpix::kern
