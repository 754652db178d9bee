#pragma once

#include <cstddef>

#include "meshpix/simd/kernels.hpp"

// Backend entry points and shared border handling. The border helpers are
// compiled once (in the scalar translation unit) and used by both backends
// so the edge columns/rows come out bit-identical.

namespace meshpix::kern::detail {

void conv_rows_scalar(const double* src, double* dst, int w, int h,
                      const double* taps, int radius);
void conv_cols_scalar(const double* src, double* dst, int w, int h,
                      const double* taps, int radius);
double sum_sq_diff_scalar(const double* a, const double* b, std::size_t n);
double rbf_accum_scalar(Radial kind, double c, double px, double py,
                        double t11, double t12, double t22,
                        const double* cx, const double* cy, const double* w,
                        int n);

// One output element of the row pass with border renormalization.
double conv_row_edge(const double* row, int w, int x, const double* taps,
                     int radius);
// One output element of the column pass with border renormalization.
double conv_col_edge(const double* src, int w, int h, int x, int y,
                     const double* taps, int radius);

#if defined(__x86_64__) || defined(_M_X64)
#define MESHPIX_HAVE_AVX2_BUILD 1
void conv_rows_avx2(const double* src, double* dst, int w, int h,
                    const double* taps, int radius);
void conv_cols_avx2(const double* src, double* dst, int w, int h,
                    const double* taps, int radius);
double sum_sq_diff_avx2(const double* a, const double* b, std::size_t n);
double rbf_accum_avx2(Radial kind, double c, double px, double py,
                      double t11, double t12, double t22,
                      const double* cx, const double* cy, const double* w,
                      int n);
#endif

}  // namespace meshpix::kern::detail
