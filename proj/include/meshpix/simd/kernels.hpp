#pragma once

#include <cstddef>

// Data-parallel inner loops shared by the image pipeline: separable
// convolution, squared-error reduction, and the radial-basis accumulation
// that dominates decoding. Every kernel has a scalar reference
// implementation and an AVX2 variant; the backend is picked once at runtime
// (cpuid, overridable via the MESHPIX_SIMD environment variable or
// force_backend). Scalar and AVX2 variants are equivalence-tested against
// each other; the convolutions are bit-identical by construction (same
// fma accumulation order per output element).

namespace meshpix::kern {

enum class Backend { scalar, avx2 };

// Backend resolved for this process. Order: force_backend() override,
// then MESHPIX_SIMD=scalar|avx2, then cpuid (AVX2+FMA), else scalar.
Backend active_backend();

// Test hook. Not thread-safe; call before spawning work.
void force_backend(Backend b);
void clear_forced_backend();

// True when the CPU can run the AVX2 variants.
bool cpu_has_avx2();

// Radial kernel families. Values match rbf::KernelKind.
enum class Radial : int { gaussian = 0, mq = 1, imq = 2, tps = 3 };

// Horizontal pass of a separable symmetric filter. taps has radius+1
// entries: taps[0] is the center weight, taps[j] the weight at offset ±j,
// normalized so that center + 2*sum(others) == 1. Rows are renormalized
// where the stencil is cut off by the image border.
void conv_rows(const double* src, double* dst, int w, int h,
               const double* taps, int radius);

// Vertical pass, same contract.
void conv_cols(const double* src, double* dst, int w, int h,
               const double* taps, int radius);

// Compensated sum of (a[i]-b[i])^2.
double sum_sq_diff(const double* a, const double* b, std::size_t n);

// sum_i w[i] * phi(q_i) with q_i the anisotropic squared distance
//   q_i = t11*dx^2 + 2*t12*dx*dy + t22*dy^2,  dx = px-cx[i], dy = py-cy[i],
// and phi the radial kernel with shape parameter c (applied to squared
// distances: mq -> sqrt(q+c^2), imq -> 1/sqrt(q+c^2), gaussian ->
// exp(-c^2 q), tps -> q<=0 ? 0 : 0.5*q*log(q)).
double rbf_accum(Radial kind, double c, double px, double py,
                 double t11, double t12, double t22,
                 const double* cx, const double* cy, const double* w, int n);

}  // namespace meshpix::kern
