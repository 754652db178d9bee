#include "meshpix/geometry.hpp"

#include <limits>

// Robust orientation / incircle predicates.
//
// Fast path: plain double arithmetic guarded by a forward error bound
// (Shewchuk-style static filter). When the bound cannot certify the sign,
// the determinant is recomputed exactly with floating-point expansions
// (nonoverlapping multi-term sums). The exact path is hit only on
// (near-)degenerate inputs, so it favors simplicity over speed.

namespace meshpix {
namespace {

constexpr double kEps = 1.1102230246251565e-16;  // 2^-53
constexpr double kCcwErrBound = (3.0 + 16.0 * kEps) * kEps;
constexpr double kIccErrBound = (10.0 + 96.0 * kEps) * kEps;

inline void two_sum(double a, double b, double& x, double& y) {
    x = a + b;
    const double bvirt = x - a;
    const double avirt = x - bvirt;
    y = (a - avirt) + (b - bvirt);
}

// Requires |a| >= |b|.
inline void fast_two_sum(double a, double b, double& x, double& y) {
    x = a + b;
    y = b - (x - a);
}

inline void two_diff(double a, double b, double& x, double& y) {
    x = a - b;
    const double bvirt = a - x;
    const double avirt = x + bvirt;
    y = (a - avirt) + (bvirt - b);
}

inline void two_prod(double a, double b, double& x, double& y) {
    x = a * b;
    y = std::fma(a, b, -x);
}

using Expn = std::vector<double>;  // nonoverlapping, increasing magnitude

Expn make2(double hi, double lo) {
    Expn e;
    if (lo != 0.0) e.push_back(lo);
    if (hi != 0.0) e.push_back(hi);
    if (e.empty()) e.push_back(0.0);
    return e;
}

Expn exp_diff(double a, double b) {
    double x, y;
    two_diff(a, b, x, y);
    return make2(x, y);
}

// Merge-sum of two expansions (fast_expansion_sum with zero elimination).
Expn exp_sum(const Expn& e, const Expn& f) {
    Expn h;
    h.reserve(e.size() + f.size());
    size_t ei = 0, fi = 0;
    auto take_smaller = [&]() -> double {
        if (ei >= e.size()) return f[fi++];
        if (fi >= f.size()) return e[ei++];
        if (std::fabs(e[ei]) <= std::fabs(f[fi])) return e[ei++];
        return f[fi++];
    };
    double q = take_smaller();
    double qnew, hh;
    if (ei < e.size() || fi < f.size()) {
        fast_two_sum(take_smaller(), q, qnew, hh);
        q = qnew;
        if (hh != 0.0) h.push_back(hh);
        while (ei < e.size() || fi < f.size()) {
            two_sum(q, take_smaller(), qnew, hh);
            q = qnew;
            if (hh != 0.0) h.push_back(hh);
        }
    }
    if (q != 0.0 || h.empty()) h.push_back(q);
    return h;
}

Expn exp_scale(const Expn& e, double b) {
    Expn h;
    h.reserve(2 * e.size());
    double q, hh, p1, p0, sum;
    two_prod(e[0], b, q, hh);
    if (hh != 0.0) h.push_back(hh);
    for (size_t i = 1; i < e.size(); ++i) {
        two_prod(e[i], b, p1, p0);
        two_sum(q, p0, sum, hh);
        if (hh != 0.0) h.push_back(hh);
        fast_two_sum(p1, sum, q, hh);
        if (hh != 0.0) h.push_back(hh);
    }
    if (q != 0.0 || h.empty()) h.push_back(q);
    return h;
}

Expn exp_mul(const Expn& e, const Expn& f) {
    Expn acc{0.0};
    for (double fv : f) {
        if (fv == 0.0) continue;
        acc = exp_sum(acc, exp_scale(e, fv));
    }
    return acc;
}

Expn exp_neg(Expn e) {
    for (double& v : e) v = -v;
    return e;
}

int exp_sign(const Expn& e) {
    const double ms = e.back();  // largest-magnitude component carries the sign
    return (ms > 0.0) - (ms < 0.0);
}

int orient_exact(const Point2& a, const Point2& b, const Point2& c) {
    const Expn t1 = exp_mul(exp_diff(b.x, a.x), exp_diff(c.y, a.y));
    const Expn t2 = exp_mul(exp_diff(b.y, a.y), exp_diff(c.x, a.x));
    return exp_sign(exp_sum(t1, exp_neg(t2)));
}

int incircle_exact(const Point2& a, const Point2& b, const Point2& c,
                   const Point2& d) {
    const Expn adx = exp_diff(a.x, d.x), ady = exp_diff(a.y, d.y);
    const Expn bdx = exp_diff(b.x, d.x), bdy = exp_diff(b.y, d.y);
    const Expn cdx = exp_diff(c.x, d.x), cdy = exp_diff(c.y, d.y);

    const Expn alift = exp_sum(exp_mul(adx, adx), exp_mul(ady, ady));
    const Expn blift = exp_sum(exp_mul(bdx, bdx), exp_mul(bdy, bdy));
    const Expn clift = exp_sum(exp_mul(cdx, cdx), exp_mul(cdy, cdy));

    const Expn bxcy = exp_sum(exp_mul(bdx, cdy), exp_neg(exp_mul(cdx, bdy)));
    const Expn cxay = exp_sum(exp_mul(cdx, ady), exp_neg(exp_mul(adx, cdy)));
    const Expn axby = exp_sum(exp_mul(adx, bdy), exp_neg(exp_mul(bdx, ady)));

    Expn det = exp_mul(alift, bxcy);
    det = exp_sum(det, exp_mul(blift, cxay));
    det = exp_sum(det, exp_mul(clift, axby));
    return exp_sign(det);
}

}  // namespace

int orient(const Point2& a, const Point2& b, const Point2& c) {
    const double detleft = (a.x - c.x) * (b.y - c.y);
    const double detright = (a.y - c.y) * (b.x - c.x);
    const double det = detleft - detright;

    double detsum;
    if (detleft > 0.0) {
        if (detright <= 0.0) return (det > 0.0) - (det < 0.0);
        detsum = detleft + detright;
    } else if (detleft < 0.0) {
        if (detright >= 0.0) return (det > 0.0) - (det < 0.0);
        detsum = -detleft - detright;
    } else {
        return (det > 0.0) - (det < 0.0);  // detleft == 0, det is exact
    }

    const double errbound = kCcwErrBound * detsum;
    if (det >= errbound || -det >= errbound) return (det > 0.0) - (det < 0.0);
    return orient_exact(a, b, c);
}

int incircle(const Point2& a, const Point2& b, const Point2& c, const Point2& d) {
    const double adx = a.x - d.x, ady = a.y - d.y;
    const double bdx = b.x - d.x, bdy = b.y - d.y;
    const double cdx = c.x - d.x, cdy = c.y - d.y;

    const double bdxcdy = bdx * cdy, cdxbdy = cdx * bdy;
    const double alift = adx * adx + ady * ady;
    const double cdxady = cdx * ady, adxcdy = adx * cdy;
    const double blift = bdx * bdx + bdy * bdy;
    const double adxbdy = adx * bdy, bdxady = bdx * ady;
    const double clift = cdx * cdx + cdy * cdy;

    const double det = alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy) +
                       clift * (adxbdy - bdxady);

    const double permanent = (std::fabs(bdxcdy) + std::fabs(cdxbdy)) * alift +
                             (std::fabs(cdxady) + std::fabs(adxcdy)) * blift +
                             (std::fabs(adxbdy) + std::fabs(bdxady)) * clift;
    const double errbound = kIccErrBound * permanent;
    if (det > errbound || -det > errbound) return (det > 0.0) - (det < 0.0);
    return incircle_exact(a, b, c, d);
}

}  // namespace meshpix
