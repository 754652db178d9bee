#pragma once

#include <cmath>
#include <vector>

namespace meshpix {

// Image-space point: x is the column coordinate, y the row coordinate.
struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point2& a, const Point2& b) {
        return a.x == b.x && a.y == b.y;
    }
};

inline double dist2(const Point2& a, const Point2& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return dx * dx + dy * dy;
}

inline double dist(const Point2& a, const Point2& b) {
    return std::sqrt(dist2(a, b));
}

// Sign of the signed area of triangle (a, b, c):
//   +1  c lies to the left of a->b (counterclockwise)
//    0  collinear
//   -1  clockwise
// Filtered double evaluation with an exact expansion-arithmetic fallback,
// so the result is the true sign for all finite inputs.
int orient(const Point2& a, const Point2& b, const Point2& c);

// Sign of the incircle determinant for ccw triangle (a, b, c):
//   +1  d strictly inside the circumcircle
//    0  cocircular
//   -1  strictly outside
// Exact in the same sense as orient().
int incircle(const Point2& a, const Point2& b, const Point2& c, const Point2& d);

// Approximate signed area * 2 (plain double arithmetic, for magnitudes).
inline double cross(const Point2& a, const Point2& b, const Point2& c) {
    return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

// Inclusive point-in-triangle test for a ccw triangle.
inline bool tri_contains(const Point2& a, const Point2& b, const Point2& c,
                         const Point2& p) {
    return orient(a, b, p) >= 0 && orient(b, c, p) >= 0 && orient(c, a, p) >= 0;
}

}  // namespace meshpix
