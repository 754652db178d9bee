#pragma once

#include <array>
#include <vector>

#include "meshpix/geometry.hpp"
#include "meshpix/mesh.hpp"

namespace meshpix {

// Segment that must appear as mesh edges (possibly split by vertices lying
// exactly on it).
struct Constraint {
    int a = 0;
    int b = 0;
};

// Incremental Delaunay triangulation (Bowyer-Watson with ghost triangles
// for the hull). Deterministic for a fixed input order; exactly cocircular
// quads are normalized to the diagonal with the lexicographically smallest
// vertex-index pair. Throws InputError for fewer than 3 points, all-collinear
// input, or duplicate points.
TriMesh delaunay(const std::vector<Point2>& points);

// Forces every constraint segment into the triangulation by flipping the
// edges it crosses, then re-legalizes all unconstrained edges. Constraints
// running exactly through a vertex are split at it. Two constraints that
// properly cross each other raise InputError naming the offending pair.
TriMesh constrain(const TriMesh& mesh, const std::vector<Constraint>& constraints);

// Point location on a finished mesh. locate() returns the triangle
// containing p; points on a shared edge or vertex resolve to the lowest
// incident triangle index. Throws InputError if p is outside the hull.
class MeshLocator {
  public:
    explicit MeshLocator(const TriMesh& mesh);
    int locate(const Point2& p, int hint = -1) const;

  private:
    int brute_locate(const Point2& p) const;

    const TriMesh& mesh_;
    std::vector<std::array<int, 3>> nb_;  // neighbor across edge opposite v[i], -1 = hull
};

// One-shot convenience wrapper.
int locate(const TriMesh& mesh, const Point2& p);

}  // namespace meshpix
