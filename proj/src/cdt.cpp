#include "meshpix/cdt.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <set>
#include <string>

#include "meshpix/errors.hpp"

// Incremental Delaunay triangulation with ghost triangles closing the hull,
// then constraint enforcement by edge flipping (pipe removal) and a final
// legalization pass. All orientation/incircle decisions go through the
// exact predicates in geometry.cpp, so the construction is robust on
// degenerate input and deterministic for a fixed insertion order.

namespace meshpix {
namespace {

constexpr int kGhost = -1;
constexpr int kNone = -2;

struct Tri {
    std::array<int, 3> v{kNone, kNone, kNone};
    std::array<int, 3> nb{kNone, kNone, kNone};  // across edge opposite v[i]
    bool dead = false;

    bool ghost() const { return v[2] == kGhost; }
    int slot_of(int vert) const {
        for (int i = 0; i < 3; ++i)
            if (v[i] == vert) return i;
        return -1;
    }
};

std::pair<int, int> ordered(int a, int b) {
    return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
}

class Triangulation {
  public:
    std::vector<Point2> pts;
    std::vector<Tri> tris;
    std::vector<int> v2t;  // vertex -> one alive incident triangle
    std::set<std::pair<int, int>> constrained;

    int orient3(int a, int b, const Point2& p) const {
        return orient(pts[a], pts[b], p);
    }
    int orient3(int a, int b, int c) const { return orient(pts[a], pts[b], pts[c]); }

    // ---- construction -----------------------------------------------------

    void init(const std::vector<Point2>& points) {
        if (points.size() < 3) throw InputError("delaunay: need at least 3 points");
        pts = points;
        v2t.assign(pts.size(), kNone);

        int i1 = -1;
        for (std::size_t i = 1; i < pts.size(); ++i)
            if (!(pts[i] == pts[0])) {
                i1 = static_cast<int>(i);
                break;
            }
        if (i1 < 0) throw InputError("delaunay: all points coincide");
        int i2 = -1;
        for (std::size_t i = i1 + 1; i < pts.size(); ++i)
            if (orient3(0, i1, static_cast<int>(i)) != 0) {
                i2 = static_cast<int>(i);
                break;
            }
        if (i2 < 0) throw InputError("delaunay: all points are collinear");

        std::array<int, 3> first = orient3(0, i1, i2) > 0
                                       ? std::array<int, 3>{0, i1, i2}
                                       : std::array<int, 3>{0, i2, i1};
        const int t = new_tri(first[0], first[1], first[2]);
        // Ghosts close the hull; (u, v, ghost) keeps the interior to the
        // right of u->v, so "outside through this hull edge" is orient > 0.
        const int ga = new_tri(first[1], first[0], kGhost);
        const int gb = new_tri(first[2], first[1], kGhost);
        const int gc = new_tri(first[0], first[2], kGhost);
        link(t, ga);
        link(t, gb);
        link(t, gc);
        link(ga, gb);
        link(gb, gc);
        link(gc, ga);
        last_real_ = t;

        for (std::size_t i = 1; i < pts.size(); ++i) {
            const int ii = static_cast<int>(i);
            if (ii == i1 || ii == i2) continue;
            insert_point(ii);
        }
        normalize_cocircular();
    }

    // Rebuild adjacency from an existing mesh (no ghosts; hull edges get
    // kNone). Used by constrain().
    void from_mesh(const TriMesh& mesh) {
        pts = mesh.vertices;
        v2t.assign(pts.size(), kNone);
        tris.reserve(mesh.triangles.size());
        std::map<std::pair<int, int>, std::pair<int, int>> open;  // edge -> (tri, slot)
        for (const auto& mt : mesh.triangles) {
            std::array<int, 3> v = mt;
            if (orient3(v[0], v[1], v[2]) < 0) std::swap(v[1], v[2]);
            if (orient3(v[0], v[1], v[2]) == 0)
                throw InputError("constrain: degenerate triangle in mesh");
            const int t = new_tri(v[0], v[1], v[2]);
            for (int i = 0; i < 3; ++i) {
                const auto key = ordered(v[(i + 1) % 3], v[(i + 2) % 3]);
                auto it = open.find(key);
                if (it == open.end()) {
                    open.emplace(key, std::make_pair(t, i));
                } else {
                    tris[t].nb[i] = it->second.first;
                    tris[it->second.first].nb[it->second.second] = t;
                    open.erase(it);
                }
            }
        }
        for (const auto& e : mesh.constrained_edges)
            constrained.insert(ordered(e[0], e[1]));
    }

    // ---- point insertion --------------------------------------------------

    void insert_point(int pi) {
        const Point2& p = pts[pi];
        const int loc = walk_locate(p);
        for (int v : tris[loc].v)
            if (v >= 0 && pts[v] == p)
                throw InputError("delaunay: duplicate point");

        // Cavity: all triangles whose circumscribed region strictly
        // contains p, grown from the located one.
        std::vector<int> cavity;
        std::vector<int> stack{loc};
        mark_epoch_++;
        marked(loc) = mark_epoch_;
        while (!stack.empty()) {
            const int t = stack.back();
            stack.pop_back();
            cavity.push_back(t);
            for (int n : tris[t].nb) {
                if (marked(n) == mark_epoch_) continue;
                if (in_circum(n, p)) {
                    marked(n) = mark_epoch_;
                    stack.push_back(n);
                }
            }
        }

        struct Boundary {
            int e1, e2, outer;
        };
        std::vector<Boundary> boundary;
        for (int t : cavity)
            for (int i = 0; i < 3; ++i) {
                const int n = tris[t].nb[i];
                if (marked(n) == mark_epoch_) continue;
                boundary.push_back({tris[t].v[(i + 1) % 3], tris[t].v[(i + 2) % 3], n});
            }

        for (int t : cavity) kill(t);

        // Fan p to the boundary cycle; each directed edge starts at a
        // distinct vertex, which makes the inner linking a lookup.
        std::map<int, int> by_start;
        std::vector<int> created;
        created.reserve(boundary.size());
        for (const auto& b : boundary) {
            const int t = new_tri(b.e1, b.e2, pi);
            created.push_back(t);
            by_start[b.e1] = t;
            link_across(t, b.outer, b.e1, b.e2);
            if (!tris[t].ghost()) last_real_ = t;
        }
        for (std::size_t i = 0; i < boundary.size(); ++i) {
            const int t = created[i];
            const int succ = by_start.at(boundary[i].e2);
            link_across(t, succ, boundary[i].e2, pi);
        }
    }

    // ---- constraints ------------------------------------------------------

    void insert_constraint(int a, int b, int depth = 0) {
        if (a == b) throw InputError("constraint endpoints coincide");
        if (depth > 64) throw NumericError("constraint split recursion too deep");
        if (edge_exists(a, b)) {
            constrained.insert(ordered(a, b));
            return;
        }

        // Entry wedge around a, splitting at any vertex exactly on segment.
        constexpr int kUnset = -1, kSplit = -2;
        int u = -1, v = -1, cur = kUnset;
        for_each_incident(a, [&](int t) {
            if (cur != kUnset) return;
            const Tri& tr = tris[t];
            if (tr.ghost()) return;
            const int ia = tr.slot_of(a);
            const int tu = tr.v[(ia + 1) % 3], tv = tr.v[(ia + 2) % 3];
            const int ou = orient3(a, tu, pts[b]);
            if (ou == 0 && on_ray_toward(a, tu, b)) {
                cur = kSplit;  // vertex tu lies exactly on the segment
                u = tu;
                return;
            }
            const int ov = orient3(a, tv, pts[b]);
            if (ov == 0 && on_ray_toward(a, tv, b)) {
                cur = kSplit;
                u = tv;
                return;
            }
            if (ou > 0 && ov < 0) {
                cur = t;
                u = tu;
                v = tv;
            }
        });
        if (cur == kSplit) {
            insert_constraint(a, u, depth + 1);
            insert_constraint(u, b, depth + 1);
            return;
        }
        if (cur == kUnset) throw NumericError("constraint entry wedge not found");

        // March the pipe of crossed edges toward b.
        std::deque<std::pair<int, int>> pipe;
        auto check_crossing = [&](int eu, int ev) {
            if (constrained.count(ordered(eu, ev)))
                throw InputError("constraints properly intersect: (" +
                                 std::to_string(a) + "," + std::to_string(b) +
                                 ") crosses constrained edge (" + std::to_string(eu) +
                                 "," + std::to_string(ev) + ")");
        };
        check_crossing(u, v);
        pipe.emplace_back(u, v);
        int beyond = tris[cur].nb[tris[cur].slot_of(a)];
        for (;;) {
            const Tri& tr = tris[beyond];
            int w = kNone;
            for (int k : tr.v)
                if (k != u && k != v) w = k;
            if (w == b) break;
            const int ow = orient3(a, b, w);
            if (ow == 0) {  // vertex exactly on the segment: split there
                insert_constraint(a, w, depth + 1);
                insert_constraint(w, b, depth + 1);
                return;
            }
            // Invariant: u is right of a->b (orient < 0), v is left (> 0).
            int nu = u, nv = v;
            if (ow > 0)
                nv = w;  // w on the left: segment exits through (u, w)
            else
                nu = w;  // w on the right: segment exits through (w, v)
            check_crossing(nu, nv);
            pipe.emplace_back(nu, nv);
            const int off = ow > 0 ? tr.slot_of(v) : tr.slot_of(u);
            beyond = tr.nb[off];
            u = nu;
            v = nv;
            if (beyond < 0) throw NumericError("constraint pipe left the mesh");
        }

        // Remove crossings by flipping convex quads (deferred otherwise).
        std::size_t stuck = 0;
        while (!pipe.empty()) {
            if (stuck > pipe.size() + 1)
                throw NumericError("constraint pipe is not flippable");
            auto [eu, ev] = pipe.front();
            pipe.pop_front();
            auto [t1, t2] = edge_tris(eu, ev);
            const int x = opposite_vertex(t1, eu, ev);
            const int y = opposite_vertex(t2, eu, ev);
            const int o1 = orient3(x, y, eu), o2 = orient3(x, y, ev);
            if (!((o1 > 0 && o2 < 0) || (o1 < 0 && o2 > 0))) {
                pipe.emplace_back(eu, ev);  // non-convex quad, retry later
                ++stuck;
                continue;
            }
            stuck = 0;
            flip(t1, t2, eu, ev);
            if (proper_cross(a, b, x, y)) pipe.emplace_back(x, y);
        }
        constrained.insert(ordered(a, b));
    }

    // Lawson pass: restore the (constrained) Delaunay property everywhere.
    void legalize_all() {
        std::deque<std::pair<int, int>> queue;
        for (std::size_t t = 0; t < tris.size(); ++t) {
            if (tris[t].dead || tris[t].ghost()) continue;
            for (int i = 0; i < 3; ++i) {
                const int n = tris[t].nb[i];
                if (n < 0 || tris[n].ghost() || n < static_cast<int>(t)) continue;
                queue.emplace_back(tris[t].v[(i + 1) % 3], tris[t].v[(i + 2) % 3]);
            }
        }
        std::size_t safety = 0;
        const std::size_t max_flips = 32 * (tris.size() + 16) * (tris.size() + 16);
        while (!queue.empty()) {
            if (++safety > max_flips) throw NumericError("legalization did not settle");
            auto [u, v] = queue.front();
            queue.pop_front();
            if (constrained.count(ordered(u, v))) continue;
            int t1, t2;
            if (!try_edge_tris(u, v, t1, t2)) continue;  // edge no longer exists
            if (tris[t1].ghost() || tris[t2].ghost()) continue;
            const int x = opposite_vertex(t1, u, v);
            const int y = opposite_vertex(t2, u, v);
            // t1 carries the ccw (u, v) ordering.
            if (incircle(pts[u], pts[v], pts[x], pts[y]) <= 0) continue;
            flip(t1, t2, u, v);
            queue.emplace_back(u, x);
            queue.emplace_back(x, v);
            queue.emplace_back(v, y);
            queue.emplace_back(y, u);
        }
    }

    // ---- extraction ---------------------------------------------------------

    TriMesh to_mesh() const {
        TriMesh mesh;
        mesh.vertices = pts;
        for (const Tri& t : tris) {
            if (t.dead || t.ghost()) continue;
            mesh.triangles.push_back(t.v);
        }
        for (const auto& e : constrained)
            mesh.constrained_edges.push_back({e.first, e.second});
        refresh_centers(mesh);
        return mesh;
    }

  private:
    int last_real_ = 0;
    int mark_epoch_ = 0;
    std::vector<int> marks_;
    std::vector<int> free_;

    int& marked(int t) { return marks_[t]; }

    int new_tri(int a, int b, int c) {
        std::array<int, 3> v{a, b, c};
        while (v[2] != kGhost && (v[0] == kGhost || v[1] == kGhost)) {
            std::rotate(v.begin(), v.begin() + 1, v.end());  // ghost to slot 2
        }
        int t;
        if (!free_.empty()) {
            t = free_.back();
            free_.pop_back();
            tris[t] = Tri{};
        } else {
            t = static_cast<int>(tris.size());
            tris.emplace_back();
            marks_.push_back(0);
        }
        tris[t].v = v;
        for (int k : v)
            if (k >= 0) v2t[k] = t;
        return t;
    }

    void kill(int t) {
        tris[t].dead = true;
        free_.push_back(t);
    }

    // Link two triangles across their shared undirected edge.
    void link(int t1, int t2) {
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                const auto e1 = ordered(tris[t1].v[(i + 1) % 3], tris[t1].v[(i + 2) % 3]);
                const auto e2 = ordered(tris[t2].v[(j + 1) % 3], tris[t2].v[(j + 2) % 3]);
                if (e1 == e2) {
                    tris[t1].nb[i] = t2;
                    tris[t2].nb[j] = t1;
                    return;
                }
            }
    }

    void link_across(int t1, int t2, int ea, int eb) {
        const auto key = ordered(ea, eb);
        for (int i = 0; i < 3; ++i)
            if (ordered(tris[t1].v[(i + 1) % 3], tris[t1].v[(i + 2) % 3]) == key) {
                tris[t1].nb[i] = t2;
                break;
            }
        for (int j = 0; j < 3; ++j)
            if (ordered(tris[t2].v[(j + 1) % 3], tris[t2].v[(j + 2) % 3]) == key) {
                tris[t2].nb[j] = t1;
                break;
            }
    }

    bool in_circum(int t, const Point2& p) const {
        const Tri& tr = tris[t];
        if (!tr.ghost())
            return incircle(pts[tr.v[0]], pts[tr.v[1]], pts[tr.v[2]], p) > 0;
        const Point2& u = pts[tr.v[0]];
        const Point2& v = pts[tr.v[1]];
        const int o = orient(u, v, p);
        if (o != 0) return o > 0;
        // Collinear with the hull edge: claimed only if strictly between.
        if (std::fabs(v.x - u.x) >= std::fabs(v.y - u.y))
            return (u.x < p.x) != (v.x < p.x) && p.x != u.x && p.x != v.x;
        return (u.y < p.y) != (v.y < p.y) && p.y != u.y && p.y != v.y;
    }

    int walk_locate(const Point2& p) const {
        int cur = last_real_;
        std::size_t steps = 0;
        const std::size_t cap = 8 * tris.size() + 64;
        while (steps++ < cap) {
            const Tri& t = tris[cur];
            int exit = -1;
            for (int i = 0; i < 3; ++i) {
                if (orient(pts[t.v[(i + 1) % 3]], pts[t.v[(i + 2) % 3]], p) < 0) {
                    exit = i;
                    break;
                }
            }
            if (exit < 0) return cur;
            const int n = t.nb[exit];
            if (tris[n].ghost()) return n;
            cur = n;
        }
        // Fallback scan (the walk is provably finite on Delaunay state,
        // so this is belt and braces only).
        for (std::size_t t = 0; t < tris.size(); ++t) {
            if (tris[t].dead) continue;
            if (!tris[t].ghost()) {
                const Tri& tr = tris[t];
                if (orient(pts[tr.v[0]], pts[tr.v[1]], p) >= 0 &&
                    orient(pts[tr.v[1]], pts[tr.v[2]], p) >= 0 &&
                    orient(pts[tr.v[2]], pts[tr.v[0]], p) >= 0)
                    return static_cast<int>(t);
            } else if (in_circum(static_cast<int>(t), p)) {
                return static_cast<int>(t);
            }
        }
        throw NumericError("point location failed");
    }

    bool on_ray_toward(int a, int u, int b) const {
        // u collinear with a->b; true when u lies strictly between a and b.
        const double dx = pts[b].x - pts[a].x, dy = pts[b].y - pts[a].y;
        const double t = (pts[u].x - pts[a].x) * dx + (pts[u].y - pts[a].y) * dy;
        return t > 0.0 && t < dx * dx + dy * dy;
    }

    bool proper_cross(int a, int b, int c, int d) const {
        const int o1 = orient3(a, b, c), o2 = orient3(a, b, d);
        const int o3 = orient3(c, d, a), o4 = orient3(c, d, b);
        return o1 * o2 < 0 && o3 * o4 < 0;
    }

    // Enumerate alive triangles incident to vertex `vert`.
    template <class F>
    void for_each_incident(int vert, F&& f) const {
        const int start = v2t[vert];
        if (start < 0) return;
        int cur = start;
        // counterclockwise sweep
        for (;;) {
            f(cur);
            const int i = tris[cur].slot_of(vert);
            const int next = tris[cur].nb[(i + 1) % 3];
            if (next == kNone) break;
            if (next == start) return;
            cur = next;
        }
        // hit a boundary: sweep clockwise from start
        cur = start;
        for (;;) {
            const int i = tris[cur].slot_of(vert);
            const int next = tris[cur].nb[(i + 2) % 3];
            if (next == kNone || next == start) return;
            cur = next;
            f(cur);
        }
    }

    bool edge_exists(int u, int v) const {
        bool found = false;
        for_each_incident(u, [&](int t) {
            if (tris[t].slot_of(v) >= 0) found = true;
        });
        return found;
    }

    // Both triangles of edge (u, v); first carries the ccw (u -> v) order.
    bool try_edge_tris(int u, int v, int& t_uv, int& t_vu) const {
        t_uv = t_vu = kNone;
        for_each_incident(u, [&](int t) {
            const int iu = tris[t].slot_of(u);
            if (tris[t].v[(iu + 1) % 3] == v) t_uv = t;
            if (tris[t].v[(iu + 2) % 3] == v) t_vu = t;
        });
        return t_uv >= 0 && t_vu >= 0;
    }

    std::pair<int, int> edge_tris(int u, int v) const {
        int a, b;
        if (!try_edge_tris(u, v, a, b))
            throw NumericError("edge lookup failed during constraint insertion");
        return {a, b};
    }

    int opposite_vertex(int t, int u, int v) const {
        for (int k : tris[t].v)
            if (k != u && k != v) return k;
        throw NumericError("degenerate triangle in flip");
    }

    // Flip edge (u, v): triangles (u,v,x) + (v,u,y) become (x,u,y) + (y,v,x).
    void flip(int t1, int t2, int u, int v) {
        const int x = opposite_vertex(t1, u, v);
        const int y = opposite_vertex(t2, u, v);
        const int na = tris[t1].nb[tris[t1].slot_of(u)];  // across (v, x)
        const int nb_ = tris[t1].nb[tris[t1].slot_of(v)];  // across (x, u)
        const int nc = tris[t2].nb[tris[t2].slot_of(v)];  // across (u, y)
        const int nd = tris[t2].nb[tris[t2].slot_of(u)];  // across (y, v)

        tris[t1].v = {x, u, y};
        tris[t2].v = {y, v, x};
        tris[t1].nb = {nc, t2, nb_};
        tris[t2].nb = {na, t1, nd};
        relink(na, t1, t2);
        relink(nc, t2, t1);
        v2t[u] = t1;
        v2t[v] = t2;
        v2t[x] = t1;
        v2t[y] = t2;
    }

    void relink(int t, int from, int to) {
        if (t < 0) return;
        for (int i = 0; i < 3; ++i)
            if (tris[t].nb[i] == from) {
                tris[t].nb[i] = to;
                return;
            }
    }

    // Exactly cocircular quads get the lexicographically smallest diagonal.
    void normalize_cocircular() {
        std::deque<std::pair<int, int>> queue;
        for (std::size_t t = 0; t < tris.size(); ++t) {
            if (tris[t].dead || tris[t].ghost()) continue;
            for (int i = 0; i < 3; ++i) {
                const int n = tris[t].nb[i];
                if (n < 0 || tris[n].ghost() || tris[n].dead || n < static_cast<int>(t))
                    continue;
                queue.emplace_back(tris[t].v[(i + 1) % 3], tris[t].v[(i + 2) % 3]);
            }
        }
        while (!queue.empty()) {
            auto [u, v] = queue.front();
            queue.pop_front();
            int t1, t2;
            if (!try_edge_tris(u, v, t1, t2)) continue;
            if (tris[t1].ghost() || tris[t2].ghost()) continue;
            const int x = opposite_vertex(t1, u, v);
            const int y = opposite_vertex(t2, u, v);
            if (incircle(pts[u], pts[v], pts[x], pts[y]) != 0) continue;
            if (ordered(x, y) >= ordered(u, v)) continue;
            flip(t1, t2, u, v);
            queue.emplace_back(u, x);
            queue.emplace_back(x, v);
            queue.emplace_back(v, y);
            queue.emplace_back(y, u);
        }
    }
};

}  // namespace

TriMesh delaunay(const std::vector<Point2>& points) {
    Triangulation tn;
    tn.init(points);
    return tn.to_mesh();
}

TriMesh constrain(const TriMesh& mesh, const std::vector<Constraint>& constraints) {
    Triangulation tn;
    tn.from_mesh(mesh);
    for (const auto& c : constraints) {
        if (c.a < 0 || c.b < 0 || c.a >= static_cast<int>(mesh.vertices.size()) ||
            c.b >= static_cast<int>(mesh.vertices.size()))
            throw InputError("constraint endpoint index out of range");
        tn.insert_constraint(c.a, c.b);
    }
    tn.legalize_all();
    TriMesh out = tn.to_mesh();
    out.image_width = mesh.image_width;
    out.image_height = mesh.image_height;
    return out;
}

MeshLocator::MeshLocator(const TriMesh& mesh) : mesh_(mesh) {
    nb_.assign(mesh.triangles.size(), {-1, -1, -1});
    std::map<std::pair<int, int>, std::pair<int, int>> open;
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const auto& v = mesh.triangles[t];
        for (int i = 0; i < 3; ++i) {
            const auto key = ordered(v[(i + 1) % 3], v[(i + 2) % 3]);
            auto it = open.find(key);
            if (it == open.end()) {
                open.emplace(key, std::make_pair(static_cast<int>(t), i));
            } else {
                nb_[t][i] = it->second.first;
                nb_[it->second.first][it->second.second] = static_cast<int>(t);
                open.erase(it);
            }
        }
    }
}

int MeshLocator::brute_locate(const Point2& p) const {
    for (std::size_t t = 0; t < mesh_.triangles.size(); ++t) {
        const auto& v = mesh_.triangles[t];
        if (tri_contains(mesh_.vertices[v[0]], mesh_.vertices[v[1]],
                         mesh_.vertices[v[2]], p))
            return static_cast<int>(t);
    }
    throw InputError("locate: point outside the mesh hull");
}

int MeshLocator::locate(const Point2& p, int hint) const {
    if (mesh_.triangles.empty()) throw InputError("locate: empty mesh");
    int cur = (hint >= 0 && hint < static_cast<int>(mesh_.triangles.size())) ? hint : 0;
    // Deterministic per-query tie breaking for the stochastic visibility walk.
    std::uint64_t rng = 0x9e3779b97f4a7c15ULL;
    auto mix = [&rng](std::uint64_t bits) {
        rng ^= bits + 0x9e3779b97f4a7c15ULL + (rng << 6) + (rng >> 2);
    };
    union {
        double d;
        std::uint64_t u;
    } pun;
    pun.d = p.x;
    mix(pun.u);
    pun.d = p.y;
    mix(pun.u);

    std::size_t steps = 0;
    const std::size_t cap = 4 * mesh_.triangles.size() + 32;
    while (steps++ < cap) {
        const auto& v = mesh_.triangles[cur];
        int bad[3], nbad = 0;
        int o[3];
        for (int i = 0; i < 3; ++i) {
            o[i] = orient(mesh_.vertices[v[(i + 1) % 3]], mesh_.vertices[v[(i + 2) % 3]], p);
            if (o[i] < 0) bad[nbad++] = i;
        }
        if (nbad == 0) {
            if (o[0] > 0 && o[1] > 0 && o[2] > 0) return cur;  // strictly interior
            return brute_locate(p);  // boundary tie: lowest containing index
        }
        int pick = bad[0];
        if (nbad > 1) {
            rng ^= rng << 13;
            rng ^= rng >> 7;
            rng ^= rng << 17;
            pick = bad[rng % nbad];
        }
        const int next = nb_[cur][pick];
        if (next < 0) throw InputError("locate: point outside the mesh hull");
        cur = next;
    }
    return brute_locate(p);
}

int locate(const TriMesh& mesh, const Point2& p) {
    return MeshLocator(mesh).locate(p);
}

}  // namespace meshpix
