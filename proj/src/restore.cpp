#include "meshpix/restore.hpp"

#include <algorithm>
#include <cmath>

#include "meshpix/errors.hpp"
#include "meshpix/simd/kernels.hpp"

namespace meshpix {
namespace {

struct FrameMap {
    double sx = 1.0, sy = 1.0;
    double xmax = 0.0, ymax = 0.0;

    FrameMap(int mesh_w, int mesh_h, int out_w, int out_h) {
        xmax = mesh_w - 1.0;
        ymax = mesh_h - 1.0;
        sx = out_w > 1 ? xmax / (out_w - 1) : 0.0;
        sy = out_h > 1 ? ymax / (out_h - 1) : 0.0;
    }
    double x(int u) const { return std::min(u * sx, xmax); }
    double y(int v) const { return std::min(v * sy, ymax); }
};

}  // namespace

std::vector<Neighborhood> find_neighbors(const TriMesh& mesh) {
    const int nv = static_cast<int>(mesh.vertices.size());
    std::vector<std::vector<int>> incident(nv);
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t)
        for (int v : mesh.triangles[t]) incident[v].push_back(static_cast<int>(t));

    std::vector<Neighborhood> out(mesh.triangles.size());
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        out[t].triangle = static_cast<int>(t);
        auto& sup = out[t].support;
        for (int v : mesh.triangles[t])
            sup.insert(sup.end(), incident[v].begin(), incident[v].end());
        std::sort(sup.begin(), sup.end());
        sup.erase(std::unique(sup.begin(), sup.end()), sup.end());
    }
    return out;
}

std::vector<Neighborhood> knn_neighbors(const TriMesh& mesh, int k) {
    if (k < 1) throw InputError("knn support needs k >= 1");
    const int nt = static_cast<int>(mesh.triangles.size());
    std::vector<Neighborhood> out(nt);
    std::vector<std::pair<double, int>> scratch(nt);
    for (int t = 0; t < nt; ++t) {
        for (int s = 0; s < nt; ++s)
            scratch[s] = {dist2(mesh.centers[t], mesh.centers[s]), s};
        const int kk = std::min(k, nt);
        std::partial_sort(scratch.begin(), scratch.begin() + kk, scratch.end());
        out[t].triangle = t;
        for (int i = 0; i < kk; ++i) out[t].support.push_back(scratch[i].second);
        if (std::find(out[t].support.begin(), out[t].support.end(), t) ==
            out[t].support.end())
            out[t].support.push_back(t);
        std::sort(out[t].support.begin(), out[t].support.end());
    }
    return out;
}

std::vector<int> triangle_index_map(const TriMesh& mesh, int out_w, int out_h) {
    if (out_w <= 0 || out_h <= 0) throw InputError("output dimensions must be positive");
    const FrameMap fm(mesh.image_width, mesh.image_height, out_w, out_h);
    std::vector<int> map(static_cast<std::size_t>(out_w) * out_h, -1);

    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const auto& tv = mesh.triangles[t];
        const Point2& a = mesh.vertices[tv[0]];
        const Point2& b = mesh.vertices[tv[1]];
        const Point2& c = mesh.vertices[tv[2]];
        const double xlo = std::min({a.x, b.x, c.x}), xhi = std::max({a.x, b.x, c.x});
        const double ylo = std::min({a.y, b.y, c.y}), yhi = std::max({a.y, b.y, c.y});
        int ulo = 0, uhi = out_w - 1, vlo = 0, vhi = out_h - 1;
        if (fm.sx > 0.0) {
            ulo = std::max(0, static_cast<int>(std::floor(xlo / fm.sx)) - 1);
            uhi = std::min(out_w - 1, static_cast<int>(std::ceil(xhi / fm.sx)) + 1);
        }
        if (fm.sy > 0.0) {
            vlo = std::max(0, static_cast<int>(std::floor(ylo / fm.sy)) - 1);
            vhi = std::min(out_h - 1, static_cast<int>(std::ceil(yhi / fm.sy)) + 1);
        }
        for (int v = vlo; v <= vhi; ++v) {
            const double py = fm.y(v);
            for (int u = ulo; u <= uhi; ++u) {
                std::size_t i = static_cast<std::size_t>(v) * out_w + u;
                if (map[i] >= 0) continue;
                if (tri_contains(a, b, c, {fm.x(u), py})) map[i] = static_cast<int>(t);
            }
        }
    }
    for (int m : map)
        if (m < 0)
            throw NumericError(
                "triangle map incomplete: mesh does not cover the image frame");
    return map;
}

std::vector<double> center_intensities(const GrayImage& img, const TriMesh& mesh) {
    const auto map = triangle_index_map(mesh, img.width, img.height);
    std::vector<double> sum(mesh.triangles.size(), 0.0);
    std::vector<int> count(mesh.triangles.size(), 0);
    for (std::size_t i = 0; i < map.size(); ++i) {
        sum[map[i]] += img.data[i];
        count[map[i]] += 1;
    }
    std::vector<double> out(mesh.triangles.size());
    for (std::size_t t = 0; t < out.size(); ++t) {
        if (count[t] > 0)
            out[t] = sum[t] / count[t];
        else  // sliver without an interior pixel center
            out[t] = sample_bilinear(img, mesh.centers[t].x, mesh.centers[t].y);
    }
    return out;
}

Method method_from_name(const std::string& name) {
    if (name == "piecewise") return Method::piecewise;
    if (name == "vertex" || name == "vertex_iso_rbf") return Method::vertex_iso_rbf;
    if (name == "iso" || name == "triangle_iso_rbf") return Method::triangle_iso_rbf;
    if (name == "arbf" || name == "triangle_arbf") return Method::triangle_arbf;
    throw InputError("unknown method '" + name + "' (piecewise|vertex|iso|arbf)");
}

std::string method_name(Method m) {
    switch (m) {
        case Method::piecewise: return "piecewise";
        case Method::vertex_iso_rbf: return "vertex_iso_rbf";
        case Method::triangle_iso_rbf: return "triangle_iso_rbf";
        case Method::triangle_arbf: return "triangle_arbf";
    }
    return "?";
}

namespace {

Dist2Fn metric_dist2(const Metric2& m) {
    return [m](const Point2& p, const Point2& q) { return anisotropic_dist2(p, q, m); };
}

// Flattened per-triangle systems for the accumulation kernel. Local systems
// with more than one center are solved on mean-centered values and the mean
// is added back at evaluation: the kernel matrix and the interpolation
// property are unchanged, but the interpolant no longer overshoots where an
// output pixel falls outside its support's centroid cloud (image borders
// and corners), and constant meshes decode exactly.
struct LocalSystems {
    std::vector<std::size_t> offset;  // nt + 1
    std::vector<double> cx, cy, w;
    std::vector<double> shift;  // per-triangle value mean
    std::vector<char> failed;
};

LocalSystems solve_local_systems(const TriMesh& mesh,
                                 const std::vector<Neighborhood>& hoods,
                                 const TensorField& field, const Kernel& kernel,
                                 RestoreStats& stats) {
    const std::size_t nt = mesh.triangles.size();
    LocalSystems ls;
    ls.offset.assign(nt + 1, 0);
    ls.shift.assign(nt, 0.0);
    ls.failed.assign(nt, 0);
    for (std::size_t t = 0; t < nt; ++t)
        ls.offset[t + 1] = ls.offset[t] + hoods[t].support.size();
    ls.cx.resize(ls.offset[nt]);
    ls.cy.resize(ls.offset[nt]);
    ls.w.resize(ls.offset[nt]);

    std::vector<Point2> centers;
    std::vector<double> values;
    for (std::size_t t = 0; t < nt; ++t) {
        centers.clear();
        values.clear();
        for (int s : hoods[t].support) {
            centers.push_back(mesh.centers[s]);
            values.push_back(mesh.center_intensity[s]);
        }
        if (values.size() > 1) {
            double mean = 0.0;
            for (double v : values) mean += v;
            mean /= static_cast<double>(values.size());
            for (double& v : values) v -= mean;
            ls.shift[t] = mean;
        }
        // One solve per triangle, with the metric frozen at its centroid.
        const Metric2 mc = field.at(mesh.centers[t].x, mesh.centers[t].y);
        ++stats.solve_count;
        try {
            const SolveResult sr = solve(assemble(centers, values, kernel, metric_dist2(mc)));
            if (sr.regularized) ++stats.regularized_systems;
            for (std::size_t i = 0; i < centers.size(); ++i) {
                ls.cx[ls.offset[t] + i] = centers[i].x;
                ls.cy[ls.offset[t] + i] = centers[i].y;
                ls.w[ls.offset[t] + i] = sr.weights[i];
            }
        } catch (const NumericError&) {
            ls.failed[t] = 1;
            ++stats.fallback_triangles;
        }
    }
    return ls;
}

}  // namespace

GrayImage restore(const TriMesh& mesh, const TensorField* tensor,
                  const RestoreConfig& cfg, int out_w, int out_h,
                  RestoreStats* stats, const std::vector<double>* vertex_values) {
    if (cfg.scale < 1.0) throw InputError("restore: scale must be >= 1");
    if (mesh.center_intensity.size() != mesh.triangles.size())
        throw InputError("restore: mesh carries no center intensities");
    if (mesh.triangles.empty()) throw InputError("restore: empty mesh");
    RestoreStats local_stats;
    RestoreStats& st = stats ? *stats : local_stats;
    st = RestoreStats{};

    const auto map = triangle_index_map(mesh, out_w, out_h);
    const FrameMap fm(mesh.image_width, mesh.image_height, out_w, out_h);
    GrayImage out(out_w, out_h);

    auto clamp_all = [&out]() {
        for (double& v : out.data) v = std::clamp(v, 0.0, 255.0);
    };

    if (cfg.method == Method::piecewise) {
        for (std::size_t i = 0; i < map.size(); ++i)
            out.data[i] = mesh.center_intensity[map[i]];
        clamp_all();
        return out;
    }

    if (cfg.method == Method::vertex_iso_rbf) {
        if (!vertex_values || vertex_values->size() != mesh.vertices.size())
            throw InputError("vertex_iso_rbf needs one intensity per mesh vertex");
        const std::size_t nt = mesh.triangles.size();
        // Per-triangle 3x3 systems over the triangle's own vertices.
        std::vector<std::array<double, 3>> wgt(nt);
        std::vector<double> shift(nt, 0.0);
        std::vector<char> failed(nt, 0);
        const Dist2Fn d2 = euclidean_dist2();
        for (std::size_t t = 0; t < nt; ++t) {
            const auto& tv = mesh.triangles[t];
            std::vector<Point2> centers{mesh.vertices[tv[0]], mesh.vertices[tv[1]],
                                        mesh.vertices[tv[2]]};
            std::vector<double> values{(*vertex_values)[tv[0]], (*vertex_values)[tv[1]],
                                       (*vertex_values)[tv[2]]};
            shift[t] = (values[0] + values[1] + values[2]) / 3.0;
            for (double& v : values) v -= shift[t];
            ++st.solve_count;
            try {
                const SolveResult sr = solve(assemble(centers, values, cfg.kernel, d2));
                if (sr.regularized) ++st.regularized_systems;
                wgt[t] = {sr.weights[0], sr.weights[1], sr.weights[2]};
            } catch (const NumericError&) {
                failed[t] = 1;
                ++st.fallback_triangles;
            }
        }
        for (int v = 0; v < out_h; ++v)
            for (int u = 0; u < out_w; ++u) {
                const std::size_t i = static_cast<std::size_t>(v) * out_w + u;
                const int t = map[i];
                if (failed[t]) {
                    out.data[i] = mesh.center_intensity[t];
                    continue;
                }
                const auto& tv = mesh.triangles[t];
                const double cx[3] = {mesh.vertices[tv[0]].x, mesh.vertices[tv[1]].x,
                                      mesh.vertices[tv[2]].x};
                const double cy[3] = {mesh.vertices[tv[0]].y, mesh.vertices[tv[1]].y,
                                      mesh.vertices[tv[2]].y};
                out.data[i] = shift[t] +
                              kern::rbf_accum(cfg.kernel.kind, cfg.kernel.c, fm.x(u),
                                              fm.y(v), 1.0, 0.0, 1.0, cx, cy,
                                              wgt[t].data(), 3);
            }
        clamp_all();
        return out;
    }

    // Triangle-center interpolation, isotropic or anisotropic. Both run the
    // same code path; the isotropic method uses an identity metric field, so
    // triangle_arbf with kappa = 0 is bitwise identical to triangle_iso_rbf.
    const TensorField* field = tensor;
    TensorField identity;
    if (cfg.method == Method::triangle_iso_rbf) {
        identity = identity_tensor_field(mesh.image_width, mesh.image_height);
        field = &identity;
    } else {
        if (!field) throw InputError("triangle_arbf needs a tensor field");
        if (field->width != mesh.image_width || field->height != mesh.image_height)
            throw InputError("tensor field dimensions do not match the mesh frame");
    }

    const auto hoods = cfg.support == SupportPolicy::one_ring
                           ? find_neighbors(mesh)
                           : knn_neighbors(mesh, cfg.knn_k);
    const LocalSystems ls = solve_local_systems(mesh, hoods, *field, cfg.kernel, st);

    for (int v = 0; v < out_h; ++v) {
        const double py = fm.y(v);
        for (int u = 0; u < out_w; ++u) {
            const std::size_t i = static_cast<std::size_t>(v) * out_w + u;
            const int t = map[i];
            if (ls.failed[t]) {
                out.data[i] = mesh.center_intensity[t];
                continue;
            }
            const double px = fm.x(u);
            const Metric2 m = cfg.metric_eval == MetricEval::pixel
                                  ? field->at(px, py)
                                  : field->at(mesh.centers[t].x, mesh.centers[t].y);
            const std::size_t o = ls.offset[t];
            out.data[i] = ls.shift[t] +
                          kern::rbf_accum(cfg.kernel.kind, cfg.kernel.c, px, py, m.t11,
                                          m.t12, m.t22, ls.cx.data() + o,
                                          ls.cy.data() + o, ls.w.data() + o,
                                          static_cast<int>(ls.offset[t + 1] - o));
        }
    }
    clamp_all();
    return out;
}

}  // namespace meshpix
