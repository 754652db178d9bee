// Acceptance harness: runs every acceptance criterion end to end and prints
// one PASS/FAIL line per criterion. Exit code = number of failures.

#include <unistd.h>

#include <chrono>
#include <filesystem>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "meshpix/cdt.hpp"
#include "meshpix/config.hpp"
#include "meshpix/errors.hpp"
#include "meshpix/metrics.hpp"
#include "meshpix/restore.hpp"
#include "meshpix/sampling.hpp"
#include "meshpix/tensor.hpp"
#include "../testutil.hpp"

using namespace meshpix;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int id, bool ok, const std::string& what, const std::string& detail) {
    std::printf("%s  criterion %d: %s  [%s]\n", ok ? "PASS" : "FAIL", id, what.c_str(),
                detail.c_str());
    if (!ok) ++g_failures;
}

double elapsed(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Encoded {
    TriMesh mesh;
    double ratio = 0.0;
};

Encoded encode_default(const GrayImage& img) {
    const RunConfig cfg;
    Encoded e;
    const SamplePointSet s = build_samples(img, cfg.sampling());
    TriMesh mesh = delaunay(s.points);
    mesh.image_width = img.width;
    mesh.image_height = img.height;
    std::vector<Constraint> cons;
    for (const auto& chain : s.edge_chains)
        for (std::size_t i = 1; i < chain.size(); ++i)
            cons.push_back({chain[i - 1], chain[i]});
    mesh = constrain(mesh, cons);
    mesh.center_intensity = center_intensities(img, mesh);
    e.ratio = compression_ratio(mesh, img);
    e.mesh = std::move(mesh);
    return e;
}

double decode_psnr(const GrayImage& img, const TriMesh& mesh, Method method,
                   Kernel kernel, const TensorField* tf, RestoreStats* stats = nullptr,
                   MetricEval me = MetricEval::centroid) {
    RestoreConfig rc;
    rc.method = method;
    rc.kernel = kernel;
    rc.metric_eval = me;
    const GrayImage out =
        restore(mesh, tf, rc, img.width, img.height, stats);
    return psnr(img, quantized(out));
}

// --------------------------------------------------------------------------

void criterion_1_and_2() {
    const auto t0 = Clock::now();
    const GrayImage img = quantized(testutil::standard_image_256());
    const Encoded enc = encode_default(img);
    const RunConfig cfg;
    const TensorField tf =
        build_tensor_field(img, cfg.tensor_sigma(), cfg.tensor_kappa(), cfg.tensor_tau());

    const double p_pw = decode_psnr(img, enc.mesh, Method::piecewise, {}, nullptr);
    const double p_iso =
        decode_psnr(img, enc.mesh, Method::triangle_iso_rbf, {KernelKind::mq, 0.5}, nullptr);
    const double p_mq =
        decode_psnr(img, enc.mesh, Method::triangle_arbf, {KernelKind::mq, 0.5}, &tf);
    const double p_imq =
        decode_psnr(img, enc.mesh, Method::triangle_arbf, {KernelKind::imq, 1.8}, &tf);

    // self-contained tensor mode, reported for reference
    RestoreConfig pre;
    pre.method = Method::piecewise;
    const GrayImage base = restore(enc.mesh, nullptr, pre, img.width, img.height);
    const TensorField tf_self =
        build_tensor_field(base, cfg.tensor_sigma(), cfg.tensor_kappa(), cfg.tensor_tau());
    const double p_mq_self =
        decode_psnr(img, enc.mesh, Method::triangle_arbf, {KernelKind::mq, 0.5}, &tf_self);

    const double secs = elapsed(t0);
    const bool ratio_ok = enc.ratio >= 0.05 && enc.ratio <= 0.07;
    const bool order_ok = p_pw < p_iso && p_iso < p_mq && p_imq >= p_iso && p_imq <= p_mq;
    const bool band_ok = p_mq >= p_iso + 0.8 && p_mq >= 26.0;
    const bool time_ok = secs < 60.0;

    std::ostringstream d;
    d.setf(std::ios::fixed);
    d.precision(3);
    d << "ratio=" << enc.ratio << " piecewise=" << p_pw << " iso=" << p_iso
      << " arbf_mq=" << p_mq << " arbf_imq=" << p_imq
      << " arbf_mq_selftensor=" << p_mq_self << " time=" << secs << "s";
    report(1, ratio_ok && order_ok && band_ok && time_ok,
           "method ordering and quality band at 6% compression", d.str());

    // Criterion 2: TPS preset (per-pixel metric of the source formulation)
    // must degrade: >10% regularized/fallback or PSNR below piecewise.
    RestoreStats tps_stats;
    bool crashed = false;
    double p_tps = 0.0;
    try {
        p_tps = decode_psnr(img, enc.mesh, Method::triangle_arbf, {KernelKind::tps, 1.0},
                            &tf, &tps_stats, MetricEval::pixel);
    } catch (const std::exception&) {
        crashed = true;
    }
    const double frac =
        static_cast<double>(tps_stats.regularized_systems + tps_stats.fallback_triangles) /
        static_cast<double>(enc.mesh.triangles.size());
    const bool degraded = frac > 0.10 || p_tps < p_pw;
    std::ostringstream d2;
    d2.setf(std::ios::fixed);
    d2.precision(3);
    d2 << "tps=" << p_tps << " piecewise=" << p_pw << " regularized+fallback frac="
       << frac << (crashed ? " CRASHED" : "");
    report(2, !crashed && degraded, "tps divergence is reproduced and reported",
           d2.str());
}

void criterion_3() {
    const auto t0 = Clock::now();
    const GrayImage images[3] = {quantized(testutil::standard_image_256()),
                                 quantized(testutil::synthetic_scene(96, 80, 4)),
                                 quantized(testutil::smooth_scene(64, 64))};
    bool all_equal = true;
    for (const GrayImage& img : images) {
        const Encoded enc = encode_default(img);
        const TensorField tf0 = build_tensor_field(img, 1.5, 0.0);  // kappa = 0
        RestoreConfig iso;
        iso.method = Method::triangle_iso_rbf;
        RestoreConfig arbf;
        arbf.method = Method::triangle_arbf;
        const GrayImage a = restore(enc.mesh, nullptr, iso, img.width, img.height);
        const GrayImage b = restore(enc.mesh, &tf0, arbf, img.width, img.height);
        all_equal = all_equal && a.data == b.data;
    }
    const double secs = elapsed(t0);
    std::ostringstream d;
    d << "3 images, bitwise " << (all_equal ? "identical" : "DIFFERENT") << ", "
      << secs << "s";
    report(3, all_equal && secs < 30.0, "arbf with kappa=0 equals iso bitwise", d.str());
}

void criterion_4() {
    const auto t0 = Clock::now();
    std::mt19937 rng(20240817);
    std::uniform_real_distribution<double> coord(0.0, 12.0);
    std::uniform_real_distribution<double> val(0.0, 255.0);
    std::uniform_real_distribution<double> ang(0.0, 6.283185307179586);
    std::uniform_real_distribution<double> lam(0.25, 8.0);

    int checked = 0, violations = 0, singular = 0;
    for (int rep = 0; rep < 1000; ++rep) {
        const KernelKind kind = static_cast<KernelKind>(rep % 4);
        const int n_lo = kind == KernelKind::tps ? 2 : 1;
        const int n = n_lo + static_cast<int>(rng() % (21 - n_lo));
        std::vector<Point2> centers;
        while (static_cast<int>(centers.size()) < n) {
            const Point2 p{coord(rng), coord(rng)};
            bool ok = true;
            for (const auto& q : centers)
                if (dist2(p, q) < 0.16) ok = false;
            if (ok) centers.push_back(p);
        }
        std::vector<double> values(n);
        for (double& v : values) v = val(rng);

        const double a = ang(rng), l1 = lam(rng), l2 = lam(rng);
        const double c = std::cos(a), s = std::sin(a);
        const Metric2 metric{l1 * c * c + l2 * s * s, (l1 - l2) * c * s,
                             l1 * s * s + l2 * c * c};
        const Dist2Fn d2 = [&metric](const Point2& p, const Point2& q) {
            return anisotropic_dist2(p, q, metric);
        };
        const Kernel kernel{kind, kind == KernelKind::imq ? 1.8 : 0.5};

        RbfSystem sys;
        try {
            sys = solve_system(centers, values, kernel, d2);
        } catch (const NumericError&) {
            ++singular;
            continue;
        }
        double fmax = 0.0;
        for (double v : values) fmax = std::max(fmax, std::fabs(v));
        const double tol = (sys.regularized ? 1e-3 : 1e-6) * std::max(fmax, 1.0);
        for (int j = 0; j < n; ++j) {
            ++checked;
            if (std::fabs(evaluate(sys, centers[j], d2) - values[j]) > tol) ++violations;
        }
    }
    const double secs = elapsed(t0);
    std::ostringstream d;
    d << checked << " center evaluations, " << violations << " violations, "
      << singular << " singular systems, " << secs << "s";
    report(4, violations == 0 && singular == 0 && secs < 10.0,
           "interpolation property on 1000 random local systems", d.str());
}

void criterion_5() {
    const auto t0 = Clock::now();
    std::mt19937 rng(77001);
    bool circ_ok = true, cons_ok = true, euler_ok = true;

    for (int rep = 0; rep < 200; ++rep) {
        const int n = 20 + static_cast<int>(rng() % 181);
        std::uniform_real_distribution<double> coord(0.0, 100.0);
        std::vector<Point2> pts;
        std::set<std::pair<long, long>> seen;
        while (static_cast<int>(pts.size()) < n) {
            const Point2 p{coord(rng), coord(rng)};
            const auto key = std::make_pair(std::lround(p.x * 64), std::lround(p.y * 64));
            if (!seen.insert(key).second) continue;
            pts.push_back(p);
        }
        const TriMesh m = delaunay(pts);

        for (const auto& t : m.triangles) {
            for (std::size_t p = 0; p < pts.size() && circ_ok; ++p) {
                const int pi = static_cast<int>(p);
                if (pi == t[0] || pi == t[1] || pi == t[2]) continue;
                if (incircle(pts[t[0]], pts[t[1]], pts[t[2]], pts[p]) > 0) circ_ok = false;
            }
        }

        // 20 random pairwise non-crossing constraints avoiding collinear
        // third points (those split and are checked elsewhere).
        std::vector<Constraint> cons;
        std::uniform_int_distribution<int> pick(0, n - 1);
        int guard = 0;
        while (static_cast<int>(cons.size()) < 20 && ++guard < 4000) {
            const int a = pick(rng), b = pick(rng);
            if (a == b) continue;
            bool bad = false;
            for (const auto& k : cons) {
                const int o1 = orient(pts[a], pts[b], pts[k.a]);
                const int o2 = orient(pts[a], pts[b], pts[k.b]);
                const int o3 = orient(pts[k.a], pts[k.b], pts[a]);
                const int o4 = orient(pts[k.a], pts[k.b], pts[b]);
                if (o1 * o2 < 0 && o3 * o4 < 0) bad = true;
            }
            for (std::size_t p = 0; p < pts.size() && !bad; ++p) {
                if (static_cast<int>(p) == a || static_cast<int>(p) == b) continue;
                if (orient(pts[a], pts[b], pts[p]) != 0) continue;
                const double t = (pts[p].x - pts[a].x) * (pts[b].x - pts[a].x) +
                                 (pts[p].y - pts[a].y) * (pts[b].y - pts[a].y);
                if (t > 0 && t < dist2(pts[a], pts[b])) bad = true;
            }
            if (!bad) cons.push_back({a, b});
        }
        const TriMesh cm = constrain(m, cons);
        std::set<std::pair<int, int>> edges;
        std::map<std::pair<int, int>, int> uses;
        for (const auto& t : cm.triangles)
            for (int i = 0; i < 3; ++i) {
                const auto e = std::minmax(t[i], t[(i + 1) % 3]);
                edges.insert(e);
                uses[e]++;
            }
        for (const auto& k : cons)
            if (!edges.count(std::minmax(k.a, k.b))) cons_ok = false;
        int hull = 0;
        for (const auto& [e, cnt] : uses)
            if (cnt == 1) ++hull;
        if (static_cast<int>(cm.triangles.size()) != 2 * (n - 1) - hull) euler_ok = false;
    }
    const double secs = elapsed(t0);
    std::ostringstream d;
    d << "circumcircle " << (circ_ok ? "ok" : "VIOLATED") << ", constraints "
      << (cons_ok ? "ok" : "MISSING") << ", euler " << (euler_ok ? "ok" : "BROKEN")
      << ", " << secs << "s";
    report(5, circ_ok && cons_ok && euler_ok && secs < 20.0,
           "cdt oracle on 200 random point sets", d.str());
}

void criterion_6() {
    const GrayImage step = testutil::step_image(32, 32, 16);
    const RunConfig cfg;
    const RawTensor raw = structure_tensor(step, cfg.tensor_sigma());
    const TensorField f =
        build_tensor_field(step, cfg.tensor_sigma(), cfg.tensor_kappa(), cfg.tensor_tau());

    bool angle_ok = true, ratio_ok = true;
    const double cos5 = std::cos(5.0 * 3.14159265358979323846 / 180.0);
    for (int y = 2; y < 30; ++y)
        for (int x = 15; x <= 16; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * 32 + x;
            const SymEigen2 eg = sym_eigen2(raw.s11[i], raw.s12[i], raw.s22[i]);
            if (std::fabs(eg.e1x) < cos5) angle_ok = false;
            const Metric2 m = f.at_pixel(x, y);
            const double across = anisotropic_dist2({0, 0}, {1, 0}, m);
            const double along = anisotropic_dist2({0, 0}, {0, 1}, m);
            if (across / along < 3.0) ratio_ok = false;
        }

    const TensorField flat = build_tensor_field(GrayImage(24, 24, 50.0),
                                                cfg.tensor_sigma(), cfg.tensor_kappa(),
                                                cfg.tensor_tau());
    bool ident_ok = true;
    for (std::size_t i = 0; i < flat.t11.size(); ++i)
        if (std::fabs(flat.t11[i] - 1.0) > 1e-10 || std::fabs(flat.t12[i]) > 1e-10 ||
            std::fabs(flat.t22[i] - 1.0) > 1e-10)
            ident_ok = false;

    std::ostringstream d;
    d << "edge normal " << (angle_ok ? "within 5 deg" : "OFF") << ", across/along "
      << (ratio_ok ? ">= 3" : "TOO LOW") << ", flat identity "
      << (ident_ok ? "exact" : "BROKEN");
    report(6, angle_ok && ratio_ok && ident_ok, "structure tensor on the step edge",
           d.str());
}

void criterion_7() {
    const GrayImage a = testutil::random_image(512, 512, 1001);
    const GrayImage b = testutil::random_image(512, 512, 1002);
    const long double ref =
        sqrtl(testutil::naive_ssd(a, b) / static_cast<long double>(a.pixel_count()));
    const double got = rmse(a, b);
    const double rel = std::fabs(got - static_cast<double>(ref)) / static_cast<double>(ref);
    const bool inf_ok = std::isinf(psnr(a, a)) && format_db(psnr(a, a)) == "inf";
    std::ostringstream d;
    d << "relative error vs naive long-double loop " << rel << ", psnr(a,a)="
      << format_db(psnr(a, a));
    report(7, rel <= 1e-12 && inf_ok, "rmse/psnr against the naive oracle on 512x512",
           d.str());
}

void criterion_8() {
    const GrayImage img = quantized(testutil::synthetic_scene(128, 112, 33));
    const std::string dir = std::filesystem::temp_directory_path().string() + "/acc8_" +
                            std::to_string(::getpid());
    std::filesystem::create_directories(dir);
    auto run_once = [&](const std::string& tag) {
        const Encoded enc = encode_default(img);
        save_mesh(enc.mesh, dir + "/" + tag + ".mesh");
        const RunConfig cfg;
        const TensorField tf = build_tensor_field(img, cfg.tensor_sigma(),
                                                  cfg.tensor_kappa(), cfg.tensor_tau());
        RestoreConfig rc;
        const GrayImage out = restore(enc.mesh, &tf, rc, img.width, img.height);
        save_image(out, dir + "/" + tag + ".png");
    };
    run_once("a");
    run_once("b");
    auto slurp = [](const std::string& p) {
        std::ifstream in(p, std::ios::binary);
        return std::string((std::istreambuf_iterator<char>(in)), {});
    };
    const bool mesh_same = slurp(dir + "/a.mesh") == slurp(dir + "/b.mesh");
    const bool img_same = slurp(dir + "/a.png") == slurp(dir + "/b.png");
    const bool nonempty = !slurp(dir + "/a.mesh").empty();
    std::ostringstream d;
    d << "mesh bytes " << (mesh_same ? "identical" : "DIFFER") << ", image bytes "
      << (img_same ? "identical" : "DIFFER");
    report(8, mesh_same && img_same && nonempty, "full pipeline determinism", d.str());
}

void criterion_9() {
    const GrayImage img = quantized(testutil::synthetic_scene(285, 341, 7));
    const Encoded enc = encode_default(img);
    const RunConfig cfg;
    const TensorField tf =
        build_tensor_field(img, cfg.tensor_sigma(), cfg.tensor_kappa(), cfg.tensor_tau());
    RestoreConfig rc;  // arbf-mq defaults
    const auto t0 = Clock::now();
    RestoreStats stats;
    const GrayImage out = restore(enc.mesh, &tf, rc, img.width, img.height, &stats);
    const double secs = elapsed(t0);
    const double p = psnr(img, quantized(out));
    std::ostringstream d;
    d.setf(std::ios::fixed);
    d.precision(3);
    d << "285x341 ratio=" << enc.ratio << " decode=" << secs << "s psnr=" << p;
    report(9, secs < 10.0, "single-threaded decode under 10 s", d.str());
}

}  // namespace

int main() {
    std::printf("acceptance: %s backend\n",
                kern::active_backend() == kern::Backend::avx2 ? "avx2" : "scalar");
    criterion_1_and_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    if (g_failures == 0)
        std::printf("all criteria passed\n");
    else
        std::printf("%d criteria FAILED\n", g_failures);
    return g_failures;
}
