#include "meshpix/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "meshpix/errors.hpp"
#include "meshpix/tensor.hpp"

namespace meshpix {
namespace {

// ---------------------------------------------------------------- canny --

struct EdgeMap {
    int w = 0, h = 0;
    std::vector<std::uint8_t> on;
    bool at(int x, int y) const {
        return x >= 0 && x < w && y >= 0 && y < h &&
               on[static_cast<std::size_t>(y) * w + x];
    }
};

const int kNx[8] = {1, 1, 0, -1, -1, -1, 0, 1};
const int kNy[8] = {0, 1, 1, 1, 0, -1, -1, -1};

// Simple-point erosion: a pixel with >= 2 edge neighbors is dropped when
// those neighbors stay mutually 8-connected without it. This strips the
// redundant corner pixels NMS leaves on curved edges so the map is
// single-pixel wide (mostly degree-2) and the chain linker does not
// fragment curves at fake junctions. Endpoints (degree 1) never qualify.
void thin_edges(EdgeMap& map) {
    for (int iter = 0; iter < 10; ++iter) {
        bool changed = false;
        for (int y = 0; y < map.h; ++y)
            for (int x = 0; x < map.w; ++x) {
                if (!map.at(x, y)) continue;
                int nx[8], ny[8], deg = 0;
                for (int k = 0; k < 8; ++k)
                    if (map.at(x + kNx[k], y + kNy[k])) {
                        nx[deg] = x + kNx[k];
                        ny[deg] = y + kNy[k];
                        ++deg;
                    }
                if (deg < 2) continue;
                // connected components among the neighbors themselves
                int comp[8];
                for (int k = 0; k < deg; ++k) comp[k] = k;
                for (int a = 0; a < deg; ++a)
                    for (int b = a + 1; b < deg; ++b) {
                        if (std::abs(nx[a] - nx[b]) > 1 || std::abs(ny[a] - ny[b]) > 1)
                            continue;
                        const int ca = comp[a], cb = comp[b];
                        if (ca == cb) continue;
                        for (int k = 0; k < deg; ++k)
                            if (comp[k] == cb) comp[k] = ca;
                    }
                bool one = true;
                for (int k = 0; k < deg; ++k) one &= comp[k] == comp[0];
                if (!one) continue;
                map.on[static_cast<std::size_t>(y) * map.w + x] = 0;
                changed = true;
            }
        if (!changed) break;
    }
}

// Maximal simple 8-connected paths through the edge map. Each pixel lands in
// exactly one chain; open paths start at endpoints/junctions, the second
// pass picks up pure loops and leftover segments.
std::vector<std::vector<Point2>> link_chains(const EdgeMap& map) {
    const int w = map.w, h = map.h;
    std::vector<std::uint8_t> visited(map.on.size(), 0);
    std::vector<int> degree(map.on.size(), 0);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            if (!map.at(x, y)) continue;
            int d = 0;
            for (int k = 0; k < 8; ++k)
                if (map.at(x + kNx[k], y + kNy[k])) ++d;
            degree[static_cast<std::size_t>(y) * w + x] = d;
        }

    auto idx = [&](int x, int y) { return static_cast<std::size_t>(y) * w + x; };
    std::vector<std::vector<Point2>> chains;

    auto walk = [&](int sx, int sy, std::vector<Point2>& out) {
        int x = sx, y = sy;
        for (;;) {
            int nx = -1, ny = -1;
            for (int k = 0; k < 8; ++k) {
                const int cx = x + kNx[k], cy = y + kNy[k];
                if (map.at(cx, cy) && !visited[idx(cx, cy)]) {
                    nx = cx;
                    ny = cy;
                    break;
                }
            }
            if (nx < 0) return;
            visited[idx(nx, ny)] = 1;
            out.push_back({static_cast<double>(nx), static_cast<double>(ny)});
            x = nx;
            y = ny;
            if (degree[idx(x, y)] > 2) return;  // stop at junctions
        }
    };

    // Open paths first.
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            if (!map.at(x, y) || visited[idx(x, y)]) continue;
            if (degree[idx(x, y)] == 2) continue;
            visited[idx(x, y)] = 1;
            // A junction spawns one chain per unvisited branch.
            for (;;) {
                std::vector<Point2> chain{{static_cast<double>(x), static_cast<double>(y)}};
                walk(x, y, chain);
                if (chain.size() >= 2)
                    chains.push_back(std::move(chain));
                else
                    break;
            }
        }
    // Loops and leftovers.
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            if (!map.at(x, y) || visited[idx(x, y)]) continue;
            visited[idx(x, y)] = 1;
            std::vector<Point2> fwd{{static_cast<double>(x), static_cast<double>(y)}};
            walk(x, y, fwd);
            std::vector<Point2> bwd;
            walk(x, y, bwd);
            if (!bwd.empty()) {
                std::reverse(bwd.begin(), bwd.end());
                bwd.insert(bwd.end(), fwd.begin(), fwd.end());
                fwd.swap(bwd);
            }
            if (fwd.size() >= 2) chains.push_back(std::move(fwd));
        }
    return chains;
}

}  // namespace

void SamplingConfig::validate() const {
    if (!(canny_sigma > 0.0)) throw InputError("canny.sigma must be > 0");
    if (!(canny_low > 0.0 && canny_low < canny_high))
        throw InputError("canny thresholds must satisfy 0 < low < high");
    if (pca_window < 3 || pca_window % 2 == 0)
        throw InputError("pca.window must be odd and >= 3");
    if (!(pca_dense_spacing > 0.0 && pca_dense_spacing < pca_sparse_spacing))
        throw InputError("pca spacings must satisfy 0 < dense < sparse");
    if (!(pca_anisotropy_threshold > 0.0))
        throw InputError("pca.anisotropy_threshold must be > 0");
    if (!(halftone_fraction > 0.0 && halftone_fraction < 1.0))
        throw InputError("halftone.fraction must be in (0, 1)");
    if (!(uniform_spacing > 0.0)) throw InputError("uniform.spacing must be > 0");
    if (!(min_separation > 0.0)) throw InputError("min_separation must be > 0");
}

std::vector<std::vector<Point2>> canny_edges(const GrayImage& img, double low,
                                             double high, double sigma) {
    if (!(low > 0.0 && low < high)) throw InputError("canny: need 0 < low < high");
    if (!(sigma > 0.0)) throw InputError("canny: sigma must be > 0");
    if (img.width < 3 || img.height < 3) return {};

    const int w = img.width, h = img.height;
    std::vector<double> smooth(img.pixel_count());
    gaussian_smooth(img.data.data(), smooth.data(), w, h, sigma);

    auto sm = [&](int x, int y) {
        x = std::clamp(x, 0, w - 1);
        y = std::clamp(y, 0, h - 1);
        return smooth[static_cast<std::size_t>(y) * w + x];
    };

    std::vector<double> gx(img.pixel_count()), gy(img.pixel_count()),
        mag(img.pixel_count());
    double max_mag = 0.0;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * w + x;
            gx[i] = (sm(x + 1, y - 1) + 2.0 * sm(x + 1, y) + sm(x + 1, y + 1)) -
                    (sm(x - 1, y - 1) + 2.0 * sm(x - 1, y) + sm(x - 1, y + 1));
            gy[i] = (sm(x - 1, y + 1) + 2.0 * sm(x, y + 1) + sm(x + 1, y + 1)) -
                    (sm(x - 1, y - 1) + 2.0 * sm(x, y - 1) + sm(x + 1, y - 1));
            mag[i] = std::hypot(gx[i], gy[i]);
            max_mag = std::max(max_mag, mag[i]);
        }
    // Absolute floor: border renormalization leaves O(eps) gradients on
    // constant images, far below any real feature on a [0,255] scale.
    if (max_mag <= 1e-8) return {};

    auto mg = [&](int x, int y) {
        return (x < 0 || x >= w || y < 0 || y >= h)
                   ? 0.0
                   : mag[static_cast<std::size_t>(y) * w + x];
    };

    // Non-maximum suppression against bilinearly interpolated magnitudes one
    // unit along the gradient ray (keeps curved edges single-pixel wide).
    // Ties on perfect plateaus break toward the up-gradient pixel: strict
    // against the backward sample, non-strict against the forward one.
    auto mag_bilin = [&](double x, double y) {
        const int x0 = static_cast<int>(std::floor(x));
        const int y0 = static_cast<int>(std::floor(y));
        const double fx = x - x0, fy = y - y0;
        const double m00 = mg(x0, y0), m10 = mg(x0 + 1, y0);
        const double m01 = mg(x0, y0 + 1), m11 = mg(x0 + 1, y0 + 1);
        const double top = m00 + fx * (m10 - m00);
        const double bot = m01 + fx * (m11 - m01);
        return top + fy * (bot - top);
    };
    std::vector<std::uint8_t> nms(img.pixel_count(), 0);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * w + x;
            const double m = mag[i];
            if (m == 0.0) continue;
            const double dx = gx[i] / m, dy = gy[i] / m;
            const double back = mag_bilin(x - dx, y - dy);
            const double fwd = mag_bilin(x + dx, y + dy);
            if (m > back && m >= fwd) nms[i] = 1;
        }

    // Double-threshold hysteresis: grow strong pixels through weak ones.
    const double lo_abs = low * max_mag, hi_abs = high * max_mag;
    EdgeMap map;
    map.w = w;
    map.h = h;
    map.on.assign(img.pixel_count(), 0);
    std::deque<std::pair<int, int>> queue;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * w + x;
            if (nms[i] && mag[i] >= hi_abs) {
                map.on[i] = 1;
                queue.emplace_back(x, y);
            }
        }
    while (!queue.empty()) {
        const auto [x, y] = queue.front();
        queue.pop_front();
        for (int k = 0; k < 8; ++k) {
            const int cx = x + kNx[k], cy = y + kNy[k];
            if (cx < 0 || cx >= w || cy < 0 || cy >= h) continue;
            const std::size_t i = static_cast<std::size_t>(cy) * w + cx;
            if (map.on[i] || !nms[i] || mag[i] < lo_abs) continue;
            map.on[i] = 1;
            queue.emplace_back(cx, cy);
        }
    }

    thin_edges(map);
    return link_chains(map);
}

// ------------------------------------------------------------- pca thin --

ThinnedChains pca_thin(const std::vector<std::vector<Point2>>& chains, int window,
                       double dense_spacing, double sparse_spacing,
                       double anisotropy_threshold) {
    if (window < 3 || window % 2 == 0)
        throw InputError("pca_thin: window must be odd and >= 3");
    if (!(dense_spacing > 0.0 && dense_spacing < sparse_spacing))
        throw InputError("pca_thin: need 0 < dense_spacing < sparse_spacing");

    ThinnedChains out;
    const int halfw = window / 2;

    for (const auto& chain : chains) {
        const int m = static_cast<int>(chain.size());
        if (m < 2) continue;

        // Curvature proxy per point: eigenvalue ratio of the covariance of
        // the chain points in the surrounding window.
        std::vector<double> mu(m, 0.0);
        for (int i = 0; i < m; ++i) {
            const int a = std::max(0, i - halfw);
            const int b = std::min(m - 1, i + halfw);
            const int k = b - a + 1;
            double mx = 0.0, my = 0.0;
            for (int j = a; j <= b; ++j) {
                mx += chain[j].x;
                my += chain[j].y;
            }
            mx /= k;
            my /= k;
            double c11 = 0.0, c12 = 0.0, c22 = 0.0;
            for (int j = a; j <= b; ++j) {
                const double dx = chain[j].x - mx, dy = chain[j].y - my;
                c11 += dx * dx;
                c12 += dx * dy;
                c22 += dy * dy;
            }
            const SymEigen2 eg = sym_eigen2(c11 / k, c12 / k, c22 / k);
            mu[i] = eg.lambda1 > 0.0 ? std::max(0.0, eg.lambda2) / eg.lambda1 : 0.0;
        }
        auto spacing_at = [&](int i) {
            const double t = std::min(1.0, mu[i] / anisotropy_threshold);
            return sparse_spacing + t * (dense_spacing - sparse_spacing);
        };

        std::vector<int> kept;
        out.points.push_back(chain[0]);
        kept.push_back(static_cast<int>(out.points.size()) - 1);
        double acc = 0.0;
        for (int i = 1; i < m; ++i) {
            acc += dist(chain[i - 1], chain[i]);
            if (acc >= spacing_at(i) || i == m - 1) {
                out.points.push_back(chain[i]);
                kept.push_back(static_cast<int>(out.points.size()) - 1);
                acc = 0.0;
            }
        }
        out.chains.push_back(std::move(kept));
    }
    return out;
}

// ------------------------------------------------------------ halftone --

std::vector<Point2> halftone_points(const GrayImage& img, double target_fraction,
                                    double sigma) {
    if (!(target_fraction > 0.0 && target_fraction < 1.0))
        throw InputError("halftone: target_fraction must be in (0, 1)");
    const int w = img.width, h = img.height;
    if (w < 3 || h < 3) return {};

    std::vector<double> smooth(img.pixel_count());
    gaussian_smooth(img.data.data(), smooth.data(), w, h, sigma);
    auto sm = [&](int x, int y) {
        x = std::clamp(x, 0, w - 1);
        y = std::clamp(y, 0, h - 1);
        return smooth[static_cast<std::size_t>(y) * w + x];
    };

    // Density map = |Laplacian| of the smoothed image.
    std::vector<double> density(img.pixel_count());
    double dmax = 0.0;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const double lap = sm(x + 1, y) + sm(x - 1, y) + sm(x, y + 1) +
                               sm(x, y - 1) - 4.0 * sm(x, y);
            const std::size_t i = static_cast<std::size_t>(y) * w + x;
            density[i] = std::fabs(lap);
            dmax = std::max(dmax, density[i]);
        }
    if (dmax <= 1e-8) return {};  // flat image up to border-smoothing noise
    for (double& d : density) d /= dmax;

    // Scale so the total mass hits the point budget; per-pixel densities
    // saturate at 1, so re-scale a few times to compensate the clamp loss.
    const double budget = target_fraction * static_cast<double>(img.pixel_count());
    double base = 0.0;
    for (double d : density) base += d;
    if (base == 0.0) return {};
    double scale = budget / base;
    std::vector<double> d(img.pixel_count());
    for (int it = 0; it < 12; ++it) {
        double total = 0.0;
        for (std::size_t i = 0; i < density.size(); ++i) {
            d[i] = std::min(1.0, scale * density[i]);
            total += d[i];
        }
        if (std::fabs(total - budget) <= 0.005 * budget || total >= density.size())
            break;
        scale *= budget / total;
    }

    // Serpentine Floyd-Steinberg on the density map.
    std::vector<Point2> points;
    for (int y = 0; y < h; ++y) {
        const bool l2r = (y % 2) == 0;
        const int step = l2r ? 1 : -1;
        for (int x = l2r ? 0 : w - 1; x >= 0 && x < w; x += step) {
            const std::size_t i = static_cast<std::size_t>(y) * w + x;
            const double v = d[i];
            const int q = v >= 0.5 ? 1 : 0;
            if (q) points.push_back({static_cast<double>(x), static_cast<double>(y)});
            const double err = v - q;
            auto spread = [&](int dx, int dy, double frac) {
                const int cx = x + (l2r ? dx : -dx), cy = y + dy;
                if (cx < 0 || cx >= w || cy < 0 || cy >= h) return;
                d[static_cast<std::size_t>(cy) * w + cx] += err * frac;
            };
            spread(1, 0, 7.0 / 16.0);
            spread(-1, 1, 3.0 / 16.0);
            spread(0, 1, 5.0 / 16.0);
            spread(1, 1, 1.0 / 16.0);
        }
    }
    return points;
}

// ------------------------------------------------------------- uniform --

namespace {

std::vector<double> grid_lines(int extent, double spacing) {
    std::vector<double> lines;
    for (double v = 0.0; v <= extent - 1; v += spacing) lines.push_back(v);
    if (lines.empty() || lines.back() < extent - 1)
        lines.push_back(static_cast<double>(extent - 1));
    return lines;
}

}  // namespace

std::vector<Point2> uniform_points(const GrayImage& img,
                                   const std::vector<Point2>& existing,
                                   double spacing) {
    if (!(spacing > 0.0)) throw InputError("uniform: spacing must be > 0");
    const int w = img.width, h = img.height;
    if (w <= 0 || h <= 0) return {};

    const double s2 = spacing * spacing;
    const double half2 = (spacing / 2.0) * (spacing / 2.0);
    auto clear_of = [](const std::vector<Point2>& pts, const Point2& p, double lim2) {
        for (const auto& q : pts)
            if (dist2(p, q) < lim2) return false;
        return true;
    };

    std::vector<Point2> out;
    for (double gy : grid_lines(h, spacing))
        for (double gx : grid_lines(w, spacing)) {
            const Point2 p{gx, gy};
            if (!clear_of(existing, p, s2)) continue;
            if (!clear_of(out, p, half2)) continue;  // border line may sit close
            out.push_back(p);
        }

    const Point2 corners[4] = {{0.0, 0.0},
                               {static_cast<double>(w - 1), 0.0},
                               {0.0, static_cast<double>(h - 1)},
                               {static_cast<double>(w - 1), static_cast<double>(h - 1)}};
    for (const Point2& c : corners) {
        if (clear_of(existing, c, 0.25) && clear_of(out, c, 0.25)) out.push_back(c);
    }
    return out;
}

// --------------------------------------------------------- composition --

namespace {

// Uniform grid hash for min-separation queries.
class SeparationIndex {
  public:
    SeparationIndex(int w, int h, double min_sep)
        : cell_(min_sep), nx_(static_cast<int>(w / cell_) + 2),
          ny_(static_cast<int>(h / cell_) + 2), cells_(static_cast<std::size_t>(nx_) * ny_) {}

    bool blocked(const Point2& p, const std::vector<Point2>& pts) const {
        const double lim2 = cell_ * cell_;
        const int cx = static_cast<int>(p.x / cell_), cy = static_cast<int>(p.y / cell_);
        for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx) {
                const int gx = cx + dx, gy = cy + dy;
                if (gx < 0 || gx >= nx_ || gy < 0 || gy >= ny_) continue;
                for (int i : cells_[static_cast<std::size_t>(gy) * nx_ + gx])
                    if (dist2(p, pts[i]) < lim2) return true;
            }
        return false;
    }

    void insert(const Point2& p, int index) {
        const int cx = static_cast<int>(p.x / cell_), cy = static_cast<int>(p.y / cell_);
        cells_[static_cast<std::size_t>(cy) * nx_ + cx].push_back(index);
    }

  private:
    double cell_;
    int nx_, ny_;
    std::vector<std::vector<int>> cells_;
};

// The mesh must cover the full image rectangle, so the four corners always
// win: any other sample crowding a corner inside min_sep is evicted (and
// spliced out of its chain), then missing corners are appended.
void ensure_corner_coverage(SamplePointSet& s, const GrayImage& img, double min_sep) {
    const double wm1 = img.width - 1.0, hm1 = img.height - 1.0;
    const Point2 corners[4] = {{0.0, 0.0}, {wm1, 0.0}, {0.0, hm1}, {wm1, hm1}};
    const double lim2 = min_sep * min_sep;

    auto is_corner = [&](const Point2& p) {
        for (const Point2& c : corners)
            if (p == c) return true;
        return false;
    };
    std::vector<char> evict(s.points.size(), 0);
    bool missing[4];
    for (int c = 0; c < 4; ++c) {
        missing[c] = true;
        for (std::size_t i = 0; i < s.points.size(); ++i) {
            if (s.points[i] == corners[c])
                missing[c] = false;
            else if (!is_corner(s.points[i]) && dist2(s.points[i], corners[c]) < lim2)
                evict[i] = 1;
        }
    }

    bool any_evicted = false;
    for (char e : evict) any_evicted |= (e != 0);
    if (any_evicted) {
        std::vector<int> remap(s.points.size(), -1);
        SamplePointSet packed;
        for (std::size_t i = 0; i < s.points.size(); ++i) {
            if (evict[i]) continue;
            remap[i] = static_cast<int>(packed.points.size());
            packed.points.push_back(s.points[i]);
            packed.tags.push_back(s.tags[i]);
        }
        for (const auto& chain : s.edge_chains) {
            std::vector<int> mapped;
            for (int idx : chain)
                if (remap[idx] >= 0) mapped.push_back(remap[idx]);
            if (mapped.size() >= 2) packed.edge_chains.push_back(std::move(mapped));
        }
        s = std::move(packed);
    }
    for (int c = 0; c < 4; ++c) {
        if (!missing[c]) continue;
        s.points.push_back(corners[c]);
        s.tags.push_back(SampleTag::uniform);
    }
}

}  // namespace

SamplePointSet build_samples(const GrayImage& img, const SamplingConfig& cfg) {
    cfg.validate();
    if (img.width < 2 || img.height < 2)
        throw InputError("build_samples: image too small to mesh");

    SamplePointSet out;
    SeparationIndex index(img.width, img.height, cfg.min_separation);
    auto accept = [&](const Point2& p, SampleTag tag) -> int {
        if (index.blocked(p, out.points)) return -1;
        out.points.push_back(p);
        out.tags.push_back(tag);
        index.insert(p, static_cast<int>(out.points.size()) - 1);
        return static_cast<int>(out.points.size()) - 1;
    };

    const auto raw_chains =
        canny_edges(img, cfg.canny_low, cfg.canny_high, cfg.canny_sigma);
    const ThinnedChains thinned =
        pca_thin(raw_chains, cfg.pca_window, cfg.pca_dense_spacing,
                 cfg.pca_sparse_spacing, cfg.pca_anisotropy_threshold);
    for (const auto& chain : thinned.chains) {
        std::vector<int> mapped;
        for (int pi : chain) {
            const int id = accept(thinned.points[pi], SampleTag::canny);
            if (id >= 0) mapped.push_back(id);  // dropped points splice the chain
        }
        if (mapped.size() >= 2) out.edge_chains.push_back(std::move(mapped));
    }

    for (const Point2& p : halftone_points(img, cfg.halftone_fraction))
        accept(p, SampleTag::halftone);

    for (const Point2& p : uniform_points(img, out.points, cfg.uniform_spacing))
        accept(p, SampleTag::uniform);

    ensure_corner_coverage(out, img, cfg.min_separation);
    return out;
}

}  // namespace meshpix
