#include "meshpix/tensor.hpp"

#include <cmath>

#include "meshpix/errors.hpp"
#include "meshpix/simd/kernels.hpp"

namespace meshpix {

constexpr double kEigenFloor = 1e-8;  // keeps the ratio defined in flat regions

std::vector<double> gaussian_taps(double sigma, int& radius) {
    if (sigma <= 0.0) {
        radius = 0;
        return {1.0};
    }
    radius = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<double> taps(radius + 1);
    double sum = 0.0;
    for (int j = 0; j <= radius; ++j) {
        taps[j] = std::exp(-0.5 * (j * j) / (sigma * sigma));
        sum += j == 0 ? taps[j] : 2.0 * taps[j];
    }
    for (double& t : taps) t /= sum;
    return taps;
}

void gaussian_smooth(const double* src, double* dst, int w, int h, double sigma) {
    int radius = 0;
    const auto taps = gaussian_taps(sigma, radius);
    if (radius == 0) {
        std::copy(src, src + static_cast<std::size_t>(w) * h, dst);
        return;
    }
    std::vector<double> tmp(static_cast<std::size_t>(w) * h);
    kern::conv_rows(src, tmp.data(), w, h, taps.data(), radius);
    kern::conv_cols(tmp.data(), dst, w, h, taps.data(), radius);
}

GradientField gradient(const GrayImage& img) {
    if (img.width < 2 || img.height < 2)
        throw InputError("gradient requires an image of at least 2x2");
    const int w = img.width, h = img.height;
    GradientField g;
    g.width = w;
    g.height = h;
    g.gx.resize(img.pixel_count());
    g.gy.resize(img.pixel_count());
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * w + x;
            if (x == 0)
                g.gx[i] = img.at(1, y) - img.at(0, y);
            else if (x == w - 1)
                g.gx[i] = img.at(w - 1, y) - img.at(w - 2, y);
            else
                g.gx[i] = 0.5 * (img.at(x + 1, y) - img.at(x - 1, y));
            if (y == 0)
                g.gy[i] = img.at(x, 1) - img.at(x, 0);
            else if (y == h - 1)
                g.gy[i] = img.at(x, h - 1) - img.at(x, h - 2);
            else
                g.gy[i] = 0.5 * (img.at(x, y + 1) - img.at(x, y - 1));
        }
    }
    return g;
}

RawTensor structure_tensor(const GrayImage& img, double sigma) {
    if (sigma < 0.0) throw InputError("structure tensor sigma must be >= 0");
    const GradientField g = gradient(img);
    const int w = img.width, h = img.height;
    RawTensor t;
    t.width = w;
    t.height = h;
    t.s11.resize(img.pixel_count());
    t.s12.resize(img.pixel_count());
    t.s22.resize(img.pixel_count());
    for (std::size_t i = 0; i < img.pixel_count(); ++i) {
        t.s11[i] = g.gx[i] * g.gx[i];
        t.s12[i] = g.gx[i] * g.gy[i];
        t.s22[i] = g.gy[i] * g.gy[i];
    }
    if (sigma > 0.0) {
        std::vector<double> tmp(img.pixel_count());
        for (auto* ch : {&t.s11, &t.s12, &t.s22}) {
            gaussian_smooth(ch->data(), tmp.data(), w, h, sigma);
            ch->swap(tmp);
        }
    }
    return t;
}

SymEigen2 sym_eigen2(double s11, double s12, double s22) {
    SymEigen2 r;
    const double mean = 0.5 * (s11 + s22);
    const double halfdiff = 0.5 * (s11 - s22);
    const double disc = std::hypot(halfdiff, s12);
    r.lambda1 = mean + disc;
    r.lambda2 = mean - disc;
    if (disc == 0.0) return r;  // isotropic; e1 = (1, 0) by convention

    // Eigenvector of lambda1; pick the better-conditioned formula.
    const double v1x = s12, v1y = r.lambda1 - s11;
    const double v2x = r.lambda1 - s22, v2y = s12;
    const double n1 = std::hypot(v1x, v1y), n2 = std::hypot(v2x, v2y);
    if (n1 >= n2 && n1 > 0.0) {
        r.e1x = v1x / n1;
        r.e1y = v1y / n1;
    } else if (n2 > 0.0) {
        r.e1x = v2x / n2;
        r.e1y = v2y / n2;
    }
    return r;
}

Metric2 condition_tensor(double s11, double s12, double s22, double kappa,
                         double tau) {
    const SymEigen2 eg = sym_eigen2(s11, s12, s22);
    const double l1 = eg.lambda1 > 0.0 ? eg.lambda1 : 0.0;
    const double l2 = eg.lambda2 > 0.0 ? eg.lambda2 : 0.0;
    // Directional dominance (eigenvalue ratio) gated by absolute edge
    // strength: lambda1 is the smoothed squared gradient, so tau is in
    // gray-levels-per-pixel. Gentle shading stays near-isotropic; real
    // edges approach the full kappa elongation.
    const double boost =
        kappa * (l1 / (l1 + l2 + kEigenFloor)) * (l1 / (l1 + tau * tau));
    if (boost == 0.0) return identity_metric();  // exact identity, bit-stable

    const double lam1 = 1.0 + boost;  // across-edge penalty, along e1
    const double lam2 = 1.0;
    const double c = eg.e1x, s = eg.e1y;
    return {lam1 * c * c + lam2 * s * s, (lam1 - lam2) * c * s,
            lam1 * s * s + lam2 * c * c};
}

TensorField build_tensor_field(const GrayImage& img, double sigma, double kappa,
                               double tau) {
    if (kappa < 0.0) throw InputError("tensor kappa must be >= 0");
    if (tau < 0.0) throw InputError("tensor tau must be >= 0");
    const RawTensor raw = structure_tensor(img, sigma);
    TensorField f;
    f.width = raw.width;
    f.height = raw.height;
    f.t11.resize(raw.s11.size());
    f.t12.resize(raw.s11.size());
    f.t22.resize(raw.s11.size());
    for (std::size_t i = 0; i < raw.s11.size(); ++i) {
        const Metric2 m =
            condition_tensor(raw.s11[i], raw.s12[i], raw.s22[i], kappa, tau);
        f.t11[i] = m.t11;
        f.t12[i] = m.t12;
        f.t22[i] = m.t22;
    }
    return f;
}

TensorField identity_tensor_field(int width, int height) {
    TensorField f;
    f.width = width;
    f.height = height;
    const std::size_t n = static_cast<std::size_t>(width) * height;
    f.t11.assign(n, 1.0);
    f.t12.assign(n, 0.0);
    f.t22.assign(n, 1.0);
    return f;
}

Metric2 TensorField::at(double x, double y) const {
    if (x < 0.0) x = 0.0;
    if (y < 0.0) y = 0.0;
    if (x > width - 1) x = width - 1;
    if (y > height - 1) y = height - 1;
    const int x0 = static_cast<int>(x);
    const int y0 = static_cast<int>(y);
    if (static_cast<double>(x0) == x && static_cast<double>(y0) == y)
        return at_pixel(x0, y0);

    const int x1 = x0 + 1 < width ? x0 + 1 : x0;
    const int y1 = y0 + 1 < height ? y0 + 1 : y0;
    const double fx = x - x0, fy = y - y0;
    auto lerp2 = [&](const std::vector<double>& ch) {
        const double top = ch[static_cast<std::size_t>(y0) * width + x0] +
                           fx * (ch[static_cast<std::size_t>(y0) * width + x1] -
                                 ch[static_cast<std::size_t>(y0) * width + x0]);
        const double bot = ch[static_cast<std::size_t>(y1) * width + x0] +
                           fx * (ch[static_cast<std::size_t>(y1) * width + x1] -
                                 ch[static_cast<std::size_t>(y1) * width + x0]);
        return top + fy * (bot - top);
    };
    return {lerp2(t11), lerp2(t12), lerp2(t22)};
}

}  // namespace meshpix
