#include "bbfs/operators.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

namespace bbfs {

namespace {

double ball_measure(int n, double r) {
    return n == 1 ? 2.0 * r : std::numbers::pi * r * r;
}

std::vector<double> radius_ladder(const Grid& g, bool exhaustive) {
    const double h = g.h();
    const double diam = g.box().diameter();
    std::vector<double> radii;
    radii.push_back(0.5 * h);  // degenerate single-cell candidate
    if (exhaustive) {
        for (double r = h; r < diam + 0.5 * h; r += 0.5 * h) radii.push_back(r);
    } else {
        for (double r = h; r < diam; r *= 2.0) radii.push_back(r);
        radii.push_back(radii.back() * 2.0);  // cover the box from any center
    }
    return radii;
}

// 1-d clipped integral of |f| over [u, v] with fractional end cells,
// via the prefix array S[i] = sum_{j<i} |f_j| h.
struct Prefix1D {
    const Grid* g;
    std::vector<double> s;

    explicit Prefix1D(const GridFunction& f) : g(&f.grid()) {
        s.resize(static_cast<std::size_t>(f.size()) + 1, 0.0);
        const double h = g->h();
        for (std::int64_t i = 0; i < f.size(); ++i)
            s[static_cast<std::size_t>(i) + 1] =
                s[static_cast<std::size_t>(i)] + std::abs(f[i]) * h;
    }

    double cum(double u) const {  // integral over [a, u]
        const double a = g->box().lo[0];
        const double b = g->box().hi[0];
        const double h = g->h();
        u = std::clamp(u, a, b);
        double t = (u - a) / h;
        auto i = static_cast<std::int64_t>(std::floor(t));
        i = std::clamp<std::int64_t>(i, 0, g->cells(0) - 1);
        double frac = t - static_cast<double>(i);
        double cell = s[static_cast<std::size_t>(i) + 1] - s[static_cast<std::size_t>(i)];
        return s[static_cast<std::size_t>(i)] + frac * cell;
    }

    double over(double u, double v) const { return cum(v) - cum(u); }
};

// 2-d integral of |f| over the Euclidean ball B(c, r) clipped to the box.
double ball_integral_2d(const GridFunction& f, const Point& c, double r) {
    const Grid& g = f.grid();
    const double h = g.h();
    const Box& box = g.box();
    auto ix0 = static_cast<std::int64_t>(std::floor((c[0] - r - box.lo[0]) / h));
    auto ix1 = static_cast<std::int64_t>(std::ceil((c[0] + r - box.lo[0]) / h));
    auto iy0 = static_cast<std::int64_t>(std::floor((c[1] - r - box.lo[1]) / h));
    auto iy1 = static_cast<std::int64_t>(std::ceil((c[1] + r - box.lo[1]) / h));
    ix0 = std::clamp<std::int64_t>(ix0, 0, g.cells(0) - 1);
    ix1 = std::clamp<std::int64_t>(ix1, 0, g.cells(0) - 1);
    iy0 = std::clamp<std::int64_t>(iy0, 0, g.cells(1) - 1);
    iy1 = std::clamp<std::int64_t>(iy1, 0, g.cells(1) - 1);
    const BallRegion ball{c, r, false};
    double acc = 0.0;
    const double cv = h * h;
    for (std::int64_t iy = iy0; iy <= iy1; ++iy) {
        for (std::int64_t ix = ix0; ix <= ix1; ++ix) {
            std::int64_t i = g.flat(ix, iy);
            double frac = cell_fraction(g, i, Region{ball});
            if (frac > 0.0) acc += std::abs(f[i]) * frac * cv;
        }
    }
    return acc;
}

}  // namespace

GridFunction maximal(const GridFunction& f, const MaximalOptions& opts) {
    const Grid& g = f.grid();
    const int n = g.dim();
    const std::vector<double> radii = radius_ladder(g, opts.exhaustive_radii);
    std::vector<double> out(static_cast<std::size_t>(f.size()), 0.0);

    if (n == 1) {
        Prefix1D pre(f);
        for (std::int64_t i = 0; i < f.size(); ++i) {
            const double x = g.center(i)[0];
            double best = 0.0;
            for (double r : radii) {
                double integral = pre.over(x - r, x + r);
                double denom = opts.normalization == MaxNormalization::paper
                                   ? r
                                   : ball_measure(1, r);
                best = std::max(best, integral / denom);
            }
            out[static_cast<std::size_t>(i)] = best;
        }
    } else {
        for (std::int64_t i = 0; i < f.size(); ++i) {
            const Point x = g.center(i);
            double best = 0.0;
            for (double r : radii) {
                double integral = ball_integral_2d(f, x, r);
                double denom = opts.normalization == MaxNormalization::paper
                                   ? r * r
                                   : ball_measure(2, r);
                best = std::max(best, integral / denom);
            }
            out[static_cast<std::size_t>(i)] = best;
        }
    }
    return GridFunction(g, std::move(out));
}

GridFunction iterate_maximal(const GridFunction& f, int l, const MaximalOptions& opts) {
    require(l >= 0 && l <= 128, "iterate_maximal: l out of range");
    GridFunction cur = f.map([](double v) { return std::abs(v); });
    for (int i = 0; i < l; ++i) cur = maximal(cur, opts);
    return cur;
}

GridFunction riesz(const GridFunction& f, int axis, double epsilon) {
    const Grid& g = f.grid();
    const int n = g.dim();
    require(axis >= 0 && axis < n, "riesz: axis out of range");
    require(epsilon >= g.h() * (1.0 - 1e-12), "riesz: epsilon must be >= h");
    const double cv = g.cell_volume();
    std::vector<double> out(static_cast<std::size_t>(f.size()), 0.0);
    const std::int64_t count = f.size();
    if (n == 1) {
        std::vector<double> xs(static_cast<std::size_t>(count));
        for (std::int64_t i = 0; i < count; ++i) xs[static_cast<std::size_t>(i)] = g.center(i)[0];
        for (std::int64_t i = 0; i < count; ++i) {
            const double x = xs[static_cast<std::size_t>(i)];
            double acc = 0.0;
            for (std::int64_t j = 0; j < count; ++j) {
                double d = x - xs[static_cast<std::size_t>(j)];
                if (std::abs(d) > epsilon) acc += f[j] / d;
            }
            out[static_cast<std::size_t>(i)] = acc * cv;
        }
    } else {
        for (std::int64_t i = 0; i < count; ++i) {
            const Point x = g.center(i);
            double acc = 0.0;
            for (std::int64_t j = 0; j < count; ++j) {
                const Point y = g.center(j);
                double dx = x[0] - y[0], dy = x[1] - y[1];
                double dist = std::sqrt(dx * dx + dy * dy);
                if (dist > epsilon) {
                    double num = axis == 0 ? dx : dy;
                    acc += num / (dist * dist * dist) * f[j];
                }
            }
            out[static_cast<std::size_t>(i)] = acc * cv;
        }
    }
    return GridFunction(g, std::move(out));
}

GridFunction riesz(const GridFunction& f, int axis) {
    return riesz(f, axis, f.grid().h());
}

// ---- spectral Bessel potential ---------------------------------------------

namespace {

using cd = std::complex<double>;

bool is_pow2(std::size_t m) { return m != 0 && (m & (m - 1)) == 0; }

// In-place iterative radix-2 FFT; inverse handled by conjugation outside.
void fft_pow2(std::vector<cd>& a) {
    const std::size_t m = a.size();
    for (std::size_t i = 1, j = 0; i < m; ++i) {
        std::size_t bit = m >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= m; len <<= 1) {
        double ang = -2.0 * std::numbers::pi / static_cast<double>(len);
        cd wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < m; i += len) {
            cd w(1.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                cd u = a[i + k];
                cd v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

void dft_naive(std::vector<cd>& a) {
    const std::size_t m = a.size();
    std::vector<cd> out(m, cd(0.0));
    for (std::size_t k = 0; k < m; ++k) {
        for (std::size_t j = 0; j < m; ++j) {
            double ang = -2.0 * std::numbers::pi * static_cast<double>(k * j % m) /
                         static_cast<double>(m);
            out[k] += a[j] * cd(std::cos(ang), std::sin(ang));
        }
    }
    a = std::move(out);
}

void dft(std::vector<cd>& a, bool inverse) {
    if (inverse)
        for (auto& z : a) z = std::conj(z);
    if (is_pow2(a.size()))
        fft_pow2(a);
    else
        dft_naive(a);
    if (inverse) {
        const double inv = 1.0 / static_cast<double>(a.size());
        for (auto& z : a) z = std::conj(z) * inv;
    }
}

// Map DFT index to the signed frequency index k-tilde.
double freq_index(std::size_t k, std::size_t m) {
    return k <= m / 2 ? static_cast<double>(k)
                      : static_cast<double>(k) - static_cast<double>(m);
}

}  // namespace

GridFunction bessel_potential(const GridFunction& f, double s, BesselDirection dir) {
    require(s >= 0.0, "bessel_potential: s must be >= 0");
    const Grid& g = f.grid();
    const int n = g.dim();
    const auto mx = static_cast<std::size_t>(g.cells(0));
    const auto my = static_cast<std::size_t>(n == 2 ? g.cells(1) : 1);
    const double expo = dir == BesselDirection::forward ? 0.5 * s : -0.5 * s;

    std::vector<cd> data(mx * my);
    for (std::size_t i = 0; i < data.size(); ++i)
        data[i] = cd(f[static_cast<std::int64_t>(i)], 0.0);

    // row transforms
    for (std::size_t y = 0; y < my; ++y) {
        std::vector<cd> row(mx);
        for (std::size_t x = 0; x < mx; ++x) row[x] = data[y * mx + x];
        dft(row, false);
        for (std::size_t x = 0; x < mx; ++x) data[y * mx + x] = row[x];
    }
    if (n == 2) {
        for (std::size_t x = 0; x < mx; ++x) {
            std::vector<cd> col(my);
            for (std::size_t y = 0; y < my; ++y) col[y] = data[y * mx + x];
            dft(col, false);
            for (std::size_t y = 0; y < my; ++y) data[y * mx + x] = col[y];
        }
    }

    const double wx = 2.0 * std::numbers::pi / g.box().side(0);
    const double wy = n == 2 ? 2.0 * std::numbers::pi / g.box().side(1) : 0.0;
    for (std::size_t y = 0; y < my; ++y) {
        for (std::size_t x = 0; x < mx; ++x) {
            double xi2 = wx * wx * freq_index(x, mx) * freq_index(x, mx);
            if (n == 2) xi2 += wy * wy * freq_index(y, my) * freq_index(y, my);
            data[y * mx + x] *= std::pow(1.0 + xi2, expo);
        }
    }

    for (std::size_t y = 0; y < my; ++y) {
        std::vector<cd> row(mx);
        for (std::size_t x = 0; x < mx; ++x) row[x] = data[y * mx + x];
        dft(row, true);
        for (std::size_t x = 0; x < mx; ++x) data[y * mx + x] = row[x];
    }
    if (n == 2) {
        for (std::size_t x = 0; x < mx; ++x) {
            std::vector<cd> col(my);
            for (std::size_t y = 0; y < my; ++y) col[y] = data[y * mx + x];
            dft(col, true);
            for (std::size_t y = 0; y < my; ++y) data[y * mx + x] = col[y];
        }
    }

    std::vector<double> out(mx * my);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = data[i].real();
    return GridFunction(g, std::move(out));
}

}  // namespace bbfs
