#include "bbfs/wavelets.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

namespace bbfs {

namespace {

std::vector<double> scaling_filter(WaveletFamily f) {
    switch (f) {
        case WaveletFamily::haar:
            return {0.7071067811865475244008443621048490392848, 0.7071067811865475244008443621048490392848};
        case WaveletFamily::db2:
            return {0.4829629131445341433748715998644486838169,
                    0.8365163037378079055752937809168732034593,
                    0.2241438680420133810259727622404003554678,
                    -0.1294095225512603811744494188120241641745};
        case WaveletFamily::db3:
            return {0.3326705529500826159985115891390056300129,
                    0.8068915093110925764944936040887134905192,
                    0.4598775021184915700951519421476167208081,
                    -0.1350110200102545886963899066993744805622,
                    -0.0854412738820267855932458312419070307370,
                    0.0352262918857095366027408157905869512861};
        case WaveletFamily::db4:
            return {0.2303778133088965008632911830440708500016,
                    0.7148465705529156470899219552739926037076,
                    0.6308807679298589078817163383006152202032,
                    -0.0279837694168598542452089639655017183622,
                    -0.1870348117190930840795706727890814195845,
                    0.0308413818355607053654477913658188331039,
                    0.0328830116668851997459566791366693843310,
                    -0.0105974017850690321180224194702562649245};
    }
    return {};
}

double holder_exponent(WaveletFamily f) {
    switch (f) {
        case WaveletFamily::haar: return 0.0;
        case WaveletFamily::db2: return 0.55;
        case WaveletFamily::db3: return 1.08;
        case WaveletFamily::db4: return 1.61;
    }
    return 0.0;
}

void validate_filter(const std::vector<double>& h) {
    double s = 0.0;
    for (double v : h) s += v;
    require(std::abs(s - std::numbers::sqrt2) < 1e-10,
            "wavelet filter: sum must be sqrt(2)");
    const auto n = static_cast<std::int64_t>(h.size());
    for (std::int64_t m = 0; 2 * m < n; ++m) {
        double acc = 0.0;
        for (std::int64_t k = 0; k + 2 * m < n; ++k) acc += h[static_cast<std::size_t>(k)] * h[static_cast<std::size_t>(k + 2 * m)];
        double target = m == 0 ? 1.0 : 0.0;
        require(std::abs(acc - target) < 1e-10,
                "wavelet filter: quadrature-mirror orthonormality failed");
    }
}

}  // namespace

std::string to_string(WaveletFamily f) {
    switch (f) {
        case WaveletFamily::haar: return "haar";
        case WaveletFamily::db2: return "db2";
        case WaveletFamily::db3: return "db3";
        case WaveletFamily::db4: return "db4";
    }
    return "?";
}

WaveletSystem WaveletSystem::build(WaveletFamily family, int n, int base_level,
                                   int cascade_level) {
    require(n == 1 || n == 2, "wavelet system dimension must be 1 or 2");
    require(cascade_level >= 1 && cascade_level <= 24, "cascade level out of range");
    WaveletSystem sys;
    sys.family_ = family;
    sys.n_ = n;
    sys.J_ = base_level;
    sys.cascade_ = cascade_level;
    sys.h_ = scaling_filter(family);
    sys.N_ = static_cast<int>(sys.h_.size()) / 2;
    sys.K_ = holder_exponent(family);
    validate_filter(sys.h_);

    const int taps = static_cast<int>(sys.h_.size());  // 2N
    const int supp = taps - 1;                         // 2N - 1
    const std::int64_t res = std::int64_t(1) << cascade_level;
    const std::int64_t len = supp * res;  // samples at i = 0..len

    // Exact dyadic samples of phi: fixed-point solve at the integers, then
    // refinement sweeps down to resolution 2^-cascade.
    std::vector<double> phi(static_cast<std::size_t>(len + 1), 0.0);
    if (supp == 1) {
        for (std::int64_t i = 0; i < res; ++i) phi[static_cast<std::size_t>(i)] = 1.0;  // Haar
    } else {
        const int m = supp - 1;  // interior integers 1..2N-2
        std::vector<double> v(static_cast<std::size_t>(m), 1.0 / m), next(static_cast<std::size_t>(m));
        auto val = [&](std::int64_t idx) {
            return idx >= 1 && idx <= m ? v[static_cast<std::size_t>(idx - 1)] : 0.0;
        };
        for (int it = 0; it < 600; ++it) {
            for (std::int64_t row = 1; row <= m; ++row) {
                double acc = 0.0;
                for (int k = 0; k < taps; ++k)
                    acc += sys.h_[static_cast<std::size_t>(k)] * val(2 * row - k);
                next[static_cast<std::size_t>(row - 1)] = std::numbers::sqrt2 * acc;
            }
            double total = 0.0;
            for (double x : next) total += x;
            require(total != 0.0, "cascade: integer eigen-solve degenerated");
            for (auto& x : next) x /= total;  // partition of unity at integers
            double diff = 0.0;
            for (std::int64_t i = 0; i < m; ++i)
                diff = std::max(diff, std::abs(next[static_cast<std::size_t>(i)] - v[static_cast<std::size_t>(i)]));
            v.swap(next);
            if (diff < 1e-15 && it > 4) break;
        }
        for (std::int64_t i = 1; i <= m; ++i)
            phi[static_cast<std::size_t>(i * res)] = v[static_cast<std::size_t>(i - 1)];
        // refinement sweeps: fill odd multiples of 2^-r from resolution r-1
        for (int r = 1; r <= cascade_level; ++r) {
            const std::int64_t stride = res >> r;  // index step of resolution r
            for (std::int64_t i = 1; i * stride <= len; i += 2) {
                const std::int64_t idx = i * stride;
                double acc = 0.0;
                for (int k = 0; k < taps; ++k) {
                    std::int64_t src = 2 * idx - static_cast<std::int64_t>(k) * res;
                    if (src >= 0 && src <= len) acc += sys.h_[static_cast<std::size_t>(k)] * phi[static_cast<std::size_t>(src)];
                }
                phi[static_cast<std::size_t>(idx)] = std::numbers::sqrt2 * acc;
            }
        }
    }

    // refinement-equation residual in sup norm
    double residual = 0.0;
    for (std::int64_t i = 0; i <= len; ++i) {
        double acc = 0.0;
        for (int k = 0; k < taps; ++k) {
            std::int64_t src = 2 * i - static_cast<std::int64_t>(k) * res;
            if (src >= 0 && src <= len) acc += sys.h_[static_cast<std::size_t>(k)] * phi[static_cast<std::size_t>(src)];
        }
        residual = std::max(residual, std::abs(phi[static_cast<std::size_t>(i)] - std::numbers::sqrt2 * acc));
    }
    if (supp > 1 && residual > 1e-8)
        throw NumericError("cascade: refinement residual did not converge");
    sys.residual_ = residual;

    // psi from the mirror filter g_k = (-1)^k h_{2N-1-k}
    std::vector<double> psi(static_cast<std::size_t>(len + 1), 0.0);
    for (std::int64_t i = 0; i <= len; ++i) {
        double acc = 0.0;
        for (int k = 0; k < taps; ++k) {
            double gk = (k % 2 == 0 ? 1.0 : -1.0) * sys.h_[static_cast<std::size_t>(taps - 1 - k)];
            std::int64_t src = 2 * i - static_cast<std::int64_t>(k) * res;
            if (src >= 0 && src <= len) acc += gk * phi[static_cast<std::size_t>(src)];
        }
        psi[static_cast<std::size_t>(i)] = std::numbers::sqrt2 * acc;
    }

    // Prefix integrals. Haar is a left-continuous step function, so the
    // left-point rule is exact; the continuous Daubechies generators vanish
    // at both support endpoints and the trapezoid rule gains an order.
    const double dt = std::ldexp(1.0, -cascade_level);
    const bool trapezoid = family != WaveletFamily::haar;
    sys.phi_int_.assign(static_cast<std::size_t>(len + 2), 0.0);
    sys.psi_int_.assign(static_cast<std::size_t>(len + 2), 0.0);
    for (std::int64_t i = 0; i <= len; ++i) {
        double fw = trapezoid && i < len
                        ? 0.5 * (phi[static_cast<std::size_t>(i)] + phi[static_cast<std::size_t>(i + 1)])
                        : phi[static_cast<std::size_t>(i)];
        double gw = trapezoid && i < len
                        ? 0.5 * (psi[static_cast<std::size_t>(i)] + psi[static_cast<std::size_t>(i + 1)])
                        : psi[static_cast<std::size_t>(i)];
        sys.phi_int_[static_cast<std::size_t>(i + 1)] =
            sys.phi_int_[static_cast<std::size_t>(i)] + fw * dt;
        sys.psi_int_[static_cast<std::size_t>(i + 1)] =
            sys.psi_int_[static_cast<std::size_t>(i)] + gw * dt;
    }
    return sys;
}

namespace {
std::int64_t dyadic_index(double t, int cascade, std::int64_t max_idx) {
    double scaled = std::ldexp(t, cascade);
    auto idx = static_cast<std::int64_t>(std::llround(scaled));
    // t must be dyadic at the cascade resolution
    require(std::abs(scaled - static_cast<double>(idx)) < 1e-6,
            "wavelet evaluation point not on the cascade grid");
    return std::clamp<std::int64_t>(idx, 0, max_idx);
}
}  // namespace

double WaveletSystem::phi_integral(double t) const {
    auto max_idx = static_cast<std::int64_t>(phi_int_.size()) - 1;
    return phi_int_[static_cast<std::size_t>(dyadic_index(t, cascade_, max_idx))];
}

double WaveletSystem::psi_integral(double t) const {
    auto max_idx = static_cast<std::int64_t>(psi_int_.size()) - 1;
    return psi_int_[static_cast<std::size_t>(dyadic_index(t, cascade_, max_idx))];
}

double WaveletSystem::generator_cell_average(bool use_psi, int j, std::int64_t k,
                                             double u0, double u1) const {
    // 2^{j/2} F(2^j u - k) averaged over [u0, u1]:
    //   2^{j/2} 2^{-j} (I(2^j u1 - k) - I(2^j u0 - k)) / (u1 - u0)
    const double scale = std::ldexp(1.0, j);
    double t0 = scale * u0 - static_cast<double>(k);
    double t1 = scale * u1 - static_cast<double>(k);
    double integral = use_psi ? psi_integral(t1) - psi_integral(t0)
                              : phi_integral(t1) - phi_integral(t0);
    return std::pow(2.0, 0.5 * j) * integral / (scale * (u1 - u0));
}

Box WaveletSystem::cube(int j, std::array<std::int64_t, 2> k) const {
    Box b;
    b.n = n_;
    const double s = std::ldexp(1.0, -j);
    for (int a = 0; a < n_; ++a) {
        b.lo[a] = s * static_cast<double>(k[a]);
        b.hi[a] = s * static_cast<double>(k[a] + 1);
    }
    return b;
}

Box WaveletSystem::cube_star(int j, std::array<std::int64_t, 2> k) const {
    Box b = cube(j, k);
    const double s = std::ldexp(1.0, -j);
    for (int a = 0; a < n_; ++a)
        b.hi[a] = b.lo[a] + s * (2.0 * N_ - 1.0);
    return b;
}

// ---- analysis / synthesis ------------------------------------------------------

namespace {

struct KRange {
    std::int64_t lo = 0, hi = -1;  // inclusive
};

KRange k_range(const Grid& g, int axis, int j, int supp_n) {
    const double scale = std::ldexp(1.0, j);
    const double supp = 2.0 * supp_n - 1.0;
    KRange r;
    r.lo = static_cast<std::int64_t>(std::ceil(scale * g.box().lo[axis] - supp + 1e-12));
    r.hi = static_cast<std::int64_t>(std::floor(scale * g.box().hi[axis] - 1e-12));
    return r;
}

// per-axis table of generator cell averages over the cells meeting the support
struct AxisTable {
    std::int64_t cell0 = 0;  // first cell index
    std::vector<double> avg;
};

AxisTable axis_averages(const WaveletSystem& sys, const Grid& g, int axis, bool use_psi,
                        int j, std::int64_t k) {
    const double s = std::ldexp(1.0, -j);
    const double lo = g.box().lo[axis];
    const double h = g.h();
    double u0 = s * static_cast<double>(k);
    double u1 = s * (static_cast<double>(k) + sys.support_len());
    AxisTable t;
    auto c0 = static_cast<std::int64_t>(std::floor((u0 - lo) / h + 1e-12));
    auto c1 = static_cast<std::int64_t>(std::ceil((u1 - lo) / h - 1e-12)) - 1;
    c0 = std::clamp<std::int64_t>(c0, 0, g.cells(axis) - 1);
    c1 = std::clamp<std::int64_t>(c1, 0, g.cells(axis) - 1);
    t.cell0 = c0;
    t.avg.resize(static_cast<std::size_t>(std::max<std::int64_t>(0, c1 - c0 + 1)));
    for (std::int64_t c = c0; c <= c1; ++c) {
        double a = lo + static_cast<double>(c) * h;
        t.avg[static_cast<std::size_t>(c - c0)] =
            sys.generator_cell_average(use_psi, j, k, a, a + h);
    }
    return t;
}

// detail generator l composed of per-axis (phi/psi) choices
std::array<bool, 2> generator_parts(int n, int l) {
    if (n == 1) return {true, false};          // psi
    switch (l) {
        case 1: return {false, true};          // phi x psi
        case 2: return {true, false};          // psi x phi
        default: return {true, true};          // psi x psi
    }
}

WaveletCoefficients::Layer analyze_layer(const GridFunction& f, const WaveletSystem& sys,
                                         int l, int j) {
    const Grid& g = f.grid();
    const int n = g.dim();
    const auto parts = l == 0 ? std::array<bool, 2>{false, false}
                              : generator_parts(n, l);
    WaveletCoefficients::Layer layer;
    layer.l = l;
    layer.j = j;
    KRange rx = k_range(g, 0, j, sys.support_n());
    KRange ry = n == 2 ? k_range(g, 1, j, sys.support_n()) : KRange{0, 0};
    layer.k0 = {rx.lo, ry.lo};
    layer.dims = {rx.hi - rx.lo + 1, ry.hi - ry.lo + 1};
    layer.values.assign(static_cast<std::size_t>(layer.dims[0] * layer.dims[1]), 0.0);
    const double cv = g.cell_volume();
    for (std::int64_t ky = ry.lo; ky <= ry.hi; ++ky) {
        AxisTable ty;
        if (n == 2) ty = axis_averages(sys, g, 1, parts[1], j, ky);
        for (std::int64_t kx = rx.lo; kx <= rx.hi; ++kx) {
            AxisTable tx = axis_averages(sys, g, 0, parts[0], j, kx);
            double acc = 0.0;
            if (n == 1) {
                for (std::size_t m = 0; m < tx.avg.size(); ++m)
                    acc += f[g.flat(tx.cell0 + static_cast<std::int64_t>(m))] * tx.avg[m] * cv;
            } else {
                for (std::size_t my = 0; my < ty.avg.size(); ++my) {
                    double row = 0.0;
                    std::int64_t cy = ty.cell0 + static_cast<std::int64_t>(my);
                    for (std::size_t mx = 0; mx < tx.avg.size(); ++mx)
                        row += f[g.flat(tx.cell0 + static_cast<std::int64_t>(mx), cy)] * tx.avg[mx];
                    acc += row * ty.avg[my] * cv;
                }
            }
            layer.values[static_cast<std::size_t>((kx - rx.lo) +
                                                  layer.dims[0] * (ky - ry.lo))] = acc;
        }
    }
    return layer;
}

}  // namespace

WaveletCoefficients analyze(const GridFunction& f, const WaveletSystem& sys, int j_max,
                            int margin) {
    const Grid& g = f.grid();
    require(g.dim() == sys.dim(), "analyze: dimension mismatch");
    const int J = sys.base_level();
    require(j_max >= J, "analyze: j_max must be >= base level");
    require(j_max <= g.level() - margin,
            "analyze: j_max too deep for the grid (margin)");
    require(sys.cascade_level() >= g.level() - J,
            "analyze: cascade level too coarse for this grid");

    WaveletCoefficients c;
    c.J = J;
    c.j_max = j_max;
    c.n = g.dim();
    c.grid = g;
    c.scaling = analyze_layer(f, sys, 0, J);
    for (int j = J; j <= j_max; ++j)
        for (int l = 1; l <= sys.generators(); ++l)
            c.details.push_back(analyze_layer(f, sys, l, j));
    return c;
}

double WaveletCoefficients::sum_squares() const {
    auto layer_sum = [](const Layer& l) {
        std::vector<double> sq(l.values.size());
        for (std::size_t i = 0; i < l.values.size(); ++i) sq[i] = l.values[i] * l.values[i];
        return pairwise_sum(sq);
    };
    double acc = layer_sum(scaling);
    for (const auto& d : details) acc += layer_sum(d);
    return acc;
}

std::int64_t WaveletCoefficients::count() const {
    auto n = static_cast<std::int64_t>(scaling.values.size());
    for (const auto& d : details) n += static_cast<std::int64_t>(d.values.size());
    return n;
}

GridFunction square_function_V(const WaveletCoefficients& c, const WaveletSystem& sys) {
    const Grid& g = c.grid;
    const double w = std::pow(2.0, 0.5 * c.J * g.dim());
    std::vector<double> out(static_cast<std::size_t>(g.cell_count()));
    const double scale = std::ldexp(1.0, c.J);
    for (std::int64_t i = 0; i < g.cell_count(); ++i) {
        Point x = g.center(i);
        std::array<std::int64_t, 2> k{0, 0};
        for (int a = 0; a < g.dim(); ++a)
            k[a] = static_cast<std::int64_t>(std::floor(scale * x[a]));
        out[static_cast<std::size_t>(i)] = std::abs(c.scaling.at(k)) * w;
    }
    (void)sys;
    return GridFunction(g, std::move(out));
}

GridFunction square_function_W(const WaveletCoefficients& c, const WaveletSystem& sys,
                               double s) {
    require(s >= 0.0, "square_function_W: s must be >= 0");
    const Grid& g = c.grid;
    std::vector<double> acc(static_cast<std::size_t>(g.cell_count()), 0.0);
    for (const auto& layer : c.details) {
        const double scale = std::ldexp(1.0, layer.j);
        const double w2 = std::pow(2.0, 2.0 * layer.j * s) *
                          std::pow(2.0, static_cast<double>(layer.j * g.dim()));
        for (std::int64_t i = 0; i < g.cell_count(); ++i) {
            Point x = g.center(i);
            std::array<std::int64_t, 2> k{0, 0};
            for (int a = 0; a < g.dim(); ++a)
                k[a] = static_cast<std::int64_t>(std::floor(scale * x[a]));
            double v = layer.at(k);
            acc[static_cast<std::size_t>(i)] += w2 * v * v;
        }
    }
    (void)sys;
    std::vector<double> out(acc.size());
    for (std::size_t i = 0; i < acc.size(); ++i) out[i] = std::sqrt(acc[i]);
    return GridFunction(g, std::move(out));
}

namespace {

void add_layer(GridFunction& out, const WaveletCoefficients::Layer& layer,
               const WaveletSystem& sys) {
    const Grid& g = out.grid();
    const int n = g.dim();
    const auto parts = layer.l == 0 ? std::array<bool, 2>{false, false}
                                    : generator_parts(n, layer.l);
    for (std::int64_t ky = layer.k0[1]; ky < layer.k0[1] + layer.dims[1]; ++ky) {
        AxisTable ty;
        if (n == 2) ty = axis_averages(sys, g, 1, parts[1], layer.j, ky);
        for (std::int64_t kx = layer.k0[0]; kx < layer.k0[0] + layer.dims[0]; ++kx) {
            double coef = layer.at({kx, ky});
            if (coef == 0.0) continue;
            AxisTable tx = axis_averages(sys, g, 0, parts[0], layer.j, kx);
            if (n == 1) {
                for (std::size_t m = 0; m < tx.avg.size(); ++m)
                    out.at(g.flat(tx.cell0 + static_cast<std::int64_t>(m))) += coef * tx.avg[m];
            } else {
                for (std::size_t my = 0; my < ty.avg.size(); ++my) {
                    std::int64_t cy = ty.cell0 + static_cast<std::int64_t>(my);
                    for (std::size_t mx = 0; mx < tx.avg.size(); ++mx)
                        out.at(g.flat(tx.cell0 + static_cast<std::int64_t>(mx), cy)) +=
                            coef * tx.avg[mx] * ty.avg[my];
                }
            }
        }
    }
}

}  // namespace

GridFunction partial_sum(const WaveletCoefficients& c, const WaveletSystem& sys,
                         int j_cut) {
    require(j_cut <= c.j_max, "partial_sum: j_cut beyond analyzed depth");
    GridFunction out = GridFunction::zeros(c.grid);
    add_layer(out, c.scaling, sys);
    for (const auto& d : c.details)
        if (d.j <= j_cut) add_layer(out, d, sys);
    return out;
}

GridFunction wavelet_generator(const WaveletSystem& sys, const Grid& g, int l, int j,
                               std::array<std::int64_t, 2> k) {
    WaveletCoefficients::Layer layer;
    layer.l = l;
    layer.j = j;
    layer.k0 = k;
    layer.dims = {1, 1};
    layer.values = {1.0};
    GridFunction out = GridFunction::zeros(g);
    add_layer(out, layer, sys);
    return out;
}

void write_coefficients_csv(const WaveletCoefficients& c, std::ostream& os) {
    os.precision(17);
    os << (c.n == 1 ? "l,j,k1,value\n" : "l,j,k1,k2,value\n");
    auto dump = [&](const WaveletCoefficients::Layer& layer) {
        for (std::int64_t ky = layer.k0[1]; ky < layer.k0[1] + layer.dims[1]; ++ky) {
            for (std::int64_t kx = layer.k0[0]; kx < layer.k0[0] + layer.dims[0]; ++kx) {
                double v = layer.at({kx, ky});
                if (v == 0.0) continue;
                os << layer.l << "," << layer.j << "," << kx;
                if (c.n == 2) os << "," << ky;
                os << "," << v << "\n";
            }
        }
    };
    dump(c.scaling);
    for (const auto& d : c.details) dump(d);
}

}  // namespace bbfs
