#include "bbfs/weights.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bbfs/spaces.hpp"

namespace bbfs {

// ---- WeightSpec -------------------------------------------------------------

WeightSpec WeightSpec::constant(double c) {
    WeightSpec s;
    s.kind_ = Kind::constant;
    s.a_ = c;
    return s;
}

WeightSpec WeightSpec::power(double alpha) {
    WeightSpec s;
    s.kind_ = Kind::power;
    s.a_ = alpha;
    return s;
}

WeightSpec WeightSpec::capped_power(double alpha) {
    WeightSpec s;
    s.kind_ = Kind::capped_power;
    s.a_ = alpha;
    return s;
}

WeightSpec WeightSpec::piecewise(std::vector<std::pair<Box, double>> pieces,
                                 double fallback) {
    WeightSpec s;
    s.kind_ = Kind::piecewise;
    s.pieces_ = std::move(pieces);
    s.a_ = fallback;
    return s;
}

WeightSpec WeightSpec::custom(Expression e) {
    WeightSpec s;
    s.kind_ = Kind::custom;
    s.expr_ = std::move(e);
    return s;
}

WeightSpec WeightSpec::power_of(WeightSpec base, double expo) {
    WeightSpec s;
    s.kind_ = Kind::transformed;
    s.base_ = std::make_shared<WeightSpec>(std::move(base));
    s.a_ = expo;
    return s;
}

namespace {
double euclid(const Point& x, int n) {
    return n == 1 ? std::abs(x[0]) : std::sqrt(x[0] * x[0] + x[1] * x[1]);
}
}  // namespace

GridFunction WeightSpec::materialize(const Grid& g) const {
    std::vector<double> v(static_cast<std::size_t>(g.cell_count()));
    for (std::int64_t i = 0; i < g.cell_count(); ++i) {
        const Point x = g.center(i);
        double val = 0.0;
        switch (kind_) {
            case Kind::constant: val = a_; break;
            case Kind::power: val = std::pow(euclid(x, g.dim()), a_); break;
            case Kind::capped_power:
                val = std::pow(std::max(1.0, euclid(x, g.dim())), a_);
                break;
            case Kind::piecewise: {
                val = a_;
                for (const auto& [box, c] : pieces_) {
                    if (box.contains(x)) {
                        val = c;
                        break;
                    }
                }
                break;
            }
            case Kind::custom: val = (*expr_)(x); break;
            case Kind::transformed:
                val = std::pow(base_->materialize(g)[i], a_);
                break;
        }
        if (!(val > 0.0) || !std::isfinite(val))
            throw NumericError("weight is not positive and finite on every cell");
        v[static_cast<std::size_t>(i)] = val;
    }
    return GridFunction(g, std::move(v));
}

std::string WeightSpec::describe() const {
    switch (kind_) {
        case Kind::constant: return "constant(" + std::to_string(a_) + ")";
        case Kind::power: return "power(" + std::to_string(a_) + ")";
        case Kind::capped_power: return "cappedPower(" + std::to_string(a_) + ")";
        case Kind::piecewise: return "piecewise(" + std::to_string(pieces_.size()) + ")";
        case Kind::custom: return "expr(" + expr_->text() + ")";
        case Kind::transformed:
            return base_->describe() + "^" + std::to_string(a_);
    }
    return "?";
}

void validate_weight(const Weight& w) {
    for (std::int64_t i = 0; i < w.size(); ++i)
        if (!(w[i] > 0.0) || !std::isfinite(w[i]))
            throw NumericError("weight is not positive and finite on every cell");
}

// ---- A_p over dyadic cubes ----------------------------------------------------

namespace {

// Summed table over cells for O(1) whole-cell cube sums (n <= 2).
struct SummedTable {
    const Grid* g;
    std::vector<double> s;  // (cx+1)*(cy+1)

    SummedTable(const Grid& grid, const std::function<double(double)>& fn,
                const GridFunction& w)
        : g(&grid) {
        const auto cx = static_cast<std::size_t>(grid.cells(0));
        const auto cy = static_cast<std::size_t>(grid.dim() == 2 ? grid.cells(1) : 1);
        s.assign((cx + 1) * (cy + 1), 0.0);
        for (std::size_t y = 0; y < cy; ++y) {
            double rowsum = 0.0;
            for (std::size_t x = 0; x < cx; ++x) {
                rowsum += fn(w[grid.flat(static_cast<std::int64_t>(x),
                                         static_cast<std::int64_t>(y))]);
                s[(y + 1) * (cx + 1) + (x + 1)] = s[y * (cx + 1) + (x + 1)] + rowsum;
            }
        }
    }

    // sum of fn(w) over cell block [x0,x1) x [y0,y1)
    double block(std::int64_t x0, std::int64_t x1, std::int64_t y0, std::int64_t y1) const {
        const auto cx = static_cast<std::size_t>(g->cells(0));
        auto at = [&](std::int64_t x, std::int64_t y) {
            return s[static_cast<std::size_t>(y) * (cx + 1) + static_cast<std::size_t>(x)];
        };
        return at(x1, y1) - at(x0, y1) - at(x1, y0) + at(x0, y0);
    }
};

template <typename Fn>
void for_each_cube(const Grid& g, const CubeFamilyOptions& opts, Fn&& fn) {
    // Sides h*2^m, m = 0 .. log2(min cells per axis); anchored at box corner,
    // plus half-side shifts while those stay cell-aligned.
    const double h = g.h();
    std::int64_t min_cells = g.cells(0);
    if (g.dim() == 2) min_cells = std::min(min_cells, g.cells(1));
    for (std::int64_t side_cells = 1; side_cells <= min_cells; side_cells *= 2) {
        const double side = static_cast<double>(side_cells) * h;
        if (opts.max_side > 0.0 && side > opts.max_side * (1.0 + 1e-12)) break;
        if (opts.min_side > 0.0 && side < opts.min_side * (1.0 - 1e-12)) continue;
        const std::int64_t half = side_cells / 2;
        const int passes = opts.half_shifts && half > 0 ? 2 : 1;
        for (int pass = 0; pass < passes; ++pass) {
            const std::int64_t off = pass == 0 ? 0 : half;
            if (g.dim() == 1) {
                for (std::int64_t x0 = off; x0 + side_cells <= g.cells(0);
                     x0 += side_cells)
                    fn(x0, std::int64_t(0), side_cells);
            } else {
                for (std::int64_t y0 = off; y0 + side_cells <= g.cells(1);
                     y0 += side_cells)
                    for (std::int64_t x0 = off; x0 + side_cells <= g.cells(0);
                         x0 += side_cells)
                        fn(x0, y0, side_cells);
            }
        }
    }
}

}  // namespace

ApEstimate ap_constant(const Weight& w, double p, const CubeFamilyOptions& opts) {
    require(p > 1.0, "ap_constant: p must be > 1");
    validate_weight(w);
    const Grid& g = w.grid();
    SummedTable sw(g, [](double v) { return v; }, w);
    const double ip = -1.0 / (p - 1.0);
    SummedTable ss(g, [ip](double v) { return std::pow(v, ip); }, w);

    ApEstimate est;
    est.p = p;
    est.value = 0.0;
    for_each_cube(g, opts, [&](std::int64_t x0, std::int64_t y0, std::int64_t sc) {
        const std::int64_t y1 = g.dim() == 2 ? y0 + sc : 1;
        const auto cells = static_cast<double>(g.dim() == 2 ? sc * sc : sc);
        double avg_w = sw.block(x0, x0 + sc, y0, y1) / cells;
        double avg_s = ss.block(x0, x0 + sc, y0, y1) / cells;
        double val = avg_w * std::pow(avg_s, p - 1.0);
        ++est.cube_count;
        if (val > est.value) {
            est.value = val;
            est.witness.lo = {g.box().lo[0] + static_cast<double>(x0) * g.h(),
                              g.dim() == 2
                                  ? g.box().lo[1] + static_cast<double>(y0) * g.h()
                                  : 0.0};
            est.witness.side = static_cast<double>(sc) * g.h();
        }
    });
    require(est.cube_count > 0, "ap_constant: empty cube family");
    return est;
}

double a1_constant_cubes(const Weight& w, const CubeFamilyOptions& opts) {
    validate_weight(w);
    const Grid& g = w.grid();
    SummedTable sw(g, [](double v) { return v; }, w);
    double best = 0.0;
    for_each_cube(g, opts, [&](std::int64_t x0, std::int64_t y0, std::int64_t sc) {
        const std::int64_t y1g = g.dim() == 2 ? y0 + sc : 1;
        const auto cells = static_cast<double>(g.dim() == 2 ? sc * sc : sc);
        double avg_w = sw.block(x0, x0 + sc, y0, y1g) / cells;
        double mn = kInf;
        for (std::int64_t y = y0; y < (g.dim() == 2 ? y0 + sc : y0 + 1); ++y)
            for (std::int64_t x = x0; x < x0 + sc; ++x)
                mn = std::min(mn, w[g.flat(x, g.dim() == 2 ? y : 0)]);
        best = std::max(best, avg_w / mn);
    });
    return best;
}

double a1_constant(const Weight& w, const MaximalOptions& opts) {
    validate_weight(w);
    GridFunction mw = maximal(w, opts);
    double best = 0.0;
    for (std::int64_t i = 0; i < w.size(); ++i) best = std::max(best, mw[i] / w[i]);
    return best;
}

Weight dual_weight(const Weight& w, double p) {
    require(p > 1.0, "dual_weight: p must be > 1");
    validate_weight(w);
    const double e = -1.0 / (p - 1.0);
    return w.map([e](double v) { return std::pow(v, e); });
}

// ---- doubling exponents -------------------------------------------------------

DoublingEstimate doubling_exponents(const Weight& v, const BallFamilyOptions& opts,
                                    SeededRng rng, double C) {
    validate_weight(v);
    const Grid& g = v.grid();
    require(opts.center_samples > 0 && opts.subsets_per_ball > 0,
            "doubling_exponents: degenerate family");
    const double h = g.h();
    const int n = g.dim();

    std::vector<Point> centers;
    if (opts.include_origin_centers && g.box().contains({0.0, 0.0}))
        centers.push_back({0.0, 0.0});
    for (int c = 0; c < opts.center_samples; ++c)
        centers.push_back(g.center(rng.integer(0, g.cell_count() - 1)));

    DoublingEstimate out;
    out.C = C;
    out.p_v = 0.0;
    out.delta = kInf;
    for (const Point& c : centers) {
        for (double r = 4.0 * h; r <= g.box().max_side(); r *= 2.0) {
            BallRegion ball{c, r, false};
            double vB = integrate(v, Region{ball});
            GridFunction ones = GridFunction::constant(g, 1.0);
            double mB = integrate(ones, Region{ball});
            if (vB <= 0.0 || mB <= 0.0) continue;
            // subsets: axis-aligned boxes inside the inscribed cube of B
            const double inr = n == 1 ? r : r / std::numbers::sqrt2;
            for (int s = 0; s < opts.subsets_per_ball; ++s) {
                Box eb;
                eb.n = n;
                bool ok = true;
                for (int a = 0; a < n; ++a) {
                    double lo = c[a] - inr, hi = c[a] + inr;
                    lo = std::max(lo, g.box().lo[a]);
                    hi = std::min(hi, g.box().hi[a]);
                    // snap a random sub-interval to cell boundaries
                    auto cells_lo = static_cast<std::int64_t>(
                        std::ceil((lo - g.box().lo[a]) / h - 1e-12));
                    auto cells_hi = static_cast<std::int64_t>(
                        std::floor((hi - g.box().lo[a]) / h + 1e-12));
                    if (cells_hi - cells_lo < 1) {
                        ok = false;
                        break;
                    }
                    std::int64_t w0 = rng.integer(cells_lo, cells_hi - 1);
                    std::int64_t w1 = rng.integer(w0 + 1, cells_hi);
                    eb.lo[a] = g.box().lo[a] + static_cast<double>(w0) * h;
                    eb.hi[a] = g.box().lo[a] + static_cast<double>(w1) * h;
                }
                if (!ok) continue;
                double vE = integrate(v, Region{BoxRegion{eb}});
                double mE = 1.0;
                for (int a = 0; a < n; ++a) mE *= eb.side(a);
                if (vE <= 0.0 || mE <= 0.0 || mE >= mB) continue;
                ++out.pairs;
                double lr = std::log(mB / mE);
                double pv_bound = (std::log(vB / vE) - std::log(C)) / lr;
                if (pv_bound > out.p_v) {
                    out.p_v = pv_bound;
                    out.witness_e.lo = eb.lo;
                    out.witness_e.side = eb.side(0);
                }
                double delta_bound = (std::log(vB / vE) + std::log(C)) / lr;
                out.delta = std::min(out.delta, delta_bound);
            }
        }
    }
    require(out.pairs > 0, "doubling_exponents: no usable (B,E) pairs");
    out.p_v = std::max(out.p_v, 0.0);
    out.delta = std::clamp(out.delta, 0.0, 1.0);
    return out;
}

// ---- Rubio de Francia ----------------------------------------------------------

RubioResult rubio_majorant(const GridFunction& k, const SpaceSpec& X,
                           const RubioOptions& opts) {
    require(opts.alpha >= 2.0, "rubio_majorant: alpha must be >= 2");
    require(opts.norm_m > 0.0, "rubio_majorant: norm_m estimate required");
    require(opts.l_max >= 1 && opts.l_max <= 200, "rubio_majorant: l_max out of range");

    const double denom = opts.alpha * opts.norm_m;
    RubioResult res;
    res.k_norm = space_norm(X, k);
    if (res.k_norm == 0.0) {
        res.majorant = k.map([](double v) { return std::abs(v); });
        return res;
    }

    GridFunction term = k.map([](double v) { return std::abs(v); });  // M^0 k
    GridFunction acc = term;
    double term_norm = space_norm(X, term);
    res.term_norms.push_back(term_norm);

    auto tail_window_ratio = [&]() {
        std::size_t m = res.term_norms.size();
        double worst = 0.0;
        for (std::size_t i = m > 4 ? m - 4 : 1; i < m; ++i)
            if (res.term_norms[i - 1] > 0.0)
                worst = std::max(worst, res.term_norms[i] / res.term_norms[i - 1]);
        return worst;
    };

    const double target = opts.tol * res.k_norm;
    bool certified = false;
    for (int l = 1; l <= opts.l_max; ++l) {
        GridFunction next = maximal(term, opts.max_opts);
        next = (1.0 / denom) * next;
        double next_norm = space_norm(X, next);
        double ratio = term_norm > 0.0 ? next_norm / term_norm : 0.0;
        acc = acc + next;
        term = std::move(next);
        term_norm = next_norm;
        res.term_norms.push_back(term_norm);
        res.terms_used = l;
        if (ratio < 1.0) {
            double tail = term_norm * ratio / (1.0 - ratio);
            if (tail <= target) {
                res.tail_bound = tail;
                certified = true;
                break;
            }
        }
    }
    if (!certified) {
        double worst = tail_window_ratio();
        if (worst >= 1.0)
            throw NumericError("rubio_majorant: series not contracting within l_max terms");
        res.tail_bound = res.term_norms.back() * worst / (1.0 - worst);
        if (res.tail_bound > target)
            throw NumericError("rubio_majorant: tail certificate above tolerance at l_max");
    }
    res.contraction_q = tail_window_ratio();
    res.majorant = std::move(acc);
    return res;
}

double estimate_operator_norm(const SpaceSpec& X,
                              const std::function<GridFunction(const GridFunction&)>& op,
                              const std::vector<GridFunction>& probes, double safety) {
    require(!probes.empty(), "estimate_operator_norm: empty probe battery");
    double best = 0.0;
    for (const auto& f : probes) {
        double nf = space_norm(X, f);
        if (nf == 0.0) continue;
        if (!std::isfinite(nf))
            throw NumericError("estimate_operator_norm: probe with infinite X-norm");
        double nt = space_norm(X, op(f));
        best = std::max(best, nt / nf);
    }
    require(best > 0.0, "estimate_operator_norm: no probe nonzero in X");
    return best * safety;
}

GridFunction regularize_positive(const GridFunction& g, const SpaceSpec& X,
                                 double eps_rel, const MaximalOptions& max_opts) {
    GridFunction chi = sample(g.grid(), [&](Point x) {
        double d = g.grid().dim() == 1 ? std::abs(x[0])
                                       : std::sqrt(x[0] * x[0] + x[1] * x[1]);
        return d < 1.0 ? 1.0 : 0.0;
    });
    if (integrate(chi) == 0.0) chi = GridFunction::constant(g.grid(), 1.0);
    GridFunction mchi = maximal(chi, max_opts);
    double gn = space_norm(X, g);
    double eps = eps_rel * (gn > 0.0 ? gn : 1.0);
    return GridFunction::zip(g, mchi, [eps](double a, double b) {
        return std::abs(a) + eps * b;
    });
}

CompositeWeightResult composite_extrapolation_weight(
    const GridFunction& f, const GridFunction& g, const GridFunction& h, double p,
    const SpaceSpec& X, const SpaceSpec& Xdual, const CompositeWeightOptions& opts) {
    require(p > 1.0, "composite_extrapolation_weight: p must be > 1");
    require_same_grid(f, g);
    require_same_grid(f, h);
    for (std::int64_t i = 0; i < g.size(); ++i)
        require(g[i] > 0.0 && h[i] > 0.0,
                "composite_extrapolation_weight: g, h must be strictly positive");

    RubioOptions ro;
    ro.alpha = opts.alpha;
    ro.norm_m = opts.norm_m_x;
    ro.l_max = opts.l_max;
    ro.tol = opts.tol;
    ro.max_opts = opts.max_opts;

    GridFunction gf = GridFunction::zip(g, f, [](double a, double b) {
        return a + std::abs(b);
    });
    CompositeWeightResult out;
    out.r_gf = rubio_majorant(gf, X, ro);

    ro.norm_m = opts.norm_m_xdual;
    out.r_h = rubio_majorant(h, Xdual, ro);

    out.w = GridFunction::zip(out.r_gf.majorant, out.r_h.majorant,
                              [p](double a, double b) {
                                  return std::pow(a, 1.0 - p) * b;
                              });
    out.ap = ap_constant(out.w, p);
    out.bound = std::pow(opts.alpha * opts.norm_m_x, p - 1.0) *
                (opts.alpha * opts.norm_m_xdual);
    return out;
}

}  // namespace bbfs
