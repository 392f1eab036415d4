#include "bbfs/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace bbfs {

// ---- ExponentFunction --------------------------------------------------------

ExponentFunction ExponentFunction::constant(double r) {
    require(r > 0.0 && std::isfinite(r), "exponent must be positive and finite");
    ExponentFunction e;
    e.fn_ = [r](Point) { return r; };
    e.constant_ = r;
    e.desc_ = std::to_string(r);
    return e;
}

ExponentFunction ExponentFunction::from_expression(const Expression& e) {
    ExponentFunction out;
    Expression copy = e;
    out.fn_ = [copy](Point x) { return copy(x); };
    out.desc_ = e.text();
    return out;
}

ExponentFunction ExponentFunction::from_function(std::function<double(Point)> fn,
                                                 std::string desc) {
    ExponentFunction out;
    out.fn_ = std::move(fn);
    out.desc_ = std::move(desc);
    return out;
}

double ExponentFunction::min_on(const Grid& g) const {
    if (constant_) return *constant_;
    double m = kInf;
    for (std::int64_t i = 0; i < g.cell_count(); ++i) m = std::min(m, fn_(g.center(i)));
    return m;
}

double ExponentFunction::max_on(const Grid& g) const {
    if (constant_) return *constant_;
    double m = -kInf;
    for (std::int64_t i = 0; i < g.cell_count(); ++i) m = std::max(m, fn_(g.center(i)));
    return m;
}

bool ExponentFunction::validate_log_holder(const Grid& g, SeededRng rng, int samples,
                                           double slack) const {
    if (!cert) return false;
    for (int s = 0; s < samples; ++s) {
        Point x = g.center(rng.integer(0, g.cell_count() - 1));
        Point y = g.center(rng.integer(0, g.cell_count() - 1));
        double dx = 0.0;
        for (int a = 0; a < g.dim(); ++a) dx += (x[a] - y[a]) * (x[a] - y[a]);
        dx = std::sqrt(dx);
        double rx = fn_(x), ry = fn_(y);
        if (dx > 0.0 && dx <= 0.5) {
            if (std::abs(rx - ry) > cert->c_local / std::log(1.0 / dx) + slack)
                return false;
        }
        double ax = g.dim() == 1 ? std::abs(x[0])
                                 : std::sqrt(x[0] * x[0] + x[1] * x[1]);
        if (std::abs(rx - cert->r_inf) > cert->c_decay / std::log(std::numbers::e + ax) + slack)
            return false;
    }
    return true;
}

// ---- YoungFunction -----------------------------------------------------------

YoungFunction YoungFunction::power(double p) {
    require(p >= 1.0, "Young power exponent must be >= 1");
    YoungFunction y;
    y.fn_ = [p](double t) { return std::pow(t, p); };
    y.desc_ = "t^" + std::to_string(p);
    return y;
}

YoungFunction YoungFunction::from_expression(const Expression& e) {
    YoungFunction y;
    Expression copy = e;
    y.fn_ = [copy](double t) { return copy(t); };
    y.desc_ = e.text();
    return y;
}

YoungFunction YoungFunction::from_function(std::function<double(double)> fn,
                                           std::string desc) {
    YoungFunction y;
    y.fn_ = std::move(fn);
    y.desc_ = std::move(desc);
    return y;
}

YoungFunction::Validation YoungFunction::validate() const {
    Validation v;
    v.zero_ok = fn_(0.0) == 0.0;
    v.nondecreasing_ok = true;
    v.convex_ok = true;
    v.delta2 = 0.0;
    v.nabla2 = kInf;
    double prev = 0.0;
    for (double t = 1e-6; t <= 1e6; t *= 2.0) {
        double a = fn_(t), b = fn_(2.0 * t);
        if (!(a >= prev - 1e-12 * std::max(1.0, prev))) v.nondecreasing_ok = false;
        prev = a;
        // midpoint convexity on [t, 2t]
        double mid = fn_(1.5 * t);
        if (mid > 0.5 * (a + b) + 1e-9 * std::max(1.0, std::abs(a) + std::abs(b)))
            v.convex_ok = false;
        if (a > 0.0) {
            v.delta2 = std::max(v.delta2, b / a);
            v.nabla2 = std::min(v.nabla2, b / (2.0 * a));
        }
    }
    v.delta2_ok = v.delta2 < kInf && v.delta2 > 0.0;
    v.nabla2_ok = v.nabla2 > 1.0;
    return v;
}

// ---- SpaceSpec ----------------------------------------------------------------

std::vector<std::string> space_tag_names() {
    return {"WeightedLebesgue", "Lorentz", "Herz", "VarLebesgue", "VarHerz",
            "Orlicz", "Morrey", "BBM", "Convexified"};
}

std::string to_string(SpaceTag t) {
    return space_tag_names()[static_cast<std::size_t>(t)];
}

SpaceSpec SpaceSpec::weighted_lebesgue(double p, WeightSpec w) {
    require(p >= 1.0 && std::isfinite(p), "WeightedLebesgue: need 1 <= p < inf");
    return SpaceSpec{SpaceTag::WeightedLebesgue, WeightedLebesgueP{p, std::move(w)}, ""};
}

SpaceSpec SpaceSpec::lorentz(double p, double q) {
    require(p >= 1.0 && std::isfinite(p), "Lorentz: need 1 <= p < inf");
    require(q >= 1.0, "Lorentz: need 1 <= q <= inf");
    return SpaceSpec{SpaceTag::Lorentz, LorentzP{p, q}, ""};
}

SpaceSpec SpaceSpec::herz(double alpha, double p, double q, bool homogeneous) {
    require(p >= 1.0, "Herz: need 1 <= p <= inf");
    require(q >= 1.0, "Herz: need 1 <= q <= inf");
    return SpaceSpec{SpaceTag::Herz, HerzP{alpha, p, q, homogeneous}, ""};
}

SpaceSpec SpaceSpec::var_lebesgue(ExponentFunction p, WeightSpec w) {
    return SpaceSpec{SpaceTag::VarLebesgue, VarLebesgueP{std::move(p), std::move(w)}, ""};
}

SpaceSpec SpaceSpec::var_herz(ExponentFunction alpha, ExponentFunction p,
                              ExponentFunction q, WeightSpec v, WeightSpec w,
                              bool homogeneous) {
    return SpaceSpec{SpaceTag::VarHerz,
                     VarHerzP{std::move(alpha), std::move(p), std::move(q),
                              std::move(v), std::move(w), homogeneous},
                     ""};
}

SpaceSpec SpaceSpec::orlicz(YoungFunction phi) {
    auto v = phi.validate();
    require(v.zero_ok, "Orlicz: Phi(0) must be 0");
    require(v.nondecreasing_ok, "Orlicz: Phi must be nondecreasing");
    require(v.convex_ok, "Orlicz: Phi failed the midpoint convexity check");
    return SpaceSpec{SpaceTag::Orlicz, OrliczP{std::move(phi), v}, ""};
}

SpaceSpec SpaceSpec::morrey(double r0, double r) {
    require(1.0 <= r && r <= r0 && std::isfinite(r0), "Morrey: need 1 <= r <= r0 < inf");
    return SpaceSpec{SpaceTag::Morrey, MorreyP{r0, r}, ""};
}

SpaceSpec SpaceSpec::bbm(double p, double q, double r, double tau) {
    require(1.0 <= q && q <= p && std::isfinite(p), "BBM: need 1 <= q <= p < inf");
    require(r >= 1.0 && tau >= 1.0, "BBM: need r, tau in [1, inf]");
    return SpaceSpec{SpaceTag::BBM, BBMP{p, q, r, tau}, ""};
}

SpaceSpec SpaceSpec::convexified(SpaceSpec base, double ppow) {
    require(ppow > 0.0 && std::isfinite(ppow), "Convexified: ppow must be positive");
    return SpaceSpec{SpaceTag::Convexified,
                     ConvexifiedP{std::make_shared<SpaceSpec>(std::move(base)), ppow},
                     ""};
}

bool SpaceSpec::separable() const {
    switch (tag) {
        case SpaceTag::WeightedLebesgue: return true;
        case SpaceTag::Lorentz: return std::isfinite(as<LorentzP>().q);
        case SpaceTag::Herz: return std::isfinite(as<HerzP>().q);
        case SpaceTag::VarLebesgue: return true;
        case SpaceTag::VarHerz: return true;
        case SpaceTag::Orlicz: return as<OrliczP>().validation.delta2_ok;
        case SpaceTag::Morrey: {
            const auto& m = as<MorreyP>();
            return m.r == m.r0;
        }
        case SpaceTag::BBM: {
            const auto& b = as<BBMP>();
            return std::isfinite(b.r) && std::isfinite(b.tau);
        }
        case SpaceTag::Convexified: return as<ConvexifiedP>().base->separable();
    }
    return false;
}

namespace {
std::string num(double x) {
    std::ostringstream os;
    os << x;
    return os.str();
}
}  // namespace

std::string SpaceSpec::describe() const {
    switch (tag) {
        case SpaceTag::WeightedLebesgue: {
            const auto& s = as<WeightedLebesgueP>();
            return "L^" + num(s.p) + "(" + s.w.describe() + ")";
        }
        case SpaceTag::Lorentz: {
            const auto& s = as<LorentzP>();
            return "Lorentz(" + num(s.p) + "," + num(s.q) + ")";
        }
        case SpaceTag::Herz: {
            const auto& s = as<HerzP>();
            return std::string(s.homogeneous ? "HerzH(" : "Herz(") + num(s.alpha) + "," +
                   num(s.p) + "," + num(s.q) + ")";
        }
        case SpaceTag::VarLebesgue: {
            const auto& s = as<VarLebesgueP>();
            return "L^{" + s.p.describe() + "}(" + s.w.describe() + ")";
        }
        case SpaceTag::VarHerz: {
            const auto& s = as<VarHerzP>();
            return std::string(s.homogeneous ? "VarHerzH(" : "VarHerz(") +
                   s.alpha.describe() + ";" + s.p.describe() + ";" + s.q.describe() + ")";
        }
        case SpaceTag::Orlicz: return "Orlicz(" + as<OrliczP>().phi.describe() + ")";
        case SpaceTag::Morrey: {
            const auto& s = as<MorreyP>();
            return "Morrey(" + num(s.r0) + "," + num(s.r) + ")";
        }
        case SpaceTag::BBM: {
            const auto& s = as<BBMP>();
            return "BBM(" + num(s.p) + "," + num(s.q) + "," + num(s.r) + "," +
                   num(s.tau) + ")";
        }
        case SpaceTag::Convexified: {
            const auto& s = as<ConvexifiedP>();
            return "Convexified(" + s.base->describe() + "," + num(s.ppow) + ")";
        }
    }
    return "?";
}

// ---- Luxemburg ------------------------------------------------------------------

LuxemburgResult luxemburg_norm(const std::function<double(double)>& modular,
                               const LuxemburgOptions& opts) {
    std::vector<std::pair<double, double>> evals;
    auto m = [&](double lam) {
        double v = modular(lam);
        evals.emplace_back(lam, v);
        return v;
    };
    // contract: the modular must be nonincreasing in lambda
    auto check_monotone = [&]() {
        std::sort(evals.begin(), evals.end());
        for (std::size_t i = 1; i < evals.size(); ++i) {
            double prev = evals[i - 1].second, cur = evals[i].second;
            if (std::isinf(prev)) continue;
            if (cur > prev + 1e-9 * std::max(1.0, prev))
                throw ContractError("luxemburg_norm: non-monotone modular detected");
        }
    };
    auto finish = [&](LuxemburgResult r) {
        r.evaluations = static_cast<int>(evals.size());
        check_monotone();
        return r;
    };

    LuxemburgResult res;
    double lam = opts.lambda_hint > 0.0 ? opts.lambda_hint : 1.0;
    double v = m(lam);
    int steps = 0;
    if (v > 1.0) {
        while (v > 1.0 && steps++ < opts.max_steps) {
            lam *= 2.0;
            v = m(lam);
        }
        if (v > 1.0) {
            res.value = kInf;
            return finish(res);
        }
        res.lo = lam / 2.0;
        res.hi = lam;
    } else {
        double lo = lam;
        while (steps++ < opts.max_steps) {
            double half = lo / 2.0;
            if (half < 1e-300) {
                res.value = 0.0;  // modular stays <= 1 arbitrarily close to 0
                return finish(res);
            }
            if (m(half) > 1.0) {
                res.lo = half;
                res.hi = lo;
                break;
            }
            lo = half;
        }
        if (res.hi == 0.0) {
            res.value = 0.0;
            return finish(res);
        }
    }

    while (res.hi - res.lo > opts.tol * res.hi && steps++ < opts.max_steps) {
        double mid = 0.5 * (res.lo + res.hi);
        if (m(mid) <= 1.0)
            res.hi = mid;
        else
            res.lo = mid;
    }
    res.value = res.hi;
    return finish(res);
}

// ---- weighted Lebesgue / Lorentz ----------------------------------------------

double weighted_lebesgue_norm(double p, const Weight& w, const GridFunction& f) {
    require(p >= 1.0, "weighted_lebesgue_norm: p must be >= 1");
    require_same_grid(w, f);
    return lp_norm(f, p, &w);
}

double lorentz_norm(double p, double q, const GridFunction& f) {
    require(p >= 1.0 && std::isfinite(p), "lorentz_norm: need 1 <= p < inf");
    require(q >= 1.0, "lorentz_norm: need 1 <= q <= inf");
    RearrangementProfile pr = rearrange(f);
    if (std::isinf(q)) {
        double best = 0.0;
        for (std::size_t i = 0; i < pr.value.size(); ++i)
            best = std::max(best, pr.value[i] * std::pow(pr.cum_measure[i], 1.0 / p));
        return best;
    }
    std::vector<double> terms;
    terms.reserve(pr.value.size());
    double prev = 0.0;
    for (std::size_t i = 0; i < pr.value.size(); ++i) {
        double cur = pr.cum_measure[i];
        if (pr.value[i] > 0.0)
            terms.push_back(std::pow(pr.value[i], q) * (p / q) *
                            (std::pow(cur, q / p) - std::pow(prev, q / p)));
        prev = cur;
    }
    return std::pow(pairwise_sum(terms), 1.0 / q);
}

// ---- annuli ---------------------------------------------------------------------

AnnulusSystem AnnulusSystem::build(const Grid& g) {
    AnnulusSystem sys;
    const double R = g.box().circumradius_from_origin();
    sys.k_min = 1 - g.level();
    sys.k_max = static_cast<int>(std::ceil(std::log2(std::max(R, 1e-300))));
    if (sys.k_max < sys.k_min) sys.k_max = sys.k_min;

    std::vector<double> prev;  // fractions of B(0, 2^{k-1}); empty below k_min
    for (int k = sys.k_min; k <= sys.k_max; ++k) {
        std::vector<double> outer =
            region_fractions(g, Region{BallRegion{{0.0, 0.0}, std::ldexp(1.0, k), false}});
        std::vector<double> frac(outer.size());
        if (prev.empty()) {
            frac = outer;  // merged hole
        } else {
            for (std::size_t i = 0; i < outer.size(); ++i) frac[i] = outer[i] - prev[i];
        }
        prev = std::move(outer);
        sys.fractions.push_back(std::move(frac));
    }
    sys.head_fractions =
        region_fractions(g, Region{BallRegion{{0.0, 0.0}, 1.0, false}});
    return sys;
}

namespace {

double annulus_measure(const Grid& g, const std::vector<double>& frac) {
    std::vector<double> terms(frac.size());
    const double cv = g.cell_volume();
    for (std::size_t i = 0; i < frac.size(); ++i) terms[i] = frac[i] * cv;
    return pairwise_sum(terms);
}

bool all_zero(const std::vector<double>& v) {
    for (double x : v)
        if (x > 0.0) return false;
    return true;
}

double lq_aggregate(const std::vector<double>& terms, double q) {
    if (std::isinf(q)) {
        double m = 0.0;
        for (double t : terms) m = std::max(m, t);
        return m;
    }
    std::vector<double> pw(terms.size());
    for (std::size_t i = 0; i < terms.size(); ++i) pw[i] = std::pow(terms[i], q);
    return std::pow(pairwise_sum(pw), 1.0 / q);
}

}  // namespace

double herz_norm(double alpha, double p, double q, bool homogeneous,
                 const GridFunction& f) {
    require(p >= 1.0 && q >= 1.0, "herz_norm: need p, q >= 1");
    const Grid& g = f.grid();
    AnnulusSystem sys = AnnulusSystem::build(g);
    std::vector<double> terms;
    for (int k = homogeneous ? sys.k_min : std::max(1, sys.k_min); k <= sys.k_max; ++k) {
        const auto& frac = sys.frac(k);
        if (all_zero(frac)) continue;
        double block = lp_norm(f, p, nullptr, &frac);
        terms.push_back(std::pow(2.0, static_cast<double>(k) * alpha) * block);
    }
    double tail = lq_aggregate(terms, q);
    if (homogeneous) return tail;
    double head = lp_norm(f, p, nullptr, &sys.head_fractions);
    return head + tail;
}

// ---- variable exponent Lebesgue ---------------------------------------------------

namespace {

// (sum |f|^e w frac cv)^(1/e) for any e > 0 (quasi-norm allowed); hint helper.
double quad_power_norm(const GridFunction& f, double e, const Weight* w,
                       const std::vector<double>* frac) {
    const double cv = f.grid().cell_volume();
    std::vector<double> terms(static_cast<std::size_t>(f.size()));
    for (std::int64_t i = 0; i < f.size(); ++i) {
        double t = std::pow(std::abs(f[i]), e) * cv;
        if (w) t *= (*w)[i];
        if (frac) t *= (*frac)[static_cast<std::size_t>(i)];
        terms[static_cast<std::size_t>(i)] = t;
    }
    return std::pow(pairwise_sum(terms), 1.0 / e);
}

double max_abs_on(const GridFunction& f, const std::vector<double>* frac) {
    double m = 0.0;
    for (std::int64_t i = 0; i < f.size(); ++i) {
        if (frac && (*frac)[static_cast<std::size_t>(i)] <= 0.0) continue;
        m = std::max(m, std::abs(f[i]));
    }
    return m;
}

double var_lebesgue_norm_frac(const ExponentFunction& p, const Weight& w,
                              const GridFunction& f, const std::vector<double>* frac,
                              double tol) {
    require_same_grid(w, f);
    if (max_abs_on(f, frac) == 0.0) return 0.0;
    const Grid& g = f.grid();
    // cache exponents at cell centers
    std::vector<double> pe(static_cast<std::size_t>(g.cell_count()));
    for (std::int64_t i = 0; i < g.cell_count(); ++i) pe[static_cast<std::size_t>(i)] = p(g.center(i));
    const double cv = g.cell_volume();
    auto modular = [&](double lam) {
        std::vector<double> terms(static_cast<std::size_t>(f.size()));
        for (std::int64_t i = 0; i < f.size(); ++i) {
            auto s = static_cast<std::size_t>(i);
            double fr = frac ? (*frac)[s] : 1.0;
            if (fr <= 0.0 || f[i] == 0.0) {
                terms[s] = 0.0;
                continue;
            }
            terms[s] = std::pow(std::abs(f[i]) / lam, pe[s]) * w[i] * fr * cv;
        }
        return pairwise_sum(terms);
    };
    double pmin = kInf, pmax = 0.0;
    for (std::int64_t i = 0; i < f.size(); ++i) {
        auto s = static_cast<std::size_t>(i);
        if (frac && (*frac)[s] <= 0.0) continue;
        pmin = std::min(pmin, pe[s]);
        pmax = std::max(pmax, pe[s]);
    }
    require(pmin > 0.0, "variable exponent must be positive");
    LuxemburgOptions lo;
    lo.tol = tol;
    lo.lambda_hint = quad_power_norm(f, pmin, &w, frac) +
                     quad_power_norm(f, pmax, &w, frac);
    return luxemburg_norm(modular, lo).value;
}

}  // namespace

double variable_lebesgue_norm(const ExponentFunction& p, const Weight& w,
                              const GridFunction& f, double tol) {
    return var_lebesgue_norm_frac(p, w, f, nullptr, tol);
}

double orlicz_norm(const YoungFunction& phi, const GridFunction& f, double tol) {
    if (f.max_abs() == 0.0) return 0.0;
    const double cv = f.grid().cell_volume();
    auto modular = [&](double lam) {
        std::vector<double> terms(static_cast<std::size_t>(f.size()));
        for (std::int64_t i = 0; i < f.size(); ++i)
            terms[static_cast<std::size_t>(i)] =
                f[i] == 0.0 ? 0.0 : phi(std::abs(f[i]) / lam) * cv;
        return pairwise_sum(terms);
    };
    LuxemburgOptions lo;
    lo.tol = tol;
    lo.lambda_hint = quad_power_norm(f, 1.0, nullptr, nullptr) +
                     quad_power_norm(f, 2.0, nullptr, nullptr) + f.max_abs();
    return luxemburg_norm(modular, lo).value;
}

// ---- mixed sequence norm -----------------------------------------------------------

double mixed_sequence_norm(const ExponentFunction& q, const ExponentFunction& p,
                           const Weight& w, const std::vector<SequenceBlock>& blocks,
                           double tol) {
    std::vector<const SequenceBlock*> live;
    for (const auto& b : blocks) {
        const std::vector<double>* fr = b.fractions.empty() ? nullptr : &b.fractions;
        if (max_abs_on(b.values, fr) > 0.0) live.push_back(&b);
    }
    if (live.empty()) return 0.0;

    const Grid& g = live.front()->values.grid();
    std::vector<double> pe(static_cast<std::size_t>(g.cell_count()));
    std::vector<double> qe(pe.size()), ee(pe.size());
    bool e_const = true;
    for (std::int64_t i = 0; i < g.cell_count(); ++i) {
        auto s = static_cast<std::size_t>(i);
        pe[s] = p(g.center(i));
        qe[s] = q(g.center(i));
        require(pe[s] > 0.0 && qe[s] > 0.0, "exponents must be positive");
        ee[s] = pe[s] / qe[s];
        if (std::abs(ee[s] - ee[0]) > 1e-14 * std::max(1.0, ee[0])) e_const = false;
    }
    const double cv = g.cell_volume();

    // || |g/mu|^{q(.)} ||_{L^{p/q}(w)} for one block
    auto inner = [&](const SequenceBlock& b, double mu) -> double {
        const std::vector<double>* fr = b.fractions.empty() ? nullptr : &b.fractions;
        const GridFunction& gf = b.values;
        if (e_const) {
            std::vector<double> terms(static_cast<std::size_t>(gf.size()));
            for (std::int64_t i = 0; i < gf.size(); ++i) {
                auto s = static_cast<std::size_t>(i);
                double frv = fr ? (*fr)[s] : 1.0;
                terms[s] = (frv <= 0.0 || gf[i] == 0.0)
                               ? 0.0
                               : std::pow(std::abs(gf[i]) / mu, pe[s]) * w[i] * frv * cv;
            }
            return std::pow(pairwise_sum(terms), 1.0 / ee[0]);
        }
        auto modular = [&](double lam) {
            std::vector<double> terms(static_cast<std::size_t>(gf.size()));
            for (std::int64_t i = 0; i < gf.size(); ++i) {
                auto s = static_cast<std::size_t>(i);
                double frv = fr ? (*fr)[s] : 1.0;
                if (frv <= 0.0 || gf[i] == 0.0) {
                    terms[s] = 0.0;
                    continue;
                }
                double u = std::pow(std::abs(gf[i]) / mu, qe[s]);
                terms[s] = std::pow(u / lam, ee[s]) * w[i] * frv * cv;
            }
            return pairwise_sum(terms);
        };
        LuxemburgOptions lo;
        lo.tol = tol;
        lo.lambda_hint = 1.0;
        return luxemburg_norm(modular, lo).value;
    };

    auto outer_modular = [&](double mu) {
        std::vector<double> terms(live.size());
        for (std::size_t k = 0; k < live.size(); ++k) terms[k] = inner(*live[k], mu);
        return pairwise_sum(terms);
    };

    double hint = 0.0;
    double pmin = *std::min_element(pe.begin(), pe.end());
    for (const auto* b : live) {
        const std::vector<double>* fr = b->fractions.empty() ? nullptr : &b->fractions;
        hint += quad_power_norm(b->values, std::max(pmin, 0.5), &w, fr);
    }
    LuxemburgOptions lo;
    lo.tol = tol;
    lo.lambda_hint = hint > 0.0 ? hint : 1.0;
    return luxemburg_norm(outer_modular, lo).value;
}

// ---- variable Herz -----------------------------------------------------------------

double variable_herz_norm(const ExponentFunction& alpha, const ExponentFunction& p,
                          const ExponentFunction& q, const Weight& v, const Weight& w,
                          const GridFunction& f, const VarHerzOptions& opts) {
    require_same_grid(v, f);
    require_same_grid(w, f);
    const Grid& g = f.grid();
    const int n = g.dim();
    AnnulusSystem sys = AnnulusSystem::build(g);

    std::vector<SequenceBlock> blocks;
    for (int k = opts.homogeneous ? sys.k_min : std::max(1, sys.k_min); k <= sys.k_max;
         ++k) {
        const auto& frac = sys.frac(k);
        if (all_zero(frac)) continue;
        // v(B_k) over the clipped ball
        double vbk = 0.0;
        {
            std::vector<double> outer = region_fractions(
                g, Region{BallRegion{{0.0, 0.0}, std::ldexp(1.0, k), false}});
            std::vector<double> terms(outer.size());
            const double cv = g.cell_volume();
            for (std::size_t i = 0; i < outer.size(); ++i) terms[i] = outer[i] * v[static_cast<std::int64_t>(i)] * cv;
            vbk = pairwise_sum(terms);
        }
        require(vbk > 0.0, "variable_herz_norm: v(B_k) must be positive");
        std::vector<double> vals(static_cast<std::size_t>(f.size()));
        for (std::int64_t i = 0; i < f.size(); ++i) {
            auto s = static_cast<std::size_t>(i);
            vals[s] = frac[s] > 0.0
                          ? f[i] * std::pow(vbk, alpha(g.center(i)) / static_cast<double>(n))
                          : 0.0;
        }
        blocks.push_back(SequenceBlock{GridFunction(g, std::move(vals)), frac});
    }
    double tail = mixed_sequence_norm(q, p, w, blocks, opts.tol);
    if (opts.homogeneous) return tail;
    double head = var_lebesgue_norm_frac(p, w, f, &sys.head_fractions, opts.tol);
    return head + tail;
}

// ---- Morrey --------------------------------------------------------------------------

namespace {

// 1-d prefix integral of |f|^r with fractional ends.
struct PrefixPow1D {
    const Grid* g;
    std::vector<double> s;
    PrefixPow1D(const GridFunction& f, double r) : g(&f.grid()) {
        s.resize(static_cast<std::size_t>(f.size()) + 1, 0.0);
        const double h = g->h();
        for (std::int64_t i = 0; i < f.size(); ++i)
            s[static_cast<std::size_t>(i) + 1] =
                s[static_cast<std::size_t>(i)] + std::pow(std::abs(f[i]), r) * h;
    }
    double cum(double u) const {
        const double a = g->box().lo[0], b = g->box().hi[0], h = g->h();
        u = std::clamp(u, a, b);
        double t = (u - a) / h;
        auto i = static_cast<std::int64_t>(std::floor(t));
        i = std::clamp<std::int64_t>(i, 0, g->cells(0) - 1);
        double fracpart = t - static_cast<double>(i);
        return s[static_cast<std::size_t>(i)] +
               fracpart * (s[static_cast<std::size_t>(i) + 1] - s[static_cast<std::size_t>(i)]);
    }
    double over(double u, double v) const { return cum(v) - cum(u); }
};

double ball_measure_full(int n, double r) {
    return n == 1 ? 2.0 * r : std::numbers::pi * r * r;
}

}  // namespace

double morrey_norm(double r0, double r, const GridFunction& f, const NormOptions& opts) {
    require(1.0 <= r && r <= r0, "morrey_norm: need 1 <= r <= r0");
    const Grid& g = f.grid();
    const int n = g.dim();
    const double h = g.h();
    const double expo = 1.0 / r0 - 1.0 / r;  // <= 0

    std::vector<std::pair<Point, double>> balls;
    const double diam = g.box().diameter();
    for (std::int64_t i = 0; i < g.cell_count();
         i += std::max(1, opts.morrey_center_stride)) {
        for (double rad = h; rad < diam; rad *= 2.0)
            balls.emplace_back(g.center(i), rad);
    }
    // box-covering ball so the r = r0 case attains the L^r norm exactly
    Point bc{0.0, 0.0};
    for (int a = 0; a < n; ++a) bc[a] = 0.5 * (g.box().lo[a] + g.box().hi[a]);
    balls.emplace_back(bc, 0.5 * diam + h);

    double best = 0.0;
    if (n == 1) {
        PrefixPow1D pre(f, r);
        for (const auto& [c, rad] : balls) {
            double integral = pre.over(c[0] - rad, c[0] + rad);
            if (integral <= 0.0) continue;
            best = std::max(best, std::pow(ball_measure_full(1, rad), expo) *
                                      std::pow(integral, 1.0 / r));
        }
    } else {
        GridFunction fr = f.map([r](double x) { return std::pow(std::abs(x), r); });
        for (const auto& [c, rad] : balls) {
            double integral = integrate(fr, Region{BallRegion{c, rad, false}});
            if (integral <= 0.0) continue;
            best = std::max(best, std::pow(ball_measure_full(2, rad), expo) *
                                      std::pow(integral, 1.0 / r));
        }
    }
    return best;
}

// ---- Besov-Bourgain-Morrey -------------------------------------------------------------

double bbm_norm(double p, double q, double r, double tau, const GridFunction& f) {
    require(1.0 <= q && q <= p && std::isfinite(p), "bbm_norm: need 1 <= q <= p < inf");
    require(r >= 1.0 && tau >= 1.0, "bbm_norm: need r, tau >= 1");
    const Grid& g = f.grid();
    const int n = g.dim();
    const double h = g.h();
    GridFunction fq = f.map([q](double x) { return std::pow(std::abs(x), q); });

    const double max_extent =
        std::max(g.box().max_side(), g.box().circumradius_from_origin());
    const int nu_min = -(static_cast<int>(std::ceil(std::log2(std::max(max_extent, 1.0)))) + 2);
    const int nu_max = g.level();

    std::vector<double> level_terms;
    for (int nu = nu_min; nu <= nu_max; ++nu) {
        const double s = std::ldexp(1.0, -nu);
        const double qvol = std::pow(s, n);
        std::vector<double> inner_terms;
        // cube index ranges intersecting the box per axis
        std::array<std::int64_t, 2> m0{}, m1{};
        for (int a = 0; a < n; ++a) {
            m0[a] = static_cast<std::int64_t>(std::floor(g.box().lo[a] / s));
            m1[a] = static_cast<std::int64_t>(std::ceil(g.box().hi[a] / s)) - 1;
        }
        if (n == 1) m0[1] = m1[1] = 0;
        for (std::int64_t my = m0[1]; my <= m1[1]; ++my) {
            for (std::int64_t mx = m0[0]; mx <= m1[0]; ++mx) {
                // localized clipped integral of |f|^q over the cube
                double acc = 0.0;
                double cx0 = static_cast<double>(mx) * s, cx1 = cx0 + s;
                double cy0 = static_cast<double>(my) * s, cy1 = cy0 + s;
                auto ix0 = std::clamp<std::int64_t>(
                    static_cast<std::int64_t>(std::floor((cx0 - g.box().lo[0]) / h)), 0,
                    g.cells(0) - 1);
                auto ix1 = std::clamp<std::int64_t>(
                    static_cast<std::int64_t>(std::ceil((cx1 - g.box().lo[0]) / h)), 0,
                    g.cells(0) - 1);
                std::int64_t iy0 = 0, iy1 = 0;
                if (n == 2) {
                    iy0 = std::clamp<std::int64_t>(
                        static_cast<std::int64_t>(std::floor((cy0 - g.box().lo[1]) / h)),
                        0, g.cells(1) - 1);
                    iy1 = std::clamp<std::int64_t>(
                        static_cast<std::int64_t>(std::ceil((cy1 - g.box().lo[1]) / h)),
                        0, g.cells(1) - 1);
                }
                const double cv = g.cell_volume();
                for (std::int64_t iy = iy0; iy <= iy1; ++iy) {
                    for (std::int64_t ix = ix0; ix <= ix1; ++ix) {
                        std::int64_t i = g.flat(ix, n == 2 ? iy : 0);
                        Point c = g.center(i);
                        double frac =
                            std::max(0.0, std::min(cx1, c[0] + 0.5 * h) -
                                              std::max(cx0, c[0] - 0.5 * h)) / h;
                        if (n == 2)
                            frac *= std::max(0.0, std::min(cy1, c[1] + 0.5 * h) -
                                                      std::max(cy0, c[1] - 0.5 * h)) / h;
                        if (frac > 0.0) acc += fq[i] * frac * cv;
                    }
                }
                if (acc > 0.0)
                    inner_terms.push_back(std::pow(qvol, 1.0 / p - 1.0 / q) *
                                          std::pow(acc, 1.0 / q));
            }
        }
        level_terms.push_back(lq_aggregate(inner_terms, r));
    }
    return lq_aggregate(level_terms, tau);
}

// ---- dispatch ---------------------------------------------------------------------------

double space_norm(const SpaceSpec& X, const GridFunction& f, const NormOptions& opts) {
    switch (X.tag) {
        case SpaceTag::WeightedLebesgue: {
            const auto& s = X.as<SpaceSpec::WeightedLebesgueP>();
            return weighted_lebesgue_norm(s.p, s.w.materialize(f.grid()), f);
        }
        case SpaceTag::Lorentz: {
            const auto& s = X.as<SpaceSpec::LorentzP>();
            return lorentz_norm(s.p, s.q, f);
        }
        case SpaceTag::Herz: {
            const auto& s = X.as<SpaceSpec::HerzP>();
            return herz_norm(s.alpha, s.p, s.q, s.homogeneous, f);
        }
        case SpaceTag::VarLebesgue: {
            const auto& s = X.as<SpaceSpec::VarLebesgueP>();
            return variable_lebesgue_norm(s.p, s.w.materialize(f.grid()), f, opts.lux_tol);
        }
        case SpaceTag::VarHerz: {
            const auto& s = X.as<SpaceSpec::VarHerzP>();
            VarHerzOptions vo;
            vo.homogeneous = s.homogeneous;
            vo.tol = opts.lux_tol;
            return variable_herz_norm(s.alpha, s.p, s.q, s.v.materialize(f.grid()),
                                      s.w.materialize(f.grid()), f, vo);
        }
        case SpaceTag::Orlicz: {
            const auto& s = X.as<SpaceSpec::OrliczP>();
            return orlicz_norm(s.phi, f, opts.lux_tol);
        }
        case SpaceTag::Morrey: {
            const auto& s = X.as<SpaceSpec::MorreyP>();
            return morrey_norm(s.r0, s.r, f, opts);
        }
        case SpaceTag::BBM: {
            const auto& s = X.as<SpaceSpec::BBMP>();
            return bbm_norm(s.p, s.q, s.r, s.tau, f);
        }
        case SpaceTag::Convexified: {
            const auto& s = X.as<SpaceSpec::ConvexifiedP>();
            const double pp = s.ppow;
            GridFunction root = f.map([pp](double v) {
                return std::pow(std::abs(v), 1.0 / pp);
            });
            return std::pow(space_norm(*s.base, root, opts), pp);
        }
    }
    throw NumericError("space_norm: unknown tag");
}

// ---- duality -----------------------------------------------------------------------------

std::optional<SpaceSpec> kothe_dual(const SpaceSpec& X) {
    switch (X.tag) {
        case SpaceTag::WeightedLebesgue: {
            const auto& s = X.as<SpaceSpec::WeightedLebesgueP>();
            if (s.p <= 1.0) return std::nullopt;
            const double pp = conjugate_exponent(s.p);
            return SpaceSpec::weighted_lebesgue(pp, WeightSpec::power_of(s.w, 1.0 - pp));
        }
        case SpaceTag::Lorentz: {
            const auto& s = X.as<SpaceSpec::LorentzP>();
            if (s.p <= 1.0) return std::nullopt;
            return SpaceSpec::lorentz(conjugate_exponent(s.p), conjugate_exponent(s.q));
        }
        default: return std::nullopt;
    }
}

PairingResult pairing_check(const SpaceSpec& X, const GridFunction& f,
                            const GridFunction& g, const NormOptions& opts) {
    auto dual = kothe_dual(X);
    require(dual.has_value(), "pairing_check: Kothe dual unavailable for this tag");
    PairingResult r;
    GridFunction prod = GridFunction::zip(f, g, [](double a, double b) {
        return std::abs(a * b);
    });
    r.lhs = integrate(prod);
    r.rhs = space_norm(X, f, opts) * space_norm(*dual, g, opts);
    r.ratio = r.rhs > 0.0 ? r.lhs / r.rhs : (r.lhs > 0.0 ? kInf : 0.0);
    return r;
}

double dual_norm_lower_bound(const SpaceSpec& X, const GridFunction& g,
                             const std::vector<GridFunction>& probes,
                             const NormOptions& opts) {
    double best = 0.0;
    for (const auto& f : probes) {
        double nf = space_norm(X, f, opts);
        if (nf <= 0.0 || !std::isfinite(nf)) continue;
        GridFunction prod = GridFunction::zip(f, g, [](double a, double b) {
            return std::abs(a * b);
        });
        best = std::max(best, integrate(prod) / nf);
    }
    return best;
}

// ---- axioms ------------------------------------------------------------------------------

AxiomsReport axioms_check(const NormEvaluator& norm,
                          const std::vector<GridFunction>& battery,
                          const std::vector<Region>& balls, double tol) {
    require(!battery.empty(), "axioms_check: empty battery");
    AxiomsReport rep;
    const Grid& g = battery.front().grid();

    auto add = [&](std::string id, bool pass, double worst, std::string note = "") {
        rep.entries.push_back({std::move(id), pass, worst, std::move(note)});
        rep.pass = rep.pass && pass;
    };

    std::vector<double> norms;
    for (const auto& f : battery) norms.push_back(norm(f));

    {  // P1: definiteness
        bool ok = norm(GridFunction::zeros(g)) <= tol;
        double worst = kInf;
        for (std::size_t i = 0; i < battery.size(); ++i) {
            if (battery[i].max_abs() == 0.0) continue;
            ok = ok && norms[i] > 0.0;
            worst = std::min(worst, norms[i]);
        }
        add("P1-definiteness", ok, worst);
    }
    {  // P1: positive homogeneity
        bool ok = true;
        double worst = 0.0;
        for (const double c : {0.5, 3.0, 7.25}) {
            for (std::size_t i = 0; i < battery.size(); ++i) {
                double lhs = norm(c * battery[i]);
                double rhs = c * norms[i];
                if (!std::isfinite(rhs)) continue;
                double dev = std::abs(lhs - rhs) / std::max(1.0, rhs);
                worst = std::max(worst, dev);
                if (dev > tol) ok = false;
            }
        }
        add("P1-homogeneity", ok, worst);
    }
    {  // P1: triangle inequality
        bool ok = true;
        double worst = -kInf;
        for (std::size_t i = 0; i < battery.size(); ++i) {
            for (std::size_t j = i; j < battery.size(); ++j) {
                if (!std::isfinite(norms[i]) || !std::isfinite(norms[j])) continue;
                double lhs = norm(battery[i] + battery[j]);
                double slack = norms[i] + norms[j] - lhs;
                worst = std::max(worst, -slack / std::max(1.0, norms[i] + norms[j]));
                if (slack < -tol * std::max(1.0, norms[i] + norms[j])) ok = false;
            }
        }
        add("P1-triangle", ok, worst);
    }
    {  // P2: lattice monotonicity on derived pairs |g| <= |f|
        bool ok = true;
        double worst = -kInf;
        for (std::size_t i = 0; i < battery.size(); ++i) {
            if (!std::isfinite(norms[i])) continue;
            GridFunction absf = battery[i].map([](double v) { return std::abs(v); });
            std::vector<GridFunction> smaller;
            smaller.push_back(0.5 * absf);
            GridFunction mask = sample(g, [&](Point x) {
                return x[0] < 0.5 * (g.box().lo[0] + g.box().hi[0]) ? 1.0 : 0.0;
            });
            smaller.push_back(absf * mask);
            double nf = norm(absf);
            for (const auto& sm : smaller) {
                double slack = nf - norm(sm);
                worst = std::max(worst, -slack / std::max(1.0, nf));
                if (slack < -tol * std::max(1.0, nf)) ok = false;
            }
        }
        add("P2-lattice", ok, worst);
    }
    {  // P3: Fatou along f_j = |f| chi_{B_j} increasing to |f|
        bool ok = true;
        double worst = -kInf;
        Point mid{0.0, 0.0};
        for (int a = 0; a < g.dim(); ++a) mid[a] = 0.5 * (g.box().lo[a] + g.box().hi[a]);
        for (std::size_t i = 0; i < battery.size(); ++i) {
            if (!std::isfinite(norms[i]) || battery[i].max_abs() == 0.0) continue;
            GridFunction absf = battery[i].map([](double v) { return std::abs(v); });
            double prev = 0.0;
            double last = 0.0;
            const double R = g.box().diameter();
            for (double frac : {0.125, 0.25, 0.5, 1.0}) {
                std::vector<double> ball =
                    region_fractions(g, Region{BallRegion{mid, frac * R + g.h(), false}});
                GridFunction fj = GridFunction(
                    absf.grid(), [&] {
                        std::vector<double> v(static_cast<std::size_t>(absf.size()));
                        for (std::int64_t c = 0; c < absf.size(); ++c)
                            v[static_cast<std::size_t>(c)] =
                                absf[c] * ball[static_cast<std::size_t>(c)];
                        return v;
                    }());
                double nj = norm(fj);
                double slack = nj - prev;
                worst = std::max(worst, -slack / std::max(1.0, nj));
                if (slack < -tol * std::max(1.0, nj)) ok = false;
                prev = nj;
                last = nj;
            }
            double nf = norm(absf);
            double dev = std::abs(last - nf) / std::max(1.0, nf);
            worst = std::max(worst, dev);
            if (dev > tol) ok = false;  // the last set covers the box
        }
        add("P3-fatou", ok, worst);
    }
    {  // P4: finite norm of ball indicators
        bool ok = true;
        double worst = 0.0;
        for (const auto& b : balls) {
            GridFunction chi = GridFunction(g, region_fractions(g, b));
            double nb = norm(chi);
            worst = std::max(worst, nb);
            if (!std::isfinite(nb)) ok = false;
        }
        add("P4-ball-indicator", ok, worst);
    }
    {  // P5: local L^1 control with reported C(B)
        bool ok = true;
        double worst = 0.0;
        for (const auto& b : balls) {
            for (std::size_t i = 0; i < battery.size(); ++i) {
                if (norms[i] <= 0.0 || !std::isfinite(norms[i])) continue;
                GridFunction absf = battery[i].map([](double v) { return std::abs(v); });
                double li = integrate(absf, b);
                double cb = li / norms[i];
                worst = std::max(worst, cb);
                if (!std::isfinite(cb)) ok = false;
            }
        }
        add("P5-local-L1", ok, worst);
    }
    return rep;
}

AxiomsReport axioms_check(const SpaceSpec& X, const std::vector<GridFunction>& battery,
                          const std::vector<Region>& balls, double tol,
                          const NormOptions& opts) {
    return axioms_check([&](const GridFunction& f) { return space_norm(X, f, opts); },
                        battery, balls, tol);
}

std::vector<double> absolute_continuity_probe(const SpaceSpec& X, const GridFunction& f,
                                              const std::vector<Region>& sets,
                                              const NormOptions& opts) {
    std::vector<double> out;
    for (const auto& e : sets) {
        std::vector<double> frac = region_fractions(f.grid(), e);
        std::vector<double> v(static_cast<std::size_t>(f.size()));
        for (std::int64_t i = 0; i < f.size(); ++i)
            v[static_cast<std::size_t>(i)] = f[i] * frac[static_cast<std::size_t>(i)];
        out.push_back(space_norm(X, GridFunction(f.grid(), std::move(v)), opts));
    }
    return out;
}

CharRatioProfile characteristic_ratio_profile(const SpaceSpec& X, const Grid& g,
                                              double C, const NormOptions& opts) {
    AnnulusSystem sys = AnnulusSystem::build(g);
    CharRatioProfile prof;
    prof.C = C;
    std::vector<int> ks;
    std::vector<double> norms, measures;
    for (int k = sys.k_min; k <= sys.k_max; ++k) {
        const auto& frac = sys.frac(k);
        if (all_zero(frac)) continue;
        GridFunction chi(g, frac);
        double nk = space_norm(X, chi, opts);
        if (nk <= 0.0) continue;
        ks.push_back(k);
        norms.push_back(nk);
        measures.push_back(annulus_measure(g, frac));
    }
    double fitted = kInf;
    for (std::size_t a = 0; a < ks.size(); ++a) {
        for (std::size_t b = a; b < ks.size(); ++b) {
            CharRatioRow row;
            row.k = ks[a];
            row.l = ks[b];
            row.ratio = norms[a] / norms[b];
            row.measure_ratio = measures[a] / measures[b];
            prof.rows.push_back(row);
            if (a != b && row.measure_ratio < 1.0 && row.ratio > 0.0) {
                double cap = std::log(row.ratio / C) / std::log(row.measure_ratio);
                fitted = std::min(fitted, cap);
            }
        }
    }
    prof.fitted_delta = std::isinf(fitted) ? 0.0 : std::max(fitted, 0.0);
    return prof;
}

}  // namespace bbfs
