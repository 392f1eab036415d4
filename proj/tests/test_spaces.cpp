#include <doctest.h>

#include <cmath>
#include <numbers>

#include "bbfs/rng.hpp"
#include "bbfs/spaces.hpp"

using namespace bbfs;

namespace {

GridFunction random_function(const Grid& g, SeededRng& rng, double lo = -1.0,
                             double hi = 1.0) {
    std::vector<double> v(static_cast<std::size_t>(g.cell_count()));
    for (auto& x : v) x = rng.uniform(lo, hi);
    return GridFunction(g, std::move(v));
}

GridFunction indicator(const Grid& g, double a, double b) {
    return sample(g, [a, b](Point x) { return x[0] >= a && x[0] <= b ? 1.0 : 0.0; });
}

}  // namespace

TEST_CASE("weighted Lebesgue norm") {
    Grid g = Grid::make(1, Box::interval(-2, 2), 8);
    Weight one = WeightSpec::constant(1.0).materialize(g);
    GridFunction chi = indicator(g, 0.0, 1.0);
    CHECK(weighted_lebesgue_norm(2.0, one, chi) == doctest::Approx(1.0).epsilon(1e-12));

    // f = chi_{[0,1]}, w(x) = |x| on cells, p = 1: integral of x over [0,1]
    Weight wx = WeightSpec::power(1.0).materialize(g);
    CHECK(weighted_lebesgue_norm(1.0, wx, chi) == doctest::Approx(0.5).epsilon(1e-9));

    SeededRng rng(3);
    GridFunction f = random_function(g, rng);
    CHECK(weighted_lebesgue_norm(2.0, one, -3.0 * f) ==
          doctest::Approx(3.0 * weighted_lebesgue_norm(2.0, one, f)).epsilon(1e-12));
}

TEST_CASE("lorentz norm") {
    Grid g = Grid::make(1, Box::interval(-2, 2), 7);
    SeededRng rng(5);
    GridFunction f = random_function(g, rng);
    // q = p collapses to the Lebesgue norm exactly
    for (double p : {1.5, 2.0, 3.0})
        CHECK(lorentz_norm(p, p, f) == doctest::Approx(lp_norm(f, p)).epsilon(1e-12));

    // indicator with q = inf: |E|^{1/p}
    GridFunction chi = indicator(g, -0.5, 0.75);
    CHECK(lorentz_norm(2.0, kInf, chi) ==
          doctest::Approx(std::sqrt(1.25)).epsilon(1e-12));

    // two-valued function against the hand-summed closed form (p=2, q=1)
    Grid g2 = Grid::make(1, Box::interval(0, 1), 3);
    GridFunction two = sample(g2, [](Point x) { return x[0] < 0.25 ? 3.0 : 1.0; });
    double m1 = 0.25, m2 = 1.0;
    double expect =
        3.0 * 2.0 * std::sqrt(m1) + 1.0 * 2.0 * (std::sqrt(m2) - std::sqrt(m1));
    CHECK(lorentz_norm(2.0, 1.0, two) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("herz norm") {
    Grid g = Grid::make(1, Box::interval(-4, 4), 7);
    SeededRng rng(7);
    GridFunction f = random_function(g, rng);
    // alpha = 0, q = p, homogeneous: annuli partition the box
    for (double p : {1.5, 2.0})
        CHECK(herz_norm(0.0, p, p, true, f) ==
              doctest::Approx(lp_norm(f, p)).epsilon(1e-9));

    // f = chi_{C_1}: single annulus term 2^alpha |C_1|^{1/p}, |C_1| = 2
    GridFunction chi1 = sample(g, [](Point x) {
        double a = std::abs(x[0]);
        return a > 1.0 && a <= 2.0 ? 1.0 : 0.0;
    });
    double v = herz_norm(0.7, 2.0, 3.0, true, chi1);
    CHECK(v == doctest::Approx(std::pow(2.0, 0.7) * std::sqrt(2.0)).epsilon(1e-9));

    // f supported in B(1): the non-homogeneous norm is the head term alone
    GridFunction inside = sample(g, [](Point x) {
        return std::abs(x[0]) < 0.9 ? 2.0 : 0.0;
    });
    std::vector<double> frac =
        region_fractions(g, Region{BallRegion{{0, 0}, 1.0, false}});
    CHECK(herz_norm(0.3, 2.0, 2.5, false, inside) ==
          doctest::Approx(lp_norm(inside, 2.0, nullptr, &frac)).epsilon(1e-9));
}

TEST_CASE("luxemburg norm machinery") {
    Grid g = Grid::make(1, Box::interval(-1, 1), 7);
    SeededRng rng(9);
    GridFunction f = random_function(g, rng);
    Weight one = WeightSpec::constant(1.0).materialize(g);
    // constant exponent: Luxemburg equals the closed-form L^p norm
    double lux = variable_lebesgue_norm(ExponentFunction::constant(2.5), one, f);
    CHECK(lux == doctest::Approx(lp_norm(f, 2.5)).epsilon(1e-6));

    // Orlicz with Phi(t) = t^p
    CHECK(orlicz_norm(YoungFunction::power(3.0), f) ==
          doctest::Approx(lp_norm(f, 3.0)).epsilon(1e-6));

    // two-exponent fixture: p = 2 on (-1,0), 3 on (0,1), f = chi_{(-1,1)}:
    // the modular root solves t^3 + t^2 = 1
    ExponentFunction pw = ExponentFunction::from_function(
        [](Point x) { return x[0] < 0.0 ? 2.0 : 3.0; }, "2|3");
    GridFunction chi = GridFunction::constant(g, 1.0);
    double lam = variable_lebesgue_norm(pw, one, chi);
    // independent root of t^3 + t^2 - 1 = 0 by bisection
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        (mid * mid * mid + mid * mid - 1.0 < 0.0 ? lo : hi) = mid;
    }
    CHECK(lam == doctest::Approx(1.0 / lo).epsilon(1e-7));
    CHECK(lam == doctest::Approx(1.3247180).epsilon(1e-6));

    // bracketing certificate: modular(value (1+2tol)) <= 1 <= modular(value (1-2tol))
    LuxemburgOptions lopt;
    lopt.tol = 1e-8;
    auto modular = [&](double l) {
        std::vector<double> terms(static_cast<std::size_t>(chi.size()));
        for (std::int64_t i = 0; i < chi.size(); ++i)
            terms[static_cast<std::size_t>(i)] =
                std::pow(1.0 / l, pw(g.center(i))) * g.cell_volume();
        return pairwise_sum(terms);
    };
    LuxemburgResult lr = luxemburg_norm(modular, lopt);
    CHECK(modular(lr.value * (1.0 + 2e-8)) <= 1.0 + 1e-12);
    CHECK(modular(lr.value * (1.0 - 2e-8)) >= 1.0 - 1e-12);

    // non-monotone modular is a contract violation
    CHECK_THROWS_AS(luxemburg_norm([](double l) { return l; }, lopt), ContractError);
}

TEST_CASE("mixed sequence norm") {
    Grid g = Grid::make(1, Box::interval(-2, 2), 6);
    Weight one = WeightSpec::constant(1.0).materialize(g);
    SeededRng rng(11);

    SUBCASE("constant exponents reduce to the iterated norm") {
        std::vector<SequenceBlock> blocks;
        std::vector<double> norms;
        for (int j = 0; j < 3; ++j) {
            GridFunction fj = random_function(g, rng);
            blocks.push_back({fj, {}});
            norms.push_back(lp_norm(fj, 2.0));
        }
        double got = mixed_sequence_norm(ExponentFunction::constant(3.0),
                                         ExponentFunction::constant(2.0), one, blocks);
        double expect = std::pow(std::pow(norms[0], 3.0) + std::pow(norms[1], 3.0) +
                                     std::pow(norms[2], 3.0),
                                 1.0 / 3.0);
        CHECK(got == doctest::Approx(expect).epsilon(1e-6));
    }

    SUBCASE("single nonzero block gives that block's inner norm") {
        GridFunction fj = random_function(g, rng);
        std::vector<SequenceBlock> blocks{{GridFunction::zeros(g), {}}, {fj, {}}};
        double got = mixed_sequence_norm(ExponentFunction::constant(2.5),
                                         ExponentFunction::constant(2.5), one, blocks);
        CHECK(got == doctest::Approx(lp_norm(fj, 2.5)).epsilon(1e-6));
    }

    SUBCASE("two variable-exponent blocks against a dense mu scan") {
        ExponentFunction q = ExponentFunction::from_function(
            [](Point x) { return 2.0 + 0.5 * (x[0] > 0.0 ? 1.0 : 0.0); }, "q");
        ExponentFunction p = ExponentFunction::from_function(
            [](Point x) { return 2.5 + 0.5 * (x[0] > 0.0 ? 1.0 : 0.0); }, "p");
        std::vector<SequenceBlock> blocks{{random_function(g, rng), {}},
                                          {random_function(g, rng), {}}};
        double got = mixed_sequence_norm(q, p, one, blocks, 1e-9);
        // oracle: dense scan of mu with an independent inner bisection
        auto inner_norm = [&](const GridFunction& fj, double mu) {
            auto mod2 = [&](double lam) {
                double acc = 0.0;
                for (std::int64_t i = 0; i < fj.size(); ++i) {
                    Point c = g.center(i);
                    double u = std::pow(std::abs(fj[i]) / mu, q(c));
                    acc += std::pow(u / lam, p(c) / q(c)) * g.cell_volume();
                }
                return acc;
            };
            double lo = 1e-9, hi = 1e9;
            for (int it = 0; it < 200; ++it) {
                double mid = std::sqrt(lo * hi);
                (mod2(mid) > 1.0 ? lo : hi) = mid;
            }
            return hi;
        };
        double best = kInf;
        for (double mu = got * 0.9; mu <= got * 1.1; mu *= 1.0005) {
            double m = inner_norm(blocks[0].values, mu) + inner_norm(blocks[1].values, mu);
            if (m <= 1.0) best = std::min(best, mu);
        }
        CHECK(got == doctest::Approx(best).epsilon(1e-3));
    }
}

TEST_CASE("variable herz norm") {
    Grid g = Grid::make(1, Box::interval(-4, 4), 6);
    Weight one = WeightSpec::constant(1.0).materialize(g);
    SeededRng rng(13);
    GridFunction f = random_function(g, rng);

    SUBCASE("alpha = 0 with constant p, q collapses to plain Herz") {
        double vh = variable_herz_norm(
            ExponentFunction::constant(1e-300), ExponentFunction::constant(2.0),
            ExponentFunction::constant(2.5), one, one, f, {true, 1e-9});
        double hz = herz_norm(0.0, 2.0, 2.5, true, f);
        CHECK(vh == doctest::Approx(hz).epsilon(1e-6));
    }

    SUBCASE("one-annulus support with constant exponents") {
        GridFunction chi1 = sample(g, [](Point x) {
            double a = std::abs(x[0]);
            return a > 1.0 && a <= 2.0 ? 1.0 : 0.0;
        });
        double alpha = 0.4;
        double vh = variable_herz_norm(
            ExponentFunction::constant(alpha), ExponentFunction::constant(2.0),
            ExponentFunction::constant(2.0), one, one, chi1, {true, 1e-9});
        // v(B_1) = |B(0,2) cap box| = 4; block norm = 4^alpha sqrt(2)
        CHECK(vh ==
              doctest::Approx(std::pow(4.0, alpha) * std::sqrt(2.0)).epsilon(1e-6));
    }
}

TEST_CASE("orlicz norm") {
    Grid g = Grid::make(1, Box::interval(-2, 2), 7);
    SeededRng rng(17);
    GridFunction f = random_function(g, rng);

    YoungFunction llog = YoungFunction::from_function(
        [](double t) { return t * t * std::max(1.0, std::log(std::numbers::e + t)); },
        "t^2 max(1, log(e+t))");
    auto val = llog.validate();
    CHECK(val.zero_ok);
    CHECK(val.convex_ok);
    CHECK(val.nondecreasing_ok);
    CHECK(val.delta2_ok);
    CHECK(val.nabla2_ok);

    // on an indicator the norm solves Phi(1/lambda) |E| = 1
    GridFunction chi = indicator(g, -0.5, 0.5);
    double nn = orlicz_norm(llog, chi);
    double lo = 1e-6, hi = 1e6;
    for (int i = 0; i < 200; ++i) {
        double mid = std::sqrt(lo * hi);
        (llog(1.0 / mid) * 1.0 > 1.0 ? lo : hi) = mid;
    }
    CHECK(nn == doctest::Approx(hi).epsilon(1e-6));

    // homogeneity within the bisection tolerance
    double n1 = orlicz_norm(llog, f);
    double n2 = orlicz_norm(llog, 2.5 * f);
    CHECK(n2 == doctest::Approx(2.5 * n1).epsilon(1e-6));
}

TEST_CASE("morrey norm") {
    Grid g = Grid::make(1, Box::interval(-4, 4), 7);
    SeededRng rng(19);
    GridFunction f = random_function(g, rng);
    // r = r0 collapses to L^r via the box-covering ball
    CHECK(morrey_norm(2.0, 2.0, f) == doctest::Approx(lp_norm(f, 2.0)).epsilon(1e-9));

    // f = chi_{B(0, rho)} with dyadic rho: closed-form peak at R = rho,
    // cross-checked by a dense R scan
    const double rho = 0.5;
    GridFunction chi = indicator(g, -rho, rho);
    double got = morrey_norm(4.0, 2.0, chi);
    double scan = 0.0;
    for (double R = g.h(); R <= 8.0; R *= 1.01) {
        double mass = std::max(0.0, std::min(R, rho) * 2.0);
        scan = std::max(scan, std::pow(2.0 * R, 0.25 - 0.5) * std::sqrt(mass));
    }
    CHECK(std::pow(2.0 * rho, 0.25) == doctest::Approx(scan).epsilon(1e-3));
    CHECK(got == doctest::Approx(scan).epsilon(1e-2));

    // monotone in |f|
    GridFunction f2 = f.map([](double v) { return std::abs(v) + 0.3; });
    CHECK(morrey_norm(4.0, 2.0, f2) >= morrey_norm(4.0, 2.0, f) - 1e-12);
}

TEST_CASE("besov-bourgain-morrey norm") {
    Grid g = Grid::make(1, Box::interval(0, 1), 5);
    GridFunction chi = GridFunction::constant(g, 1.0);  // chi_{Q_{0,0}}
    double got = bbm_norm(3.0, 2.0, 4.0, 4.0, chi);
    // direct nested-sum oracle over a wide dyadic cube ladder
    double oracle;
    {
        std::vector<double> outer;
        for (int nu = -5; nu <= 5; ++nu) {
            double s = std::ldexp(1.0, -nu);
            std::vector<double> inner;
            auto m0 = static_cast<std::int64_t>(std::floor(0.0 / s));
            auto m1 = static_cast<std::int64_t>(std::ceil(1.0 / s)) - 1;
            for (std::int64_t m = m0; m <= m1; ++m) {
                double a = static_cast<double>(m) * s, b = a + s;
                double mass = std::max(0.0, std::min(b, 1.0) - std::max(a, 0.0));
                if (mass > 0.0)
                    inner.push_back(std::pow(s, 1.0 / 3.0 - 1.0 / 2.0) *
                                    std::sqrt(mass));
            }
            double acc = 0.0;
            for (double t : inner) acc += std::pow(t, 4.0);
            outer.push_back(std::pow(acc, 0.25));
        }
        double acc = 0.0;
        for (double t : outer) acc += std::pow(t, 4.0);
        oracle = std::pow(acc, 0.25);
    }
    CHECK(got == doctest::Approx(oracle).epsilon(0.02));

    SeededRng rng(23);
    GridFunction f = random_function(g, rng);
    CHECK(bbm_norm(3.0, 2.0, 4.0, 4.0, 2.0 * f) ==
          doctest::Approx(2.0 * bbm_norm(3.0, 2.0, 4.0, 4.0, f)).epsilon(1e-12));
}

TEST_CASE("collapse identities across the catalogue") {
    Grid g = Grid::make(1, Box::interval(-4, 4), 7);
    SeededRng rng(29);
    NormOptions no;
    for (int t = 0; t < 4; ++t) {
        GridFunction f = random_function(g, rng);
        double l2 = lp_norm(f, 2.0);
        CHECK(space_norm(SpaceSpec::lorentz(2.0, 2.0), f, no) ==
              doctest::Approx(l2).epsilon(1e-9));
        CHECK(space_norm(SpaceSpec::herz(0.0, 2.0, 2.0), f, no) ==
              doctest::Approx(l2).epsilon(1e-9));
        CHECK(space_norm(SpaceSpec::morrey(2.0, 2.0), f, no) ==
              doctest::Approx(l2).epsilon(1e-9));
        CHECK(space_norm(SpaceSpec::var_lebesgue(ExponentFunction::constant(2.0),
                                                 WeightSpec::constant(1.0)),
                         f, no) == doctest::Approx(l2).epsilon(1e-6));
        CHECK(space_norm(SpaceSpec::orlicz(YoungFunction::power(2.0)), f, no) ==
              doctest::Approx(l2).epsilon(1e-6));
    }
    // Convexified(L^2, ppow = 2): || |f|^{1/2} ||_2^2 = ||f||_1
    GridFunction f = random_function(g, rng);
    SpaceSpec cx = SpaceSpec::convexified(
        SpaceSpec::weighted_lebesgue(2.0, WeightSpec::constant(1.0)), 2.0);
    CHECK(space_norm(cx, f, no) == doctest::Approx(lp_norm(f, 1.0)).epsilon(1e-9));
    // the definitional identity holds for a non-Lebesgue base as well
    SpaceSpec lor = SpaceSpec::lorentz(3.0, 1.5);
    SpaceSpec cxl = SpaceSpec::convexified(lor, 1.5);
    GridFunction root = f.map([](double v) {
        return std::pow(std::abs(v), 1.0 / 1.5);
    });
    CHECK(space_norm(cxl, f, no) ==
          doctest::Approx(std::pow(space_norm(lor, root, no), 1.5)).epsilon(1e-12));
}

TEST_CASE("kothe duals and the pairing inequality") {
    Grid g = Grid::make(1, Box::interval(-2, 2), 6);
    SeededRng rng(31);

    SpaceSpec l2 = SpaceSpec::weighted_lebesgue(2.0, WeightSpec::constant(1.0));
    SpaceSpec l2d = *kothe_dual(l2);
    CHECK(l2d.as<SpaceSpec::WeightedLebesgueP>().p == doctest::Approx(2.0));

    SpaceSpec l3 = SpaceSpec::weighted_lebesgue(3.0, WeightSpec::constant(1.0));
    CHECK(kothe_dual(l3)->as<SpaceSpec::WeightedLebesgueP>().p == doctest::Approx(1.5));

    SpaceSpec lor = SpaceSpec::lorentz(2.0, 1.0);
    SpaceSpec lord = *kothe_dual(lor);
    CHECK(lord.as<SpaceSpec::LorentzP>().p == doctest::Approx(2.0));
    CHECK(std::isinf(lord.as<SpaceSpec::LorentzP>().q));

    CHECK(!kothe_dual(SpaceSpec::morrey(4.0, 2.0)).has_value());
    CHECK(!kothe_dual(SpaceSpec::weighted_lebesgue(1.0, WeightSpec::constant(1.0)))
               .has_value());

    // Cauchy-Schwarz equality case
    GridFunction chi = indicator(g, 0.0, 1.0);
    PairingResult pr = pairing_check(l2, chi, chi);
    CHECK(pr.ratio == doctest::Approx(1.0).epsilon(1e-9));

    // L^3 against the Holder extremal pair g = f^2
    GridFunction f = random_function(g, rng).map([](double v) {
        return std::abs(v) + 0.1;
    });
    GridFunction f2 = f * f;
    PairingResult pe = pairing_check(l3, f, f2);
    CHECK(pe.ratio == doctest::Approx(1.0).epsilon(1e-9));

    // L^3(w): dual weight w^{-1/2}, saturated by the weighted extremizer
    SpaceSpec l3w = SpaceSpec::weighted_lebesgue(3.0, WeightSpec::capped_power(0.6));
    Weight w = WeightSpec::capped_power(0.6).materialize(g);
    GridFunction gext = GridFunction::zip(f, w, [](double a, double b) {
        return a * a * b;
    });
    PairingResult pw = pairing_check(l3w, f, gext);
    CHECK(pw.ratio == doctest::Approx(1.0).epsilon(1e-9));

    // random pairs never exceed 1
    for (int t = 0; t < 5; ++t) {
        GridFunction a = random_function(g, rng);
        GridFunction b = random_function(g, rng);
        CHECK(pairing_check(l2, a, b).ratio <= 1.0 + 1e-9);
        CHECK(pairing_check(lor, a, b).ratio <= 1.0 + 1e-9);
    }
}

TEST_CASE("axioms check passes the catalogue and catches a broken norm") {
    Grid g = Grid::make(1, Box::interval(-4, 4), 6);
    SeededRng rng(37);
    std::vector<GridFunction> battery;
    for (int i = 0; i < 4; ++i) battery.push_back(random_function(g, rng));
    battery.push_back(indicator(g, -1.0, 1.0));
    std::vector<Region> balls{BallRegion{{0, 0}, 1.0, false},
                              BallRegion{{0.5, 0}, 2.0, false}};

    SpaceSpec l2 = SpaceSpec::weighted_lebesgue(2.0, WeightSpec::constant(1.0));
    AxiomsReport ok = axioms_check(l2, battery, balls);
    CHECK(ok.pass);
    SpaceSpec mor = SpaceSpec::morrey(4.0, 2.0);
    CHECK(axioms_check(mor, battery, balls).pass);

    // negative control: squaring the norm breaks homogeneity
    AxiomsReport broken = axioms_check(
        [&](const GridFunction& f) {
            double v = space_norm(l2, f);
            return v * v;
        },
        battery, balls);
    CHECK(!broken.pass);
    bool homogeneity_failed = false;
    for (const auto& e : broken.entries)
        if (e.id == "P1-homogeneity" && !e.pass) homogeneity_failed = true;
    CHECK(homogeneity_failed);
}

TEST_CASE("absolute continuity probe") {
    Grid g = Grid::make(1, Box::interval(-4, 4), 8);
    NormOptions no;
    std::vector<Region> sets;
    for (int j = 0; j <= 5; ++j)
        sets.push_back(BoxRegion{Box::interval(0.0, std::ldexp(1.0, -j))});

    // L^2 with f = 1: values 2^{-j/2}
    SpaceSpec l2 = SpaceSpec::weighted_lebesgue(2.0, WeightSpec::constant(1.0));
    GridFunction one = GridFunction::constant(g, 1.0);
    auto vals = absolute_continuity_probe(l2, one, sets, no);
    for (std::size_t j = 0; j < vals.size(); ++j)
        CHECK(vals[j] == doctest::Approx(std::pow(2.0, -0.5 * static_cast<double>(j)))
                             .epsilon(1e-9));

    // Morrey(4,2) with an |x|^{-1/4}-like probe: the values stall
    SpaceSpec mor = SpaceSpec::morrey(4.0, 2.0);
    GridFunction spike = sample(g, [](Point x) {
        return std::pow(std::max(std::abs(x[0]), 1e-4), -0.25);
    });
    auto mvals = absolute_continuity_probe(mor, spike, sets, no);
    CHECK(mvals.back() >= 0.3 * mvals.front());  // non-vanishing across the sequence

    // zero function gives zeros
    auto zvals = absolute_continuity_probe(l2, GridFunction::zeros(g), sets, no);
    for (double v : zvals) CHECK(v == 0.0);
}

TEST_CASE("characteristic ratio profile") {
    Grid g = Grid::make(1, Box::interval(-4, 4), 7);
    // L^p: fitted delta = 1/p exactly
    for (double p : {1.5, 2.0, 4.0}) {
        CharRatioProfile prof = characteristic_ratio_profile(
            SpaceSpec::weighted_lebesgue(p, WeightSpec::constant(1.0)), g);
        CHECK(prof.fitted_delta == doctest::Approx(1.0 / p).epsilon(1e-9));
        bool has_unit = false;
        for (const auto& r : prof.rows)
            if (r.k == r.l) {
                CHECK(r.ratio == doctest::Approx(1.0));
                has_unit = true;
            }
        CHECK(has_unit);
    }
    // log-Holder variable exponent: finite fitted delta in (0, 1)
    ExponentFunction pe = ExponentFunction::from_function(
        [](Point x) { return 2.0 + 0.4 / std::log(std::numbers::e + std::abs(x[0])); },
        "logholder");
    CharRatioProfile vp = characteristic_ratio_profile(
        SpaceSpec::var_lebesgue(pe, WeightSpec::constant(1.0)), g);
    CHECK(vp.fitted_delta > 0.0);
    CHECK(vp.fitted_delta < 1.0);
}

TEST_CASE("exponent function certificates") {
    Grid g = Grid::make(1, Box::interval(-4, 4), 6);
    ExponentFunction pe = ExponentFunction::from_function(
        [](Point x) { return 2.0 + 0.4 / std::log(std::numbers::e + std::abs(x[0])); },
        "decay");
    CHECK(pe.min_on(g) > 2.0);
    CHECK(pe.max_on(g) < 2.5);
    pe.cert = ExponentFunction::LogHolderCert{2.0, 1.0, 2.0};
    CHECK(pe.validate_log_holder(g, SeededRng(41)));
    // a too-tight certificate fails
    pe.cert = ExponentFunction::LogHolderCert{1e-4, 1e-4, 2.0};
    CHECK(!pe.validate_log_holder(g, SeededRng(41)));
}

TEST_CASE("infinite outer exponents use max aggregation") {
    Grid g = Grid::make(1, Box::interval(-4, 4), 6);
    SeededRng rng(67);
    GridFunction f = random_function(g, rng);
    // q = inf Herz is the sup of the annulus terms, and large finite q
    // increases monotonically toward it
    double hinf = herz_norm(0.3, 2.0, kInf, true, f);
    double prev = kInf;
    for (double q : {4.0, 16.0, 64.0}) {
        double hq = herz_norm(0.3, 2.0, q, true, f);
        CHECK(hq >= hinf - 1e-12);
        CHECK(hq <= prev + 1e-12);  // monotone toward the sup
        prev = hq;
    }
    CHECK(prev == doctest::Approx(hinf).epsilon(0.1));
    // BBM with tau = inf and r = inf stays finite and dominated by finite
    double binf = bbm_norm(3.0, 2.0, kInf, kInf, f);
    CHECK(std::isfinite(binf));
    CHECK(binf <= bbm_norm(3.0, 2.0, 4.0, 4.0, f) + 1e-12);
}

TEST_CASE("luxemburg norm of zero functions") {
    Grid g = Grid::make(1, Box::interval(-1, 1), 5);
    Weight one = WeightSpec::constant(1.0).materialize(g);
    CHECK(variable_lebesgue_norm(ExponentFunction::constant(2.0), one,
                                 GridFunction::zeros(g)) == 0.0);
    CHECK(orlicz_norm(YoungFunction::power(2.0), GridFunction::zeros(g)) == 0.0);
}
