#pragma once

#include <optional>

#include "bbfs/batteries.hpp"
#include "bbfs/grid.hpp"
#include "bbfs/operators.hpp"
#include "bbfs/report.hpp"
#include "bbfs/rng.hpp"
#include "bbfs/spaces.hpp"
#include "bbfs/wavelets.hpp"
#include "bbfs/weights.hpp"

namespace bbfs {

struct HarnessOptions {
    MaximalOptions max_opts{};
    NormOptions norm_opts{};
    std::uint64_t seed = 42;
    double slack_tol = 1e-9;          // inequality slack floor
    double equivalence_budget = 50.0; // max/min budget for equivalence ratios
    double drift_budget = 2.0;        // growth budget for stability reruns
    double convergence_tol = 1e-8;    // relative tail target for partial sums
    double young_eps = 0.25;          // epsilon in a b^{p-1} <= C_eps a^p + eps b^p
    double alpha_override = 0.0;      // 0 = auto per the margin rule
    double beta_override = 0.0;       // 0 = empirical estimator
    int rubio_l_max = 30;
    double rubio_tol = 1e-6;
    double norm_safety = 2.0;         // operator norm estimate inflation
    int holdout_denominator = 2;      // seeded 1/2 train, 1/2 held-out
};

/// N(t) = a t^b, increasing on [1, inf).
struct NFunction {
    double a = 1.0;
    double b = 1.0;
    double operator()(double t) const;
};

/// Family of pairs satisfying ||f||_{L^p(w)} <= N([w]_{A_p}) ||g||_{L^p(w)}.
/// Generated pairs re-validate the inequality on the validation weight set
/// (unit plus two capped powers) before use.
struct PairFamily {
    enum class Kind { maximal_pairs, riesz_pairs, wavelet_pairs, dominated_pairs };

    Kind kind = Kind::maximal_pairs;
    NFunction N{0.0, 1.0};  // a = 0 -> calibrate on the validation weights
    double p = 2.0;
    double s = 0.0;                           // wavelet pairs
    const WaveletSystem* system = nullptr;    // wavelet pairs
    double domination = 0.5;                  // dominated pairs: g >= c f

    std::vector<std::pair<GridFunction, GridFunction>> generate(
        const std::vector<GridFunction>& probes, const HarnessOptions& ctx,
        SeededRng rng) const;

    /// Calibrates/validates N on the validation weights; throws ContractError
    /// if an explicit N is violated. Returns the validated N and the worst
    /// observed a-requirement.
    std::pair<NFunction, double> validate(
        const std::vector<std::pair<GridFunction, GridFunction>>& pairs,
        const HarnessOptions& ctx) const;

    static std::string kind_name(Kind k);
};

std::vector<std::string> harness_check_names();  // the six checks, stable order

// ---- checks -------------------------------------------------------------------

VerificationReport extrapolation_check(const PairFamily& family, const SpaceSpec& X,
                                       const std::vector<ProbeDesc>& battery,
                                       const Grid& g, const HarnessOptions& ctx);

VerificationReport proof_chain_check(const GridFunction& f, const GridFunction& g,
                                     const GridFunction& h, double p,
                                     const SpaceSpec& X, const HarnessOptions& ctx);

VerificationReport wavelet_equivalence_check(const SpaceSpec& X, double s,
                                             const WaveletSystem& sys,
                                             const std::vector<ProbeDesc>& battery,
                                             const Grid& g, const HarnessOptions& ctx);

VerificationReport convergence_check(const SpaceSpec& X, const WaveletSystem& sys,
                                     const GridFunction& f,
                                     const std::vector<int>& j_cut_schedule,
                                     const HarnessOptions& ctx);

VerificationReport vector_valued_check(const SpaceSpec& X,
                                       const std::vector<GridFunction>& batch, double r,
                                       const HarnessOptions& ctx);

VerificationReport riesz_boundedness_check(const SpaceSpec& X,
                                           const std::vector<ProbeDesc>& battery,
                                           const Grid& g, const HarnessOptions& ctx);

// ---- shared helpers -------------------------------------------------------------

/// Validation weights for family contracts: unit and two capped powers.
std::vector<WeightSpec> validation_weights();

/// ||M||_{X->X} estimate over a default probe battery, inflated by
/// ctx.norm_safety.
double maximal_norm_estimate(const SpaceSpec& X, const Grid& g,
                             const HarnessOptions& ctx);

/// Closed-form C_eps with a b^{p-1} <= C_eps a^p + eps b^p:
/// C_eps = (1/p) (eps p')^{1-p}.
double young_constant(double p, double eps);

/// Default alpha: max(4, 2 beta^{1/p} / normM + 1).
double default_alpha(double beta_hat, double p, double norm_m);

}  // namespace bbfs
