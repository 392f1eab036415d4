#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bbfs/expr.hpp"
#include "bbfs/grid.hpp"
#include "bbfs/operators.hpp"
#include "bbfs/rng.hpp"

namespace bbfs {

struct SpaceSpec;  // spaces.hpp
struct NormOptions;

/// Parametric weight family, grid-free; materialized per grid at cell
/// centers (power weights therefore never hit 0 exactly).
class WeightSpec {
public:
    enum class Kind { constant, power, capped_power, piecewise, custom, transformed };

    static WeightSpec constant(double c);
    /// |x|^alpha
    static WeightSpec power(double alpha);
    /// max(1, |x|)^alpha
    static WeightSpec capped_power(double alpha);
    /// First matching piece wins; `fallback` elsewhere.
    static WeightSpec piecewise(std::vector<std::pair<Box, double>> pieces, double fallback);
    static WeightSpec custom(Expression e);
    /// base^expo, evaluated pointwise.
    static WeightSpec power_of(WeightSpec base, double expo);

    /// Throws NumericError if any cell value is nonpositive or non-finite.
    GridFunction materialize(const Grid& g) const;
    std::string describe() const;

private:
    WeightSpec() = default;
    Kind kind_ = Kind::constant;
    double a_ = 1.0;
    std::vector<std::pair<Box, double>> pieces_;
    std::optional<Expression> expr_;
    std::shared_ptr<const WeightSpec> base_;
};

using Weight = GridFunction;

/// Checks strict positivity and finiteness.
void validate_weight(const Weight& w);

// ---- Muckenhoupt estimates --------------------------------------------------

/// Dyadic cube family anchored at the box corner: sides h*2^m for m = 0..top,
/// plus half-side translates where those still align with cells.
struct CubeFamilyOptions {
    bool half_shifts = true;
    /// Restrict to cubes of side <= max_side (0 = no cap).
    double max_side = 0.0;
    /// Restrict to cubes of side >= min_side (0 = no floor). A floor makes
    /// the family shallower, mimicking a coarser cube level.
    double min_side = 0.0;
};

struct CubeRef {
    Point lo{0.0, 0.0};
    double side = 0.0;
};

/// Lower estimate of [w]_{A_p} over the dyadic cube family with the
/// attaining cube. Cube averages are exact for cell-constant weights.
struct ApEstimate {
    double p = 2.0;
    double value = 1.0;
    CubeRef witness;
    std::int64_t cube_count = 0;
};

ApEstimate ap_constant(const Weight& w, double p, const CubeFamilyOptions& opts = {});

/// Cube-based A1 estimate sup_Q avg_Q(w) / min_Q(w) over the same family.
double a1_constant_cubes(const Weight& w, const CubeFamilyOptions& opts = {});

/// ||Mw / w||_inf with the chosen maximal normalization.
double a1_constant(const Weight& w, const MaximalOptions& opts = {});

/// sigma = w^{-1/(p-1)} pointwise, p > 1.
Weight dual_weight(const Weight& w, double p);

// ---- doubling / ratio exponents ----------------------------------------------

struct BallFamilyOptions {
    int center_samples = 8;
    int subsets_per_ball = 4;
    bool include_origin_centers = true;
};

struct DoublingEstimate {
    double p_v = 1.0;    // smallest exponent with v(B)/v(E) <= C (|B|/|E|)^{p_v}
    double delta = 1.0;  // largest exponent with v(E)/v(B) <= C (|E|/|B|)^delta
    double C = 1.0;
    int pairs = 0;
    CubeRef witness_e;  // attaining subset for p_v
};

DoublingEstimate doubling_exponents(const Weight& v, const BallFamilyOptions& opts,
                                    SeededRng rng, double C = 1.0);

// ---- Rubio de Francia majorant ------------------------------------------------

struct RubioOptions {
    double alpha = 4.0;       // series ratio parameter, >= 2
    double norm_m = 0.0;      // operator norm estimate ||M||_{X->X} (required)
    int l_max = 30;           // truncation cap
    double tol = 1e-6;        // relative tail target (in units of ||k||_X)
    MaximalOptions max_opts{};
};

struct RubioResult {
    GridFunction majorant;
    double tail_bound = 0.0;  // certified X-norm bound on the dropped tail
    double k_norm = 0.0;      // ||k||_X
    double contraction_q = 0.0;
    int terms_used = 0;
    std::vector<double> term_norms;  // ||M^l k / (alpha normM)^l||_X
};

/// Truncated majorant sum_{l<=l_max} M^l k / (alpha ||M||)^l with a certified
/// geometric tail bound. Throws NumericError if the series does not contract.
RubioResult rubio_majorant(const GridFunction& k, const SpaceSpec& X,
                           const RubioOptions& opts);

/// max over probes of ||T f||_X / ||f||_X, inflated by `safety`.
double estimate_operator_norm(const SpaceSpec& X,
                              const std::function<GridFunction(const GridFunction&)>& op,
                              const std::vector<GridFunction>& probes,
                              double safety = 2.0);

/// g + eps * M chi_{B(1)} with eps = eps_rel * ||g||_X; strictly positive.
GridFunction regularize_positive(const GridFunction& g, const SpaceSpec& X,
                                 double eps_rel = 1e-8,
                                 const MaximalOptions& max_opts = {});

struct CompositeWeightOptions {
    double alpha = 4.0;
    double norm_m_x = 0.0;       // ||M||_{X->X} estimate
    double norm_m_xdual = 0.0;   // ||M||_{X'->X'} estimate
    int l_max = 30;
    double tol = 1e-6;
    MaximalOptions max_opts{};
};

struct CompositeWeightResult {
    Weight w;             // R_{g+f}^{1-p} * R'_h
    ApEstimate ap;
    double bound = 0.0;   // (alpha ||M||_X)^{p-1} (alpha ||M||_{X'})
    RubioResult r_gf;
    RubioResult r_h;
};

/// The extrapolation weight of the proof chain and its A_p estimate.
/// Requires g, h strictly positive (see regularize_positive).
CompositeWeightResult composite_extrapolation_weight(
    const GridFunction& f, const GridFunction& g, const GridFunction& h, double p,
    const SpaceSpec& X, const SpaceSpec& Xdual, const CompositeWeightOptions& opts);

}  // namespace bbfs
