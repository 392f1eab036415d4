#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "bbfs/expr.hpp"
#include "bbfs/grid.hpp"
#include "bbfs/rng.hpp"
#include "bbfs/weights.hpp"

namespace bbfs {

struct NormOptions {
    double lux_tol = 1e-8;        // relative Luxemburg bracket width
    int morrey_center_stride = 1; // subsample ball centers on big 2-d grids
};

// ---- variable exponents -----------------------------------------------------

/// Variable exponent r(.) with cached bounds and an optional log-Holder
/// certificate (c_local, c_decay, r_inf) validated on sampled pairs.
class ExponentFunction {
public:
    struct LogHolderCert {
        double c_local = 0.0;
        double c_decay = 0.0;
        double r_inf = 0.0;
    };

    static ExponentFunction constant(double r);
    static ExponentFunction from_expression(const Expression& e);
    static ExponentFunction from_function(std::function<double(Point)> fn,
                                          std::string desc);

    double operator()(const Point& x) const { return fn_(x); }
    double min_on(const Grid& g) const;
    double max_on(const Grid& g) const;
    bool is_constant() const { return constant_.has_value(); }
    double constant_value() const { return *constant_; }
    const std::string& describe() const { return desc_; }

    std::optional<LogHolderCert> cert;
    /// Samples point pairs and checks the certificate inequalities.
    bool validate_log_holder(const Grid& g, SeededRng rng, int samples = 256,
                             double slack = 1e-9) const;

private:
    std::function<double(Point)> fn_;
    std::string desc_;
    std::optional<double> constant_;
};

/// Young function Phi with an empirical validation pass (convexity on a
/// geometric ladder, monotonicity, Phi(0)=0) and Delta_2 / Nabla_2 doubling
/// constants.
class YoungFunction {
public:
    struct Validation {
        bool zero_ok = false;
        bool nondecreasing_ok = false;
        bool convex_ok = false;
        double delta2 = 0.0;  // sup Phi(2t)/Phi(t)
        double nabla2 = 0.0;  // inf Phi(2t)/(2 Phi(t))
        bool delta2_ok = false;
        bool nabla2_ok = false;
    };

    static YoungFunction power(double p);
    static YoungFunction from_expression(const Expression& e);  // variable t
    static YoungFunction from_function(std::function<double(double)> fn,
                                       std::string desc);

    double operator()(double t) const { return fn_(t); }
    Validation validate() const;
    const std::string& describe() const { return desc_; }

private:
    std::function<double(double)> fn_;
    std::string desc_;
};

// ---- the space catalogue ------------------------------------------------------

enum class SpaceTag {
    WeightedLebesgue,
    Lorentz,
    Herz,
    VarLebesgue,
    VarHerz,
    Orlicz,
    Morrey,
    BBM,
    Convexified,
};

std::vector<std::string> space_tag_names();  // stable order
std::string to_string(SpaceTag t);

struct SpaceSpec {
    struct WeightedLebesgueP {
        double p;
        WeightSpec w;
    };
    struct LorentzP {
        double p, q;
    };
    struct HerzP {
        double alpha, p, q;
        bool homogeneous;
    };
    struct VarLebesgueP {
        ExponentFunction p;
        WeightSpec w;
    };
    struct VarHerzP {
        ExponentFunction alpha, p, q;
        WeightSpec v, w;
        bool homogeneous;
    };
    struct OrliczP {
        YoungFunction phi;
        YoungFunction::Validation validation;
    };
    struct MorreyP {
        double r0, r;
    };
    struct BBMP {
        double p, q, r, tau;
    };
    struct ConvexifiedP {
        std::shared_ptr<const SpaceSpec> base;
        double ppow;
    };

    SpaceTag tag;
    std::variant<WeightedLebesgueP, LorentzP, HerzP, VarLebesgueP, VarHerzP, OrliczP,
                 MorreyP, BBMP, ConvexifiedP>
        params;
    std::string name;

    // factories validate the parameter ranges
    static SpaceSpec weighted_lebesgue(double p, WeightSpec w);
    static SpaceSpec lorentz(double p, double q);
    static SpaceSpec herz(double alpha, double p, double q, bool homogeneous = true);
    static SpaceSpec var_lebesgue(ExponentFunction p, WeightSpec w);
    static SpaceSpec var_herz(ExponentFunction alpha, ExponentFunction p,
                              ExponentFunction q, WeightSpec v, WeightSpec w,
                              bool homogeneous = true);
    static SpaceSpec orlicz(YoungFunction phi);
    static SpaceSpec morrey(double r0, double r);
    static SpaceSpec bbm(double p, double q, double r, double tau);
    static SpaceSpec convexified(SpaceSpec base, double ppow);

    bool separable() const;
    std::string describe() const;

    template <typename T>
    const T& as() const {
        return std::get<T>(params);
    }
};

// ---- norm evaluation -----------------------------------------------------------

/// rho(|f|); +inf is representable. Dispatch over the catalogue.
double space_norm(const SpaceSpec& X, const GridFunction& f,
                  const NormOptions& opts = {});

double weighted_lebesgue_norm(double p, const Weight& w, const GridFunction& f);
double lorentz_norm(double p, double q, const GridFunction& f);
double herz_norm(double alpha, double p, double q, bool homogeneous,
                 const GridFunction& f);
double variable_lebesgue_norm(const ExponentFunction& p, const Weight& w,
                              const GridFunction& f, double tol = 1e-8);
double orlicz_norm(const YoungFunction& phi, const GridFunction& f, double tol = 1e-8);
double morrey_norm(double r0, double r, const GridFunction& f,
                   const NormOptions& opts = {});
double bbm_norm(double p, double q, double r, double tau, const GridFunction& f);

struct VarHerzOptions {
    bool homogeneous = true;
    double tol = 1e-8;
};
double variable_herz_norm(const ExponentFunction& alpha, const ExponentFunction& p,
                          const ExponentFunction& q, const Weight& v, const Weight& w,
                          const GridFunction& f, const VarHerzOptions& opts = {});

// ---- Luxemburg machinery --------------------------------------------------------

struct LuxemburgOptions {
    double tol = 1e-8;       // relative bracket width target
    double lambda_hint = 0;  // initial bracket guess (0 = auto)
    int max_steps = 400;     // geometric expansion / bisection cap
};

struct LuxemburgResult {
    double value = 0.0;  // certified feasible upper end of the bracket
    double lo = 0.0, hi = 0.0;
    int evaluations = 0;
};

/// inf{lambda > 0 : modular(lambda) <= 1} by geometric bracketing plus
/// bisection. Returns +inf when no feasible lambda exists below the cap;
/// throws ContractError when the modular is detected non-monotone.
LuxemburgResult luxemburg_norm(const std::function<double(double)>& modular,
                               const LuxemburgOptions& opts = {});

/// One block of a mixed-sequence modular: sampled values with per-cell
/// quadrature fractions (annulus clipping).
struct SequenceBlock {
    GridFunction values;
    std::vector<double> fractions;  // empty = all ones
};

/// Luxemburg norm of {f_j} in l^{q(.)}(L^{p(.)}(w)) via the summed modular
/// sum_j || |f_j/mu|^{q(.)} ||_{L^{p(.)/q(.)}(w)}.
double mixed_sequence_norm(const ExponentFunction& q, const ExponentFunction& p,
                           const Weight& w, const std::vector<SequenceBlock>& blocks,
                           double tol = 1e-8);

// ---- annuli ----------------------------------------------------------------------

/// Dyadic annuli C_k = B(2^k) \ B(2^{k-1}) clipped to the grid box, with
/// fractional boundary cells. The innermost annulus absorbs the residual
/// hole B(2^{k_min-1}) so the family partitions the box exactly.
struct AnnulusSystem {
    int k_min = 0;
    int k_max = 0;
    bool hole_merged = true;
    std::vector<std::vector<double>> fractions;  // index k - k_min
    std::vector<double> head_fractions;          // B(0,1) for the non-homogeneous head

    const std::vector<double>& frac(int k) const {
        return fractions[static_cast<std::size_t>(k - k_min)];
    }
    static AnnulusSystem build(const Grid& g);
};

// ---- duality / axioms --------------------------------------------------------------

/// Explicit Kothe duals: weighted Lebesgue (p > 1) and Lorentz (p > 1).
/// nullopt signals the caller to fall back to pairing lower bounds.
std::optional<SpaceSpec> kothe_dual(const SpaceSpec& X);

struct PairingResult {
    double lhs = 0.0;  // integral |f g|
    double rhs = 0.0;  // ||f||_X ||g||_X'
    double ratio = 0.0;
};

PairingResult pairing_check(const SpaceSpec& X, const GridFunction& f,
                            const GridFunction& g, const NormOptions& opts = {});

/// Lower bound for ||g||_{X'} by pairing against a probe battery.
double dual_norm_lower_bound(const SpaceSpec& X, const GridFunction& g,
                             const std::vector<GridFunction>& probes,
                             const NormOptions& opts = {});

using NormEvaluator = std::function<double(const GridFunction&)>;

struct AxiomEntry {
    std::string id;
    bool pass = true;
    double worst = 0.0;  // worst slack / constant observed
    std::string note;
};

struct AxiomsReport {
    bool pass = true;
    std::vector<AxiomEntry> entries;
};

/// (P1)-(P5) battery check for an arbitrary norm evaluator.
AxiomsReport axioms_check(const NormEvaluator& norm,
                          const std::vector<GridFunction>& battery,
                          const std::vector<Region>& balls, double tol = 1e-6);
AxiomsReport axioms_check(const SpaceSpec& X, const std::vector<GridFunction>& battery,
                          const std::vector<Region>& balls, double tol = 1e-6,
                          const NormOptions& opts = {});

/// ||f chi_{E_j}||_X along a shrinking set sequence (diagnostic only).
std::vector<double> absolute_continuity_probe(const SpaceSpec& X, const GridFunction& f,
                                              const std::vector<Region>& sets,
                                              const NormOptions& opts = {});

struct CharRatioRow {
    int k = 0, l = 0;
    double ratio = 0.0;          // ||chi_k||_X / ||chi_l||_X
    double measure_ratio = 0.0;  // |C_k| / |C_l|
};

struct CharRatioProfile {
    std::vector<CharRatioRow> rows;
    double fitted_delta = 0.0;  // largest delta with ratio <= C (|C_k|/|C_l|)^delta
    double C = 1.0;
};

CharRatioProfile characteristic_ratio_profile(const SpaceSpec& X, const Grid& g,
                                              double C = 1.0,
                                              const NormOptions& opts = {});

}  // namespace bbfs
