#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include "bbfs/grid.hpp"

namespace bbfs {

enum class WaveletFamily { haar, db2, db3, db4 };

std::string to_string(WaveletFamily f);

/// Compactly supported orthonormal system: scaling filter, cascade-sampled
/// phi / psi on [0, 2N-1] at resolution 2^-cascade_level, base level J,
/// Holder smoothness proxy K. In dimension 2 the three generators are the
/// tensor products phi x psi, psi x phi, psi x psi.
class WaveletSystem {
public:
    /// Cascade fixed-point iteration at the requested resolution; validates
    /// the quadrature-mirror filter identities at startup. Throws
    /// NumericError if the iteration fails to converge.
    static WaveletSystem build(WaveletFamily family, int n, int base_level,
                               int cascade_level);

    WaveletFamily family() const { return family_; }
    int dim() const { return n_; }
    int base_level() const { return J_; }
    int cascade_level() const { return cascade_; }
    int support_n() const { return N_; }            // supp = [0, 2N-1]
    double support_len() const { return 2.0 * N_ - 1.0; }
    double smoothness() const { return K_; }        // Holder exponent proxy
    const std::vector<double>& filter() const { return h_; }

    /// phi / psi integral over [0, t] for dyadic t (resolution >= -cascade).
    double phi_integral(double t) const;
    double psi_integral(double t) const;
    double refinement_residual() const { return residual_; }

    /// Average of the 1-d generator 2^{j/2} F(2^j . - k) over [u0, u1].
    /// `use_psi` selects psi over phi. u0, u1 must be dyadic at resolution
    /// cascade - j or coarser.
    double generator_cell_average(bool use_psi, int j, std::int64_t k, double u0,
                                  double u1) const;

    /// Base cube Q_{j,k} and the enlarged support cube Q*_{j,k} (metadata).
    Box cube(int j, std::array<std::int64_t, 2> k) const;
    Box cube_star(int j, std::array<std::int64_t, 2> k) const;

    int generators() const { return n_ == 1 ? 1 : 3; }

private:
    WaveletFamily family_ = WaveletFamily::haar;
    int n_ = 1;
    int J_ = 0;
    int cascade_ = 10;
    int N_ = 1;
    double K_ = 0.0;
    double residual_ = 0.0;
    std::vector<double> h_;        // scaling filter, sum = sqrt(2)
    std::vector<double> phi_int_;  // prefix integrals at resolution 2^-cascade
    std::vector<double> psi_int_;
};

/// Coefficients <f, phi_{J,k}> and <f, psi^l_{j,k}> for indices whose
/// supports meet the grid box. l = 0 is the scaling layer; details use
/// l = 1 .. 2^n - 1 at levels J <= j <= j_max.
struct WaveletCoefficients {
    struct Layer {
        int l = 0;  // 0 = scaling (at j = J), else detail generator index
        int j = 0;
        std::array<std::int64_t, 2> k0{0, 0};  // index offsets
        std::array<std::int64_t, 2> dims{1, 1};
        std::vector<double> values;

        double at(std::array<std::int64_t, 2> k) const {
            for (int a = 0; a < 2; ++a)
                if (k[a] < k0[a] || k[a] >= k0[a] + dims[a]) return 0.0;
            return values[static_cast<std::size_t>((k[0] - k0[0]) +
                                                   dims[0] * (k[1] - k0[1]))];
        }
    };

    int J = 0;
    int j_max = 0;
    int n = 1;
    Grid grid;
    Layer scaling;
    std::vector<Layer> details;  // ordered by (j, l)

    WaveletCoefficients() : grid(Grid::make(1, Box::interval(0, 1), 0)) {}

    double sum_squares() const;
    std::int64_t count() const;
};

/// Quadrature analysis against cell-averaged generators; exact for
/// cell-constant f whenever the cascade resolves the grid (cascade >= L - J).
/// Requires j_max <= grid level - margin.
WaveletCoefficients analyze(const GridFunction& f, const WaveletSystem& sys,
                            int j_max, int margin = 2);

/// V f = (sum_k |<f,phi_{J,k}> chi_{J,k}|^2)^{1/2} as a cell function.
GridFunction square_function_V(const WaveletCoefficients& c, const WaveletSystem& sys);

/// W_s f with scale weight 2^{js}.
GridFunction square_function_W(const WaveletCoefficients& c, const WaveletSystem& sys,
                               double s);

/// Truncated expansion: scaling layer plus details with J <= j <= j_cut,
/// synthesized from cell-averaged generators.
GridFunction partial_sum(const WaveletCoefficients& c, const WaveletSystem& sys,
                         int j_cut);

/// Cell-averaged generator as a grid function (basis-element probes).
GridFunction wavelet_generator(const WaveletSystem& sys, const Grid& g, int l, int j,
                               std::array<std::int64_t, 2> k);

/// Sparse CSV rows "l,j,k1[,k2],value".
void write_coefficients_csv(const WaveletCoefficients& c, std::ostream& os);

}  // namespace bbfs
