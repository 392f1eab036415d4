#pragma once

#include "bbfs/grid.hpp"

namespace bbfs {

/// Normalization of the maximal average over B(x,r) clipped to the box:
/// `paper` divides by r^n, `measure` by the full ball measure |B(0,r)|.
/// With `measure` the single-cell candidate gives M f >= |f| pointwise.
enum class MaxNormalization { measure, paper };

struct MaximalOptions {
    MaxNormalization normalization = MaxNormalization::measure;
    /// Geometric radius ladder {h/2, h, 2h, ...} by default; exhaustive
    /// enumerates every half-cell radius (oracle mode, small grids only).
    bool exhaustive_radii = false;
};

/// Hardy-Littlewood maximal operator over Euclidean balls centered at cell
/// centers, truncated at the box boundary.
GridFunction maximal(const GridFunction& f, const MaximalOptions& opts = {});

/// M^l f; M^0 f = |f|.
GridFunction iterate_maximal(const GridFunction& f, int l,
                             const MaximalOptions& opts = {});

/// Truncated Riesz transform along `axis` (the Hilbert transform in
/// dimension 1, unnormalized): sum over cell centers at distance > epsilon
/// of (x_j - y_j)/|x-y|^{n+1} f(y) h^n. Requires epsilon >= h.
GridFunction riesz(const GridFunction& f, int axis, double epsilon);
GridFunction riesz(const GridFunction& f, int axis);

enum class BesselDirection { forward, inverse };

/// Spectral Bessel potential (1 + |xi|^2)^{+-s/2} with periodic semantics on
/// the box; frequencies 2 pi k / side. `inverse` inverts `forward` exactly
/// on the grid.
GridFunction bessel_potential(const GridFunction& f, double s, BesselDirection dir);

}  // namespace bbfs
