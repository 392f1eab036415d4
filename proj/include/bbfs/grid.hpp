#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "bbfs/numerics.hpp"

namespace bbfs {

inline constexpr int kMaxDim = 2;
inline constexpr std::int64_t kDefaultMaxCells = std::int64_t(1) << 23;

using Point = std::array<double, kMaxDim>;

/// Axis-aligned box; only the first n axes are meaningful.
struct Box {
    int n = 1;
    Point lo{0.0, 0.0};
    Point hi{1.0, 0.0};

    static Box interval(double a, double b) { return Box{1, {a, 0.0}, {b, 0.0}}; }
    static Box rect(double ax, double bx, double ay, double by) {
        return Box{2, {ax, ay}, {bx, by}};
    }

    double side(int axis) const { return hi[axis] - lo[axis]; }
    double volume() const;
    double max_side() const;
    /// Euclidean diameter of the box.
    double diameter() const;
    /// Largest Euclidean distance from the origin to a corner.
    double circumradius_from_origin() const;
    bool contains(const Point& x) const;
};

/// Uniform dyadic grid on a box: cell side h = 2^-level, cells closed under
/// the absolute dyadic lattice (box endpoints are multiples of h).
class Grid {
public:
    /// Validates and builds. Throws ContractError on a non-dyadic box, bad
    /// dimension/level, or cell count above `max_cells`.
    static Grid make(int n, const Box& box, int level,
                     std::int64_t max_cells = kDefaultMaxCells);

    int dim() const { return box_.n; }
    const Box& box() const { return box_; }
    int level() const { return level_; }
    double h() const { return h_; }
    double cell_volume() const;

    std::int64_t cells(int axis) const { return cells_[axis]; }
    std::int64_t cell_count() const { return count_; }

    std::int64_t flat(std::int64_t ix, std::int64_t iy = 0) const {
        return ix + cells_[0] * iy;
    }
    std::array<std::int64_t, 2> multi(std::int64_t flat) const {
        return {flat % cells_[0], flat / cells_[0]};
    }
    Point center(std::int64_t flat) const;

    bool operator==(const Grid& o) const;
    bool operator!=(const Grid& o) const { return !(*this == o); }

private:
    Grid() = default;
    Box box_;
    int level_ = 0;
    double h_ = 1.0;
    std::array<std::int64_t, 2> cells_{1, 1};
    std::int64_t count_ = 1;
};

/// Sampled function, constant on each grid cell. The universal carrier for
/// probes, weights, and operator outputs.
class GridFunction {
public:
    /// Trivial one-cell placeholder; useful for default-constructed results.
    GridFunction();
    GridFunction(Grid grid, std::vector<double> values);
    static GridFunction zeros(const Grid& g);
    static GridFunction constant(const Grid& g, double c);

    const Grid& grid() const { return grid_; }
    std::int64_t size() const { return static_cast<std::int64_t>(values_.size()); }
    double operator[](std::int64_t i) const { return values_[static_cast<std::size_t>(i)]; }
    double& at(std::int64_t i) { return values_[static_cast<std::size_t>(i)]; }
    const std::vector<double>& values() const { return values_; }

    GridFunction map(const std::function<double(double)>& fn) const;
    static GridFunction zip(const GridFunction& a, const GridFunction& b,
                            const std::function<double(double, double)>& fn);

    friend GridFunction operator+(const GridFunction& a, const GridFunction& b);
    friend GridFunction operator-(const GridFunction& a, const GridFunction& b);
    friend GridFunction operator*(double c, const GridFunction& f);
    friend GridFunction operator*(const GridFunction& a, const GridFunction& b);

    double max_abs() const;

private:
    Grid grid_;
    std::vector<double> values_;
};

void require_same_grid(const GridFunction& a, const GridFunction& b);

/// Point evaluation at cell centers. Throws NumericError on non-finite samples.
GridFunction sample(const Grid& g, const std::function<double(Point)>& fn);

// ---- regions ------------------------------------------------------------

struct AllRegion {};
struct BoxRegion {
    Box b;
};
/// Metric ball; `linf` true gives the cube Q(center, radius), otherwise the
/// Euclidean ball B(center, radius).
struct BallRegion {
    Point center{0.0, 0.0};
    double radius = 1.0;
    bool linf = false;
};
using Region = std::variant<AllRegion, BoxRegion, BallRegion>;

/// Fraction of cell `i` covered by the region, in [0,1]. Exact for boxes and
/// for balls in dimension 1; Euclidean balls in dimension 2 use a fixed
/// Simpson rule on boundary cells.
double cell_fraction(const Grid& g, std::int64_t i, const Region& r);

/// All cell fractions for a region (deterministic order).
std::vector<double> region_fractions(const Grid& g, const Region& r);

/// Midpoint quadrature of f over the region clipped to the box. Empty
/// region gives 0. Exact for cell-constant functions on whole-cell regions.
double integrate(const GridFunction& f, const Region& r = AllRegion{});

/// Quadrature L^p norm with optional weight and cell fractions; p may be inf.
double lp_norm(const GridFunction& f, double p,
               const GridFunction* weight = nullptr,
               const std::vector<double>* fractions = nullptr);

// ---- decreasing rearrangement -------------------------------------------

/// Step representation of f* on (0, |box|]: value[i] on
/// (cum_measure[i-1], cum_measure[i]], values strictly decreasing.
struct RearrangementProfile {
    std::vector<double> value;
    std::vector<double> cum_measure;

    double total_measure() const { return cum_measure.empty() ? 0.0 : cum_measure.back(); }
    /// sum of value^p * dm over the profile (the L^p power integral of f*).
    double lp_power_sum(double p) const;
};

RearrangementProfile rearrange(const GridFunction& f);

// ---- serialization -------------------------------------------------------

/// Plain text format with a small header (n, box, L) and one value per line.
void save_gridfunction(const GridFunction& f, std::ostream& os);
GridFunction load_gridfunction(std::istream& is);

/// CSV rows "x1[,x2],value".
void write_csv(const GridFunction& f, std::ostream& os);

}  // namespace bbfs
