#include "bbfs/grid.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

namespace bbfs {

double Box::volume() const {
    double v = 1.0;
    for (int a = 0; a < n; ++a) v *= side(a);
    return v;
}

double Box::max_side() const {
    double m = 0.0;
    for (int a = 0; a < n; ++a) m = std::max(m, side(a));
    return m;
}

double Box::diameter() const {
    double s = 0.0;
    for (int a = 0; a < n; ++a) s += side(a) * side(a);
    return std::sqrt(s);
}

double Box::circumradius_from_origin() const {
    double s = 0.0;
    for (int a = 0; a < n; ++a) {
        double m = std::max(std::abs(lo[a]), std::abs(hi[a]));
        s += m * m;
    }
    return std::sqrt(s);
}

bool Box::contains(const Point& x) const {
    for (int a = 0; a < n; ++a)
        if (x[a] < lo[a] || x[a] > hi[a]) return false;
    return true;
}

namespace {
// x must be an integer multiple of h (up to 1e-9 relative slop).
bool aligned(double x, double h) {
    double q = x / h;
    return std::abs(q - std::round(q)) <= 1e-9 * std::max(1.0, std::abs(q));
}
}  // namespace

Grid Grid::make(int n, const Box& box, int level, std::int64_t max_cells) {
    require(n == 1 || n == 2, "grid dimension must be 1 or 2");
    require(box.n == n, "box dimension mismatch");
    require(level >= 0 && level <= 26, "grid level out of range [0, 26]");
    Grid g;
    g.box_ = box;
    g.level_ = level;
    g.h_ = std::ldexp(1.0, -level);
    g.count_ = 1;
    for (int a = 0; a < n; ++a) {
        require(box.hi[a] > box.lo[a], "box must have positive side lengths");
        require(aligned(box.lo[a], g.h_) && aligned(box.hi[a], g.h_),
                "non-dyadic box: endpoints must be multiples of 2^-L");
        g.cells_[a] = static_cast<std::int64_t>(std::llround(box.side(a) / g.h_));
        require(g.cells_[a] >= 1, "box side shorter than one cell");
        g.count_ *= g.cells_[a];
    }
    if (n == 1) g.cells_[1] = 1;
    require(g.count_ <= max_cells, "cell count exceeds configured maximum");
    return g;
}

double Grid::cell_volume() const {
    double v = 1.0;
    for (int a = 0; a < dim(); ++a) v *= h_;
    return v;
}

Point Grid::center(std::int64_t flat) const {
    auto m = multi(flat);
    Point p{0.0, 0.0};
    for (int a = 0; a < dim(); ++a)
        p[a] = box_.lo[a] + (static_cast<double>(m[a]) + 0.5) * h_;
    return p;
}

bool Grid::operator==(const Grid& o) const {
    if (dim() != o.dim() || level_ != o.level_) return false;
    for (int a = 0; a < dim(); ++a)
        if (box_.lo[a] != o.box_.lo[a] || box_.hi[a] != o.box_.hi[a]) return false;
    return true;
}

GridFunction::GridFunction()
    : GridFunction(Grid::make(1, Box::interval(0.0, 1.0), 0), {0.0}) {}

GridFunction::GridFunction(Grid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    require(static_cast<std::int64_t>(values_.size()) == grid_.cell_count(),
            "values length must equal cell count");
    for (double v : values_)
        if (!std::isfinite(v)) throw NumericError("GridFunction: non-finite value");
}

GridFunction GridFunction::zeros(const Grid& g) {
    return GridFunction(g, std::vector<double>(static_cast<std::size_t>(g.cell_count()), 0.0));
}

GridFunction GridFunction::constant(const Grid& g, double c) {
    return GridFunction(g, std::vector<double>(static_cast<std::size_t>(g.cell_count()), c));
}

GridFunction GridFunction::map(const std::function<double(double)>& fn) const {
    std::vector<double> out(values_.size());
    for (std::size_t i = 0; i < values_.size(); ++i) out[i] = fn(values_[i]);
    return GridFunction(grid_, std::move(out));
}

GridFunction GridFunction::zip(const GridFunction& a, const GridFunction& b,
                               const std::function<double(double, double)>& fn) {
    require_same_grid(a, b);
    std::vector<double> out(a.values_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = fn(a.values_[i], b.values_[i]);
    return GridFunction(a.grid_, std::move(out));
}

GridFunction operator+(const GridFunction& a, const GridFunction& b) {
    return GridFunction::zip(a, b, [](double x, double y) { return x + y; });
}
GridFunction operator-(const GridFunction& a, const GridFunction& b) {
    return GridFunction::zip(a, b, [](double x, double y) { return x - y; });
}
GridFunction operator*(double c, const GridFunction& f) {
    return f.map([c](double x) { return c * x; });
}
GridFunction operator*(const GridFunction& a, const GridFunction& b) {
    return GridFunction::zip(a, b, [](double x, double y) { return x * y; });
}

double GridFunction::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

void require_same_grid(const GridFunction& a, const GridFunction& b) {
    require(a.grid() == b.grid(), "grid mismatch");
}

GridFunction sample(const Grid& g, const std::function<double(Point)>& fn) {
    std::vector<double> v(static_cast<std::size_t>(g.cell_count()));
    for (std::int64_t i = 0; i < g.cell_count(); ++i) {
        double y = fn(g.center(i));
        if (!std::isfinite(y)) throw NumericError("sample: non-finite value at cell center");
        v[static_cast<std::size_t>(i)] = y;
    }
    return GridFunction(g, std::move(v));
}

// ---- regions --------------------------------------------------------------

namespace {

double overlap_len(double a0, double a1, double b0, double b1) {
    return std::max(0.0, std::min(a1, b1) - std::max(a0, b0));
}

// Fraction of [x0,x1]x[y0,y1] covered by the Euclidean disk (cx,cy,r),
// by Simpson integration of the chord length. Caller has excluded the
// fully-inside / fully-outside cases.
double disk_rect_fraction(double x0, double x1, double y0, double y1, double cx,
                          double cy, double r) {
    const double t0 = std::max(x0, cx - r);
    const double t1 = std::min(x1, cx + r);
    if (t1 <= t0) return 0.0;
    auto chord = [&](double t) {
        double d = r * r - (t - cx) * (t - cx);
        if (d <= 0.0) return 0.0;
        double w = std::sqrt(d);
        return overlap_len(y0, y1, cy - w, cy + w);
    };
    constexpr int kIntervals = 32;  // even
    const double dt = (t1 - t0) / kIntervals;
    double s = chord(t0) + chord(t1);
    for (int i = 1; i < kIntervals; ++i)
        s += chord(t0 + i * dt) * (i % 2 ? 4.0 : 2.0);
    double area = s * dt / 3.0;
    return std::clamp(area / ((x1 - x0) * (y1 - y0)), 0.0, 1.0);
}

double ball_cell_fraction(const Grid& g, std::int64_t i, const BallRegion& ball) {
    const int n = g.dim();
    const double h = g.h();
    const Point c = g.center(i);
    if (ball.radius <= 0.0) return 0.0;
    if (ball.linf || n == 1) {
        // cube region: product of 1-d overlaps
        double frac = 1.0;
        for (int a = 0; a < n; ++a) {
            double cl = c[a] - 0.5 * h, ch = c[a] + 0.5 * h;
            frac *= overlap_len(cl, ch, ball.center[a] - ball.radius,
                                ball.center[a] + ball.radius) / h;
        }
        return frac;
    }
    // Euclidean disk in 2-d: quick accept/reject by center distance.
    const double half_diag = 0.5 * h * std::numbers::sqrt2;
    double dx = c[0] - ball.center[0], dy = c[1] - ball.center[1];
    double dist = std::sqrt(dx * dx + dy * dy);
    if (dist + half_diag <= ball.radius) return 1.0;
    if (dist - half_diag >= ball.radius) return 0.0;
    return disk_rect_fraction(c[0] - 0.5 * h, c[0] + 0.5 * h, c[1] - 0.5 * h,
                              c[1] + 0.5 * h, ball.center[0], ball.center[1],
                              ball.radius);
}

}  // namespace

double cell_fraction(const Grid& g, std::int64_t i, const Region& r) {
    if (std::holds_alternative<AllRegion>(r)) return 1.0;
    if (const auto* b = std::get_if<BoxRegion>(&r)) {
        const double h = g.h();
        const Point c = g.center(i);
        double frac = 1.0;
        for (int a = 0; a < g.dim(); ++a)
            frac *= overlap_len(c[a] - 0.5 * h, c[a] + 0.5 * h, b->b.lo[a], b->b.hi[a]) / h;
        return frac;
    }
    return ball_cell_fraction(g, i, std::get<BallRegion>(r));
}

std::vector<double> region_fractions(const Grid& g, const Region& r) {
    std::vector<double> out(static_cast<std::size_t>(g.cell_count()));
    for (std::int64_t i = 0; i < g.cell_count(); ++i)
        out[static_cast<std::size_t>(i)] = cell_fraction(g, i, r);
    return out;
}

double integrate(const GridFunction& f, const Region& r) {
    const double cv = f.grid().cell_volume();
    std::vector<double> terms(static_cast<std::size_t>(f.size()));
    if (std::holds_alternative<AllRegion>(r)) {
        for (std::int64_t i = 0; i < f.size(); ++i)
            terms[static_cast<std::size_t>(i)] = f[i] * cv;
    } else {
        for (std::int64_t i = 0; i < f.size(); ++i) {
            double frac = cell_fraction(f.grid(), i, r);
            terms[static_cast<std::size_t>(i)] = frac > 0.0 ? f[i] * frac * cv : 0.0;
        }
    }
    return pairwise_sum(terms);
}

double lp_norm(const GridFunction& f, double p, const GridFunction* weight,
               const std::vector<double>* fractions) {
    require(p >= 1.0 || std::isinf(p), "lp_norm: p must be >= 1 or inf");
    if (weight) require_same_grid(f, *weight);
    if (std::isinf(p)) {
        double m = 0.0;
        for (std::int64_t i = 0; i < f.size(); ++i) {
            if (fractions && (*fractions)[static_cast<std::size_t>(i)] <= 0.0) continue;
            m = std::max(m, std::abs(f[i]));
        }
        return m;
    }
    const double cv = f.grid().cell_volume();
    std::vector<double> terms(static_cast<std::size_t>(f.size()));
    for (std::int64_t i = 0; i < f.size(); ++i) {
        double t = std::pow(std::abs(f[i]), p) * cv;
        if (weight) t *= (*weight)[i];
        if (fractions) t *= (*fractions)[static_cast<std::size_t>(i)];
        terms[static_cast<std::size_t>(i)] = t;
    }
    return std::pow(pairwise_sum(terms), 1.0 / p);
}

// ---- rearrangement ---------------------------------------------------------

RearrangementProfile rearrange(const GridFunction& f) {
    std::vector<double> v(f.values());
    for (double& x : v) x = std::abs(x);
    std::sort(v.begin(), v.end(), std::greater<double>());
    RearrangementProfile p;
    const double cv = f.grid().cell_volume();
    std::size_t i = 0;
    while (i < v.size()) {
        std::size_t j = i;
        while (j < v.size() && v[j] == v[i]) ++j;
        p.value.push_back(v[i]);
        double prev = p.cum_measure.empty() ? 0.0 : p.cum_measure.back();
        p.cum_measure.push_back(prev + static_cast<double>(j - i) * cv);
        i = j;
    }
    return p;
}

double RearrangementProfile::lp_power_sum(double p) const {
    std::vector<double> terms(value.size());
    double prev = 0.0;
    for (std::size_t i = 0; i < value.size(); ++i) {
        terms[i] = std::pow(value[i], p) * (cum_measure[i] - prev);
        prev = cum_measure[i];
    }
    return pairwise_sum(terms);
}

// ---- serialization ---------------------------------------------------------

void save_gridfunction(const GridFunction& f, std::ostream& os) {
    const Grid& g = f.grid();
    os << "bbfs-gridfunction v1\n";
    os << "n " << g.dim() << "\n";
    os.precision(17);
    os << "box";
    for (int a = 0; a < g.dim(); ++a) os << " " << g.box().lo[a] << " " << g.box().hi[a];
    os << "\nL " << g.level() << "\n";
    os << "values " << f.size() << "\n";
    for (std::int64_t i = 0; i < f.size(); ++i) os << f[i] << "\n";
}

GridFunction load_gridfunction(std::istream& is) {
    std::string line, tag;
    std::getline(is, line);
    require(line == "bbfs-gridfunction v1", "bad gridfunction header");
    int n = 0, level = 0;
    std::int64_t count = 0;
    Box box;
    is >> tag >> n;
    require(tag == "n" && (n == 1 || n == 2), "bad dimension line");
    box.n = n;
    is >> tag;
    require(tag == "box", "bad box line");
    for (int a = 0; a < n; ++a) is >> box.lo[a] >> box.hi[a];
    is >> tag >> level;
    require(tag == "L", "bad level line");
    is >> tag >> count;
    require(tag == "values", "bad values line");
    std::vector<double> v(static_cast<std::size_t>(count));
    for (auto& x : v) is >> x;
    require(static_cast<bool>(is), "truncated gridfunction file");
    return GridFunction(Grid::make(n, box, level), std::move(v));
}

void write_csv(const GridFunction& f, std::ostream& os) {
    const Grid& g = f.grid();
    os.precision(17);
    os << (g.dim() == 1 ? "x1,value\n" : "x1,x2,value\n");
    for (std::int64_t i = 0; i < f.size(); ++i) {
        Point c = g.center(i);
        os << c[0];
        if (g.dim() == 2) os << "," << c[1];
        os << "," << f[i] << "\n";
    }
}

}  // namespace bbfs
