#include "bbfs/batteries.hpp"

#include <cmath>

namespace bbfs {

namespace {

double eval_shape(const ProbeDesc& d, const Point& x, int n) {
    return std::visit(
        [&](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, IndicatorShape>) {
                for (int a = 0; a < n; ++a)
                    if (x[a] < s.box.lo[a] || x[a] >= s.box.hi[a]) return 0.0;
                return s.amp;
            } else if constexpr (std::is_same_v<T, BumpShape>) {
                double d2 = 0.0;
                for (int a = 0; a < n; ++a) {
                    double dx = (x[a] - s.center[a]) / s.width;
                    d2 += dx * dx;
                }
                double t = 1.0 - d2;
                return t > 0.0 ? s.amp * t * t : 0.0;
            } else {
                double d2 = 0.0;
                for (int a = 0; a < n; ++a) {
                    double dx = (x[a] - s.center[a]) / s.width;
                    d2 += dx * dx;
                }
                double t = 1.0 - d2;
                if (t <= 0.0) return 0.0;
                return s.amp * t * t * std::cos(s.freq * (x[0] - s.center[0]) + s.phase);
            }
        },
        d.shape);
}

}  // namespace

GridFunction ProbeDesc::materialize(const Grid& g) const {
    return sample(g, [&](Point x) { return eval_shape(*this, x, g.dim()); });
}

GridFunction materialize_sum(const std::vector<ProbeDesc>& parts, const Grid& g) {
    return sample(g, [&](Point x) {
        double acc = 0.0;
        for (const auto& p : parts) acc += eval_shape(p, x, g.dim());
        return acc;
    });
}

namespace {

// sample region of supports
void support_window(const Box& box, bool middle_half, int axis, double& lo, double& hi) {
    double mid = 0.5 * (box.lo[axis] + box.hi[axis]);
    double half = 0.5 * box.side(axis);
    if (middle_half) {
        lo = mid - 0.5 * half;
        hi = mid + 0.5 * half;
    } else {
        lo = box.lo[axis];
        hi = box.hi[axis];
    }
}

ProbeDesc random_indicator(const Box& box, const BatteryOptions& opts, SeededRng& rng,
                           int idx) {
    ProbeDesc d;
    IndicatorShape s;
    s.box.n = box.n;
    for (int a = 0; a < box.n; ++a) {
        double lo, hi;
        support_window(box, opts.middle_half, a, lo, hi);
        double w = (hi - lo) * rng.uniform(0.08, 0.5);
        double c = rng.uniform(lo + 0.5 * w, hi - 0.5 * w);
        s.box.lo[a] = c - 0.5 * w;
        s.box.hi[a] = c + 0.5 * w;
    }
    s.amp = rng.uniform(0.3, 2.0) * (opts.nonnegative || rng.uniform() < 0.7 ? 1.0 : -1.0);
    d.shape = s;
    d.id = "ind" + std::to_string(idx);
    return d;
}

ProbeDesc random_bump(const Box& box, const BatteryOptions& opts, SeededRng& rng,
                      int idx) {
    ProbeDesc d;
    BumpShape s;
    for (int a = 0; a < box.n; ++a) {
        double lo, hi;
        support_window(box, opts.middle_half, a, lo, hi);
        s.width = (hi - lo) * rng.uniform(0.1, 0.45);
        s.center[a] = rng.uniform(lo + s.width, hi - s.width);
    }
    s.amp = rng.uniform(0.3, 2.0) * (opts.nonnegative || rng.uniform() < 0.7 ? 1.0 : -1.0);
    d.shape = s;
    d.id = "bump" + std::to_string(idx);
    return d;
}

ProbeDesc random_trig(const Box& box, const BatteryOptions& opts, SeededRng& rng,
                      int idx) {
    ProbeDesc d;
    TrigShape s;
    for (int a = 0; a < box.n; ++a) {
        double lo, hi;
        support_window(box, opts.middle_half, a, lo, hi);
        s.width = (hi - lo) * rng.uniform(0.15, 0.45);
        s.center[a] = rng.uniform(lo + s.width, hi - s.width);
    }
    s.freq = rng.uniform(1.0, 9.0);
    s.phase = rng.uniform(0.0, 6.28);
    s.amp = rng.uniform(0.3, 2.0);
    d.shape = s;
    d.id = "trig" + std::to_string(idx);
    if (opts.nonnegative) {
        // windowed cosines change sign; replace by a bump when positivity is required
        BumpShape b;
        b.center = s.center;
        b.width = s.width;
        b.amp = std::abs(s.amp);
        d.shape = b;
    }
    return d;
}

}  // namespace

std::vector<ProbeDesc> battery_mixed(const Box& box, const BatteryOptions& opts,
                                     SeededRng rng) {
    std::vector<ProbeDesc> out;
    for (int i = 0; i < opts.count; ++i) {
        switch (i % 3) {
            case 0: out.push_back(random_indicator(box, opts, rng, i)); break;
            case 1: out.push_back(random_bump(box, opts, rng, i)); break;
            default: out.push_back(random_trig(box, opts, rng, i)); break;
        }
        out.back().id = "mixed" + std::to_string(i);
    }
    return out;
}

std::vector<ProbeDesc> battery_smooth(const Box& box, const BatteryOptions& opts,
                                      SeededRng rng) {
    std::vector<ProbeDesc> out;
    for (int i = 0; i < opts.count; ++i) {
        out.push_back(i % 2 == 0 ? random_bump(box, opts, rng, i)
                                 : random_trig(box, opts, rng, i));
        out.back().id = "smooth" + std::to_string(i);
    }
    return out;
}

std::vector<ProbeDesc> battery_indicators(const Box& box, const BatteryOptions& opts,
                                          SeededRng rng) {
    std::vector<ProbeDesc> out;
    for (int i = 0; i < opts.count; ++i) out.push_back(random_indicator(box, opts, rng, i));
    return out;
}

std::vector<ProbeDesc> battery_translated_indicators(const Box& box, int count) {
    std::vector<ProbeDesc> out;
    const double lo = box.lo[0], hi = box.hi[0];
    const double w = (hi - lo) / (2.0 * count);
    for (int i = 0; i < count; ++i) {
        ProbeDesc d;
        IndicatorShape s;
        s.box.n = box.n;
        double c = lo + (2.0 * i + 1.0) * w;
        s.box.lo[0] = c - 0.45 * w;
        s.box.hi[0] = c + 0.45 * w;
        if (box.n == 2) {
            double mid = 0.5 * (box.lo[1] + box.hi[1]);
            s.box.lo[1] = mid - 0.45 * w;
            s.box.hi[1] = mid + 0.45 * w;
        }
        d.shape = s;
        d.id = "trans" + std::to_string(i);
        out.push_back(std::move(d));
    }
    return out;
}

std::vector<GridFunction> materialize_all(const std::vector<ProbeDesc>& descs,
                                          const Grid& g) {
    std::vector<GridFunction> out;
    out.reserve(descs.size());
    for (const auto& d : descs) out.push_back(d.materialize(g));
    return out;
}

}  // namespace bbfs
