#pragma once

#include <string>
#include <variant>
#include <vector>

#include "bbfs/grid.hpp"
#include "bbfs/rng.hpp"

namespace bbfs {

struct IndicatorShape {  // amp * chi_box
    Box box;
    double amp = 1.0;
};
struct BumpShape {  // amp * max(0, 1 - |x-c|^2/w^2)^2
    Point center{0.0, 0.0};
    double width = 1.0;
    double amp = 1.0;
};
struct TrigShape {  // windowed cosine packet
    Point center{0.0, 0.0};
    double width = 1.0;
    double freq = 1.0;
    double phase = 0.0;
    double amp = 1.0;
};

/// Grid-free probe description so the same battery can be materialized on
/// refined grids for stability checks.
struct ProbeDesc {
    std::variant<IndicatorShape, BumpShape, TrigShape> shape;
    std::string id;

    GridFunction materialize(const Grid& g) const;
};

GridFunction materialize_sum(const std::vector<ProbeDesc>& parts, const Grid& g);

struct BatteryOptions {
    int count = 16;
    /// Confine supports to the middle half of the box (truncation control
    /// for Riesz / Bessel probes).
    bool middle_half = true;
    bool nonnegative = false;
};

/// Mixed battery: indicators, bumps and trig packets plus two-part sums.
std::vector<ProbeDesc> battery_mixed(const Box& box, const BatteryOptions& opts,
                                     SeededRng rng);

/// Smooth-only battery (bumps and windowed trig packets).
std::vector<ProbeDesc> battery_smooth(const Box& box, const BatteryOptions& opts,
                                      SeededRng rng);

/// Random box indicators.
std::vector<ProbeDesc> battery_indicators(const Box& box, const BatteryOptions& opts,
                                          SeededRng rng);

/// Equal-width indicators marching across the middle of the box.
std::vector<ProbeDesc> battery_translated_indicators(const Box& box, int count);

std::vector<GridFunction> materialize_all(const std::vector<ProbeDesc>& descs,
                                          const Grid& g);

}  // namespace bbfs
