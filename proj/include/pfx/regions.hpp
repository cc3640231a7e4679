#pragma once

#include "pfx/model.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace pfx {

enum class RegionLabel { I, IIa, IIb, III };

std::string_view to_string(RegionLabel label);

// Signed slacks of the defining inequalities, in time units; positive means
// the inequality that pushes toward the named side holds strictly.
struct RegionSlacks {
    double timelike = 0;    // T_off - r/v            (> 0: region III)
    double spacelike = 0;   // r/v - (2 T_on + T_off)  (> 0 with timelike <= 0: region I)
    double early = 0;       // r/v - (T_on + T_off)    (> 0: IIa, else IIb)
};

struct Region {
    RegionLabel label = RegionLabel::I;
    RegionSlacks slacks{};
    // Some defining equality holds within 1e-12 r/v.
    bool on_boundary = false;
    // r == 0 and T_off == 0: both windows touch the light-crossing instant.
    bool degenerate = false;

    // Real (on-shell) exchange is kinematically allowed.
    bool exchange_possible() const { return label == RegionLabel::IIa || label == RegionLabel::IIb; }
};

inline constexpr double kRegionRelativeTolerance = 1e-12;

Region classify(const Schedule& schedule, double separation, double speed);

struct BoundaryPoint {
    double t_on;
    double t_off;
};

struct BoundaryCurve {
    std::string name;       // e.g. "2*t_on+t_off=r/v"
    RegionLabel below;      // side with smaller T_off
    RegionLabel above;
    std::vector<BoundaryPoint> points;  // empty if the line misses the window
};

// The three straight region edges clipped to [0, t_on_max] x [0, t_off_max].
std::vector<BoundaryCurve> boundary_curves(double separation, double speed, double t_on_max, double t_off_max);

}  // namespace pfx
