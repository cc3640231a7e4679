#include "pfx/regions.hpp"

#include "pfx/errors.hpp"

#include <algorithm>
#include <cmath>

namespace pfx {

std::string_view to_string(RegionLabel label) {
    switch (label) {
    case RegionLabel::I: return "I";
    case RegionLabel::IIa: return "IIa";
    case RegionLabel::IIb: return "IIb";
    case RegionLabel::III: return "III";
    }
    return "?";
}

Region classify(const Schedule& s, double r, double v) {
    if (!(r >= 0.0) || !std::isfinite(r)) throw InvalidArgument("separation must be finite and >= 0");
    if (!(v > 0.0) || !std::isfinite(v)) throw InvalidArgument("speed must be finite and > 0");
    const double light = r / v;
    Region out;
    out.slacks.timelike = s.t_off - light;
    out.slacks.spacelike = light - (2.0 * s.t_on + s.t_off);
    out.slacks.early = light - (s.t_on + s.t_off);

    if (s.t_off > light)
        out.label = RegionLabel::III;
    else if (2.0 * s.t_on + s.t_off < light)
        out.label = RegionLabel::I;
    else if (s.t_on + s.t_off < light)
        out.label = RegionLabel::IIa;
    else
        out.label = RegionLabel::IIb;

    const double tol = kRegionRelativeTolerance * light;
    out.on_boundary = std::abs(out.slacks.timelike) <= tol || std::abs(out.slacks.spacelike) <= tol ||
                      std::abs(out.slacks.early) <= tol;
    out.degenerate = r == 0.0 && s.t_off == 0.0;
    return out;
}

namespace {

// Clip t_off = c - slope * t_on to the box.
std::vector<BoundaryPoint> clip_line(double c, double slope, double t_on_max, double t_off_max) {
    double lo = 0.0, hi = t_on_max;
    if (slope > 0.0) {
        lo = std::max(lo, (c - t_off_max) / slope);
        hi = std::min(hi, c / slope);
    } else if (c < 0.0 || c > t_off_max) {
        return {};
    }
    if (lo > hi) return {};
    return {{lo, c - slope * lo}, {hi, c - slope * hi}};
}

}  // namespace

std::vector<BoundaryCurve> boundary_curves(double r, double v, double t_on_max, double t_off_max) {
    if (!(t_on_max > 0.0) || !(t_off_max > 0.0)) throw InvalidArgument("boundary window extents must be > 0");
    if (!(r >= 0.0) || !(v > 0.0)) throw InvalidArgument("need r >= 0 and v > 0");
    const double light = r / v;
    return {
        {"t_off=r/v", RegionLabel::IIb, RegionLabel::III, clip_line(light, 0.0, t_on_max, t_off_max)},
        {"2*t_on+t_off=r/v", RegionLabel::I, RegionLabel::IIa, clip_line(light, 2.0, t_on_max, t_off_max)},
        {"t_on+t_off=r/v", RegionLabel::IIa, RegionLabel::IIb, clip_line(light, 1.0, t_on_max, t_off_max)},
    };
}

}  // namespace pfx
