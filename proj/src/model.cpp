#include "pfx/model.hpp"

#include "pfx/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace pfx {

namespace {

void require_finite(double v, const char* name) {
    if (!std::isfinite(v)) throw InvalidArgument(std::string(name) + " must be finite");
}

void require_positive(double v, const char* name) {
    require_finite(v, name);
    if (!(v > 0.0)) throw InvalidArgument(std::string(name) + " must be > 0");
}

void require_nonnegative(double v, const char* name) {
    require_finite(v, name);
    if (v < 0.0) throw InvalidArgument(std::string(name) + " must be >= 0");
}

}  // namespace

double ModelParams::separation() const { return std::abs(qubit_f.position - qubit_p.position); }

double ModelParams::wavelength_p() const { return 2.0 * std::numbers::pi * field.speed / qubit_p.gap; }

double ModelParams::wavelength_f() const { return 2.0 * std::numbers::pi * field.speed / qubit_f.gap; }

double ModelParams::xi_on() const {
    const double r = separation();
    if (r == 0.0) return std::numeric_limits<double>::infinity();
    return field.speed * schedule.t_on / r;
}

double ModelParams::xi_off() const {
    const double r = separation();
    if (r == 0.0) return std::numeric_limits<double>::infinity();
    return field.speed * schedule.t_off / r;
}

void validate(const ModelParams& p) {
    require_positive(p.qubit_p.gap, "qubit_p.gap");
    require_positive(p.qubit_f.gap, "qubit_f.gap");
    require_nonnegative(p.qubit_p.coupling_ratio, "qubit_p.coupling_ratio");
    require_nonnegative(p.qubit_f.coupling_ratio, "qubit_f.coupling_ratio");
    require_finite(p.qubit_p.position, "qubit_p.position");
    require_finite(p.qubit_f.position, "qubit_f.position");
    require_positive(p.field.speed, "field.speed");
    require_positive(p.field.uv_cutoff, "field.uv_cutoff");
    if (!(p.field.uv_cutoff > std::max(p.qubit_p.gap, p.qubit_f.gap)))
        throw InvalidArgument("field.uv_cutoff must exceed both qubit gaps");
    require_positive(p.schedule.t_on, "schedule.t_on");
    require_nonnegative(p.schedule.t_off, "schedule.t_off");
    require_nonnegative(p.field.profile.ramp, "field.profile.ramp");
    if (p.field.profile.kind != ProfileKind::Sharp) {
        if (!(p.field.profile.ramp > 0.0))
            throw InvalidArgument("ramped switching profiles need ramp > 0");
        if (p.field.profile.ramp > 0.5 * p.schedule.t_on)
            throw InvalidArgument("ramp must not exceed half of t_on");
    }
}

NaturalModel to_natural_units(const ModelParams& lab) {
    validate(lab);
    UnitScale s;
    s.time = 1.0 / lab.qubit_p.gap;
    s.length = lab.field.speed / lab.qubit_p.gap;

    ModelParams n = lab;
    n.qubit_p.gap = 1.0;
    n.qubit_f.gap = lab.qubit_f.gap * s.time;
    n.qubit_p.position = lab.qubit_p.position / s.length;
    n.qubit_f.position = lab.qubit_f.position / s.length;
    n.field.speed = 1.0;
    n.field.uv_cutoff = lab.field.uv_cutoff * s.time;
    n.field.profile.ramp = lab.field.profile.ramp / s.time;
    n.schedule.t_on = lab.schedule.t_on / s.time;
    n.schedule.t_off = lab.schedule.t_off / s.time;
    return {n, s};
}

ModelParams from_natural_units(const ModelParams& n, const UnitScale& s) {
    require_positive(s.time, "scale.time");
    require_positive(s.length, "scale.length");
    ModelParams lab = n;
    lab.qubit_p.gap = n.qubit_p.gap / s.time;
    lab.qubit_f.gap = n.qubit_f.gap / s.time;
    lab.qubit_p.position = n.qubit_p.position * s.length;
    lab.qubit_f.position = n.qubit_f.position * s.length;
    lab.field.speed = n.field.speed * s.length / s.time;
    lab.field.uv_cutoff = n.field.uv_cutoff / s.time;
    lab.field.profile.ramp = n.field.profile.ramp * s.time;
    lab.schedule.t_on = n.schedule.t_on * s.time;
    lab.schedule.t_off = n.schedule.t_off * s.time;
    return lab;
}

bool is_natural(const ModelParams& p) {
    return std::abs(p.field.speed - 1.0) <= 1e-12 && std::abs(p.qubit_p.gap - 1.0) <= 1e-12;
}

ValidityMargin validity_margin(const ModelParams& p) {
    const double t2 = p.schedule.t2();
    return {2.0 * p.qubit_p.dimensionless_coupling() * p.qubit_p.gap * t2,
            2.0 * p.qubit_f.dimensionless_coupling() * p.qubit_f.gap * t2};
}

}  // namespace pfx
