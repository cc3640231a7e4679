#include "pfx/circuit.hpp"

#include "pfx/errors.hpp"

#include <cmath>
#include <numbers>
#include <optional>

namespace pfx {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// 10-90 rise of an erf edge is 2 * 1.2815515655 sigma.
constexpr double kErfRiseInSigma = 2.0 * 1.2815515655446004;

std::optional<double> first_crossing(const std::vector<double>& t, const std::vector<double>& y, double level) {
    for (std::size_t i = 1; i < y.size(); ++i) {
        const double a = y[i - 1] - level;
        const double b = y[i] - level;
        if (a == 0.0) return t[i - 1];
        if ((a < 0.0) != (b < 0.0) && b != 0.0) return t[i - 1] + (t[i] - t[i - 1]) * a / (a - b);
        if (b == 0.0) return t[i];
    }
    return std::nullopt;
}

}  // namespace

void validate(const CircuitParams& c) {
    if (!(c.e_j > 0.0) || !std::isfinite(c.e_j)) throw InvalidArgument("e_j must be > 0");
    if (!(c.alpha > 0.0 && c.alpha <= 1.0)) throw InvalidArgument("alpha must lie in (0, 1]");
    if (!(c.alpha4 > 0.0) || !std::isfinite(c.alpha4)) throw InvalidArgument("alpha4 must be > 0");
    if (!std::isfinite(c.f1) || !std::isfinite(c.f2) || !std::isfinite(c.f3))
        throw InvalidArgument("frustrations must be finite");
}

EffectiveCoupling effective_coupling(const CircuitParams& c) {
    validate(c);
    // cos(pi f3) at half-integer f3 is ~6e-17 in floating point; the switch-off
    // point is exact by construction.
    const double frac = c.f3 - std::floor(c.f3);
    const double cosine = frac == 0.5 ? 0.0 : std::cos(std::numbers::pi * c.f3);
    return {2.0 * c.alpha4 * cosine, c.f1 - c.f2 + 0.5 * c.f3};
}

double josephson_potential(const CircuitParams& c, double phi1, double phi2, double dpsi) {
    const EffectiveCoupling eff = effective_coupling(c);
    const double qubit = std::cos(phi1) + std::cos(phi2) + c.alpha * std::cos(kTwoPi * c.f1 + phi1 + phi2);
    const double coupler = eff.alpha_eff * std::cos(kTwoPi * eff.f_eff - dpsi + phi1 + phi2);
    return -c.e_j * (qubit + coupler);
}

JunctionPhases eliminate_phases(const CircuitParams& c, double phi1, double phi2, double dpsi) {
    const double phi3 = -kTwoPi * c.f1 - phi1 - phi2;
    const double phi5 = -kTwoPi * c.f2 - dpsi - phi3;
    const double phi4 = phi5 + kTwoPi * c.f3;
    return {phi1, phi2, phi3, phi4, phi5};
}

std::array<double, 3> loop_residuals(const CircuitParams& c, const JunctionPhases& ph, double dpsi) {
    return {ph[0] + ph[1] + ph[2] + kTwoPi * c.f1, ph[2] + ph[4] + dpsi + kTwoPi * c.f2,
            ph[3] - ph[4] - kTwoPi * c.f3};
}

double junction_energy_sum(const CircuitParams& c, const JunctionPhases& ph) {
    const std::array<double, 5> energies = {c.e_j, c.e_j, c.alpha * c.e_j, c.alpha4 * c.e_j, c.alpha4 * c.e_j};
    double sum = 0.0;
    for (std::size_t j = 0; j < 5; ++j) sum -= energies[j] * std::cos(ph[j]);
    return sum;
}

SwitchingProfile SwitchReport::linear_equivalent() const {
    return SwitchingProfile::linear(ramp_duration / 0.8);
}

SwitchingProfile SwitchReport::gaussian_equivalent() const {
    return SwitchingProfile::gaussian(6.0 * ramp_duration / kErfRiseInSigma);
}

SwitchReport switch_profile(const std::vector<F3Sample>& trajectory, const CircuitParams& c) {
    validate(c);
    if (trajectory.size() < 10) throw InvalidArgument("f3 trajectory needs at least 10 samples");
    SwitchReport out;
    out.times.reserve(trajectory.size());
    out.envelope.reserve(trajectory.size());
    for (std::size_t i = 0; i < trajectory.size(); ++i) {
        if (i > 0 && !(trajectory[i].time > trajectory[i - 1].time))
            throw InvalidArgument("f3 trajectory times must increase");
        CircuitParams at = c;
        at.f3 = trajectory[i].f3;
        out.times.push_back(trajectory[i].time);
        out.envelope.push_back(std::abs(effective_coupling(at).alpha_eff) / (2.0 * c.alpha4));
    }
    const auto t10 = first_crossing(out.times, out.envelope, 0.1);
    const auto t90 = first_crossing(out.times, out.envelope, 0.9);
    if (t10 && t90) {
        out.has_transition = true;
        out.t10 = *t10;
        out.t90 = *t90;
        out.ramp_duration = std::abs(*t90 - *t10);
    }
    return out;
}

}  // namespace pfx
