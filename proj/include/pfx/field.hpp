#pragma once

#include "pfx/model.hpp"

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

namespace pfx {

using Complex = std::complex<double>;

// Phase convention: the field operator carries an overall factor i in its
// mode expansion. That factor only rotates global phases and never reaches an
// observable, so every kernel below drops it.

struct WindowIntegralSpec {
    double detuning = 0.0;
    double t_start = 0.0;
    double t_end = 1.0;
    SwitchingProfile profile{};
};

// Integral of s(t) exp(i detuning t) over [t_start, t_end]. Ramped profiles
// are the sharp window [t_start + ramp/2, t_end - ramp/2] convolved with a
// unit-area kernel: a box of width `ramp` (LinearRamp, trapezoid edges) or a
// Gaussian with sigma = ramp/6 (GaussianRamp, erf edges whose tails leave the
// nominal window at the 1e-3 level).
Complex window_integral(const WindowIntegralSpec& spec);

// The envelope s(t) matching window_integral.
double envelope(const SwitchingProfile& profile, double t_start, double t_end, double t);

// Regularized vacuum two-point kernel in natural units with the
// normalization absorbed into K:
//   W(r, tau) = int_0^inf dk k e^{-k/k_c} (e^{ikr} + e^{-ikr}) e^{-ik v tau}
//             = 1/(1/k_c + i(v tau - r))^2 + 1/(1/k_c + i(v tau + r))^2
Complex wightman(double separation, double time_lag, const FieldParams& field);

struct ModeQuadratureConfig {
    double cutoff = 1.0;  // upper limit of the k integration
    double relative_tolerance = 1e-9;
    double absolute_tolerance = 0.0;
    std::size_t max_subdivisions = 200000;
    bool oscillation_splitting = true;
};

// Panel hints: mandatory breaks at resonances and, when oscillation splitting
// is enabled, uniform panels of width pi / oscillation_length.
struct ModeGrid {
    std::vector<double> resonances;
    double oscillation_length = 0.0;
};

struct QuadratureResult {
    Complex value{};
    double error_bound = 0.0;
    std::size_t evaluations = 0;
    std::size_t panels = 0;
};

using ModeIntegrand = std::function<Complex(double)>;

// Globally adaptive Gauss-Kronrod (7/15) quadrature on [0, cutoff]. The
// reported (value, bound) pair is the refinement state with the smallest
// total error estimate seen, so tightening the tolerance never loosens the
// bound. Throws NonConvergence carrying that state when the tolerance is not
// met within max_subdivisions.
QuadratureResult mode_integrate(const ModeIntegrand& integrand, const ModeQuadratureConfig& config,
                                const ModeGrid& grid = {});

}  // namespace pfx
