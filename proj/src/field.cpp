#include "pfx/field.hpp"

#include "pfx/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>

namespace pfx {

namespace {

constexpr double kSmallPhase = 1e-8;

// Sharp window in centred form e^{i d c} 2 sin(d T/2)/d; identical to
// (e^{i d b} - e^{i d a})/(i d) but free of cancellation for small d T.
Complex sharp_window(double d, double a, double b) {
    const double width = b - a;
    const double centre = 0.5 * (a + b);
    const Complex phase = std::polar(1.0, d * centre);
    if (std::abs(d) * width < kSmallPhase) return width * phase;
    return phase * (2.0 * std::sin(0.5 * d * width) / d);
}

double sinc(double x) {
    if (std::abs(x) < 1e-4) return 1.0 - x * x / 6.0;
    return std::sin(x) / x;
}

// Gauss-Kronrod 7/15 abscissae and weights (QUADPACK qk15).
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct PanelEstimate {
    Complex value;
    double error;
};

double qk_error(double resk, double resg, double resabs, double resasc, double half) {
    constexpr double eps = std::numeric_limits<double>::epsilon();
    constexpr double tiny = std::numeric_limits<double>::min();
    double err = std::abs((resk - resg) * half);
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    if (resabs > tiny / (50.0 * eps)) err = std::max(50.0 * eps * resabs, err);
    return err;
}

PanelEstimate gk15(const ModeIntegrand& f, double a, double b) {
    const double centre = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    std::array<Complex, 15> fv;
    fv[7] = f(centre);
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        fv[j] = f(centre - dx);
        fv[14 - j] = f(centre + dx);
    }
    Complex resk = kWgk[7] * fv[7];
    Complex resg = kWg[3] * fv[7];
    for (int j = 0; j < 7; ++j) {
        resk += kWgk[j] * (fv[j] + fv[14 - j]);
        if (j % 2 == 1) resg += kWg[j / 2] * (fv[j] + fv[14 - j]);
    }
    const Complex mean = 0.5 * resk;
    double abs_re = kWgk[7] * std::abs(fv[7].real()), abs_im = kWgk[7] * std::abs(fv[7].imag());
    double asc_re = kWgk[7] * std::abs(fv[7].real() - mean.real());
    double asc_im = kWgk[7] * std::abs(fv[7].imag() - mean.imag());
    for (int j = 0; j < 7; ++j) {
        abs_re += kWgk[j] * (std::abs(fv[j].real()) + std::abs(fv[14 - j].real()));
        abs_im += kWgk[j] * (std::abs(fv[j].imag()) + std::abs(fv[14 - j].imag()));
        asc_re += kWgk[j] * (std::abs(fv[j].real() - mean.real()) + std::abs(fv[14 - j].real() - mean.real()));
        asc_im += kWgk[j] * (std::abs(fv[j].imag() - mean.imag()) + std::abs(fv[14 - j].imag() - mean.imag()));
    }
    const double err_re = qk_error(resk.real(), resg.real(), abs_re * half, asc_re * half, half);
    const double err_im = qk_error(resk.imag(), resg.imag(), abs_im * half, asc_im * half, half);
    return {resk * half, std::hypot(err_re, err_im)};
}

// Neumaier-compensated running sum; panels are added and removed as they
// are refined.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

struct Panel {
    double a;
    double b;
    PanelEstimate est;
};

constexpr std::size_t kMaxInitialPanels = 4'000'000;

}  // namespace

Complex window_integral(const WindowIntegralSpec& spec) {
    const double a = spec.t_start;
    const double b = spec.t_end;
    const double d = spec.detuning;
    switch (spec.profile.kind) {
    case ProfileKind::Sharp:
        return sharp_window(d, a, b);
    case ProfileKind::LinearRamp: {
        const double tau = spec.profile.ramp;
        return sharp_window(d, a + 0.5 * tau, b - 0.5 * tau) * sinc(0.5 * d * tau);
    }
    case ProfileKind::GaussianRamp: {
        const double tau = spec.profile.ramp;
        const double sigma = tau / 6.0;
        return sharp_window(d, a + 0.5 * tau, b - 0.5 * tau) * std::exp(-0.5 * d * d * sigma * sigma);
    }
    }
    return {};
}

double envelope(const SwitchingProfile& profile, double a, double b, double t) {
    switch (profile.kind) {
    case ProfileKind::Sharp:
        return (t >= a && t <= b) ? 1.0 : 0.0;
    case ProfileKind::LinearRamp: {
        const double tau = profile.ramp;
        if (t <= a || t >= b) return 0.0;
        return std::min({1.0, (t - a) / tau, (b - t) / tau});
    }
    case ProfileKind::GaussianRamp: {
        const double tau = profile.ramp;
        const double scale = std::numbers::sqrt2 * tau / 6.0;
        return 0.5 * (std::erf((t - a - 0.5 * tau) / scale) - std::erf((t - b + 0.5 * tau) / scale));
    }
    }
    return 0.0;
}

Complex wightman(double separation, double time_lag, const FieldParams& field) {
    const double eps = field.speed / field.uv_cutoff;
    const double s = field.speed * time_lag;
    const Complex minus{eps, s - separation};
    const Complex plus{eps, s + separation};
    return 1.0 / (minus * minus) + 1.0 / (plus * plus);
}

QuadratureResult mode_integrate(const ModeIntegrand& f, const ModeQuadratureConfig& cfg,
                                const ModeGrid& grid) {
    if (!(cfg.cutoff > 0.0) || !std::isfinite(cfg.cutoff)) throw InvalidArgument("quadrature cutoff must be > 0");
    if (!(cfg.relative_tolerance > 0.0 && cfg.relative_tolerance < 1.0))
        throw InvalidArgument("relative_tolerance must lie in (0, 1)");
    if (cfg.absolute_tolerance < 0.0) throw InvalidArgument("absolute_tolerance must be >= 0");

    const double upper = cfg.cutoff;
    std::vector<double> breaks{0.0};
    for (double res : grid.resonances)
        if (res > 0.0 && res < upper) breaks.push_back(res);
    breaks.push_back(upper);
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

    double width = upper;
    if (cfg.oscillation_splitting && grid.oscillation_length > 0.0) {
        width = std::numbers::pi / grid.oscillation_length;
        if (upper / width > static_cast<double>(kMaxInitialPanels)) width = upper / kMaxInitialPanels;
    }

    std::vector<Panel> panels;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const double a = breaks[i];
        const double b = breaks[i + 1];
        const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil((b - a) / width - 1e-9)));
        for (std::size_t j = 0; j < n; ++j) {
            const double lo = a + (b - a) * static_cast<double>(j) / static_cast<double>(n);
            const double hi = (j + 1 == n) ? b : a + (b - a) * static_cast<double>(j + 1) / static_cast<double>(n);
            panels.push_back({lo, hi, {}});
        }
    }

    CompensatedSum sum_re, sum_im, sum_err;
    std::size_t evaluations = 0;
    for (auto& p : panels) {
        p.est = gk15(f, p.a, p.b);
        evaluations += 15;
        sum_re.add(p.est.value.real());
        sum_im.add(p.est.value.imag());
        sum_err.add(p.est.error);
    }

    auto target = [&](Complex value) {
        return std::max(cfg.absolute_tolerance, cfg.relative_tolerance * std::abs(value));
    };

    Complex best_value{sum_re.value(), sum_im.value()};
    double best_error = sum_err.value();

    // Max-heap on error; ties resolved by panel index so refinement order is
    // a pure function of the inputs.
    auto cmp = [&](std::size_t lhs, std::size_t rhs) {
        if (panels[lhs].est.error != panels[rhs].est.error)
            return panels[lhs].est.error < panels[rhs].est.error;
        return lhs > rhs;
    };
    std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(cmp)> heap(cmp);
    for (std::size_t i = 0; i < panels.size(); ++i) heap.push(i);

    std::size_t subdivisions = 0;
    while (best_error > target(best_value)) {
        if (subdivisions >= cfg.max_subdivisions || heap.empty()) {
            throw NonConvergence("mode quadrature did not reach tolerance", best_value.real(),
                                 best_value.imag(), best_error);
        }
        const std::size_t idx = heap.top();
        heap.pop();
        const Panel parent = panels[idx];
        const double mid = 0.5 * (parent.a + parent.b);
        if (!(mid > parent.a && mid < parent.b)) continue;  // at floating-point resolution

        Panel left{parent.a, mid, gk15(f, parent.a, mid)};
        Panel right{mid, parent.b, gk15(f, mid, parent.b)};
        evaluations += 30;
        ++subdivisions;

        sum_re.add(-parent.est.value.real());
        sum_im.add(-parent.est.value.imag());
        sum_err.add(-parent.est.error);
        for (const Panel* child : {&left, &right}) {
            sum_re.add(child->est.value.real());
            sum_im.add(child->est.value.imag());
            sum_err.add(child->est.error);
        }
        panels[idx] = left;
        panels.push_back(right);
        heap.push(idx);
        heap.push(panels.size() - 1);

        const double err = std::max(0.0, sum_err.value());
        if (err < best_error) {
            best_error = err;
            best_value = Complex{sum_re.value(), sum_im.value()};
        }
    }

    return {best_value, best_error, evaluations, panels.size()};
}

}  // namespace pfx
