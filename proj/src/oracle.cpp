#include "pfx/oracle.hpp"

#include "pfx/errors.hpp"
#include "pfx/field.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <thread>
#include <unordered_map>

namespace pfx {

namespace {

constexpr int kMaxTruncation = 4;

// Multiset of oscillator indices packed 16 bits per photon (index + 1).
using FockKey = std::uint64_t;

FockKey pack(const std::vector<std::uint16_t>& modes) {
    FockKey key = 0;
    for (std::uint16_t m : modes) key = (key << 16) | static_cast<FockKey>(m + 1);
    return key;
}

struct Creation {
    std::uint32_t source;
    std::uint32_t target;
    std::uint32_t mode;
    double factor;  // sqrt(n_mode + 1) evaluated on the source
};

// Truncated bosonic basis with the b_m^dagger transitions between adjacent
// sectors; annihilation uses the same table transposed.
class FockSpace {
public:
    FockSpace(std::size_t oscillators, int truncation) {
        std::vector<std::uint16_t> current;
        sector_start_.push_back(0);
        for (int n = 0; n <= truncation; ++n) {
            enumerate(n, 0, oscillators, current);
            sector_start_.push_back(states_.size());
        }
        for (std::size_t i = 0; i < states_.size(); ++i) index_.emplace(pack(states_[i]), i);

        const std::size_t below_top = sector_start_[static_cast<std::size_t>(truncation)];
        creations_.reserve(below_top * oscillators);
        for (std::size_t s = 0; s < below_top; ++s) {
            for (std::size_t m = 0; m < oscillators; ++m) {
                std::vector<std::uint16_t> next = states_[s];
                next.insert(std::upper_bound(next.begin(), next.end(), m), static_cast<std::uint16_t>(m));
                const auto count = std::count(next.begin(), next.end(), static_cast<std::uint16_t>(m));
                creations_.push_back({static_cast<std::uint32_t>(s),
                                      static_cast<std::uint32_t>(index_.at(pack(next))),
                                      static_cast<std::uint32_t>(m), std::sqrt(static_cast<double>(count))});
            }
        }
    }

    std::size_t size() const { return states_.size(); }
    std::size_t top_sector_begin() const { return sector_start_[sector_start_.size() - 2]; }
    const std::vector<Creation>& creations() const { return creations_; }

private:
    void enumerate(int remaining, std::size_t min_mode, std::size_t oscillators, std::vector<std::uint16_t>& current) {
        if (remaining == 0) {
            states_.push_back(current);
            return;
        }
        for (std::size_t m = min_mode; m < oscillators; ++m) {
            current.push_back(static_cast<std::uint16_t>(m));
            enumerate(remaining - 1, m, oscillators, current);
            current.pop_back();
        }
    }

    std::vector<std::vector<std::uint16_t>> states_;
    std::vector<std::size_t> sector_start_;
    std::unordered_map<FockKey, std::size_t> index_;
    std::vector<Creation> creations_;
};

using State = std::vector<Complex>;

class InteractionPictureSystem {
public:
    InteractionPictureSystem(const ModelParams& p, const LatticeConfig& lat) : params_(p), space_(2 * lat.n_modes, lat.photon_truncation) {
        const std::size_t osc = 2 * lat.n_modes;
        const double dk = lat.k_max / static_cast<double>(lat.n_modes);
        const double centre = 0.5 * (p.qubit_p.position + p.qubit_f.position);
        const double kc = p.field.uv_cutoff;
        frequencies_.resize(osc);
        coupling_p_.resize(osc);
        coupling_f_.resize(osc);
        for (std::size_t n = 0; n < lat.n_modes; ++n) {
            const double k = (static_cast<double>(n) + 0.5) * dk;
            const double weight = std::sqrt(2.0 * k * dk * std::exp(-k / kc));
            const double lp = 0.5 * std::sqrt(p.qubit_p.dimensionless_coupling()) * weight;
            const double lf = 0.5 * std::sqrt(p.qubit_f.dimensionless_coupling()) * weight;
            const double yp = p.qubit_p.position - centre;
            const double yf = p.qubit_f.position - centre;
            frequencies_[2 * n] = frequencies_[2 * n + 1] = p.field.speed * k;
            coupling_p_[2 * n] = Complex{0.0, lp * std::cos(k * yp)};
            coupling_p_[2 * n + 1] = Complex{-lp * std::sin(k * yp), 0.0};
            coupling_f_[2 * n] = Complex{0.0, lf * std::cos(k * yf)};
            coupling_f_[2 * n + 1] = Complex{-lf * std::sin(k * yf), 0.0};
        }
        phased_.resize(osc);
    }

    std::size_t photon_dim() const { return space_.size(); }
    std::size_t dimension() const { return 4 * space_.size(); }
    const FockSpace& space() const { return space_; }

    // out = -i H_I(t) psi for the single qubit active in this window.
    void derivative(bool qubit_is_p, double t, double env, const State& psi, State& out) {
        std::fill(out.begin(), out.end(), Complex{});
        if (env == 0.0) return;
        const auto& u = qubit_is_p ? coupling_p_ : coupling_f_;
        const double gap = qubit_is_p ? params_.qubit_p.gap : params_.qubit_f.gap;
        for (std::size_t m = 0; m < u.size(); ++m) phased_[m] = u[m] * std::polar(1.0, -frequencies_[m] * t);

        const std::size_t bit = qubit_is_p ? 2 : 1;
        const std::size_t d = space_.size();
        for (std::size_t q = 0; q < 4; ++q) {
            const std::size_t target_q = q ^ bit;
            const bool lowering = (q & bit) != 0;
            // -i * (-s sigma^x A) = i s sigma^x A
            const Complex scale = Complex{0.0, env} * std::polar(1.0, lowering ? -gap * t : gap * t);
            const Complex* in = psi.data() + q * d;
            Complex* dst = out.data() + target_q * d;
            for (const Creation& c : space_.creations()) {
                const Complex um = phased_[c.mode];
                dst[c.target] += scale * (std::conj(um) * c.factor) * in[c.source];
                dst[c.source] += scale * (um * c.factor) * in[c.target];
            }
        }
    }

private:
    ModelParams params_;
    FockSpace space_;
    std::vector<double> frequencies_;
    std::vector<Complex> coupling_p_;
    std::vector<Complex> coupling_f_;
    std::vector<Complex> phased_;
};

void axpy(State& y, Complex a, const State& x) {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

std::size_t integrate_window(InteractionPictureSystem& sys, bool qubit_is_p, double a, double b,
                             const SwitchingProfile& profile, const LatticeConfig& lat, State& psi) {
    const double width = b - a;
    const auto steps = static_cast<std::size_t>(std::ceil(width / lat.effective_time_step() - 1e-9));
    const double h = width / static_cast<double>(steps);
    // Clamp so rounding in a + s * h never drops the sharp window's end point.
    auto env = [&](double t) { return envelope(profile, a, b, std::clamp(t, a, b)); };

    const std::size_t n = psi.size();
    State k1(n), k2(n), k3(n), k4(n), tmp(n);
    for (std::size_t s = 0; s < steps; ++s) {
        const double t = a + h * static_cast<double>(s);
        if (lat.integrator_order == 2) {
            sys.derivative(qubit_is_p, t, env(t), psi, k1);
            tmp = psi;
            axpy(tmp, 0.5 * h, k1);
            sys.derivative(qubit_is_p, t + 0.5 * h, env(t + 0.5 * h), tmp, k2);
            axpy(psi, h, k2);
        } else {
            sys.derivative(qubit_is_p, t, env(t), psi, k1);
            tmp = psi;
            axpy(tmp, 0.5 * h, k1);
            sys.derivative(qubit_is_p, t + 0.5 * h, env(t + 0.5 * h), tmp, k2);
            tmp = psi;
            axpy(tmp, 0.5 * h, k2);
            sys.derivative(qubit_is_p, t + 0.5 * h, env(t + 0.5 * h), tmp, k3);
            tmp = psi;
            axpy(tmp, h, k3);
            sys.derivative(qubit_is_p, t + h, env(t + h), tmp, k4);
            for (std::size_t i = 0; i < n; ++i) psi[i] += (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    return steps;
}

double richardson(double coarse, double fine, double order) {
    return fine + (fine - coarse) / (std::pow(2.0, order) - 1.0);
}

}  // namespace

void validate(const LatticeConfig& lat, const ModelParams& p) {
    if (lat.n_modes < 8) throw InvalidArgument("lattice needs n_modes >= 8");
    if (2 * lat.n_modes > 65000) throw InvalidArgument("lattice n_modes too large");
    if (!(lat.k_max >= 2.0 * std::max(p.qubit_p.gap, p.qubit_f.gap)))
        throw InvalidArgument("lattice k_max must be at least twice the largest qubit gap");
    if (lat.photon_truncation < 2 || lat.photon_truncation > kMaxTruncation)
        throw InvalidArgument("photon_truncation must lie in [2, 4]");
    if (lat.integrator_order != 2 && lat.integrator_order != 4)
        throw InvalidArgument("integrator_order must be 2 or 4");
    if (!(lat.effective_time_step() * p.field.speed * lat.k_max < 0.1))
        throw InvalidArgument("time_step * largest mode frequency must stay below 0.1");
}

OracleResult simulate(const ModelParams& p, const LatticeConfig& lat) {
    validate(p);
    if (!is_natural(p)) throw InvalidArgument("oracle expects natural units (v = 1, Omega_P = 1)");
    validate(lat, p);

    InteractionPictureSystem sys(p, lat);
    const std::size_t d = sys.photon_dim();
    State psi(sys.dimension(), Complex{});
    psi[2 * d] = 1.0;  // |eg0>

    const double t1 = p.schedule.t1();
    const double t2 = p.schedule.t2();
    OracleResult out;
    out.dimension = psi.size();
    if (p.qubit_p.coupling_ratio > 0.0)
        out.steps += integrate_window(sys, true, -t2, -t1, p.field.profile, lat, psi);
    if (p.qubit_f.coupling_ratio > 0.0)
        out.steps += integrate_window(sys, false, t1, t2, p.field.profile, lat, psi);

    double norm2 = 0.0;
    double top = 0.0;
    const std::size_t top_begin = sys.space().top_sector_begin();
    for (std::size_t q = 0; q < 4; ++q) {
        for (std::size_t s = 0; s < d; ++s) {
            const double w = std::norm(psi[q * d + s]);
            norm2 += w;
            if (s >= top_begin) top += w;
        }
    }
    out.norm_drift = std::abs(std::sqrt(norm2) - 1.0);
    out.top_sector_population = top;

    for (std::size_t a = 0; a < 4; ++a) {
        for (std::size_t b = 0; b < 4; ++b) {
            Complex acc{};
            for (std::size_t s = 0; s < d; ++s) acc += psi[a * d + s] * std::conj(psi[b * d + s]);
            out.rho[a][b] = acc;
        }
    }
    out.state.pop_gg1 = out.rho[0][0].real();
    out.state.pop_ge = out.rho[1][1].real();
    out.state.pop_eg = out.rho[2][2].real();
    out.state.pop_ee1 = out.rho[3][3].real();
    out.state.coh_eg_ge = out.rho[2][1];
    out.state.trace_deviation = out.state.trace() - 1.0;

    if (out.norm_drift > kMaxNormDrift) {
        std::ostringstream msg;
        msg << "oracle norm drift " << out.norm_drift << " exceeds " << kMaxNormDrift;
        throw StepSizeRejected(msg.str(), out.norm_drift);
    }
    if (top > kMaxTopSectorWeight * norm2) {
        std::ostringstream msg;
        msg << "photon truncation breached: top sector weight " << top;
        throw TruncationBreach(msg.str(), top);
    }
    return out;
}

ConvergenceTable convergence_sweep(const ModelParams& p, const std::vector<LatticeConfig>& series, unsigned workers) {
    if (series.empty()) throw InvalidArgument("convergence sweep needs at least one lattice");
    ConvergenceTable table;
    table.rows.resize(series.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < series.size(); i = next++) {
            ConvergenceRow& row = table.rows[i];
            row.lattice = series[i];
            try {
                const OracleResult r = simulate(p, series[i]);
                row.p_emit_p = r.state.pop_gg1;
                row.p_emit_f = r.state.pop_ee1;
                row.coherence = std::abs(r.state.coh_eg_ge);
                row.norm_drift = r.norm_drift;
            } catch (const Error& e) {
                row.error = e.what();
            }
        }
    };
    const unsigned n = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(series.size())));
    if (n == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < n; ++w) pool.emplace_back(work);
    }

    std::vector<const ConvergenceRow*> ok;
    for (const auto& row : table.rows)
        if (row.error.empty()) ok.push_back(&row);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    table.extrapolated_p_emit_p = table.extrapolated_p_emit_f = table.extrapolated_coherence = nan;
    table.observed_order = nan;
    if (ok.size() < 2) return table;

    double order = 2.0;
    if (ok.size() >= 3) {
        const double d1 = ok[ok.size() - 2]->p_emit_p - ok[ok.size() - 3]->p_emit_p;
        const double d2 = ok.back()->p_emit_p - ok[ok.size() - 2]->p_emit_p;
        if (d1 != 0.0 && d2 != 0.0) {
            table.observed_order = std::log2(std::abs(d1 / d2));
            if (std::isfinite(table.observed_order) && table.observed_order > 0.5) order = table.observed_order;
        }
    }
    const ConvergenceRow& c = *ok[ok.size() - 2];
    const ConvergenceRow& f = *ok.back();
    table.extrapolated_p_emit_p = richardson(c.p_emit_p, f.p_emit_p, order);
    table.extrapolated_p_emit_f = richardson(c.p_emit_f, f.p_emit_f, order);
    table.extrapolated_coherence = richardson(c.coherence, f.coherence, order);
    return table;
}

}  // namespace pfx
