#include "pfx/errors.hpp"
#include "pfx/oracle.hpp"
#include "pfx/perturbation.hpp"

#include <doctest.h>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

using namespace pfx;

namespace {

// Short-distance geometry at T_on = 0.02 ns, T_off = 0, with the small
// cutoff the lattice can resolve.
ModelParams geometry(double g, double kc = 5.0) {
    ModelParams p;
    p.qubit_p.coupling_ratio = p.qubit_f.coupling_ratio = g;
    p.qubit_f.position = 0.25 * std::numbers::pi;
    p.field.uv_cutoff = kc;
    p.schedule = {0.04 * std::numbers::pi, 0.0};
    return p;
}

LatticeConfig lattice(std::size_t n_modes, double kc = 5.0) {
    LatticeConfig l;
    l.n_modes = n_modes;
    l.k_max = 12.0 * kc;
    return l;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_SUITE("oracle") {
    TEST_CASE("zero coupling leaves the initial state untouched") {
        const OracleResult r = simulate(geometry(0.0), lattice(16));
        CHECK(r.state.pop_eg == 1.0);
        CHECK(r.state.pop_ge == 0.0);
        CHECK(r.state.pop_gg1 == 0.0);
        CHECK(r.state.coh_eg_ge == Complex{});
        CHECK(r.norm_drift < 1e-10);
    }

    TEST_CASE("weak coupling reproduces the perturbative amplitudes") {
        const ModelParams p = geometry(0.02);
        const OracleResult o = simulate(p, lattice(64));
        const AmplitudeSet a = compute_amplitudes(p);
        CHECK(o.norm_drift <= 1e-6);
        CHECK(rel(o.state.pop_gg1, a.p_emit_p) < 0.05);
        CHECK(rel(o.state.pop_ee1, a.p_emit_f) < 0.05);
        CHECK(rel(std::abs(o.state.coh_eg_ge), a.exchange_modulus) < 0.05);
    }

    TEST_CASE("the same holds with a separation gap between the windows") {
        ModelParams p = geometry(0.02);
        p.schedule.t_off = 0.6;
        const OracleResult o = simulate(p, lattice(64));
        const AmplitudeSet a = compute_amplitudes(p);
        CHECK(rel(std::abs(o.state.coh_eg_ge), a.exchange_modulus) < 0.05);
    }

    TEST_CASE("reduced state is a density matrix") {
        const OracleResult o = simulate(geometry(0.05), lattice(32));
        Eigen::Matrix4cd rho;
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) rho(a, b) = o.rho[a][b];
        CHECK((rho - rho.adjoint()).norm() < 1e-14);
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(rho);
        CHECK(es.eigenvalues().minCoeff() >= -1e-10);
        CHECK(std::abs(rho.trace().real() - 1.0) <= 2.0 * o.norm_drift + 1e-12);
        CHECK(o.top_sector_population >= 0.0);
    }

    TEST_CASE("exchange coherence is linear in K at weak coupling") {
        const double c1 = std::abs(simulate(geometry(0.01), lattice(32)).state.coh_eg_ge);
        const double c2 = std::abs(simulate(geometry(0.01 * std::sqrt(2.0)), lattice(32)).state.coh_eg_ge);
        CHECK(c2 / c1 == doctest::Approx(2.0).epsilon(0.05));
    }

    TEST_CASE("spacelike windows still build coherence") {
        const ModelParams p = geometry(0.19);
        LatticeConfig l = lattice(24);
        l.photon_truncation = 3;
        const OracleResult o = simulate(p, l);
        CHECK(std::abs(o.state.coh_eg_ge) > 10.0 * std::max(o.norm_drift, 1e-12));
    }

    TEST_CASE("photon truncation breach is detected") {
        ModelParams p = geometry(0.19);
        p.schedule.t_on = 2.0;
        CHECK_THROWS_AS(simulate(p, lattice(24)), TruncationBreach);
    }

    TEST_CASE("coarse low-order stepping is rejected") {
        ModelParams p = geometry(1.0);
        p.schedule.t_on = 0.5;
        LatticeConfig l = lattice(8);
        l.k_max = 2.0;
        l.integrator_order = 2;
        l.time_step = 0.049 / l.k_max;
        l.photon_truncation = 4;
        CHECK_THROWS_AS(simulate(p, l), StepSizeRejected);
    }

    TEST_CASE("invalid lattices") {
        const ModelParams p = geometry(0.02);
        LatticeConfig l = lattice(4);
        CHECK_THROWS_AS(simulate(p, l), InvalidArgument);
        l = lattice(16);
        l.integrator_order = 3;
        CHECK_THROWS_AS(simulate(p, l), InvalidArgument);
        l = lattice(16);
        l.time_step = 1.0;
        CHECK_THROWS_AS(simulate(p, l), InvalidArgument);
        l = lattice(16);
        l.photon_truncation = 1;
        CHECK_THROWS_AS(simulate(p, l), InvalidArgument);
    }

    TEST_CASE("mode refinement converges monotonically") {
        const ConvergenceTable t = convergence_sweep(geometry(0.02), {lattice(16), lattice(32), lattice(64)}, 2);
        REQUIRE(t.rows.size() == 3);
        for (const auto& row : t.rows) CHECK(row.error.empty());
        const double d1 = std::abs(t.rows[1].p_emit_p - t.rows[0].p_emit_p);
        const double d2 = std::abs(t.rows[2].p_emit_p - t.rows[1].p_emit_p);
        CHECK(d2 < d1);
        CHECK(std::isfinite(t.extrapolated_p_emit_p));
        const AmplitudeSet a = compute_amplitudes(geometry(0.02));
        CHECK(std::abs(t.extrapolated_p_emit_p - a.p_emit_p) < std::abs(t.rows[2].p_emit_p - a.p_emit_p));
    }

    TEST_CASE("time-step halving shows the integrator order") {
        for (int order : {2, 4}) {
            ModelParams p = geometry(0.05);
            std::vector<LatticeConfig> series;
            for (double f : {1.0, 0.5, 0.25}) {
                LatticeConfig l = lattice(16);
                l.integrator_order = order;
                l.time_step = 0.08 * f / l.k_max;
                series.push_back(l);
            }
            const ConvergenceTable t = convergence_sweep(p, series);
            const double d1 = t.rows[1].p_emit_p - t.rows[0].p_emit_p;
            const double d2 = t.rows[2].p_emit_p - t.rows[1].p_emit_p;
            CAPTURE(order);
            const double ratio = std::abs(d1 / d2);
            CHECK(ratio > std::pow(2.0, order) / 2.0);
            CHECK(ratio < std::pow(2.0, order) * 2.0);
        }
    }

    TEST_CASE("zero-coupling rows are exact at every level") {
        const ConvergenceTable t = convergence_sweep(geometry(0.0), {lattice(8), lattice(16)});
        for (const auto& row : t.rows) {
            CHECK(row.p_emit_p == 0.0);
            CHECK(row.p_emit_f == 0.0);
            CHECK(row.coherence == 0.0);
        }
    }
}
