#include "pfx/commands.hpp"

#include "pfx/circuit.hpp"
#include "pfx/entanglement.hpp"
#include "pfx/errors.hpp"
#include "pfx/oracle.hpp"
#include "pfx/regions.hpp"
#include "pfx/sweep.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

namespace pfx {

namespace {

namespace fs = std::filesystem;

std::string ns_per_natural(const RunConfig& c) { return format_number(1.0 / (2.0 * std::numbers::pi * c.qubit_p.omega_ghz)); }

std::vector<std::string> provenance(const RunConfig& c, std::string_view command) {
    return {"pfx " PFX_VERSION_STRING " command=" + std::string(command), "config_hash=" + config_hash(c),
            "units: times ns, frequencies GHz, separation r/lambda; one natural time unit = " + ns_per_natural(c) +
                " ns"};
}

class OutputFile {
public:
    OutputFile(const RunConfig& c, const std::string& name, CommandOutcome& outcome) {
        std::error_code ec;
        fs::create_directories(c.output, ec);
        if (ec) throw IoError("cannot create output directory '" + c.output + "': " + ec.message());
        path_ = (fs::path(c.output) / name).string();
        os_.open(path_, std::ios::binary | std::ios::trunc);
        if (!os_) throw IoError("cannot open '" + path_ + "' for writing");
        os_.imbue(std::locale::classic());
        outcome.files.push_back(path_);
    }
    ~OutputFile() = default;

    std::ostream& stream() { return os_; }
    void comments(const std::vector<std::string>& lines) {
        for (const auto& l : lines) os_ << "# " << l << '\n';
    }
    void close() {
        os_.close();
        if (!os_) throw IoError("failed writing '" + path_ + "'");
    }

private:
    std::string path_;
    std::ofstream os_;
};

std::string join(std::initializer_list<std::string> parts) {
    std::string out;
    for (const auto& p : parts) {
        if (!out.empty()) out += ',';
        out += p;
    }
    return out;
}

SweepRow row_from(const ModelParams& p, const AmplitudeSet& a, double axis1, double axis2) {
    const Region region = classify(p.schedule, p.separation(), p.field.speed);
    const ConcurrenceValue c = concurrence(a);
    SweepRow row;
    row.axis1 = axis1;
    row.axis2 = axis2;
    row.region = region.label;
    row.on_boundary = region.on_boundary;
    row.p_a = a.p_emit_p;
    row.p_b = a.p_emit_f;
    row.x_abs = a.exchange_modulus;
    row.raw_excess = c.raw_excess;
    row.concurrence = c.concurrence;
    row.valid_p = a.valid_p;
    row.valid_f = a.valid_f;
    row.err_bound = a.quadrature_error_bound;
    row.error = a.error;
    return row;
}

void check_boundary_axes(const RunConfig& c, bool& is_schedule_grid, double& t_on_max, double& t_off_max) {
    is_schedule_grid = false;
    if (!c.sweep.axis1 || !c.sweep.axis2) return;
    const std::string& a = c.sweep.axis1->path;
    const std::string& b = c.sweep.axis2->path;
    if (a == "t_on_ns" && b == "t_off_ns") {
        t_on_max = c.sweep.axis1->max;
        t_off_max = c.sweep.axis2->max;
    } else if (a == "t_off_ns" && b == "t_on_ns") {
        t_on_max = c.sweep.axis2->max;
        t_off_max = c.sweep.axis1->max;
    } else {
        return;
    }
    is_schedule_grid = t_on_max > 0.0 && t_off_max > 0.0;
}

void write_boundaries(const RunConfig& c, double t_on_max, double t_off_max, const std::vector<std::string>& header,
                      CommandOutcome& outcome) {
    // With v = 1 in ns units the light-crossing time is r/lambda / f_P.
    const double light_ns = c.r_over_lambda / c.qubit_p.omega_ghz;
    OutputFile f(c, "boundaries.csv", outcome);
    f.comments(header);
    f.comments({"r/v_ns=" + format_number(light_ns)});
    f.stream() << "curve,below,above,t_on_ns,t_off_ns\n";
    for (const BoundaryCurve& curve : boundary_curves(light_ns, 1.0, t_on_max, t_off_max)) {
        for (const BoundaryPoint& p : curve.points)
            f.stream() << join({curve.name, std::string(to_string(curve.below)), std::string(to_string(curve.above)),
                                format_number(p.t_on), format_number(p.t_off)})
                       << '\n';
    }
    f.close();
}

std::string describe(const char* name, double value) {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os << "  " << name;
    for (std::size_t i = std::char_traits<char>::length(name); i < 26; ++i) os << ' ';
    os << format_number(value) << '\n';
    return os.str();
}

}  // namespace

CommandOutcome cmd_point(const RunConfig& c) {
    CommandOutcome out;
    const ModelParams p = natural_params(c);
    const AmplitudeSet a = compute_amplitudes(p, amplitude_options(c));
    const EntanglementReport e = entanglement_report(a);
    const Region region = classify(p.schedule, p.separation(), p.field.speed);

    std::ostringstream r;
    r.imbue(std::locale::classic());
    r << "region " << to_string(region.label) << (region.on_boundary ? " (on boundary)" : "")
      << (region.degenerate ? " (degenerate)" : "") << '\n';
    r << describe("p_a", a.p_emit_p) << describe("p_b", a.p_emit_f) << describe("x_abs", a.exchange_modulus)
      << describe("raw_excess", e.raw_excess) << describe("concurrence", e.concurrence)
      << describe("fef", e.fully_entangled_fraction) << describe("fidelity_bound", e.teleport_fidelity_bound)
      << describe("margin_p", a.margin.p) << describe("margin_f", a.margin.f)
      << describe("err_x", a.err_exchange) << describe("err_p_a", a.err_emit_p) << describe("err_p_b", a.err_emit_f)
      << describe("err_bound", a.quadrature_error_bound);
    if (!a.valid_p || !a.valid_f) r << "  warning: validity margin above " << format_number(c.validity_threshold) << '\n';
    if (!a.converged) r << "  warning: " << a.error << '\n';

    OutputFile f(c, "point.csv", out);
    f.comments(provenance(c, "point"));
    f.comments({"axis1=t_on_ns axis2=t_off_ns"});
    write_rows_csv(f.stream(), {row_from(p, a, c.t_on_ns, c.t_off_ns)}, true, {});
    f.close();
    out.report = r.str();
    return out;
}

LabSweep run_lab_sweep(const RunConfig& c) {
    if (!c.sweep.axis1) throw ConfigError("sweep.axis1 is required for a sweep");
    LabSweep out;
    SweepSpec spec;
    spec.base = natural_params(c);
    spec.options = amplitude_options(c);
    spec.options.strict = false;
    spec.outputs = c.sweep.outputs;
    out.axis1 = map_axis(c, c.sweep.axis1->path);
    const AxisMapping& m1 = out.axis1;
    spec.axis1 = {m1.natural_path, m1.factor * c.sweep.axis1->min, m1.factor * c.sweep.axis1->max, c.sweep.axis1->n};
    if (c.sweep.axis2) {
        out.axis2 = map_axis(c, c.sweep.axis2->path);
        spec.axis2 = SweepAxis{out.axis2->natural_path, out.axis2->factor * c.sweep.axis2->min,
                               out.axis2->factor * c.sweep.axis2->max, c.sweep.axis2->n};
    }
    try {
        out.natural = run_sweep(spec, c.workers);
    } catch (const InvalidArgument& e) {
        throw ConfigError(std::string("invalid sweep: ") + e.what());
    }

    // Same rows, axes in the units they were configured in.
    const SweepAxis lab1{c.sweep.axis1->path, c.sweep.axis1->min, c.sweep.axis1->max, c.sweep.axis1->n};
    std::optional<SweepAxis> lab2;
    if (c.sweep.axis2) lab2 = SweepAxis{c.sweep.axis2->path, c.sweep.axis2->min, c.sweep.axis2->max, c.sweep.axis2->n};
    out.lab = out.natural;
    for (std::size_t i = 0; i < out.lab.rows.size(); ++i) {
        out.lab.rows[i].axis1 = lab1.value(i / out.lab.n2);
        if (lab2) out.lab.rows[i].axis2 = lab2->value(i % out.lab.n2);
    }
    out.lab.spec.axis1 = lab1;
    out.lab.spec.axis2 = lab2;
    return out;
}

CommandOutcome cmd_sweep(const RunConfig& c) {
    CommandOutcome out;
    const LabSweep sweep = run_lab_sweep(c);
    const SweepResult& result = sweep.natural;
    const SweepResult& lab = sweep.lab;
    const SweepAxis& lab1 = lab.spec.axis1;
    const std::optional<SweepAxis>& lab2 = lab.spec.axis2;
    const AxisMapping& m1 = sweep.axis1;

    const auto header = provenance(c, "sweep");
    {
        OutputFile f(c, "sweep.csv", out);
        write_sweep_csv(f.stream(), lab, header);
        f.close();
    }
    {
        OutputFile f(c, "sweep_long.csv", out);
        write_sweep_long_csv(f.stream(), lab, header);
        f.close();
    }

    std::size_t failed = 0, flagged = 0;
    for (const SweepRow& row : result.rows) {
        if (!row.error.empty()) ++failed;
        if (!row.valid_p || !row.valid_f) ++flagged;
    }
    std::ostringstream r;
    r.imbue(std::locale::classic());
    r << "rows " << result.rows.size() << ", failed " << failed << ", validity flagged " << flagged << '\n';
    r << "spec_hash " << result.provenance.spec_hash << '\n';

    if (!lab2) {
        OutputFile f(c, "peaks.csv", out);
        f.comments(header);
        f.comments({"peaks of raw_excess along " + lab1.path});
        f.stream() << "index,position,raw_excess,boundary,boundary_distance\n";
        try {
            for (const Peak& p : locate_peaks(result, SweepDim::Axis1)) {
                f.stream() << join({std::to_string(p.index), format_number(p.position / m1.factor),
                                    format_number(p.value), p.nearest_boundary,
                                    format_number(p.boundary_distance / m1.factor)})
                           << '\n';
                r << "peak at " << lab1.path << " = " << format_number(p.position / m1.factor) << " (nearest "
                  << (p.nearest_boundary.empty() ? "none" : p.nearest_boundary) << ", distance "
                  << format_number(p.boundary_distance / m1.factor) << ")\n";
            }
        } catch (const NoPeaks&) {
            f.comments({"no peaks"});
            r << "no peaks along " << lab1.path << '\n';
        }
        f.close();
    } else {
        bool grid = false;
        double t_on_max = 0, t_off_max = 0;
        check_boundary_axes(c, grid, t_on_max, t_off_max);
        if (grid) write_boundaries(c, t_on_max, t_off_max, header, out);
    }
    out.report = r.str();
    if (c.strict && flagged > 0) out.exit_code = kExitValidity;
    return out;
}

CommandOutcome cmd_regions(const RunConfig& c) {
    CommandOutcome out;
    if (c.regions.grid < 2) throw ConfigError("regions.grid must be >= 2");
    if (!(c.regions.t_on_max_ns > 0.0) || !(c.regions.t_off_max_ns > 0.0))
        throw ConfigError("regions extents must be > 0");
    const auto header = provenance(c, "regions");
    write_boundaries(c, c.regions.t_on_max_ns, c.regions.t_off_max_ns, header, out);

    const double light_ns = c.r_over_lambda / c.qubit_p.omega_ghz;
    OutputFile f(c, "regions.csv", out);
    f.comments(header);
    f.stream() << "t_on_ns,t_off_ns,region,on_boundary\n";
    const SweepAxis on{"t_on_ns", 0.0, c.regions.t_on_max_ns, c.regions.grid};
    const SweepAxis off{"t_off_ns", 0.0, c.regions.t_off_max_ns, c.regions.grid};
    for (std::size_t i = 0; i < on.n_points; ++i) {
        for (std::size_t j = 0; j < off.n_points; ++j) {
            const Schedule s{on.value(i), off.value(j)};
            const Region reg = classify(s, light_ns, 1.0);
            f.stream() << join({format_number(s.t_on), format_number(s.t_off), std::string(to_string(reg.label)),
                                reg.on_boundary ? "1" : "0"})
                       << '\n';
        }
    }
    f.close();
    std::ostringstream r;
    r.imbue(std::locale::classic());
    r << "r/v = " << format_number(light_ns) << " ns, " << boundary_curves(light_ns, 1.0, c.regions.t_on_max_ns,
                                                                             c.regions.t_off_max_ns).size()
      << " boundary lines\n";
    out.report = r.str();
    return out;
}

CommandOutcome cmd_circuit(const RunConfig& c) {
    CommandOutcome out;
    const CircuitSection& k = c.circuit;
    try {
        validate(k.params);
    } catch (const InvalidArgument& e) {
        throw ConfigError(e.what());
    }
    if (k.f3_points < 2 || k.potential_points < 2 || k.switch_samples < 10)
        throw ConfigError("circuit needs f3_points, potential_points >= 2 and switch_samples >= 10");
    if (!(k.switch_ns > 0.0)) throw ConfigError("circuit.switch_ns must be > 0");
    const auto header = provenance(c, "circuit");

    {
        OutputFile f(c, "circuit_f3.csv", out);
        f.comments(header);
        f.stream() << "f3,alpha_eff,f_eff\n";
        const SweepAxis f3{"f3", 0.0, 1.0, k.f3_points};
        for (std::size_t i = 0; i < f3.n_points; ++i) {
            CircuitParams at = k.params;
            at.f3 = f3.value(i);
            const EffectiveCoupling e = effective_coupling(at);
            f.stream() << join({format_number(at.f3), format_number(e.alpha_eff), format_number(e.f_eff)}) << '\n';
        }
        f.close();
    }
    {
        OutputFile f(c, "circuit_potential.csv", out);
        f.comments(header);
        f.comments({"field_value=" + format_number(k.field_value)});
        f.stream() << "phi1,phi2,potential,junction_sum\n";
        const double pi = std::numbers::pi;
        const SweepAxis phi{"phi", -pi, pi, k.potential_points};
        for (std::size_t i = 0; i < phi.n_points; ++i) {
            for (std::size_t j = 0; j < phi.n_points; ++j) {
                const double a = phi.value(i), b = phi.value(j);
                const double u = josephson_potential(k.params, a, b, k.field_value);
                const double s = junction_energy_sum(k.params, eliminate_phases(k.params, a, b, k.field_value));
                f.stream() << join({format_number(a), format_number(b), format_number(u), format_number(s)}) << '\n';
            }
        }
        f.close();
    }
    std::vector<F3Sample> traj;
    const SweepAxis t{"t", 0.0, k.switch_ns, k.switch_samples};
    for (std::size_t i = 0; i < t.n_points; ++i) {
        const double frac = static_cast<double>(i) / static_cast<double>(t.n_points - 1);
        traj.push_back({t.value(i), k.switch_start + (k.switch_end - k.switch_start) * frac});
    }
    const SwitchReport sw = switch_profile(traj, k.params);
    {
        OutputFile f(c, "circuit_switch.csv", out);
        f.comments(header);
        if (sw.has_transition)
            f.comments({"t10_ns=" + format_number(sw.t10) + " t90_ns=" + format_number(sw.t90) +
                        " ramp_ns=" + format_number(sw.ramp_duration)});
        else
            f.comments({"no 10-90 transition"});
        f.stream() << "time_ns,f3,envelope\n";
        for (std::size_t i = 0; i < traj.size(); ++i)
            f.stream() << join({format_number(traj[i].time), format_number(traj[i].f3), format_number(sw.envelope[i])})
                       << '\n';
        f.close();
    }
    const EffectiveCoupling e = effective_coupling(k.params);
    std::ostringstream r;
    r.imbue(std::locale::classic());
    r << "alpha_eff " << format_number(e.alpha_eff) << ", f_eff " << format_number(e.f_eff) << '\n';
    if (sw.has_transition)
        r << "switch ramp (10-90) " << format_number(sw.ramp_duration) << " ns; linear ramp "
          << format_number(sw.linear_equivalent().ramp) << " ns, gaussian ramp "
          << format_number(sw.gaussian_equivalent().ramp) << " ns\n";
    out.report = r.str();
    return out;
}

CommandOutcome cmd_oracle(const RunConfig& c) {
    CommandOutcome out;
    const ModelParams p = oracle_params(c);
    const LatticeConfig lattice = oracle_lattice(c, c.oracle.n_modes);
    AmplitudeOptions opts = amplitude_options(c);
    const AmplitudeSet ref = compute_amplitudes(p, opts);
    OracleResult sim;
    try {
        sim = simulate(p, lattice);
    } catch (const InvalidArgument& e) {
        throw ConfigError(std::string("invalid oracle lattice: ") + e.what());
    }

    AmplitudeSet as_amps;
    as_amps.exchange = sim.state.coh_eg_ge;
    as_amps.exchange_modulus = std::abs(sim.state.coh_eg_ge);
    as_amps.p_emit_p = sim.state.pop_gg1;
    as_amps.p_emit_f = sim.state.pop_ee1;
    as_amps.margin = ref.margin;
    as_amps.valid_p = ref.valid_p;
    as_amps.valid_f = ref.valid_f;
    as_amps.quadrature_error_bound = sim.norm_drift;

    const auto header = provenance(c, "oracle");
    {
        OutputFile f(c, "oracle.csv", out);
        f.comments(header);
        f.comments({"source=oracle", "axis1=t_on_ns axis2=t_off_ns", "err_bound column holds the norm drift"});
        write_rows_csv(f.stream(), {row_from(p, as_amps, c.t_on_ns, c.t_off_ns)}, true, {});
        f.close();
    }
    {
        OutputFile f(c, "oracle_reference.csv", out);
        f.comments(header);
        f.comments({"source=perturbative", "axis1=t_on_ns axis2=t_off_ns"});
        write_rows_csv(f.stream(), {row_from(p, ref, c.t_on_ns, c.t_off_ns)}, true, {});
        f.close();
    }

    std::vector<LatticeConfig> series;
    for (std::size_t n : c.oracle.convergence_modes) series.push_back(oracle_lattice(c, n));
    const ConvergenceTable table = series.empty() ? ConvergenceTable{} : convergence_sweep(p, series, c.workers);
    {
        OutputFile f(c, "convergence.csv", out);
        f.comments(header);
        f.comments({"source=oracle"});
        if (!series.empty())
            f.comments({"extrapolated p_a=" + format_number(table.extrapolated_p_emit_p) +
                        " p_b=" + format_number(table.extrapolated_p_emit_f) +
                        " coherence=" + format_number(table.extrapolated_coherence) +
                        " observed_order=" + format_number(table.observed_order)});
        f.stream() << "n_modes,k_max,time_step,photon_truncation,p_a,p_b,coherence,norm_drift,error\n";
        for (const ConvergenceRow& row : table.rows)
            f.stream() << join({std::to_string(row.lattice.n_modes), format_number(row.lattice.k_max),
                                format_number(row.lattice.effective_time_step()),
                                std::to_string(row.lattice.photon_truncation), format_number(row.p_emit_p),
                                format_number(row.p_emit_f), format_number(row.coherence),
                                format_number(row.norm_drift), row.error})
                       << '\n';
        f.close();
    }

    auto rel = [](double a, double b) { return b == 0.0 ? (a == 0.0 ? 0.0 : INFINITY) : std::abs(a - b) / std::abs(b); };
    std::ostringstream r;
    r.imbue(std::locale::classic());
    r << "oracle dimension " << sim.dimension << ", steps " << sim.steps << ", norm drift "
      << format_number(sim.norm_drift) << ", top sector " << format_number(sim.top_sector_population) << '\n';
    r << "            oracle          perturbative    rel.diff\n";
    r << "  p_a       " << format_number(as_amps.p_emit_p) << "  " << format_number(ref.p_emit_p) << "  "
      << format_number(rel(as_amps.p_emit_p, ref.p_emit_p)) << '\n';
    r << "  p_b       " << format_number(as_amps.p_emit_f) << "  " << format_number(ref.p_emit_f) << "  "
      << format_number(rel(as_amps.p_emit_f, ref.p_emit_f)) << '\n';
    r << "  x_abs     " << format_number(as_amps.exchange_modulus) << "  " << format_number(ref.exchange_modulus)
      << "  " << format_number(rel(as_amps.exchange_modulus, ref.exchange_modulus)) << '\n';
    out.report = r.str();
    return out;
}

CommandOutcome run_command(std::string_view name, const RunConfig& c) {
    if (name == "point") return cmd_point(c);
    if (name == "sweep") return cmd_sweep(c);
    if (name == "regions") return cmd_regions(c);
    if (name == "circuit") return cmd_circuit(c);
    if (name == "oracle") return cmd_oracle(c);
    throw InvalidArgument("unknown command '" + std::string(name) + "'");
}

}  // namespace pfx
