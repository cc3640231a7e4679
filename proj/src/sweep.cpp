#include "pfx/sweep.hpp"

#include "pfx/entanglement.hpp"
#include "pfx/errors.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <thread>

#ifndef PFX_VERSION_STRING
#define PFX_VERSION_STRING "0.0.0"
#endif

namespace pfx {

namespace {

constexpr std::array<std::string_view, 11> kPaths = {
    "schedule.t_on",   "schedule.t_off",   "coupling_ratio", "qubit_p.coupling_ratio", "qubit_f.coupling_ratio",
    "qubit_f.gap",     "qubit_p.position", "qubit_f.position", "separation",          "field.uv_cutoff",
    "field.ramp",
};

const double kNaN = std::numeric_limits<double>::quiet_NaN();

bool selected(const SweepSpec& spec, std::string_view column) {
    if (spec.outputs.empty()) return true;
    return std::find(spec.outputs.begin(), spec.outputs.end(), column) != spec.outputs.end();
}

SweepRow evaluate(const SweepSpec& spec, double a1, double a2) {
    SweepRow row;
    row.axis1 = a1;
    row.axis2 = spec.axis2 ? a2 : kNaN;
    ModelParams p = spec.base;
    apply_path(p, spec.axis1.path, a1);
    if (spec.axis2) apply_path(p, spec.axis2->path, a2);
    try {
        const Region region = classify(p.schedule, p.separation(), p.field.speed);
        row.region = region.label;
        row.on_boundary = region.on_boundary;
        AmplitudeOptions opts = spec.options;
        opts.strict = false;
        const AmplitudeSet amps = compute_amplitudes(p, opts);
        const ConcurrenceValue c = concurrence(amps);
        row.p_a = amps.p_emit_p;
        row.p_b = amps.p_emit_f;
        row.x_abs = amps.exchange_modulus;
        row.raw_excess = c.raw_excess;
        row.concurrence = c.concurrence;
        row.valid_p = amps.valid_p;
        row.valid_f = amps.valid_f;
        row.err_bound = amps.quadrature_error_bound;
        row.error = amps.error;
    } catch (const Error& e) {
        row.p_a = row.p_b = row.x_abs = row.raw_excess = row.concurrence = row.err_bound = kNaN;
        row.error = e.what();
    }
    return row;
}

// Slack derivative along a path; slacks are affine in every path that moves
// them, so one finite difference is exact up to rounding.
struct SlackLine {
    const char* name;
    double RegionSlacks::*member;
};

constexpr std::array<SlackLine, 3> kSlackLines = {{
    {"t_off=r/v", &RegionSlacks::timelike},
    {"2*t_on+t_off=r/v", &RegionSlacks::spacelike},
    {"t_on+t_off=r/v", &RegionSlacks::early},
}};

RegionSlacks slacks_at(const ModelParams& p) { return classify(p.schedule, p.separation(), p.field.speed).slacks; }

void nearest_boundary(const ModelParams& base, const std::string& path, Peak& peak, double step) {
    ModelParams here = base;
    apply_path(here, path, peak.position);
    ModelParams ahead = base;
    apply_path(ahead, path, peak.position + step);
    const RegionSlacks s0 = slacks_at(here);
    const RegionSlacks s1 = slacks_at(ahead);
    peak.boundary_distance = std::numeric_limits<double>::infinity();
    for (const SlackLine& line : kSlackLines) {
        const double slope = (s1.*line.member - s0.*line.member) / step;
        if (std::abs(slope) < 1e-9) continue;
        const double d = std::abs(s0.*line.member / slope);
        if (d < peak.boundary_distance) {
            peak.boundary_distance = d;
            peak.nearest_boundary = line.name;
        }
    }
}

void put_field(std::ostream& os, bool& first, const std::string& text) {
    if (!first) os << ',';
    os << text;
    first = false;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c == '\n' ? ' ' : c;
    }
    return out + "\"";
}

void write_comments(std::ostream& os, const SweepResult& r, const std::vector<std::string>& comments) {
    for (const auto& c : comments) os << "# " << c << '\n';
    os << "# spec_hash=" << r.provenance.spec_hash << " version=" << r.provenance.version << '\n';
    os << "# axis1=" << r.spec.axis1.path;
    if (r.spec.axis2) os << " axis2=" << r.spec.axis2->path;
    os << '\n';
}

}  // namespace

double SweepAxis::value(std::size_t i) const {
    if (i == 0) return min;
    if (i + 1 == n_points) return max;
    return min + (max - min) * static_cast<double>(i) / static_cast<double>(n_points - 1);
}

bool is_sweep_path(std::string_view path) { return std::find(kPaths.begin(), kPaths.end(), path) != kPaths.end(); }

void apply_path(ModelParams& p, std::string_view path, double v) {
    if (path == "schedule.t_on") p.schedule.t_on = v;
    else if (path == "schedule.t_off") p.schedule.t_off = v;
    else if (path == "coupling_ratio") p.qubit_p.coupling_ratio = p.qubit_f.coupling_ratio = v;
    else if (path == "qubit_p.coupling_ratio") p.qubit_p.coupling_ratio = v;
    else if (path == "qubit_f.coupling_ratio") p.qubit_f.coupling_ratio = v;
    else if (path == "qubit_f.gap") p.qubit_f.gap = v;
    else if (path == "qubit_p.position") p.qubit_p.position = v;
    else if (path == "qubit_f.position") p.qubit_f.position = v;
    else if (path == "separation") p.qubit_f.position = p.qubit_p.position + v;
    else if (path == "field.uv_cutoff") p.field.uv_cutoff = v;
    else if (path == "field.ramp") p.field.profile.ramp = v;
    else throw InvalidArgument("unknown sweep path '" + std::string(path) + "'");
}

double read_path(const ModelParams& p, std::string_view path) {
    if (path == "schedule.t_on") return p.schedule.t_on;
    if (path == "schedule.t_off") return p.schedule.t_off;
    if (path == "coupling_ratio" || path == "qubit_p.coupling_ratio") return p.qubit_p.coupling_ratio;
    if (path == "qubit_f.coupling_ratio") return p.qubit_f.coupling_ratio;
    if (path == "qubit_f.gap") return p.qubit_f.gap;
    if (path == "qubit_p.position") return p.qubit_p.position;
    if (path == "qubit_f.position") return p.qubit_f.position;
    if (path == "separation") return p.separation();
    if (path == "field.uv_cutoff") return p.field.uv_cutoff;
    if (path == "field.ramp") return p.field.profile.ramp;
    throw InvalidArgument("unknown sweep path '" + std::string(path) + "'");
}

const std::vector<std::string>& sweep_columns() {
    static const std::vector<std::string> columns = {"axis1",      "axis2",       "region",  "p_a",
                                                     "p_b",        "x_abs",       "raw_excess", "concurrence",
                                                     "valid_p",    "valid_f",     "err_bound", "error"};
    return columns;
}

void validate(const SweepSpec& spec) {
    validate(spec.base);
    if (!is_natural(spec.base)) throw InvalidArgument("sweep base must be in natural units");
    auto check = [](const SweepAxis& a, const char* name) {
        if (!is_sweep_path(a.path)) throw InvalidArgument(std::string(name) + ": unknown path '" + a.path + "'");
        if (a.n_points < 2) throw InvalidArgument(std::string(name) + ": n_points must be >= 2");
        if (!std::isfinite(a.min) || !std::isfinite(a.max) || !(a.min < a.max))
            throw InvalidArgument(std::string(name) + ": need finite min < max");
    };
    check(spec.axis1, "axis1");
    if (spec.axis2) {
        check(*spec.axis2, "axis2");
        if (spec.axis2->path == spec.axis1.path) throw InvalidArgument("axis2 repeats axis1");
    }
    const auto& cols = sweep_columns();
    for (const auto& o : spec.outputs)
        if (std::find(cols.begin(), cols.end(), o) == cols.end())
            throw InvalidArgument("unknown output column '" + o + "'");
}

std::string canonical_text(const SweepSpec& s) {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os.precision(17);
    const ModelParams& b = s.base;
    os << "gap_p=" << b.qubit_p.gap << ";g_p=" << b.qubit_p.coupling_ratio << ";x_p=" << b.qubit_p.position
       << ";gap_f=" << b.qubit_f.gap << ";g_f=" << b.qubit_f.coupling_ratio << ";x_f=" << b.qubit_f.position
       << ";v=" << b.field.speed << ";kc=" << b.field.uv_cutoff << ";profile=" << static_cast<int>(b.field.profile.kind)
       << ";ramp=" << b.field.profile.ramp << ";t_on=" << b.schedule.t_on << ";t_off=" << b.schedule.t_off
       << ";rtol=" << s.options.relative_tolerance << ";maxsub=" << s.options.max_subdivisions
       << ";tail=" << s.options.tail_factor << ";vth=" << s.options.validity_threshold;
    auto axis = [&](const SweepAxis& a) { os << ";axis=" << a.path << ':' << a.min << ':' << a.max << ':' << a.n_points; };
    axis(s.axis1);
    if (s.axis2) axis(*s.axis2);
    os << ";outputs=";
    for (const auto& o : s.outputs) os << o << ',';
    return os.str();
}

std::string fnv1a_hex(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    static constexpr char kHex[] = "0123456789abcdef";
    for (int i = 15; i >= 0; --i) {
        buf[i] = kHex[h & 0xf];
        h >>= 4;
    }
    buf[16] = '\0';
    return buf;
}

SweepResult run_sweep(const SweepSpec& spec, unsigned workers) {
    validate(spec);
    SweepResult out;
    out.spec = spec;
    out.n1 = spec.axis1.n_points;
    out.n2 = spec.axis2 ? spec.axis2->n_points : 1;
    out.rows.resize(out.n1 * out.n2);
    out.provenance = {fnv1a_hex(canonical_text(spec)), PFX_VERSION_STRING};

    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t idx = next++; idx < out.rows.size(); idx = next++) {
            const std::size_t i1 = idx / out.n2;
            const std::size_t i2 = idx % out.n2;
            out.rows[idx] = evaluate(spec, spec.axis1.value(i1), spec.axis2 ? spec.axis2->value(i2) : 0.0);
        }
    };
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, static_cast<unsigned>(out.rows.size()));
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    return out;
}

std::vector<Peak> locate_peaks(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw InvalidArgument("peak search needs x and y of equal length");
    std::vector<Peak> peaks;
    for (std::size_t i = 1; i + 1 < y.size(); ++i) {
        if (!std::isfinite(y[i - 1]) || !std::isfinite(y[i]) || !std::isfinite(y[i + 1])) continue;
        if (!(y[i] > y[i - 1] && y[i] > y[i + 1])) continue;
        Peak p;
        p.index = i;
        p.position = x[i];
        p.value = y[i];
        // Vertex of the parabola through the three nodes (non-uniform safe).
        const double x0 = x[i - 1], x1 = x[i], x2 = x[i + 1];
        const double d0 = (y[i] - y[i - 1]) / (x1 - x0);
        const double d1 = (y[i + 1] - y[i]) / (x2 - x1);
        const double curv = (d1 - d0) / (x2 - x0);
        if (curv < 0.0) {
            const double b = d0 - curv * (x0 + x1);
            const double xv = std::clamp(-b / (2.0 * curv), x0, x2);
            p.position = xv;
            p.value = y[i] + d0 * (xv - x1) + curv * (xv - x1) * (xv - x0);
        }
        peaks.push_back(p);
    }
    if (peaks.empty()) throw NoPeaks("no interior local maximum along the cut");
    return peaks;
}

std::vector<Peak> locate_peaks(const SweepResult& r, SweepDim along, std::size_t fixed) {
    const bool first = along == SweepDim::Axis1;
    if (!first && !r.spec.axis2) throw InvalidArgument("sweep has no second axis");
    const std::size_t n = first ? r.n1 : r.n2;
    if (fixed >= (first ? r.n2 : r.n1)) throw InvalidArgument("fixed index out of range");
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        const SweepRow& row = first ? r.at(i, fixed) : r.at(fixed, i);
        x[i] = first ? row.axis1 : row.axis2;
        y[i] = row.raw_excess;
    }
    std::vector<Peak> peaks = locate_peaks(x, y);

    const SweepAxis& axis = first ? r.spec.axis1 : *r.spec.axis2;
    ModelParams base = r.spec.base;
    if (first && r.spec.axis2) apply_path(base, r.spec.axis2->path, r.spec.axis2->value(fixed));
    if (!first) apply_path(base, r.spec.axis1.path, r.spec.axis1.value(fixed));
    const double step = (axis.max - axis.min) / static_cast<double>(axis.n_points - 1);
    for (Peak& p : peaks) nearest_boundary(base, axis.path, p, step);
    return peaks;
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) return "0";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
    return std::string(buf, res.ptr);
}

void write_rows_csv(std::ostream& os, const std::vector<SweepRow>& rows, bool has_axis2,
                    const std::vector<std::string>& outputs) {
    std::vector<std::string> cols;
    for (const auto& c : sweep_columns())
        if (c == "axis1" || c == "axis2" || outputs.empty() ||
            std::find(outputs.begin(), outputs.end(), c) != outputs.end())
            cols.push_back(c);
    bool first = true;
    for (const auto& c : cols) put_field(os, first, c);
    os << '\n';
    for (const SweepRow& row : rows) {
        first = true;
        for (const auto& c : cols) {
            std::string f;
            if (c == "axis1") f = format_number(row.axis1);
            else if (c == "axis2") f = has_axis2 ? format_number(row.axis2) : "";
            else if (c == "region") f = std::string(to_string(row.region));
            else if (c == "p_a") f = format_number(row.p_a);
            else if (c == "p_b") f = format_number(row.p_b);
            else if (c == "x_abs") f = format_number(row.x_abs);
            else if (c == "raw_excess") f = format_number(row.raw_excess);
            else if (c == "concurrence") f = format_number(row.concurrence);
            else if (c == "valid_p") f = row.valid_p ? "1" : "0";
            else if (c == "valid_f") f = row.valid_f ? "1" : "0";
            else if (c == "err_bound") f = format_number(row.err_bound);
            else if (c == "error") f = csv_escape(row.error);
            put_field(os, first, f);
        }
        os << '\n';
    }
}

void write_sweep_csv(std::ostream& os, const SweepResult& r, const std::vector<std::string>& comments) {
    write_comments(os, r, comments);
    write_rows_csv(os, r.rows, r.spec.axis2.has_value(), r.spec.outputs);
}

void write_sweep_long_csv(std::ostream& os, const SweepResult& r, const std::vector<std::string>& comments) {
    write_comments(os, r, comments);
    os << "axis1,axis2,variable,value\n";
    static const std::array<std::string_view, 6> numeric = {"p_a", "p_b", "x_abs", "raw_excess", "concurrence",
                                                            "err_bound"};
    for (const SweepRow& row : r.rows) {
        const std::string a1 = format_number(row.axis1);
        const std::string a2 = r.spec.axis2 ? format_number(row.axis2) : "";
        for (std::string_view name : numeric) {
            if (!selected(r.spec, name)) continue;
            double v = 0;
            if (name == "p_a") v = row.p_a;
            else if (name == "p_b") v = row.p_b;
            else if (name == "x_abs") v = row.x_abs;
            else if (name == "raw_excess") v = row.raw_excess;
            else if (name == "concurrence") v = row.concurrence;
            else v = row.err_bound;
            os << a1 << ',' << a2 << ',' << name << ',' << format_number(v) << '\n';
        }
    }
}

}  // namespace pfx
