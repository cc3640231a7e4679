#include "pfx/config.hpp"

#include "pfx/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace pfx {

namespace {

using nlohmann::json;

// Consumes keys of one JSON object and rejects whatever is left over.
class Reader {
public:
    Reader(const json& j, std::string where) : j_(j), where_(std::move(where)) {
        if (!j_.is_object()) throw ConfigError(where_ + " must be an object");
    }

    void get(const char* key, double& dst) {
        if (const json* v = take(key)) {
            if (!v->is_number()) fail(key, "a number");
            dst = v->get<double>();
        }
    }
    void get(const char* key, std::size_t& dst) {
        if (const json* v = take(key)) {
            if (!v->is_number_integer() || v->get<long long>() < 0) fail(key, "a non-negative integer");
            dst = v->get<std::size_t>();
        }
    }
    void get(const char* key, unsigned& dst) {
        std::size_t tmp = dst;
        get(key, tmp);
        dst = static_cast<unsigned>(tmp);
    }
    void get(const char* key, int& dst) {
        if (const json* v = take(key)) {
            if (!v->is_number_integer()) fail(key, "an integer");
            dst = v->get<int>();
        }
    }
    void get(const char* key, bool& dst) {
        if (const json* v = take(key)) {
            if (!v->is_boolean()) fail(key, "a boolean");
            dst = v->get<bool>();
        }
    }
    void get(const char* key, std::string& dst) {
        if (const json* v = take(key)) {
            if (!v->is_string()) fail(key, "a string");
            dst = v->get<std::string>();
        }
    }
    void get(const char* key, std::optional<double>& dst) {
        if (const json* v = take(key)) {
            if (v->is_null()) {
                dst.reset();
                return;
            }
            if (!v->is_number()) fail(key, "a number or null");
            dst = v->get<double>();
        }
    }
    void get(const char* key, std::vector<std::string>& dst) {
        if (const json* v = take(key)) {
            if (!v->is_array()) fail(key, "an array of strings");
            dst.clear();
            for (const auto& e : *v) {
                if (!e.is_string()) fail(key, "an array of strings");
                dst.push_back(e.get<std::string>());
            }
        }
    }
    void get(const char* key, std::vector<std::size_t>& dst) {
        if (const json* v = take(key)) {
            if (!v->is_array()) fail(key, "an array of integers");
            dst.clear();
            for (const auto& e : *v) {
                if (!e.is_number_integer() || e.get<long long>() < 0) fail(key, "an array of non-negative integers");
                dst.push_back(e.get<std::size_t>());
            }
        }
    }

    const json* sub(const char* key) { return take(key); }
    std::string path(const char* key) const { return where_.empty() ? key : where_ + "." + key; }

    void finish() const {
        for (const auto& item : j_.items())
            if (!seen_.count(item.key())) throw ConfigError("unknown key '" + path(item.key().c_str()) + "'");
    }

private:
    const json* take(const char* key) {
        seen_.insert(key);
        auto it = j_.find(key);
        return it == j_.end() ? nullptr : &*it;
    }
    [[noreturn]] void fail(const char* key, const char* what) const {
        throw ConfigError("'" + path(key) + "' must be " + what);
    }

    const json& j_;
    std::string where_;
    std::set<std::string> seen_;
};

void read_qubit(Reader& parent, const char* key, LabQubit& q) {
    if (const json* j = parent.sub(key)) {
        Reader r(*j, parent.path(key));
        r.get("omega_ghz", q.omega_ghz);
        r.get("g_over_omega", q.g_over_omega);
        r.finish();
    }
}

void read_axis(Reader& parent, const char* key, std::optional<LabAxis>& dst) {
    const json* j = parent.sub(key);
    if (!j || j->is_null()) return;
    Reader r(*j, parent.path(key));
    LabAxis a;
    r.get("path", a.path);
    r.get("min", a.min);
    r.get("max", a.max);
    r.get("n", a.n);
    r.finish();
    if (a.path.empty()) throw ConfigError("'" + parent.path(key) + ".path' is required");
    dst = a;
}

RunConfig from_json(const json& root) {
    RunConfig c;
    Reader r(root, "");
    read_qubit(r, "qubit_p", c.qubit_p);
    read_qubit(r, "qubit_f", c.qubit_f);
    r.get("r_over_lambda", c.r_over_lambda);
    r.get("t_on_ns", c.t_on_ns);
    r.get("t_off_ns", c.t_off_ns);
    r.get("cutoff_multiplier", c.cutoff_multiplier);
    if (const json* j = r.sub("switching")) {
        Reader s(*j, "switching");
        s.get("profile", c.profile);
        s.get("ramp_ns", c.ramp_ns);
        s.finish();
    }
    r.get("speed_m_per_s", c.speed_m_per_s);
    r.get("validity_threshold", c.validity_threshold);
    r.get("strict", c.strict);
    r.get("workers", c.workers);
    r.get("output", c.output);
    if (const json* j = r.sub("quadrature")) {
        Reader q(*j, "quadrature");
        q.get("relative_tolerance", c.quadrature.relative_tolerance);
        q.get("max_subdivisions", c.quadrature.max_subdivisions);
        q.get("tail_factor", c.quadrature.tail_factor);
        q.finish();
    }
    if (const json* j = r.sub("sweep")) {
        Reader s(*j, "sweep");
        read_axis(s, "axis1", c.sweep.axis1);
        read_axis(s, "axis2", c.sweep.axis2);
        s.get("outputs", c.sweep.outputs);
        s.finish();
    }
    if (const json* j = r.sub("oracle")) {
        Reader o(*j, "oracle");
        o.get("g_over_omega", c.oracle.g_over_omega);
        o.get("cutoff_multiplier", c.oracle.cutoff_multiplier);
        o.get("n_modes", c.oracle.n_modes);
        o.get("k_max_over_cutoff", c.oracle.k_max_over_cutoff);
        o.get("photon_truncation", c.oracle.photon_truncation);
        o.get("time_step", c.oracle.time_step);
        o.get("integrator_order", c.oracle.integrator_order);
        o.get("convergence_modes", c.oracle.convergence_modes);
        o.finish();
    }
    if (const json* j = r.sub("regions")) {
        Reader g(*j, "regions");
        g.get("t_on_max_ns", c.regions.t_on_max_ns);
        g.get("t_off_max_ns", c.regions.t_off_max_ns);
        g.get("grid", c.regions.grid);
        g.finish();
    }
    if (const json* j = r.sub("circuit")) {
        Reader k(*j, "circuit");
        k.get("e_j", c.circuit.params.e_j);
        k.get("alpha", c.circuit.params.alpha);
        k.get("alpha4", c.circuit.params.alpha4);
        k.get("f1", c.circuit.params.f1);
        k.get("f2", c.circuit.params.f2);
        k.get("f3", c.circuit.params.f3);
        k.get("f3_points", c.circuit.f3_points);
        k.get("potential_points", c.circuit.potential_points);
        k.get("field_value", c.circuit.field_value);
        k.get("switch_start", c.circuit.switch_start);
        k.get("switch_end", c.circuit.switch_end);
        k.get("switch_ns", c.circuit.switch_ns);
        k.get("switch_samples", c.circuit.switch_samples);
        k.finish();
    }
    r.finish();
    return c;
}

void apply_override(json& root, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + assignment + "' is not path=value");
    const std::string path = assignment.substr(0, eq);
    const std::string text = assignment.substr(eq + 1);
    json value = json::parse(text, nullptr, false);
    if (value.is_discarded()) value = text;

    json* node = &root;
    std::size_t start = 0;
    while (true) {
        const auto dot = path.find('.', start);
        const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (key.empty()) throw ConfigError("override path '" + path + "' has an empty component");
        if (!node->is_object()) throw ConfigError("override path '" + path + "' descends into a non-object");
        if (dot == std::string::npos) {
            (*node)[key] = value;
            return;
        }
        json& child = (*node)[key];
        if (child.is_null()) child = json::object();
        node = &child;
        start = dot + 1;
    }
}

json axis_json(const std::optional<LabAxis>& a) {
    if (!a) return nullptr;
    return {{"path", a->path}, {"min", a->min}, {"max", a->max}, {"n", a->n}};
}

json config_json(const RunConfig& c) {
    json j;
    j["qubit_p"] = {{"omega_ghz", c.qubit_p.omega_ghz}, {"g_over_omega", c.qubit_p.g_over_omega}};
    j["qubit_f"] = {{"omega_ghz", c.qubit_f.omega_ghz}, {"g_over_omega", c.qubit_f.g_over_omega}};
    j["r_over_lambda"] = c.r_over_lambda;
    j["t_on_ns"] = c.t_on_ns;
    j["t_off_ns"] = c.t_off_ns;
    j["cutoff_multiplier"] = c.cutoff_multiplier;
    j["switching"] = {{"profile", c.profile}, {"ramp_ns", c.ramp_ns}};
    j["speed_m_per_s"] = c.speed_m_per_s;
    j["validity_threshold"] = c.validity_threshold;
    j["strict"] = c.strict;
    j["workers"] = c.workers;
    j["output"] = c.output;
    j["quadrature"] = {{"relative_tolerance", c.quadrature.relative_tolerance},
                       {"max_subdivisions", c.quadrature.max_subdivisions},
                       {"tail_factor", c.quadrature.tail_factor}};
    j["sweep"] = {{"axis1", axis_json(c.sweep.axis1)}, {"axis2", axis_json(c.sweep.axis2)},
                  {"outputs", c.sweep.outputs}};
    j["oracle"] = {{"g_over_omega", c.oracle.g_over_omega ? json(*c.oracle.g_over_omega) : json(nullptr)},
                   {"cutoff_multiplier", c.oracle.cutoff_multiplier},
                   {"n_modes", c.oracle.n_modes},
                   {"k_max_over_cutoff", c.oracle.k_max_over_cutoff},
                   {"photon_truncation", c.oracle.photon_truncation},
                   {"time_step", c.oracle.time_step},
                   {"integrator_order", c.oracle.integrator_order},
                   {"convergence_modes", c.oracle.convergence_modes}};
    j["regions"] = {{"t_on_max_ns", c.regions.t_on_max_ns},
                    {"t_off_max_ns", c.regions.t_off_max_ns},
                    {"grid", c.regions.grid}};
    const CircuitSection& k = c.circuit;
    j["circuit"] = {{"e_j", k.params.e_j},       {"alpha", k.params.alpha},
                    {"alpha4", k.params.alpha4}, {"f1", k.params.f1},
                    {"f2", k.params.f2},         {"f3", k.params.f3},
                    {"f3_points", k.f3_points},  {"potential_points", k.potential_points},
                    {"field_value", k.field_value}, {"switch_start", k.switch_start},
                    {"switch_end", k.switch_end},   {"switch_ns", k.switch_ns},
                    {"switch_samples", k.switch_samples}};
    return j;
}

SwitchingProfile lab_profile(const RunConfig& c) {
    const double ramp = c.ramp_ns * 1e-9;
    if (c.profile == "sharp") return SwitchingProfile::sharp();
    if (c.profile == "linear") return SwitchingProfile::linear(ramp);
    if (c.profile == "gaussian") return SwitchingProfile::gaussian(ramp);
    throw ConfigError("switching.profile must be sharp, linear or gaussian");
}

NaturalModel natural_model(const RunConfig& c) {
    ModelParams lab;
    const double two_pi = 2.0 * std::numbers::pi;
    lab.qubit_p.gap = two_pi * c.qubit_p.omega_ghz * 1e9;
    lab.qubit_f.gap = two_pi * c.qubit_f.omega_ghz * 1e9;
    lab.qubit_p.coupling_ratio = c.qubit_p.g_over_omega;
    lab.qubit_f.coupling_ratio = c.qubit_f.g_over_omega;
    lab.field.speed = c.speed_m_per_s;
    lab.qubit_p.position = 0.0;
    lab.qubit_f.position = c.r_over_lambda * lab.wavelength_p();
    lab.field.uv_cutoff = c.cutoff_multiplier * lab.qubit_p.gap;
    lab.field.profile = lab_profile(c);
    lab.schedule.t_on = c.t_on_ns * 1e-9;
    lab.schedule.t_off = c.t_off_ns * 1e-9;
    try {
        return to_natural_units(lab);
    } catch (const InvalidArgument& e) {
        throw ConfigError(std::string("invalid physical parameters: ") + e.what());
    }
}

}  // namespace

RunConfig parse_config(std::string_view text, const std::vector<std::string>& overrides) {
    json root;
    if (text.find_first_not_of(" \t\r\n") == std::string_view::npos) {
        root = json::object();
    } else {
        try {
            root = json::parse(text);
        } catch (const json::parse_error& e) {
            throw ConfigError(std::string("config is not valid JSON: ") + e.what());
        }
    }
    for (const auto& o : overrides) apply_override(root, o);
    RunConfig c;
    try {
        c = from_json(root);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config value out of range: ") + e.what());
    }
    if (!(c.validity_threshold > 0.0)) throw ConfigError("validity_threshold must be > 0");
    natural_model(c);
    return c;
}

RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), overrides);
}

std::string to_json(const RunConfig& c) { return config_json(c).dump(2); }

std::string config_hash(const RunConfig& c) {
    json j = config_json(c);
    j.erase("workers");
    j.erase("output");
    return fnv1a_hex(j.dump());
}

ModelParams natural_params(const RunConfig& c) { return natural_model(c).params; }

AmplitudeOptions amplitude_options(const RunConfig& c) {
    AmplitudeOptions o;
    o.relative_tolerance = c.quadrature.relative_tolerance;
    o.max_subdivisions = c.quadrature.max_subdivisions;
    o.tail_factor = c.quadrature.tail_factor;
    o.validity_threshold = c.validity_threshold;
    o.strict = c.strict;
    return o;
}

AxisMapping map_axis(const RunConfig& c, std::string_view path) {
    const UnitScale s = natural_model(c).scale;
    const double ns = 1e-9 / s.time;
    if (path == "t_on_ns") return {"schedule.t_on", ns};
    if (path == "t_off_ns") return {"schedule.t_off", ns};
    if (path == "ramp_ns") return {"field.ramp", ns};
    if (path == "g_over_omega") return {"coupling_ratio", 1.0};
    if (path == "qubit_p.g_over_omega") return {"qubit_p.coupling_ratio", 1.0};
    if (path == "qubit_f.g_over_omega") return {"qubit_f.coupling_ratio", 1.0};
    if (path == "qubit_f.omega_ghz") return {"qubit_f.gap", 1.0 / c.qubit_p.omega_ghz};
    if (path == "r_over_lambda") return {"separation", 2.0 * std::numbers::pi};
    if (path == "cutoff_multiplier") return {"field.uv_cutoff", 1.0};
    throw ConfigError("unknown sweep axis path '" + std::string(path) + "'");
}

ModelParams oracle_params(const RunConfig& c) {
    RunConfig o = c;
    o.cutoff_multiplier = c.oracle.cutoff_multiplier;
    if (c.oracle.g_over_omega) o.qubit_p.g_over_omega = o.qubit_f.g_over_omega = *c.oracle.g_over_omega;
    return natural_params(o);
}

LatticeConfig oracle_lattice(const RunConfig& c, std::size_t n_modes) {
    LatticeConfig l;
    l.n_modes = n_modes;
    l.k_max = c.oracle.k_max_over_cutoff * c.oracle.cutoff_multiplier;
    l.photon_truncation = c.oracle.photon_truncation;
    l.time_step = c.oracle.time_step;
    l.integrator_order = c.oracle.integrator_order;
    return l;
}

}  // namespace pfx
