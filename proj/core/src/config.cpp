#include "mobring/config.hpp"

#include "mobring/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace mobring {

namespace {

using nlohmann::json;

const std::set<std::string> kRequiredKeys{"n_sites", "hopping_g",  "delta", "boundary", "omega",
                                          "epsilon_a", "coupling_j", "gamma", "kappa"};

const std::set<std::string> kOptionalKeys{"description",  "coupling_xi",     "step_dt",         "t_max",
                                          "residual_tol", "sample_stride",   "units",           "xi_scale_per_ps",
                                          "sweep_deltas", "detuning_min",    "detuning_max",    "detuning_points",
                                          "sweep_method", "tail_window"};

int line_of_offset(std::string_view text, std::size_t offset) {
    offset = std::min(offset, text.size());
    return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

std::string key_context(std::string_view text, const std::string& key) {
    const std::size_t pos = text.find("\"" + key + "\"");
    if (pos == std::string_view::npos) return "key '" + key + "'";
    return "key '" + key + "' (line " + std::to_string(line_of_offset(text, pos)) + ")";
}

class Reader {
public:
    Reader(const json& doc, std::string_view text) : doc_(doc), text_(text) {}

    [[noreturn]] void fail(const std::string& key, const std::string& what) const {
        throw ConfigError(key_context(text_, key) + ": " + what);
    }

    bool has(const std::string& key) const { return doc_.contains(key); }

    double number(const std::string& key) const {
        const json& v = doc_.at(key);
        if (!v.is_number()) fail(key, "expected a number");
        const double d = v.get<double>();
        if (!std::isfinite(d)) fail(key, "must be finite");
        return d;
    }

    int integer(const std::string& key) const {
        const json& v = doc_.at(key);
        if (!v.is_number_integer()) fail(key, "expected an integer");
        const auto i = v.get<long long>();
        if (i < std::numeric_limits<int>::min() || i > std::numeric_limits<int>::max()) fail(key, "out of range");
        return static_cast<int>(i);
    }

    std::string string(const std::string& key) const {
        const json& v = doc_.at(key);
        if (!v.is_string()) fail(key, "expected a string");
        return v.get<std::string>();
    }

    std::vector<double> numbers(const std::string& key) const {
        const json& v = doc_.at(key);
        if (!v.is_array()) fail(key, "expected an array of numbers");
        std::vector<double> out;
        for (const auto& e : v) {
            if (!e.is_number()) fail(key, "expected an array of numbers");
            out.push_back(e.get<double>());
            if (!std::isfinite(out.back())) fail(key, "entries must be finite");
        }
        return out;
    }

private:
    const json& doc_;
    std::string_view text_;
};

void apply_overrides(json& doc, const ConfigOverrides& o) {
    if (o.n_sites) doc["n_sites"] = *o.n_sites;
    if (o.hopping_g) doc["hopping_g"] = *o.hopping_g;
    if (o.delta) doc["delta"] = *o.delta;
    if (o.boundary) doc["boundary"] = *o.boundary;
    if (o.omega) doc["omega"] = *o.omega;
    if (o.epsilon_a) doc["epsilon_a"] = *o.epsilon_a;
    if (o.coupling_j) doc["coupling_j"] = *o.coupling_j;
    if (o.gamma) doc["gamma"] = *o.gamma;
    if (o.kappa) doc["kappa"] = *o.kappa;
    if (o.detuning) {
        if (!doc.contains("epsilon_a") || !doc["epsilon_a"].is_number()) {
            throw ConfigError("--detuning needs a numeric epsilon_a");
        }
        doc["omega"] = doc["epsilon_a"].get<double>() + *o.detuning;
    }
}

// Validation messages start with the offending key name; attach its line.
[[noreturn]] void rethrow_with_context(const ConfigError& e, std::string_view text) {
    const std::string msg = e.what();
    const std::string head = msg.substr(0, msg.find(' '));
    if (kRequiredKeys.count(head) || kOptionalKeys.count(head)) {
        throw ConfigError(key_context(text, head) + ": " + msg);
    }
    throw ConfigError(msg);
}

}  // namespace

std::vector<double> RunConfig::detuning_grid() const {
    return linspace(detuning_min, detuning_max, detuning_points);
}

RunConfig parse_config(std::string_view text, const ConfigOverrides& overrides) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ConfigError("syntax error at line " + std::to_string(line_of_offset(text, e.byte == 0 ? 0 : e.byte - 1)) +
                          ": " + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    for (const auto& [key, value] : doc.items()) {
        if (!kRequiredKeys.count(key) && !kOptionalKeys.count(key)) {
            throw ConfigError(key_context(text, key) + ": unknown key");
        }
    }
    for (const auto& key : kRequiredKeys) {
        if (!doc.contains(key)) throw ConfigError("missing required key '" + key + "'");
    }
    apply_overrides(doc, overrides);

    const Reader r(doc, text);
    RunConfig cfg;
    if (r.has("description")) cfg.description = r.string("description");

    if (r.has("units")) {
        const std::string u = r.string("units");
        if (u == "xi") {
            cfg.units = UnitSystem::Xi;
        } else if (u == "per_ps") {
            cfg.units = UnitSystem::PerPs;
        } else {
            r.fail("units", "must be \"xi\" or \"per_ps\"");
        }
    }
    if (r.has("xi_scale_per_ps")) cfg.converter.xi_per_ps = r.number("xi_scale_per_ps");
    try {
        cfg.converter.validate();
    } catch (const ConfigError& e) {
        rethrow_with_context(e, text);
    }
    const bool per_ps = cfg.units == UnitSystem::PerPs;
    auto energy = [&](const std::string& key) {
        const double v = r.number(key);
        return per_ps ? cfg.converter.rate_from_per_ps(v) : v;
    };
    auto time = [&](double v) { return per_ps ? cfg.converter.time_from_ps(v) : v; };

    cfg.system.ring.n_sites = r.integer("n_sites");
    cfg.system.ring.hopping_g = energy("hopping_g");
    cfg.system.ring.dimerization_delta = r.number("delta");
    const std::string boundary = r.string("boundary");
    if (boundary == "moebius") {
        cfg.system.ring.boundary = Boundary::Moebius;
    } else if (boundary == "periodic") {
        cfg.system.ring.boundary = Boundary::Periodic;
    } else {
        r.fail("boundary", "must be \"moebius\" or \"periodic\"");
    }
    cfg.system.photon_omega = energy("omega");
    cfg.system.acceptor_energy = energy("epsilon_a");
    cfg.system.photon_coupling_j = energy("coupling_j");
    if (r.has("coupling_xi")) cfg.system.acceptor_coupling_xi = energy("coupling_xi");
    cfg.system.charge_sep_gamma = energy("gamma");
    cfg.system.fluorescence_kappa = energy("kappa");

    if (r.has("step_dt")) cfg.propagation.step_dt = time(r.number("step_dt"));
    if (r.has("t_max")) cfg.propagation.t_max = time(r.number("t_max"));
    if (r.has("residual_tol")) cfg.propagation.residual_tol = r.number("residual_tol");
    if (r.has("sample_stride")) cfg.propagation.sample_stride = r.integer("sample_stride");

    if (r.has("sweep_deltas")) {
        cfg.sweep_deltas = r.numbers("sweep_deltas");
        if (cfg.sweep_deltas.empty()) r.fail("sweep_deltas", "must not be empty");
        for (double d : cfg.sweep_deltas) {
            if (std::abs(d) > 1.0) r.fail("sweep_deltas", "entries must lie in [-1, 1]");
        }
    }
    if (r.has("detuning_min")) cfg.detuning_min = energy("detuning_min");
    if (r.has("detuning_max")) cfg.detuning_max = energy("detuning_max");
    if (r.has("detuning_points")) cfg.detuning_points = r.integer("detuning_points");
    if (cfg.detuning_points < 1) r.fail("detuning_points", "must be >= 1");
    if (cfg.detuning_min > cfg.detuning_max) r.fail("detuning_min", "must not exceed detuning_max");
    if (cfg.detuning_points > 1 && cfg.detuning_min == cfg.detuning_max) {
        r.fail("detuning_max", "must exceed detuning_min when detuning_points > 1");
    }
    if (r.has("sweep_method")) {
        const std::string m = r.string("sweep_method");
        if (m == "exact") {
            cfg.sweep_method = SweepMethod::Exact;
        } else if (m == "perturbative") {
            cfg.sweep_method = SweepMethod::Perturbative;
        } else {
            r.fail("sweep_method", "must be \"exact\" or \"perturbative\"");
        }
    }
    if (r.has("tail_window")) {
        const auto w = r.numbers("tail_window");
        if (w.size() != 2 || !(w[0] >= 0.0) || !(w[0] < w[1])) {
            r.fail("tail_window", "must be [t0, t1] with 0 <= t0 < t1");
        }
        cfg.tail_window = std::array<double, 2>{time(w[0]), time(w[1])};
    }

    try {
        cfg.system.validate();
        cfg.propagation.validate();
    } catch (const ConfigError& e) {
        rethrow_with_context(e, text);
    }
    return cfg;
}

RunConfig load_config_file(const std::string& path, const ConfigOverrides& overrides) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), overrides);
}

}  // namespace mobring
