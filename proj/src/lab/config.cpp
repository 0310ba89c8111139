// SPDX-License-Identifier: Apache-2.0
#include "freelab/lab/config.hpp"

#include <algorithm>
#include <regex>
#include <sstream>

#include "freelab/errors.hpp"

namespace freelab::lab {

namespace {

using json = nlohmann::json;
using IntList = std::vector<std::int64_t>;
using RealList = std::vector<double>;

constexpr std::pair<ExperimentKind, std::string_view> kNames[] = {
    {ExperimentKind::strong_convergence, "strong_convergence"},
    {ExperimentKind::chi_scan, "chi_scan"},
    {ExperimentKind::c_scan, "c_scan"},
    {ExperimentKind::concentration, "concentration"},
    {ExperimentKind::witness, "witness"},
    {ExperimentKind::truncation, "truncation"},
    {ExperimentKind::moments, "moments"},
};

ParamSpec integer(std::string name, std::int64_t def, double min = 1) {
    return {std::move(name), ParamType::integer, def, {}, min};
}
ParamSpec real(std::string name, double def, std::optional<double> min = std::nullopt) {
    return {std::move(name), ParamType::real, def, {}, min};
}
ParamSpec choice(std::string name, std::string def, std::vector<std::string> choices) {
    return {std::move(name), ParamType::text, std::move(def), std::move(choices), std::nullopt};
}
ParamSpec int_list(std::string name, IntList def, double min = 1) {
    return {std::move(name), ParamType::int_list, std::move(def), {}, min};
}
ParamSpec real_list(std::string name, RealList def, std::optional<double> min = std::nullopt) {
    return {std::move(name), ParamType::real_list, std::move(def), {}, min};
}

IntList range(std::int64_t a, std::int64_t b) {
    IntList out;
    for (auto i = a; i <= b; ++i) out.push_back(i);
    return out;
}

std::map<ExperimentKind, std::vector<ParamSpec>> build_schemas() {
    const auto style = choice("style", "gaussian", {"gaussian", "sparse"});
    const auto model = choice("model", "circular", {"circular", "semicircular"});
    std::map<ExperimentKind, std::vector<ParamSpec>> s;
    s[ExperimentKind::moments] = {
        int_list("m", {400}), int_list("p", {1, 2, 3, 4}), choice("ensemble", "gue", {"gue", "ginibre"}),
        integer("reps", 1)};
    s[ExperimentKind::strong_convergence] = {
        integer("n", 1), integer("d", 1, 0), integer("k", 1), integer("num_polys", 3),
        int_list("m", {100, 200, 400}), integer("reps", 4), integer("p_max", 6), integer("probe_m", 400),
        integer("probe_reps", 2), style, model};
    s[ExperimentKind::chi_scan] = {
        integer("d", 1, 0), integer("n", 1), int_list("m", {50, 100, 200, 400}), int_list("k", {}),
        real("exponent", 0.2, 0.0), integer("budget", 30), integer("reps", 20), integer("max_hill_steps", 50, 0),
        integer("probe_m", 400), integer("probe_reps", 2), style, model};
    s[ExperimentKind::c_scan] = {
        integer("d", 2, 0), integer("n", 1), integer("m_low", 200), integer("m_high", 400), integer("m_step", 100),
        integer("k_cap", 2), integer("budget", 30), integer("reps", 2), integer("max_hill_steps", 50, 0),
        integer("probe_m", 400), style, model};
    s[ExperimentKind::concentration] = {
        int_list("m", {100, 400}), integer("reps", 200), real_list("lambdas", {1.0, 1.0, 1.0}),
        real_list("t", {0.02, 0.05, 0.1, 0.2, 0.5}, 0.0)};
    s[ExperimentKind::witness] = {integer("n_max", 60), int_list("block_sizes", range(1, 64))};
    s[ExperimentKind::truncation] = {
        integer("num_polys", 30), integer("n", 1), integer("d_max", 2), integer("k_max", 2),
        int_list("m", {200, 300, 400}), integer("p_max", 8), integer("probe_m", 400), integer("probe_reps", 2),
        style};
    return s;
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

// Interprets the right-hand side of a `key = value` line.
json parse_value_text(const std::string& raw) {
    static const std::regex range_re(R"(^(-?\d+)\s*\.\.\s*(-?\d+)$)");
    std::smatch match;
    if (std::regex_match(raw, match, range_re)) {
        const auto a = std::stoll(match[1]), b = std::stoll(match[2]);
        json arr = json::array();
        for (auto v : range(a, b)) arr.push_back(v);
        return arr;
    }
    json parsed = json::parse(raw, nullptr, false);
    if (!parsed.is_discarded()) return parsed;
    if (raw.find(',') != std::string::npos) {
        json arr = json::array();
        std::stringstream ss(raw);
        std::string part;
        while (std::getline(ss, part, ',')) {
            json item = json::parse(trim(part), nullptr, false);
            if (item.is_discarded()) return raw;
            arr.push_back(item);
        }
        return arr;
    }
    return raw;
}

bool is_int(const json& v) { return v.is_number_integer() || v.is_number_unsigned(); }

std::optional<ParamValue> convert(const json& v, const ParamSpec& spec, std::vector<std::string>& errors) {
    auto fail = [&](const std::string& why) -> std::optional<ParamValue> {
        errors.push_back("param '" + spec.name + "': " + why);
        return std::nullopt;
    };
    auto check_min = [&](double x) { return !spec.min_value || x >= *spec.min_value; };
    std::string min_text;
    if (spec.min_value) {
        std::ostringstream os;
        os << *spec.min_value;
        min_text = os.str();
    }
    switch (spec.type) {
        case ParamType::integer:
            if (!is_int(v)) return fail("expected an integer");
            if (!check_min(v.get<double>())) return fail("must be >= " + min_text);
            return ParamValue(v.get<std::int64_t>());
        case ParamType::real:
            if (!v.is_number()) return fail("expected a number");
            if (!check_min(v.get<double>())) return fail("must be >= " + min_text);
            return ParamValue(v.get<double>());
        case ParamType::boolean:
            if (!v.is_boolean()) return fail("expected true or false");
            return ParamValue(v.get<bool>());
        case ParamType::text: {
            if (!v.is_string()) return fail("expected a string");
            const auto s = v.get<std::string>();
            if (!spec.choices.empty() && std::find(spec.choices.begin(), spec.choices.end(), s) == spec.choices.end())
                return fail("'" + s + "' is not one of the allowed values");
            return ParamValue(s);
        }
        case ParamType::int_list: {
            const json arr = v.is_array() ? v : json::array({v});
            IntList out;
            for (const auto& x : arr) {
                if (!is_int(x)) return fail("expected a list of integers");
                if (!check_min(x.get<double>())) return fail("entries must be >= " + min_text);
                out.push_back(x.get<std::int64_t>());
            }
            return ParamValue(out);
        }
        case ParamType::real_list: {
            const json arr = v.is_array() ? v : json::array({v});
            RealList out;
            for (const auto& x : arr) {
                if (!x.is_number()) return fail("expected a list of numbers");
                if (!check_min(x.get<double>())) return fail("entries must be >= " + min_text);
                out.push_back(x.get<double>());
            }
            return ParamValue(out);
        }
    }
    return std::nullopt;
}

json value_to_json(const ParamValue& v) {
    return std::visit([](const auto& x) { return json(x); }, v);
}

ExperimentConfig build_config(const std::vector<std::pair<std::string, json>>& entries) {
    std::vector<std::string> errors;
    ExperimentConfig cfg;
    std::map<std::string, json> seen;
    for (const auto& [key, value] : entries) {
        if (seen.count(key)) errors.push_back("duplicate key '" + key + "'");
        seen[key] = value;
    }

    std::optional<ExperimentKind> kind;
    if (auto it = seen.find("experiment"); it == seen.end()) {
        errors.push_back("missing required field 'experiment'");
    } else if (!it->second.is_string() || !(kind = experiment_from_name(it->second.get<std::string>()))) {
        errors.push_back("field 'experiment': unknown experiment " + it->second.dump());
    }
    if (auto it = seen.find("master_seed"); it != seen.end()) {
        if (it->second.is_number_unsigned() || (it->second.is_number_integer() && it->second.get<std::int64_t>() >= 0))
            cfg.master_seed = it->second.get<std::uint64_t>();
        else
            errors.push_back("field 'master_seed': expected a non-negative 64-bit integer");
    }
    if (auto it = seen.find("out_path"); it != seen.end()) {
        if (it->second.is_string())
            cfg.out_path = it->second.get<std::string>();
        else
            errors.push_back("field 'out_path': expected a string");
    }
    if (auto it = seen.find("format"); it != seen.end()) {
        const std::string f = it->second.is_string() ? it->second.get<std::string>() : "";
        if (f == "csv")
            cfg.format = OutputFormat::csv;
        else if (f == "json")
            cfg.format = OutputFormat::json;
        else
            errors.push_back("field 'format': expected csv or json");
    }

    if (kind) {
        cfg.experiment = *kind;
        const auto& schema = param_schema(*kind);
        for (const auto& [key, value] : seen) {
            if (key == "experiment" || key == "master_seed" || key == "out_path" || key == "format") continue;
            auto spec = std::find_if(schema.begin(), schema.end(), [&](const ParamSpec& p) { return p.name == key; });
            if (spec == schema.end()) {
                errors.push_back("unknown param '" + key + "' for experiment " + std::string(experiment_name(*kind)));
                continue;
            }
            if (auto converted = convert(value, *spec, errors)) cfg.params[key] = *converted;
        }
        for (const auto& spec : schema)
            if (!cfg.params.count(spec.name) && !seen.count(spec.name)) cfg.params[spec.name] = spec.default_value;
    }

    if (!errors.empty()) {
        std::string msg = "invalid config:";
        for (const auto& e : errors) msg += "\n  " + e;
        throw ConfigError(msg);
    }
    return cfg;
}

template <class T>
const T& get_param(const ExperimentConfig& cfg, const std::string& name) {
    auto it = cfg.params.find(name);
    if (it == cfg.params.end()) throw ConfigError("missing param '" + name + "'");
    if (auto p = std::get_if<T>(&it->second)) return *p;
    throw ConfigError("param '" + name + "' has the wrong type");
}

}  // namespace

std::string_view experiment_name(ExperimentKind kind) {
    for (const auto& [k, name] : kNames)
        if (k == kind) return name;
    return "unknown";
}

std::optional<ExperimentKind> experiment_from_name(std::string_view name) {
    for (const auto& [k, n] : kNames)
        if (n == name) return k;
    return std::nullopt;
}

const std::vector<ExperimentKind>& all_experiments() {
    static const std::vector<ExperimentKind> kinds = [] {
        std::vector<ExperimentKind> out;
        for (const auto& [k, name] : kNames) out.push_back(k);
        return out;
    }();
    return kinds;
}

const std::vector<ParamSpec>& param_schema(ExperimentKind kind) {
    static const auto schemas = build_schemas();
    return schemas.at(kind);
}

std::int64_t ExperimentConfig::integer(const std::string& name) const { return get_param<std::int64_t>(*this, name); }
double ExperimentConfig::real(const std::string& name) const { return get_param<double>(*this, name); }
bool ExperimentConfig::flag(const std::string& name) const { return get_param<bool>(*this, name); }
const std::string& ExperimentConfig::text(const std::string& name) const { return get_param<std::string>(*this, name); }

std::vector<int> ExperimentConfig::int_list(const std::string& name) const {
    const auto& v = get_param<IntList>(*this, name);
    return {v.begin(), v.end()};
}

std::vector<double> ExperimentConfig::real_list(const std::string& name) const {
    return get_param<RealList>(*this, name);
}

ExperimentConfig parse_config(std::string_view text) {
    const std::string body = trim(text);
    std::vector<std::pair<std::string, json>> entries;
    if (!body.empty() && body.front() == '{') {
        json doc = json::parse(body, nullptr, false);
        if (doc.is_discarded() || !doc.is_object()) throw ConfigError("invalid config: malformed JSON object");
        for (const auto& [key, value] : doc.items()) entries.emplace_back(key, value);
        return build_config(entries);
    }
    std::vector<std::string> errors;
    std::stringstream ss{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string t = trim(line);
        if (t.empty()) continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            errors.push_back("line " + std::to_string(lineno) + ": expected 'key = value'");
            continue;
        }
        entries.emplace_back(trim(t.substr(0, eq)), parse_value_text(trim(t.substr(eq + 1))));
    }
    if (!errors.empty()) {
        std::string msg = "invalid config:";
        for (const auto& e : errors) msg += "\n  " + e;
        throw ConfigError(msg);
    }
    return build_config(entries);
}

nlohmann::json config_to_json(const ExperimentConfig& cfg) {
    json j;
    j["experiment"] = std::string(experiment_name(cfg.experiment));
    j["master_seed"] = cfg.master_seed;
    j["out_path"] = cfg.out_path;
    j["format"] = cfg.format == OutputFormat::csv ? "csv" : "json";
    for (const auto& [key, value] : cfg.params) j[key] = value_to_json(value);
    return j;
}

std::string serialize_config(const ExperimentConfig& cfg) { return config_to_json(cfg).dump(2); }

}  // namespace freelab::lab
