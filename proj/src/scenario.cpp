#include "oscnet/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace oscnet {

InitialSuperposition StateSpec::build() const {
    if (kind == "product_cat") return InitialSuperposition::product_cat(alpha, eta, sign);
    if (kind == "eigen_minus") return InitialSuperposition::eigen_minus(alpha, sign);
    if (kind == "eigen_plus") return InitialSuperposition::eigen_plus(alpha, sign);
    throw ConfigError("unknown state kind '" + kind + "'");
}

StateKind StateSpec::state_kind() const {
    if (kind == "product_cat") return StateKind::ProductCat;
    if (kind == "eigen_minus") return StateKind::EigenMinus;
    if (kind == "eigen_plus") return StateKind::EigenPlus;
    throw ConfigError("unknown state kind '" + kind + "'");
}

void Scenario::validate() const {
    config.validate(!waive_coupling_guard);
    if (!(config.lambda > 0.0))
        throw ConfigError("scenario requires lambda > 0 (label dynamics undefined at lambda = 0)");
    if (samples < 2) throw ConfigError("samples must be >= 2");
    if (!(tmax_lambda > 0.0)) throw ConfigError("tmax_lambda must be > 0");
    state.build(); // throws on bad kind / zero norm
    for (const auto& obs : observables) {
        const auto& known = known_observables();
        if (std::find(known.begin(), known.end(), obs) == known.end())
            throw ConfigError("unknown observable '" + obs + "'");
    }
}

const std::vector<std::string>& known_observables() {
    static const std::vector<std::string> names = {
        "recurrence",         "swap",
        "coherence_joint",    "coherence_mode1",    "coherence_mode2",
        "coherence_isolated1", "coherence_isolated2",
        "offdiag_mode1",      "offdiag_mode2",
        "prob_cat_mode1",     "prob_coherent_mode1",
        "prob_cat_mode2",     "prob_coherent_mode2",
        "entropy_joint",      "entropy_mode1",      "entropy_mode2",   "entropy_excess",
    };
    return names;
}

// ------------------------------ preset table --------------------------------

namespace {

Scenario preset_base(const std::string& name) {
    Scenario s;
    s.name = name;
    s.figure_tag = name;
    s.config.omega10 = 1.0;
    s.config.omega20 = 1.0;
    return s;
}

} // namespace

std::vector<std::string> builtin_names() {
    return {"fig4a", "fig4b", "fig4c", "fig4d", "fig4e", "fig4f",
            "fig5", "fig6", "fig7a", "fig7b", "fig8a", "fig8b"};
}

Scenario builtin_scenario(const std::string& name) {
    const double pi = M_PI;
    if (name == "fig4a") {
        Scenario s = preset_base(name);
        s.config.lambda = 2e-2;
        s.observables = {"recurrence", "swap"};
        s.tmax_lambda = 4.0 * pi;
        s.samples = 8001;
        return s;
    }
    if (name == "fig4b") {
        Scenario s = preset_base(name);
        s.config.lambda = 1.0;
        s.observables = {"recurrence", "swap"};
        s.tmax_lambda = 9.0 * pi; // recurrences at lambda*t = 8 n pi
        s.samples = 9001;
        return s;
    }
    if (name == "fig4c") {
        Scenario s = preset_base(name);
        s.config.lambda = 2.0; // Omega/lambda = 1
        s.observables = {"recurrence", "swap"};
        s.tmax_lambda = 4.0 * pi;
        s.samples = 4001;
        return s;
    }
    if (name == "fig4d") {
        Scenario s = preset_base(name);
        s.config.lambda = 2e-2;
        s.config.gamma_scale_1 = s.config.gamma_scale_2 = 2e-3;
        // eps = 1 Lorentzian realizes the weak-coupling rates gamma+- = Gamma/2
        s.config.spectral_1 = s.config.spectral_2 = SpectralModel::lorentzian(1.0, 1.0);
        s.observables = {"recurrence", "swap"};
        s.tmax_lambda = 4.0 * pi;
        s.samples = 8001;
        return s;
    }
    if (name == "fig4e") {
        Scenario s = preset_base(name);
        s.config.lambda = 2.0;
        s.config.gamma_scale_1 = s.config.gamma_scale_2 = 2e-3;
        s.config.spectral_1 = s.config.spectral_2 = SpectralModel::markovian();
        s.observables = {"recurrence", "swap"};
        s.tmax_lambda = 1500.0;
        s.samples = 30001;
        return s;
    }
    if (name == "fig4f") {
        Scenario s = preset_base(name);
        s.config.omega20 = 0.5;
        s.config.lambda = 2e-2;
        s.config.drive_amplitude = s.config.required_drive_amplitude();
        s.config.drive_frequency = 1e-2; // detuned on purpose
        s.observables = {"recurrence", "swap"};
        s.tmax_lambda = 4.0 * pi;
        s.samples = 50001; // resolves the fast phase under the swap envelope
        const DerivedCoefficients c = derive_coefficients(s.config);
        const double shift = s.config.drive_amplitude / (c.Omega - c.lambda);
        s.notes["F_constraint"] = s.config.drive_amplitude;
        s.notes["F_over_omega20"] = s.config.drive_amplitude / s.config.omega20;
        s.notes["F_over_Omega_minus_lambda"] = shift;
        s.notes["swap_suppression_factor"] = std::exp(-2.0 * shift * shift);
        return s;
    }
    if (name == "fig5") {
        Scenario s = preset_base(name);
        s.config.lambda = 2.0;
        s.config.gamma_scale_1 = s.config.gamma_scale_2 = 0.4; // lambda/Gamma = 5
        s.config.spectral_1 = s.config.spectral_2 = SpectralModel::markovian();
        s.waive_coupling_guard = true;
        s.observables = {"coherence_joint", "coherence_mode1", "coherence_mode2",
                         "coherence_isolated1", "offdiag_mode1", "offdiag_mode2"};
        s.tmax_lambda = 15.0;
        s.samples = 3001;
        return s;
    }
    if (name == "fig6") {
        Scenario s = preset_base(name);
        s.config.gamma_scale_1 = 1e-2;
        s.config.gamma_scale_2 = 1e-4; // Gamma1/Gamma2 = 100
        s.config.lambda = 5e-2;        // lambda/Gamma1 = 5
        s.config.spectral_1 = s.config.spectral_2 = SpectralModel::lorentzian(1.0, 1.0);
        s.waive_coupling_guard = true;
        s.observables = {"coherence_mode1", "coherence_mode2", "coherence_joint",
                         "coherence_isolated1", "coherence_isolated2"};
        s.tmax_lambda = 25.0; // t up to 5/Gamma1
        s.samples = 5001;
        return s;
    }
    if (name == "fig7a" || name == "fig7b") {
        Scenario s = preset_base(name);
        s.config.lambda = 2.0;
        s.config.gamma_scale_1 = s.config.gamma_scale_2 = 0.1; // lambda/Gamma = 20
        s.config.spectral_1 = s.config.spectral_2 = SpectralModel::markovian();
        if (name == "fig7a")
            s.observables = {"prob_cat_mode1", "prob_coherent_mode1"};
        else
            s.observables = {"prob_coherent_mode2", "prob_cat_mode2"};
        s.tmax_lambda = 10.0 * pi;
        s.samples = 8001;
        return s;
    }
    if (name == "fig8a") {
        Scenario s = preset_base(name);
        s.config.lambda = 2.0;
        s.config.gamma_scale_1 = s.config.gamma_scale_2 = 0.1;
        s.config.spectral_1 = s.config.spectral_2 = SpectralModel::markovian();
        s.observables = {"entropy_joint", "entropy_mode1", "entropy_mode2", "entropy_excess"};
        s.tmax_lambda = 12.0; // up to ~1.5x the correlation time
        s.samples = 4001;
        return s;
    }
    if (name == "fig8b") {
        Scenario s = preset_base(name);
        s.config.lambda = 2.0;
        s.config.gamma_scale_1 = s.config.gamma_scale_2 = 1.0; // lambda/Gamma = 2
        s.config.spectral_1 = s.config.spectral_2 = SpectralModel::markovian();
        s.waive_coupling_guard = true;
        s.observables = {"entropy_joint", "entropy_mode1", "entropy_mode2", "entropy_excess"};
        s.tmax_lambda = 40.0; // t up to 20/Gamma
        s.samples = 8001;
        return s;
    }
    throw ConfigError("unknown preset scenario '" + name + "'; see list-builtins");
}

// ------------------------------ config parser -------------------------------

namespace {

struct ConfigValue {
    enum class Type { Number, String, Table, Array } type = Type::Number;
    double number = 0.0;
    std::string text;
    std::map<std::string, ConfigValue> table;
    std::vector<ConfigValue> array;
};

struct ParseCursor {
    const std::string& src;
    size_t pos = 0;
    std::string origin;
    int line = 1;

    [[noreturn]] void fail(const std::string& msg) const {
        throw ConfigError(origin + ":" + std::to_string(line) + ": " + msg);
    }
    void skip_space_inline() {
        while (pos < src.size() && (src[pos] == ' ' || src[pos] == '\t')) ++pos;
    }
};

bool is_key_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

ConfigValue parse_value(ParseCursor& cur);

std::string parse_key(ParseCursor& cur) {
    cur.skip_space_inline();
    const size_t start = cur.pos;
    while (cur.pos < cur.src.size() && is_key_char(cur.src[cur.pos])) ++cur.pos;
    if (cur.pos == start) cur.fail("expected a key");
    return cur.src.substr(start, cur.pos - start);
}

ConfigValue parse_string(ParseCursor& cur) {
    ++cur.pos; // opening quote
    const size_t start = cur.pos;
    while (cur.pos < cur.src.size() && cur.src[cur.pos] != '"' && cur.src[cur.pos] != '\n') ++cur.pos;
    if (cur.pos >= cur.src.size() || cur.src[cur.pos] != '"') cur.fail("unterminated string");
    ConfigValue v;
    v.type = ConfigValue::Type::String;
    v.text = cur.src.substr(start, cur.pos - start);
    ++cur.pos;
    return v;
}

ConfigValue parse_number(ParseCursor& cur) {
    const size_t start = cur.pos;
    while (cur.pos < cur.src.size() &&
           (std::isdigit(static_cast<unsigned char>(cur.src[cur.pos])) ||
            std::string("+-.eE").find(cur.src[cur.pos]) != std::string::npos))
        ++cur.pos;
    const std::string token = cur.src.substr(start, cur.pos - start);
    try {
        size_t used = 0;
        ConfigValue v;
        v.type = ConfigValue::Type::Number;
        v.number = std::stod(token, &used);
        if (used != token.size()) throw std::invalid_argument(token);
        return v;
    } catch (const std::exception&) {
        cur.fail("malformed number '" + token + "'");
    }
}

ConfigValue parse_table(ParseCursor& cur) {
    ++cur.pos; // '{'
    ConfigValue v;
    v.type = ConfigValue::Type::Table;
    cur.skip_space_inline();
    if (cur.pos < cur.src.size() && cur.src[cur.pos] == '}') {
        ++cur.pos;
        return v;
    }
    while (true) {
        const std::string key = parse_key(cur);
        cur.skip_space_inline();
        if (cur.pos >= cur.src.size() || cur.src[cur.pos] != '=') cur.fail("expected '=' in table");
        ++cur.pos;
        cur.skip_space_inline();
        v.table[key] = parse_value(cur);
        cur.skip_space_inline();
        if (cur.pos < cur.src.size() && cur.src[cur.pos] == ',') {
            ++cur.pos;
            cur.skip_space_inline();
            continue;
        }
        if (cur.pos < cur.src.size() && cur.src[cur.pos] == '}') {
            ++cur.pos;
            return v;
        }
        cur.fail("expected ',' or '}' in table");
    }
}

ConfigValue parse_array(ParseCursor& cur) {
    ++cur.pos; // '['
    ConfigValue v;
    v.type = ConfigValue::Type::Array;
    cur.skip_space_inline();
    if (cur.pos < cur.src.size() && cur.src[cur.pos] == ']') {
        ++cur.pos;
        return v;
    }
    while (true) {
        v.array.push_back(parse_value(cur));
        cur.skip_space_inline();
        if (cur.pos < cur.src.size() && cur.src[cur.pos] == ',') {
            ++cur.pos;
            cur.skip_space_inline();
            continue;
        }
        if (cur.pos < cur.src.size() && cur.src[cur.pos] == ']') {
            ++cur.pos;
            return v;
        }
        cur.fail("expected ',' or ']' in array");
    }
}

ConfigValue parse_value(ParseCursor& cur) {
    cur.skip_space_inline();
    if (cur.pos >= cur.src.size()) cur.fail("expected a value");
    const char c = cur.src[cur.pos];
    if (c == '"') return parse_string(cur);
    if (c == '{') return parse_table(cur);
    if (c == '[') return parse_array(cur);
    return parse_number(cur);
}

double want_number(const ConfigValue& v, const std::string& key, const ParseCursor& cur) {
    if (v.type != ConfigValue::Type::Number) cur.fail("'" + key + "' must be a number");
    return v.number;
}

std::string want_string(const ConfigValue& v, const std::string& key, const ParseCursor& cur) {
    if (v.type != ConfigValue::Type::String) cur.fail("'" + key + "' must be a string");
    return v.text;
}

SpectralModel spectral_from_table(const ConfigValue& v, const std::string& key,
                                  const ParseCursor& cur) {
    if (v.type != ConfigValue::Type::Table) cur.fail("'" + key + "' must be a table {model = ...}");
    auto it = v.table.find("model");
    if (it == v.table.end()) cur.fail("'" + key + "' needs a 'model' entry");
    const std::string model = want_string(it->second, key + ".model", cur);
    auto num_or = [&](const char* field, double fallback) {
        auto fit = v.table.find(field);
        return fit == v.table.end() ? fallback : want_number(fit->second, field, cur);
    };
    if (model == "markovian") return SpectralModel::markovian();
    if (model == "lorentzian")
        return SpectralModel::lorentzian(num_or("eps_plus", 1.0), num_or("eps_minus", 1.0));
    if (model == "wide_lorentzian")
        return SpectralModel::wide_lorentzian(num_or("eps_minus", 1.0));
    cur.fail("unknown spectral model '" + model + "'");
}

} // namespace

Scenario parse_scenario_text(const std::string& text, const std::string& origin) {
    Scenario s;
    ParseCursor cur{text, 0, origin, 1};

    while (cur.pos < text.size()) {
        // line start
        cur.skip_space_inline();
        if (cur.pos >= text.size()) break;
        if (text[cur.pos] == '\n') {
            ++cur.pos;
            ++cur.line;
            continue;
        }
        if (text[cur.pos] == '#') {
            while (cur.pos < text.size() && text[cur.pos] != '\n') ++cur.pos;
            continue;
        }
        const std::string key = parse_key(cur);
        cur.skip_space_inline();
        if (cur.pos >= text.size() || text[cur.pos] != '=') cur.fail("expected '=' after '" + key + "'");
        ++cur.pos;
        cur.skip_space_inline();
        const ConfigValue value = parse_value(cur);
        cur.skip_space_inline();
        if (cur.pos < text.size() && text[cur.pos] == '#')
            while (cur.pos < text.size() && text[cur.pos] != '\n') ++cur.pos;
        if (cur.pos < text.size() && text[cur.pos] != '\n') cur.fail("trailing characters after value");

        if (key == "name") s.name = want_string(value, key, cur);
        else if (key == "omega10") s.config.omega10 = want_number(value, key, cur);
        else if (key == "omega20") s.config.omega20 = want_number(value, key, cur);
        else if (key == "lambda") s.config.lambda = want_number(value, key, cur);
        else if (key == "F") s.config.drive_amplitude = want_number(value, key, cur);
        else if (key == "omega_drive") s.config.drive_frequency = want_number(value, key, cur);
        else if (key == "gamma1") s.config.gamma_scale_1 = want_number(value, key, cur);
        else if (key == "gamma2") s.config.gamma_scale_2 = want_number(value, key, cur);
        else if (key == "spectral1") s.config.spectral_1 = spectral_from_table(value, key, cur);
        else if (key == "spectral2") s.config.spectral_2 = spectral_from_table(value, key, cur);
        else if (key == "tmax_lambda") s.tmax_lambda = want_number(value, key, cur);
        else if (key == "samples") s.samples = int(want_number(value, key, cur));
        else if (key == "waive_coupling_guard") s.waive_coupling_guard = want_number(value, key, cur) != 0.0;
        else if (key == "state") {
            if (value.type != ConfigValue::Type::Table) cur.fail("'state' must be a table");
            for (const auto& [k, v] : value.table) {
                if (k == "kind") s.state.kind = want_string(v, k, cur);
                else if (k == "alpha") s.state.alpha = want_number(v, k, cur);
                else if (k == "eta") s.state.eta = want_number(v, k, cur);
                else if (k == "sign") {
                    const std::string sv = want_string(v, k, cur);
                    if (sv == "+") s.state.sign = +1;
                    else if (sv == "-") s.state.sign = -1;
                    else cur.fail("state.sign must be \"+\" or \"-\"");
                } else cur.fail("unknown state field '" + k + "'");
            }
        } else if (key == "observables") {
            if (value.type != ConfigValue::Type::Array) cur.fail("'observables' must be an array");
            s.observables.clear();
            for (const auto& item : value.array)
                s.observables.push_back(want_string(item, "observables[]", cur));
        } else if (key == "oracle") {
            if (value.type != ConfigValue::Type::Table) cur.fail("'oracle' must be a table");
            for (const auto& [k, v] : value.table) {
                if (k == "enabled") s.oracle.enabled = want_number(v, k, cur) != 0.0;
                else if (k == "trunc") s.oracle.truncation = int(want_number(v, k, cur));
                else if (k == "dt_lambda") s.oracle.dt_lambda = want_number(v, k, cur);
                else if (k == "points") s.oracle.points = int(want_number(v, k, cur));
                else cur.fail("unknown oracle field '" + k + "'");
            }
        } else {
            cur.fail("unknown key '" + key + "'");
        }
    }

    if (s.observables.empty()) s.observables = {"recurrence", "swap"};
    try {
        s.validate();
    } catch (const ConfigError& e) {
        throw ConfigError(origin + ": " + e.what());
    }
    return s;
}

Scenario parse_scenario_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario_text(buf.str(), path.string());
}

// ------------------------------- evaluation ---------------------------------

namespace {

std::vector<double> time_grid(const Scenario& s) {
    std::vector<double> grid(s.samples);
    const double tmax = s.tmax_lambda / s.config.lambda;
    for (int i = 0; i < s.samples; ++i) grid[i] = tmax * double(i) / double(s.samples - 1);
    return grid;
}

bool needs_snapshot(const std::string& obs) {
    return obs == "recurrence" || obs == "swap" || obs.rfind("prob_", 0) == 0 ||
           obs.rfind("entropy_", 0) == 0 || obs.rfind("offdiag_", 0) == 0;
}

} // namespace

TimeSeries evaluate_observable(const Scenario& s, const std::string& observable) {
    const DampingRates rates = evaluate_rates(s.config);
    const DerivedCoefficients coeffs = derive_coefficients(s.config, rates);
    const InitialSuperposition init = s.state.build();
    const std::vector<double> grid = time_grid(s);

    TimeSeries series;
    series.label = observable;
    series.times = grid;
    series.values.resize(grid.size());

    const cplx alpha = init.beta_I_1; // cat amplitude in mode 1
    const CoherentSuperposition cat_target = CoherentSuperposition::cat(s.state.alpha, s.state.sign);
    const CoherentSuperposition coh_target = CoherentSuperposition::coherent(s.state.eta);

    // Reference t=0 off-diagonal magnitudes for the normalized coherence report
    double offdiag0[3] = {1.0, 1.0, 1.0};
    if (observable.rfind("offdiag_", 0) == 0) {
        const JointStateSnapshot snap0 = evolve_joint_state(init, coeffs, 0.0);
        for (int mode = 1; mode <= 2; ++mode)
            offdiag0[mode] = std::abs(reduce_to_mode(snap0, mode).coeffs(0, 1));
    }

    for (size_t i = 0; i < grid.size(); ++i) {
        const double t = grid[i];
        double value = 0.0;
        if (needs_snapshot(observable)) {
            const JointStateSnapshot snap = evolve_joint_state(init, coeffs, t);
            if (observable == "recurrence") value = recurrence_probability(init, snap);
            else if (observable == "swap") value = swap_probability(init, snap);
            else if (observable == "prob_cat_mode1")
                value = find_state_probability(reduce_to_mode(snap, 1), cat_target);
            else if (observable == "prob_coherent_mode1")
                value = find_state_probability(reduce_to_mode(snap, 1), coh_target);
            else if (observable == "prob_cat_mode2")
                value = find_state_probability(reduce_to_mode(snap, 2), cat_target);
            else if (observable == "prob_coherent_mode2")
                value = find_state_probability(reduce_to_mode(snap, 2), coh_target);
            else if (observable == "offdiag_mode1")
                value = std::abs(reduce_to_mode(snap, 1).coeffs(0, 1)) / offdiag0[1];
            else if (observable == "offdiag_mode2")
                value = std::abs(reduce_to_mode(snap, 2).coeffs(0, 1)) / offdiag0[2];
            else {
                const EntropyReport ent = linear_entropies(snap);
                if (observable == "entropy_joint") value = ent.S12;
                else if (observable == "entropy_mode1") value = ent.S1;
                else if (observable == "entropy_mode2") value = ent.S2;
                else if (observable == "entropy_excess") value = ent.excess;
                else throw ConfigError("unknown observable '" + observable + "'");
            }
        } else {
            if (observable == "coherence_joint")
                value = coherence_factor_joint(s.state.state_kind(), rates, alpha, t);
            else if (observable == "coherence_mode1")
                value = coherence_factor_reduced(1, rates, s.config.lambda, alpha, t);
            else if (observable == "coherence_mode2")
                value = coherence_factor_reduced(2, rates, s.config.lambda, alpha, t);
            else if (observable == "coherence_isolated1")
                value = coherence_factor_isolated(s.config.gamma_scale_1, alpha, t);
            else if (observable == "coherence_isolated2")
                value = coherence_factor_isolated(s.config.gamma_scale_2, alpha, t);
            else throw ConfigError("unknown observable '" + observable + "'");
        }
        series.values[i] = value;
    }
    return series;
}

std::string format_csv(const TimeSeries& series, double lambda) {
    std::string out = "t,lambda_t,value\n";
    char buf[96];
    for (size_t i = 0; i < series.times.size(); ++i) {
        const double t = series.times[i];
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", t, lambda * t, series.values[i]);
        out += buf;
    }
    return out;
}

// ------------------------------- validation ---------------------------------

ValidationReport validate_scenario(const Scenario& s) {
    s.validate();
    const DampingRates rates = evaluate_rates(s.config);
    const DerivedCoefficients coeffs = derive_coefficients(s.config, rates);
    const InitialSuperposition init = s.state.build();

    const int n = s.oracle.truncation;
    const FockDensityMatrix rho0 = coherent_superposition_to_fock(init, n, n); // TruncationError here
    const LiouvillianMatrix liou =
        build_liouvillian(s.config, rates, coeffs, Regime::Strong, n, n);

    const int points = std::max(2, s.oracle.points);
    std::vector<double> grid(points);
    const double tmax = s.tmax_lambda / s.config.lambda;
    for (int i = 0; i < points; ++i) grid[i] = tmax * double(i + 1) / double(points);

    const double dt = s.oracle.dt_lambda / s.config.lambda;
    const std::vector<FockDensityMatrix> rhos = integrate(liou, rho0, grid, dt);

    ValidationReport report;
    report.points = points;
    for (int i = 0; i < points; ++i) {
        const JointStateSnapshot snap = evolve_joint_state(init, coeffs, grid[i]);
        const ComparisonResult res = compare(rhos[i], snap);
        report.max_trace_distance = std::max(report.max_trace_distance, res.trace_distance);
        report.max_offdiag_deviation =
            std::max(report.max_offdiag_deviation, std::abs(res.offdiag_ratio - 1.0));
        report.min_fidelity = std::min(report.min_fidelity, res.fidelity);
    }
    report.passed = report.max_trace_distance <= report.threshold_trace_distance &&
                    report.max_offdiag_deviation <= report.threshold_offdiag;
    return report;
}

// --------------------------------- running ----------------------------------

namespace {

nlohmann::json complex_json(cplx z) { return {z.real(), z.imag()}; }

nlohmann::json spectral_json(const SpectralModel& m) {
    nlohmann::json j;
    j["model"] = m.name();
    if (m.kind == SpectralKind::Lorentzian) {
        j["eps_plus"] = m.eps_plus;
        j["eps_minus"] = m.eps_minus;
    } else if (m.kind == SpectralKind::WideLorentzian) {
        j["eps_minus"] = m.eps_minus;
    }
    return j;
}

} // namespace

RunResult run_scenario(const Scenario& s, const std::filesystem::path& out_root) {
    const auto t_start = std::chrono::steady_clock::now();
    s.validate();
    const DampingRates rates = evaluate_rates(s.config);
    const DerivedCoefficients coeffs = derive_coefficients(s.config, rates);

    RunResult result;
    result.name = s.name;
    result.out_dir = out_root / s.name;
    std::filesystem::create_directories(result.out_dir);

    nlohmann::json manifest;
    manifest["scenario"] = s.name;
    if (!s.figure_tag.empty()) manifest["figure_tag"] = s.figure_tag;
    manifest["version"] = "oscnet 0.1.0";
    manifest["coupling_guard_waived"] = s.waive_coupling_guard;

    manifest["parameters"] = {
        {"omega10", s.config.omega10},
        {"omega20", s.config.omega20},
        {"lambda", s.config.lambda},
        {"F", s.config.drive_amplitude},
        {"omega_drive", s.config.drive_frequency},
        {"gamma1", s.config.gamma_scale_1},
        {"gamma2", s.config.gamma_scale_2},
        {"spectral1", spectral_json(s.config.spectral_1)},
        {"spectral2", spectral_json(s.config.spectral_2)},
        {"state", {{"kind", s.state.kind}, {"alpha", s.state.alpha}, {"eta", s.state.eta},
                   {"sign", s.state.sign}}},
        {"tmax_lambda", s.tmax_lambda},
        {"samples", s.samples},
    };

    manifest["rates"] = {
        {"gamma_plus_1", rates.gamma_plus_1},   {"gamma_minus_1", rates.gamma_minus_1},
        {"gamma_plus_2", rates.gamma_plus_2},   {"gamma_minus_2", rates.gamma_minus_2},
        {"gamma_at_drive_1", rates.gamma_at_drive_1},
        {"gamma_at_drive_2", rates.gamma_at_drive_2},
    };

    manifest["coefficients"] = {
        {"Omega", coeffs.Omega},
        {"omega_plus", coeffs.omega_plus},
        {"omega_minus", coeffs.omega_minus},
        {"Lambda", complex_json(coeffs.Lambda)},
        {"Delta", coeffs.Delta},
        {"Phi", coeffs.Phi},
        {"Theta", coeffs.Theta},
        {"Pi_1", coeffs.Pi_1},
        {"Pi_2", coeffs.Pi_2},
        {"E_plus_1", complex_json(coeffs.E_plus_1)},
        {"E_minus_1", complex_json(coeffs.E_minus_1)},
        {"E_plus_2", complex_json(coeffs.E_plus_2)},
        {"E_minus_2", complex_json(coeffs.E_minus_2)},
        {"B_1", complex_json(coeffs.B_1)},
        {"B_2", complex_json(coeffs.B_2)},
        {"G_1", complex_json(coeffs.G_1)},
        {"G_2", complex_json(coeffs.G_2)},
    };

    if (rates.sum_all() > 0.0 && s.state.alpha != 0.0) {
        const DecoherenceReport rep = decoherence_report(
            rates, s.state.alpha, s.config.gamma_scale_1, s.config.gamma_scale_2);
        nlohmann::json j;
        j["tau_D"] = rep.tau_D;
        j["tau_D_reference"] = rep.tau_D_reference;
        j["ratio"] = rep.ratio;
        j["tau_C_unbounded"] = rep.tau_C_unbounded;
        j["tau_C"] = rep.tau_C ? nlohmann::json(*rep.tau_C) : nlohmann::json(nullptr);
        j["tau_ratio"] = rep.tau_ratio ? nlohmann::json(*rep.tau_ratio) : nlohmann::json(nullptr);
        manifest["decoherence"] = j;
    }

    if (!s.notes.empty()) {
        nlohmann::json notes;
        for (const auto& [k, v] : s.notes) notes[k] = v;
        manifest["notes"] = notes;
    }

    manifest["observables"] = s.observables;
    nlohmann::json files;
    for (const auto& obs : s.observables) {
        const TimeSeries series = evaluate_observable(s, obs);
        const std::filesystem::path csv_path = result.out_dir / (obs + ".csv");
        std::ofstream out(csv_path, std::ios::binary);
        out << format_csv(series, s.config.lambda);
        result.csv_files[obs] = csv_path;
        files[obs] = obs + ".csv";
    }
    manifest["csv_files"] = files;

    if (s.oracle.enabled) {
        const ValidationReport rep = validate_scenario(s);
        manifest["oracle"] = {
            {"enabled", true},
            {"truncation", s.oracle.truncation},
            {"dt_lambda", s.oracle.dt_lambda},
            {"points", rep.points},
            {"max_trace_distance", rep.max_trace_distance},
            {"max_offdiag_deviation", rep.max_offdiag_deviation},
            {"min_fidelity", rep.min_fidelity},
            {"passed", rep.passed},
        };
    }

    const auto t_end = std::chrono::steady_clock::now();
    manifest["timing_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(t_end - t_start).count();

    std::ofstream mout(result.out_dir / "manifest.json", std::ios::binary);
    mout << manifest.dump(2) << "\n";
    result.manifest = std::move(manifest);
    return result;
}

} // namespace oscnet
