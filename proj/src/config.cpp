#include "pensiondc/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pensiondc {

namespace {

const std::map<std::string, std::string>& defaults() {
    static const std::map<std::string, std::string> kv = {
        {"market.a", "0.2"},
        {"market.r_bar", "0.05"},
        {"market.sigma_r", "0.02"},
        {"market.r0", "0.03"},
        {"market.T", "20"},
        {"market.xi", "0.15"},
        {"market.mu_I", "-0.01"},
        {"market.sigma_I", "0.015"},
        {"market.mu", "0.06"},
        {"market.sigma", "0.19"},
        {"market.sigma_S", "0.06"},
        {"market.mu_ell", "0.01"},
        {"market.sigma1", "0.014"},
        {"market.sigma2", "0.171"},
        {"market.ell0", "100"},
        {"mortality.tau", "105"},
        {"mortality.t0", "25"},
        {"mortality.epsilon", "1"},
        {"mortality.convention", "corrected"},
        {"plan.delta", "0.12"},
        {"plan.kappa", "0.1"},
        {"plan.alpha", "-3"},
        {"plan.theta", "0"},
        {"plan.Y0", "20"},
        {"sim.n_steps", "240"},
        {"sim.n_paths", "100000"},
        {"sim.seed", "42"},
        {"sim.utility_floor", "1e-6"},
        {"strategy.variant", "foc"},
        {"strategies.alphas", "-3,0.5"},
        {"compare.rivals", "scale:0.5,scale:0.9,scale:1.1,scale:1.5"},
        {"verify.n_paths", "2000"},
        {"verify.inject_fault", "none"},
        {"verify.a2_degree", "2"},
        {"verify.a2_discount", "discounted"},
    };
    return kv;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config: key '" + key + "' has non-numeric value '" + v + "'");
    }
}

}  // namespace

Config::Config() : kv_(defaults()) {}

Config Config::from_text(const std::string& text, const std::string& origin) {
    Config cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config: " + origin + ":" + std::to_string(lineno) +
                              ": expected 'key = value', got '" + line + "'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw ConfigError("config: " + origin + ":" + std::to_string(lineno) +
                              ": empty key or value in '" + line + "'");
        }
        if (defaults().find(key) == defaults().end()) {
            throw ConfigError("config: " + origin + ":" + std::to_string(lineno) +
                              ": unknown key '" + key + "'");
        }
        cfg.kv_[key] = value;
    }
    return cfg;
}

Config Config::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_text(ss.str(), path);
}

void Config::set(const std::string& key, const std::string& value) {
    if (defaults().find(key) == defaults().end()) {
        throw ConfigError("config: unknown key '" + key + "'");
    }
    kv_[key] = value;
}

bool Config::has(const std::string& key) const { return kv_.count(key) > 0; }

std::string Config::get_string(const std::string& key) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) throw ConfigError("config: missing key '" + key + "'");
    return it->second;
}

double Config::get_double(const std::string& key) const {
    return parse_double(key, get_string(key));
}

std::int64_t Config::get_int(const std::string& key) const {
    const double v = get_double(key);
    return static_cast<std::int64_t>(v);
}

std::uint64_t Config::get_u64(const std::string& key) const {
    const std::string v = get_string(key);
    std::uint64_t out = 0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
        throw ConfigError("config: key '" + key + "' is not an unsigned integer: '" + v + "'");
    }
    return out;
}

std::vector<double> Config::get_double_list(const std::string& key) const {
    const std::string v = get_string(key);
    std::vector<double> out;
    std::istringstream ss(v);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok = trim(tok);
        if (!tok.empty()) out.push_back(parse_double(key, tok));
    }
    if (out.empty()) throw ConfigError("config: key '" + key + "' has an empty list");
    return out;
}

StepFunction Config::get_step_function(const std::string& key) const {
    const std::string v = get_string(key);
    if (v.find(':') == std::string::npos) {
        return StepFunction(parse_double(key, v));
    }
    std::vector<double> knots, values;
    std::istringstream ss(v);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok = trim(tok);
        const auto colon = tok.find(':');
        if (colon == std::string::npos) {
            throw ConfigError("config: key '" + key + "': step entries must be 't:value'");
        }
        knots.push_back(parse_double(key, trim(tok.substr(0, colon))));
        values.push_back(parse_double(key, trim(tok.substr(colon + 1))));
    }
    try {
        return StepFunction(std::move(knots), std::move(values));
    } catch (const std::exception& e) {
        throw ConfigError("config: key '" + key + "': " + e.what());
    }
}

MarketParams Config::market() const {
    MarketParams p;
    p.a = get_double("market.a");
    p.r_bar = get_double("market.r_bar");
    p.sigma_r = get_double("market.sigma_r");
    p.r0 = get_double("market.r0");
    p.T = get_double("market.T");
    p.xi = get_double("market.xi");
    p.mu_I = get_step_function("market.mu_I");
    p.sigma_I = get_step_function("market.sigma_I");
    p.mu = get_step_function("market.mu");
    p.sigma = get_step_function("market.sigma");
    p.sigma_S = get_step_function("market.sigma_S");
    p.mu_ell = get_step_function("market.mu_ell");
    p.sigma1 = get_step_function("market.sigma1");
    p.sigma2 = get_step_function("market.sigma2");
    p.ell0 = get_double("market.ell0");
    p.validate();
    return p;
}

PlanConfig Config::plan() const {
    PlanConfig c;
    c.delta = get_double("plan.delta");
    c.kappa = get_double("plan.kappa");
    c.alpha = get_double("plan.alpha");
    c.theta = get_double("plan.theta");
    c.Y0 = get_double("plan.Y0");
    c.validate();
    return c;
}

MortalityLaw Config::mortality() const {
    const std::string conv = get_string("mortality.convention");
    MortalityConvention mc;
    if (conv == "corrected") {
        mc = MortalityConvention::Corrected;
    } else if (conv == "paper" || conv == "paper_verbatim") {
        mc = MortalityConvention::PaperVerbatim;
    } else {
        throw ConfigError("config: mortality.convention must be 'corrected' or 'paper'");
    }
    try {
        return MortalityLaw(get_double("mortality.tau"), get_double("mortality.t0"),
                            static_cast<int>(get_int("mortality.epsilon")), mc);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

SimulationGrid Config::grid() const {
    try {
        return SimulationGrid(get_double("market.T"), static_cast<int>(get_int("sim.n_steps")));
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

SimOptions Config::sim_options() const {
    SimOptions o;
    o.grid = grid();
    o.n_paths = get_int("sim.n_paths");
    if (o.n_paths <= 0) throw ConfigError("config: sim.n_paths must be positive");
    o.seed = get_u64("sim.seed");
    o.utility_floor_y = get_double("sim.utility_floor");
    if (!(o.utility_floor_y > 0.0)) throw ConfigError("config: sim.utility_floor must be positive");
    return o;
}

StrategyVariant Config::variant() const {
    const std::string v = get_string("strategy.variant");
    if (v == "foc") return StrategyVariant::FocOracle;
    if (v == "paper") return StrategyVariant::PaperVerbatim;
    throw ConfigError("config: strategy.variant must be 'foc' or 'paper'");
}

std::string Config::resolved_text() const {
    std::ostringstream out;
    for (const auto& [k, v] : kv_) out << k << " = " << v << "\n";
    return out.str();
}

std::uint64_t Config::hash() const {
    const std::string text = resolved_text();
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

int resolve_threads(int explicit_threads) {
    if (explicit_threads > 0) return explicit_threads;
    if (const char* env = std::getenv("PENSION_DC_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

}  // namespace pensiondc
