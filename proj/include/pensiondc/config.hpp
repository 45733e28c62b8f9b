#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "pensiondc/market.hpp"
#include "pensiondc/mortality.hpp"
#include "pensiondc/strategy.hpp"
#include "pensiondc/wealth.hpp"

namespace pensiondc {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Flat key = value file, '#' comments, keys namespaced per module. Values are
// numbers, identifiers, comma lists, or step functions ("t:v,t:v").
class Config {
public:
    Config();  // defaults only
    static Config from_file(const std::string& path);
    static Config from_text(const std::string& text, const std::string& origin = "<text>");

    void set(const std::string& key, const std::string& value);
    bool has(const std::string& key) const;

    std::string get_string(const std::string& key) const;
    double get_double(const std::string& key) const;
    std::int64_t get_int(const std::string& key) const;
    std::uint64_t get_u64(const std::string& key) const;
    std::vector<double> get_double_list(const std::string& key) const;
    StepFunction get_step_function(const std::string& key) const;

    MarketParams market() const;
    PlanConfig plan() const;
    MortalityLaw mortality() const;
    SimulationGrid grid() const;
    SimOptions sim_options() const;
    StrategyVariant variant() const;

    // Fully resolved key = value text, keys sorted; what the manifest echoes.
    std::string resolved_text() const;
    std::uint64_t hash() const;  // FNV-1a over resolved_text()

private:
    std::map<std::string, std::string> kv_;
};

// PENSION_DC_THREADS caps workers; explicit > 0 wins over the environment.
int resolve_threads(int explicit_threads);

}  // namespace pensiondc
