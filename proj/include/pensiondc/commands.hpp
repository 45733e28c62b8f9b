#pragma once

#include <string>
#include <vector>

#include "pensiondc/config.hpp"
#include "pensiondc/io.hpp"
#include "pensiondc/verify.hpp"

namespace pensiondc {

// Library layer behind the CLI subcommands; the CLI only parses flags and
// forwards here. All file writes happen on the calling thread after the
// parallel reduction.

// Per-alpha, per-variant strategy CSVs (t, pi1, pi2, pi3, safe_weight, phi,
// varphi) plus manifest. Returns the manifest path.
std::string run_strategies(const Config& cfg, const std::string& out_dir,
                           const std::vector<double>& alphas);

// Terminal-utility estimate and fan-chart CSV (t, mean, q05, q95) plus
// manifest.
std::string run_simulate(const Config& cfg, const std::string& out_dir);

struct VerifyResult {
    std::vector<CheckRow> rows;
    int exit_code = 0;  // 0 iff all asserted (non-informational) rows pass
};

// Full verification battery; writes report CSV and JSON summary when out_dir
// is non-empty.
VerifyResult run_verify(const Config& cfg, const std::string& out_dir);

// Candidate-vs-rivals ranking CSV under common random numbers.
std::string run_compare(const Config& cfg, const std::string& out_dir);

}  // namespace pensiondc
