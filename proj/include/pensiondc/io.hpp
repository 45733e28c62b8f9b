#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace pensiondc {

// CSV with '.' decimal, ',' separator, header row, 17 significant digits
// (lossless double round-trip).
class CsvWriter {
public:
    explicit CsvWriter(const std::string& path);
    ~CsvWriter();

    void header(std::span<const std::string> names);
    void row(std::span<const double> values);

    static std::string format(double v);

private:
    struct Impl;
    Impl* impl_;
};

struct CheckSummary {
    std::string name;
    double value;
    double tolerance;
    bool pass;
    bool informational;
};

struct RunManifest {
    std::uint64_t config_hash = 0;
    std::uint64_t seed = 0;
    double T = 0.0;
    int n_steps = 0;
    std::int64_t n_paths = 0;
    std::string variant;
    std::vector<std::string> outputs;
    std::vector<CheckSummary> checks;
    double duration_ms = 0.0;
};

void write_manifest(const RunManifest& m, const std::string& path);

// Manifest text with the duration field removed, for identity comparisons.
std::string manifest_identity(const std::string& manifest_json_text);

void ensure_directory(const std::string& dir);

}  // namespace pensiondc
