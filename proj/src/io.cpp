#include "pensiondc/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace pensiondc {

struct CsvWriter::Impl {
    std::ofstream out;
};

CsvWriter::CsvWriter(const std::string& path) : impl_(new Impl) {
    impl_->out.open(path, std::ios::binary | std::ios::trunc);
    if (!impl_->out) {
        delete impl_;
        throw std::runtime_error("cannot open for writing: " + path);
    }
}

CsvWriter::~CsvWriter() { delete impl_; }

std::string CsvWriter::format(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void CsvWriter::header(std::span<const std::string> names) {
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i) impl_->out << ',';
        impl_->out << names[i];
    }
    impl_->out << '\n';
}

void CsvWriter::row(std::span<const double> values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) impl_->out << ',';
        impl_->out << format(values[i]);
    }
    impl_->out << '\n';
}

void write_manifest(const RunManifest& m, const std::string& path) {
    nlohmann::ordered_json j;
    j["config_hash"] = m.config_hash;
    j["seed"] = m.seed;
    j["grid"] = {{"T", m.T}, {"n_steps", m.n_steps}};
    j["n_paths"] = m.n_paths;
    j["variant"] = m.variant;
    j["outputs"] = m.outputs;
    nlohmann::ordered_json checks = nlohmann::ordered_json::array();
    for (const auto& c : m.checks) {
        checks.push_back({{"name", c.name},
                          {"value", c.value},
                          {"tolerance", c.tolerance},
                          {"pass", c.pass},
                          {"informational", c.informational}});
    }
    j["checks"] = checks;
    j["duration_ms"] = m.duration_ms;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << j.dump(2) << '\n';
}

std::string manifest_identity(const std::string& manifest_json_text) {
    auto j = nlohmann::ordered_json::parse(manifest_json_text);
    j.erase("duration_ms");
    return j.dump(2);
}

void ensure_directory(const std::string& dir) {
    std::filesystem::create_directories(dir);
}

}  // namespace pensiondc
