#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace fz::runner {

struct Options {
    std::optional<std::uint64_t> seed_override;
    int threads = 0; // <= 0: FREEZENET_THREADS env var, else 1
    bool quiet = false;
};

// CLI verb implementations shared by the C API.
void generate(const std::string& config_path, const std::string& out_dir, const Options& opts);
void preprocess(const std::string& config_path, const std::string& out_dir, const Options& opts);
void train(const std::string& config_path, const std::string& out_dir, const Options& opts);
void sweep(const std::string& config_path, const std::string& out_dir, const Options& opts);
void compare(const std::string& config_path, const std::string& out_dir, const Options& opts);
void report(const std::string& run_dir, const Options& opts);

} // namespace fz::runner
