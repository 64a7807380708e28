#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace fracdisp::report {

using nlohmann::json;

struct RunOptions {
  std::filesystem::path out_dir = ".";
  int threads = 0;       // 0 = FRACDISP_THREADS env or 1
  double tol = 0.0;      // 0 = command default
};

struct Manifest {
  json config_echo;
  std::string command;
  std::string version;
  std::vector<std::pair<std::string, std::string>> checks;  // name -> PASS/FAIL/FLAGGED
  std::vector<std::string> payload_paths;
  double wall_seconds = 0.0;
  std::string determinism_hash;

  bool all_pass() const;
  json to_json() const;
};

/// Validates `config` against the per-command schema (unknown keys rejected),
/// runs the computation, writes CSV payloads and manifest.json atomically
/// under opts.out_dir. Throws ConfigError on schema violations.
Manifest cmd_phase_report(const json& config, const RunOptions& opts);
Manifest cmd_hn_kernel(const json& config, const RunOptions& opts);
Manifest cmd_hn_verify(const json& config, const RunOptions& opts);
Manifest cmd_tree_verify(const json& config, const RunOptions& opts);
Manifest cmd_nls_run(const json& config, const RunOptions& opts);
Manifest cmd_regions(const json& config, const RunOptions& opts);

/// Dispatch by command name; returns the process exit code
/// (0 all PASS, 2 FAIL present, 3 config error).
int run_command(const std::string& command, const json& config,
                const RunOptions& opts);

/// FNV-1a 64-bit over the given bytes (the determinism hash of payloads).
std::string fnv1a_hex(const std::string& bytes);

/// Atomic write: temp file in the same directory, then rename.
void write_file_atomic(const std::filesystem::path& path,
                       const std::string& content);

inline constexpr const char* kVersion = "0.1.0";

}  // namespace fracdisp::report
