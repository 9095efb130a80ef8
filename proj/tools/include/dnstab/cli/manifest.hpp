#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "dnstab/cli/config.hpp"

namespace dnstab::cli {

std::string sha256_hex(std::string_view data);

/// Everything that determines a run's numbers. `hash` covers `body` only, so
/// reruns with the same inputs produce the same hash.
struct Manifest {
  nlohmann::json body;
  std::string hash;

  /// Comment lines (without the '#') for CSV and dump headers.
  std::vector<std::string> header_lines() const;
};

Manifest build_manifest(const ExperimentConfig& config, std::string_view command,
                        nlohmann::json plan = nlohmann::json::object());

/// manifest.json in `dir`: the body, its hash and the wall-clock time.
void write_manifest(const std::filesystem::path& dir, const Manifest& manifest);

}  // namespace dnstab::cli
