#include "dnstab/cli/manifest.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <openssl/evp.h>

#include "dnstab/errors.hpp"
#include "dnstab/monotone/presets.hpp"
#include "dnstab/solver/problems.hpp"

namespace dnstab::cli {

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw InvariantViolation("SHA-256 digest failed");
  }
  std::ostringstream os;
  os << std::hex << std::setfill('0');
  for (unsigned int i = 0; i < length; ++i) os << std::setw(2) << static_cast<int>(digest[i]);
  return os.str();
}

std::vector<std::string> Manifest::header_lines() const {
  return {"dnstab " + body.value("command", std::string{}),
          "manifest sha256 " + hash,
          "config sha256 " + body.value("config_sha256", std::string{}),
          "seed " + std::to_string(body.value("seed", 0ULL))};
}

Manifest build_manifest(const ExperimentConfig& config, std::string_view command,
                        nlohmann::json plan) {
  const auto& s = config.solver;
  nlohmann::json body;
  body["command"] = std::string(command);
  body["version"] = "0.3.0";
  body["config_sha256"] = sha256_hex(config.text);
  body["config_path"] = config.source_path.filename().string();
  body["seed"] = config.seed;
  body["mesh_cells"] = config.cells;
  body["time_step"] = config.tau;
  body["solver"] = {{"delta_reg", s.delta_reg},
                    {"auto_delta", s.auto_delta},
                    {"auto_delta_value", solver::SolverConfig::kAutoDelta},
                    {"newton_tol", s.newton_tol},
                    {"max_newton", s.max_newton},
                    {"damping", s.damping},
                    {"max_halvings", s.max_halvings},
                    {"picard_iterations", s.picard_iterations},
                    {"initial_guess_shift", s.initial_guess_shift},
                    {"jacobian_floor", s.jacobian_floor}};
  body["presets"] = {{"pairs", monotone::presets::pair_names()},
                     {"problems", solver::problems::problem_names()}};
  body["plan"] = std::move(plan);

  Manifest m;
  m.hash = sha256_hex(body.dump());
  m.body = std::move(body);
  return m;
}

void write_manifest(const std::filesystem::path& dir, const Manifest& manifest) {
  nlohmann::json doc = manifest.body;
  doc["manifest_sha256"] = manifest.hash;
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  std::ostringstream stamp;
  stamp << std::put_time(&utc, "%Y-%m-%dT%H:%M:%SZ");
  doc["wall_clock"] = stamp.str();
  std::ofstream out(dir / "manifest.json");
  out << doc.dump(2) << '\n';
  if (!out) throw InvalidArgument("cannot write " + (dir / "manifest.json").string());
}

}  // namespace dnstab::cli
