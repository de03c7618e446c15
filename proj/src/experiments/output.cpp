#include "boltzgrad/experiments/output.hpp"

#include <fmt/format.h>
#include <openssl/evp.h>
#include <spdlog/spdlog.h>

#include <filesystem>
#include <fstream>

#include "boltzgrad/error.hpp"

namespace boltzgrad::experiments {

using nlohmann::json;

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
  std::string out;
  for (unsigned int k = 0; k < len; ++k) out += fmt::format("{:02x}", digest[k]);
  return out;
}

RunOutput::RunOutput(std::string dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
}

void RunOutput::write(const std::string& name, const std::string& content) {
  std::ofstream out(std::filesystem::path(dir_) / name, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidParameters, fmt::format("cannot write {}/{}", dir_, name));
  out << content;
  files_.push_back({{"name", name}, {"sha256", sha256_hex(content)}, {"bytes", content.size()}});
}

void RunOutput::assert_that(const std::string& name, bool pass, json detail) {
  spdlog::info("[{}] {}", pass ? "PASS" : "FAIL", name);
  assertions_.push_back({name, pass, std::move(detail)});
}

void RunOutput::note(const std::string& key, json value) { notes_[key] = std::move(value); }

void RunOutput::warn(const std::string& message) {
  spdlog::warn("{}", message);
  warnings_.push_back(message);
}

bool RunOutput::all_passed() const {
  for (const auto& a : assertions_)
    if (!a.pass) return false;
  return true;
}

json RunOutput::summary(const ExperimentConfig& config) const {
  json list = json::array();
  for (const auto& a : assertions_)
    list.push_back({{"name", a.name}, {"pass", a.pass}, {"detail", a.detail}});
  return {{"scenario", config.scenario}, {"seed", config.seed}, {"pass", all_passed()},
          {"assertions", list},          {"notes", notes_},     {"warnings", warnings_}};
}

json RunOutput::manifest(const ExperimentConfig& config, double elapsed_seconds,
                         const std::string& started_utc) const {
  return {{"config_sha256", sha256_hex(config.to_json().dump())},
          {"code_version", BOLTZGRAD_VERSION},
          {"scenario", config.scenario},
          {"seed", config.seed},
          {"files", files_},
          {"started_utc", started_utc},
          {"wall_clock_seconds", elapsed_seconds}};
}

void RunOutput::finish(const ExperimentConfig& config, double elapsed_seconds,
                       const std::string& started_utc) {
  write("summary.json", summary(config).dump(2) + "\n");
  std::ofstream out(std::filesystem::path(dir_) / "manifest.json");
  out << manifest(config, elapsed_seconds, started_utc).dump(2) << "\n";
}

}  // namespace boltzgrad::experiments
