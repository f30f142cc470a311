#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chaomarket/experiment.hpp"
#include "chaomarket/market.hpp"
#include "chaomarket/statistics.hpp"

namespace chaomarket {

// Flat key-value configuration documents:
//
//   # comment
//   n_agents = 500
//   lambda_b_values = 1.032, 1.033162, 1.08429
//
// One `key = value` per line; blank lines and `#` comments are ignored.
// Keys outside `known_keys()` are rejected with the offending line number.

enum class SettingSource { default_value, file, override_value };

std::string_view to_string(SettingSource source) noexcept;

struct Setting {
  std::string value;
  SettingSource source = SettingSource::file;
  std::size_t line = 0;  // 0 when not from a file
};

struct KeyInfo {
  std::string_view key;
  std::string_view default_value;  // empty: derived from other keys or unset
  std::string_view description;
};

const std::vector<KeyInfo>& known_keys();
bool is_known_key(std::string_view key) noexcept;

class KeyValueDocument {
 public:
  static KeyValueDocument parse(std::string_view text, std::string_view origin = "<config>");
  static KeyValueDocument load(const std::filesystem::path& path);

  /// `key=value`; unknown keys throw ValidationError.
  void apply_override(std::string_view assignment);
  void set(std::string_view key, std::string value, SettingSource source = SettingSource::override_value);
  void erase(std::string_view key) { entries_.erase(std::string(key)); }

  const Setting* find(std::string_view key) const;
  const std::map<std::string, Setting, std::less<>>& entries() const noexcept { return entries_; }

  /// Sorted `key = value` lines; parse(serialize()) reproduces the values.
  std::string serialize() const;

 private:
  std::map<std::string, Setting, std::less<>> entries_;
};

/// Every setting a command may need, fully typed and validated.
struct RunSettings {
  MarketConfig market;
  AnalysisOptions analysis;
  std::optional<std::size_t> samples;  // attractor / spectrum; per-command default
  std::filesystem::path output_directory = "out";
  std::optional<LambdaSchedule> lambda_b_schedule;
  std::size_t parallel_runs = 1;
  bool unchecked_params = false;

  /// Each known key with its effective value and where it came from. Keys
  /// whose default is derived are shown with the derived value.
  std::vector<std::pair<std::string, Setting>> provenance;
};

/// Throws ValidationError on malformed values or inconsistent settings.
RunSettings resolve_settings(const KeyValueDocument& document);

/// Document reproducing `config` and `analysis` exactly when resolved.
KeyValueDocument to_document(const MarketConfig& config, const AnalysisOptions& analysis);

/// Builds the sweep from resolved settings; throws if no lambda_b schedule.
SweepSpec make_sweep_spec(const RunSettings& settings);

}  // namespace chaomarket
