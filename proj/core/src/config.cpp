#include "chaomarket/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "chaomarket/error.hpp"
#include "chaomarket/io.hpp"

namespace chaomarket {

std::string_view to_string(SettingSource source) noexcept {
  switch (source) {
    case SettingSource::default_value:
      return "default";
    case SettingSource::file:
      return "file";
    case SettingSource::override_value:
      return "override";
  }
  return "unknown";
}

const std::vector<KeyInfo>& known_keys() {
  static const std::vector<KeyInfo> keys = {
      {"n_agents", "500", "number of agents N"},
      {"initial_money", "1000", "money per agent at start (m0)"},
      {"total_transactions", "", "transactions T; default 2 * n_agents^2"},
      {"lambda_a", "1.032", "bimap parameter for x (loser coordinate)"},
      {"lambda_b", "1.032", "bimap parameter for y (winner coordinate)"},
      {"unchecked_params", "false", "allow lambdas outside [1.032, 1.0843]"},
      {"bimap_x0", "0.5", "bimap initial x"},
      {"bimap_y0", "0.3", "bimap initial y"},
      {"burn_in", "1000", "bimap iterations discarded before use"},
      {"rng_seed", "1", "seed for the trade-fraction generator"},
      {"history_sample_stride", "", "record traced money every k transactions; default T / 1000"},
      {"history_agents", "", "comma-separated agent indices to trace"},
      {"record_pair_matrix", "", "keep (j, i) selection counts; default n_agents <= 2000"},
      {"exclude_passive", "true", "drop never-selected agents from distribution analyses"},
      {"exponential_fraction", "0.9", "exponential fit covers this lowest fraction of agents"},
      {"tail_fraction", "0.1", "power-law fit covers this top fraction of agents"},
      {"samples", "", "trajectory length; default 2000 (attractor) or 4096 (spectrum)"},
      {"lambda_b_values", "", "sweep: comma-separated lambda_b list"},
      {"lambda_b_start", "", "sweep: first lambda_b of an arithmetic range"},
      {"lambda_b_step", "", "sweep: range increment"},
      {"lambda_b_count", "", "sweep: number of range values"},
      {"output_directory", "out", "artifact directory"},
      {"parallel_runs", "1", "sweep: concurrent simulations"},
  };
  return keys;
}

bool is_known_key(std::string_view key) noexcept {
  const auto& keys = known_keys();
  return std::any_of(keys.begin(), keys.end(), [&](const KeyInfo& k) { return k.key == key; });
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void fail_value(std::string_view key, std::string_view value, std::string_view expected) {
  std::ostringstream msg;
  msg << "config key '" << key << "': cannot parse '" << value << "' as " << expected;
  throw ValidationError(msg.str());
}

double parse_real(std::string_view key, std::string_view text) {
  text = trim(text);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) fail_value(key, text, "a real number");
  return v;
}

std::uint64_t parse_count(std::string_view key, std::string_view text) {
  text = trim(text);
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
    fail_value(key, text, "a non-negative integer");
  return v;
}

bool parse_flag(std::string_view key, std::string_view text) {
  text = trim(text);
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  fail_value(key, text, "a boolean");
}

std::vector<std::string_view> split_list(std::string_view text) {
  std::vector<std::string_view> out;
  text = trim(text);
  if (text.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    out.push_back(trim(text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

void require_known(std::string_view key, std::string_view origin, std::size_t line) {
  if (is_known_key(key)) return;
  std::ostringstream msg;
  msg << origin;
  if (line > 0) msg << ":" << line;
  msg << ": unknown config key '" << key << "'";
  throw ValidationError(msg.str());
}

}  // namespace

KeyValueDocument KeyValueDocument::parse(std::string_view text, std::string_view origin) {
  KeyValueDocument doc;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      std::ostringstream msg;
      msg << origin << ":" << line_no << ": expected 'key = value'";
      throw ValidationError(msg.str());
    }
    const std::string_view key = trim(line.substr(0, eq));
    require_known(key, origin, line_no);
    if (doc.entries_.count(key) != 0) {
      std::ostringstream msg;
      msg << origin << ":" << line_no << ": duplicate config key '" << key << "'";
      throw ValidationError(msg.str());
    }
    doc.entries_.emplace(std::string(key), Setting{std::string(trim(line.substr(eq + 1))), SettingSource::file, line_no});
  }
  return doc;
}

KeyValueDocument KeyValueDocument::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path.string());
}

void KeyValueDocument::apply_override(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos)
    throw ValidationError("override '" + std::string(assignment) + "' is not of the form key=value");
  set(trim(assignment.substr(0, eq)), std::string(trim(assignment.substr(eq + 1))), SettingSource::override_value);
}

void KeyValueDocument::set(std::string_view key, std::string value, SettingSource source) {
  require_known(key, "override", 0);
  entries_.insert_or_assign(std::string(key), Setting{std::move(value), source, 0});
}

const Setting* KeyValueDocument::find(std::string_view key) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? nullptr : &it->second;
}

std::string KeyValueDocument::serialize() const {
  std::string out;
  for (const auto& [key, setting] : entries_) {
    out += key;
    out += " = ";
    out += setting.value;
    out += '\n';
  }
  return out;
}

RunSettings resolve_settings(const KeyValueDocument& doc) {
  auto raw = [&](std::string_view key) -> std::optional<std::string_view> {
    if (const Setting* s = doc.find(key)) return std::string_view(s->value);
    return std::nullopt;
  };
  auto real_or = [&](std::string_view key, double fallback) {
    auto v = raw(key);
    return v ? parse_real(key, *v) : fallback;
  };
  auto count_or = [&](std::string_view key, std::uint64_t fallback) {
    auto v = raw(key);
    return v ? parse_count(key, *v) : fallback;
  };
  auto optional_count = [&](std::string_view key) -> std::optional<std::uint64_t> {
    auto v = raw(key);
    if (!v || trim(*v).empty()) return std::nullopt;
    return parse_count(key, *v);
  };

  RunSettings s;
  MarketConfig& m = s.market;
  m.n_agents = count_or("n_agents", m.n_agents);
  m.initial_money = real_or("initial_money", m.initial_money);
  m.total_transactions = optional_count("total_transactions");
  m.burn_in = count_or("burn_in", m.burn_in);
  m.rng_seed = count_or("rng_seed", m.rng_seed);
  m.bimap_initial = {real_or("bimap_x0", 0.5), real_or("bimap_y0", 0.3)};
  m.history_sample_stride = optional_count("history_sample_stride");
  if (auto v = raw("history_agents")) {
    for (auto item : split_list(*v)) m.history_agents.push_back(parse_count("history_agents", item));
  }
  if (auto v = raw("record_pair_matrix"); v && !trim(*v).empty())
    m.record_pair_matrix = parse_flag("record_pair_matrix", *v);

  s.unchecked_params = raw("unchecked_params") ? parse_flag("unchecked_params", *raw("unchecked_params")) : false;
  const double la = real_or("lambda_a", 1.032);
  const double lb = real_or("lambda_b", 1.032);
  m.bimap_params = s.unchecked_params ? BimapParams::unchecked(la, lb) : BimapParams(la, lb);

  if (auto v = raw("exclude_passive")) s.analysis.exclude_passive = parse_flag("exclude_passive", *v);
  s.analysis.exponential_fraction = real_or("exponential_fraction", s.analysis.exponential_fraction);
  s.analysis.tail_fraction = real_or("tail_fraction", s.analysis.tail_fraction);
  if (!(s.analysis.exponential_fraction > 0.0 && s.analysis.exponential_fraction <= 1.0))
    throw ValidationError("exponential_fraction must lie in (0, 1]");
  if (!(s.analysis.tail_fraction > 0.0 && s.analysis.tail_fraction < 1.0))
    throw ValidationError("tail_fraction must lie in (0, 1)");

  if (auto v = optional_count("samples")) s.samples = static_cast<std::size_t>(*v);
  if (auto v = raw("output_directory")) s.output_directory = std::string(*v);
  s.parallel_runs = count_or("parallel_runs", 1);
  if (s.parallel_runs < 1) throw ValidationError("parallel_runs must be at least 1");

  const bool has_list = raw("lambda_b_values").has_value();
  const bool has_range = raw("lambda_b_start") || raw("lambda_b_step") || raw("lambda_b_count");
  if (has_list && has_range) throw ValidationError("give either lambda_b_values or lambda_b_start/step/count, not both");
  if (has_list) {
    std::vector<double> values;
    for (auto item : split_list(*raw("lambda_b_values"))) values.push_back(parse_real("lambda_b_values", item));
    s.lambda_b_schedule = std::move(values);
  } else if (has_range) {
    if (!raw("lambda_b_start") || !raw("lambda_b_step") || !raw("lambda_b_count"))
      throw ValidationError("a lambda_b range needs lambda_b_start, lambda_b_step and lambda_b_count");
    s.lambda_b_schedule = LambdaRange{parse_real("lambda_b_start", *raw("lambda_b_start")),
                                      parse_real("lambda_b_step", *raw("lambda_b_step")),
                                      static_cast<std::size_t>(parse_count("lambda_b_count", *raw("lambda_b_count")))};
  }

  m.validate();

  for (const KeyInfo& info : known_keys()) {
    if (const Setting* set = doc.find(info.key)) {
      s.provenance.emplace_back(std::string(info.key), *set);
      continue;
    }
    std::string shown(info.default_value);
    if (info.key == "total_transactions") {
      shown = std::to_string(m.resolved_transactions());
    } else if (info.key == "history_sample_stride") {
      shown = std::to_string(m.resolved_history_stride());
    } else if (info.key == "record_pair_matrix") {
      shown = m.resolved_record_pair_matrix() ? "true" : "false";
    }
    s.provenance.emplace_back(std::string(info.key), Setting{shown, SettingSource::default_value, 0});
  }
  return s;
}

KeyValueDocument to_document(const MarketConfig& config, const AnalysisOptions& analysis) {
  KeyValueDocument doc;
  auto put = [&](std::string_view key, std::string value) { doc.set(key, std::move(value), SettingSource::file); };
  put("n_agents", std::to_string(config.n_agents));
  put("initial_money", format_real(config.initial_money));
  put("total_transactions", std::to_string(config.resolved_transactions()));
  put("lambda_a", format_real(config.bimap_params.lambda_a()));
  put("lambda_b", format_real(config.bimap_params.lambda_b()));
  put("unchecked_params", config.bimap_params.is_checked() ? "false" : "true");
  put("bimap_x0", format_real(config.bimap_initial.x));
  put("bimap_y0", format_real(config.bimap_initial.y));
  put("burn_in", std::to_string(config.burn_in));
  put("rng_seed", std::to_string(config.rng_seed));
  put("history_sample_stride", std::to_string(config.resolved_history_stride()));
  std::string agents;
  for (std::size_t a : config.history_agents) {
    if (!agents.empty()) agents += ", ";
    agents += std::to_string(a);
  }
  put("history_agents", agents);
  put("record_pair_matrix", config.resolved_record_pair_matrix() ? "true" : "false");
  put("exclude_passive", analysis.exclude_passive ? "true" : "false");
  put("exponential_fraction", format_real(analysis.exponential_fraction));
  put("tail_fraction", format_real(analysis.tail_fraction));
  return doc;
}

SweepSpec make_sweep_spec(const RunSettings& settings) {
  if (!settings.lambda_b_schedule)
    throw ValidationError("sweep needs lambda_b_values or lambda_b_start/lambda_b_step/lambda_b_count");
  SweepSpec spec;
  spec.base_config = settings.market;
  spec.lambda_b_values = *settings.lambda_b_schedule;
  spec.output_directory = settings.output_directory;
  spec.parallel_runs = settings.parallel_runs;
  spec.analysis = settings.analysis;
  return spec;
}

}  // namespace chaomarket
