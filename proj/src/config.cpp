#include "kinklab/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "kinklab/error.hpp"

namespace kinklab {

const std::vector<ConfigKey>& config_schema() {
  static const std::vector<ConfigKey> schema = {
      {"experiment", ValueKind::Text, "acceptance criterion or command the file drives"},
      {"potential", ValueKind::Text, "phi4, sine-gordon or custom"},
      {"potential.coefficients", ValueKind::RealList, "c_0, c_1, ... of sum c_j phi^(2j)"},
      {"potential.cosines", ValueKind::CosineList, "A:w pairs of A cos(w phi)"},
      {"n", ValueKind::Integer, "number of kinks"},
      {"n.max", ValueKind::Integer, "largest n of a sweep"},
      {"positions", ValueKind::RealList, "kink centres"},
      {"gaps", ValueKind::RealList, "separations of a sweep"},
      {"L", ValueKind::Real, "minimal initial separation"},
      {"L.values", ValueKind::RealList, "separations of a sweep"},
      {"L0", ValueKind::Real, "lower admissible bound on L"},
      {"T", ValueKind::Real, "backward shooting time"},
      {"T.values", ValueKind::RealList, "shooting times of a sweep"},
      {"dx", ValueKind::Real, "grid spacing"},
      {"dx.values", ValueKind::RealList, "grid spacings of a refinement study"},
      {"dt", ValueKind::Real, "time step"},
      {"stride", ValueKind::Integer, "steps between recorded samples"},
      {"t_start", ValueKind::Real, "initial time"},
      {"t_end", ValueKind::Real, "final time"},
      {"time_offset", ValueKind::Real, "added to run times to give the reported clock"},
      {"window", ValueKind::RealList, "lo,hi of the reported time window"},
      {"velocity", ValueKind::Real, "boost velocity"},
      {"tol", ValueKind::Real, "integrator or search tolerance"},
      {"seed", ValueKind::Integer, "seed of any random perturbation"},
      {"track", ValueKind::Bool, "record the modulation series"},
      {"backward", ValueKind::Bool, "run the flow backward in time"},
      {"output", ValueKind::Text, "output directory"},
  };
  return schema;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void config_error(const std::string& msg) {
  throw KinkError(ErrorCode::ConfigError, msg);
}

std::optional<double> to_real(const std::string& s) {
  const std::string t = trim(s);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) return std::nullopt;
  return v;
}

std::optional<long> to_integer(const std::string& s) {
  long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<bool> to_bool(const std::string& s) {
  if (s == "true" || s == "yes" || s == "1") return true;
  if (s == "false" || s == "no" || s == "0") return false;
  return std::nullopt;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in(s);
  while (std::getline(in, part, sep)) parts.push_back(trim(part));
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

std::vector<CosineTerm> parse_cosines(const std::string& s) {
  std::vector<CosineTerm> terms;
  for (const auto& item : split(s, ',')) {
    const auto pair = split(item, ':');
    const auto a = pair.size() == 2 ? to_real(pair[0]) : std::nullopt;
    const auto w = pair.size() == 2 ? to_real(pair[1]) : std::nullopt;
    if (!a || !w) config_error("cosine term '" + item + "' is not of the form A:w");
    terms.push_back({*a, *w});
  }
  return terms;
}

const ConfigKey* find_key(const std::string& name) {
  const auto& schema = config_schema();
  const auto it = std::find_if(schema.begin(), schema.end(),
                               [&](const ConfigKey& k) { return k.name == name; });
  return it == schema.end() ? nullptr : &*it;
}

void check_value(const ConfigKey& key, const std::string& value) {
  bool ok = true;
  switch (key.kind) {
    case ValueKind::Real: ok = to_real(value).has_value(); break;
    case ValueKind::Integer: ok = to_integer(value).has_value(); break;
    case ValueKind::Bool: ok = to_bool(value).has_value(); break;
    case ValueKind::Text: ok = !value.empty(); break;
    case ValueKind::RealList: parse_real_list(value); break;
    case ValueKind::CosineList: parse_cosines(value); break;
  }
  if (!ok) config_error("bad value '" + value + "' for key '" + key.name + "'");
}

}  // namespace

std::vector<double> parse_real_list(const std::string& s) {
  std::vector<double> out;
  if (trim(s).empty()) config_error("empty list");
  for (const auto& item : split(s, ',')) {
    const auto v = to_real(item);
    if (!v) config_error("'" + item + "' is not a number");
    out.push_back(*v);
  }
  return out;
}

void ExperimentConfig::set(const std::string& key, const std::string& value) {
  const ConfigKey* k = find_key(key);
  if (!k) config_error("unknown key '" + key + "'");
  const std::string v = trim(value);
  check_value(*k, v);
  values_[key] = v;
}

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
  ExperimentConfig c;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      config_error("line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    if (c.has(key)) config_error("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    try {
      c.set(key, line.substr(eq + 1));
    } catch (const KinkError& e) {
      config_error("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) config_error("cannot read " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse(text.str());
}

std::string ExperimentConfig::serialize() const {
  std::string out;
  for (const auto& key : config_schema()) {
    if (const auto it = values_.find(key.name); it != values_.end()) {
      out += key.name + " = " + it->second + "\n";
    }
  }
  return out;
}

const std::string& ExperimentConfig::raw(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) config_error("missing key '" + key + "'");
  return it->second;
}

double ExperimentConfig::real(const std::string& key) const { return *to_real(raw(key)); }

double ExperimentConfig::real(const std::string& key, double fallback) const {
  return has(key) ? real(key) : fallback;
}

long ExperimentConfig::integer(const std::string& key) const { return *to_integer(raw(key)); }

long ExperimentConfig::integer(const std::string& key, long fallback) const {
  return has(key) ? integer(key) : fallback;
}

bool ExperimentConfig::flag(const std::string& key, bool fallback) const {
  return has(key) ? *to_bool(raw(key)) : fallback;
}

std::string ExperimentConfig::text(const std::string& key) const { return raw(key); }

std::string ExperimentConfig::text(const std::string& key, const std::string& fallback) const {
  return has(key) ? raw(key) : fallback;
}

std::vector<double> ExperimentConfig::reals(const std::string& key) const {
  return parse_real_list(raw(key));
}

std::vector<CosineTerm> ExperimentConfig::cosines(const std::string& key) const {
  return parse_cosines(raw(key));
}

PotentialModel potential_from_config(const ExperimentConfig& config) {
  const std::string name = config.text("potential", "phi4");
  if (name != "custom") {
    if (config.has("potential.coefficients") || config.has("potential.cosines")) {
      config_error("coefficient tables are only read for potential = custom");
    }
    return make_potential(name);
  }
  if (!config.has("potential.coefficients") && !config.has("potential.cosines")) {
    config_error("custom potential needs potential.coefficients or potential.cosines");
  }
  std::vector<double> coeffs;
  std::vector<CosineTerm> cosines;
  if (config.has("potential.coefficients")) coeffs = config.reals("potential.coefficients");
  if (config.has("potential.cosines")) cosines = config.cosines("potential.cosines");
  return PotentialModel("custom", std::move(coeffs), std::move(cosines));
}

Positions positions_from_config(const ExperimentConfig& config) {
  auto a = config.reals("positions");
  std::sort(a.begin(), a.end());
  return Positions(std::move(a));
}

}  // namespace kinklab
