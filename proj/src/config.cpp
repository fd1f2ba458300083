#include "wrslab/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

namespace wrs {

const char* experiment_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::clt: return "clt";
    case ExperimentKind::rate: return "rate";
    case ExperimentKind::identity: return "identity";
    case ExperimentKind::pvar_scan: return "pvar-scan";
    case ExperimentKind::tightness: return "tightness";
    case ExperimentKind::stable_cf: return "stable-cf";
  }
  return "?";
}

ExperimentConfig default_config(ExperimentKind kind) {
  ExperimentConfig cfg;
  cfg.experiment = kind;
  switch (kind) {
    case ExperimentKind::clt:
      cfg.m = 1L << 14;
      cfg.replicas = 2000;
      break;
    case ExperimentKind::rate:
      cfg.m = 1L << 14;
      cfg.n_list = {4, 8, 16, 32, 64};
      cfg.replicas = 500;
      break;
    case ExperimentKind::identity:
      cfg.m = 64;
      cfg.replicas = 20;  // seeds
      cfg.gammas = {0.55, 0.6, 0.7};
      cfg.quad_points = 512;
      break;
    case ExperimentKind::pvar_scan:
      cfg.m_list = {1L << 8, 1L << 10, 1L << 12};
      cfg.replicas = 500;
      cfg.p = 3.0;
      break;
    case ExperimentKind::tightness:
      cfg.m_list = {1L << 8, 1L << 10};
      cfg.replicas = 10000;
      cfg.generator = GeneratorSpec::rademacher();
      break;
    case ExperimentKind::stable_cf:
      cfg.m = 1L << 14;
      cfg.replicas = 4000;
      cfg.u_grid = {0.5, 1.0, 2.0};
      cfg.weight = WeightSpec::fbm_sample(0.75);
      break;
  }
  return cfg;
}

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

class KeyValues {
 public:
  explicit KeyValues(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    std::string section;
    long lineno = 0;
    while (std::getline(is, line)) {
      ++lineno;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line = line.substr(0, hash);
      line = trim(line);
      if (line.empty()) continue;
      if (line.front() == '[') {
        if (line.back() != ']') {
          throw ConfigError("line " + std::to_string(lineno),
                            "malformed section header");
        }
        section = trim(line.substr(1, line.size() - 2));
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string::npos) {
        throw ConfigError("line " + std::to_string(lineno),
                          "expected key = value");
      }
      std::string key = trim(line.substr(0, eq));
      if (!section.empty()) key = section + "." + key;
      if (values_.count(key)) {
        throw ConfigError(key, "duplicate key");
      }
      values_[key] = trim(line.substr(eq + 1));
    }
  }

  bool has(const std::string& key) const { return values_.count(key) > 0; }

  std::string take(const std::string& key) {
    auto it = values_.find(key);
    const std::string v = it->second;
    values_.erase(it);
    return v;
  }

  double take_real(const std::string& key) {
    return parse_real(key, take(key));
  }
  long take_int(const std::string& key) { return parse_int(key, take(key)); }
  std::uint64_t take_u64(const std::string& key) {
    const std::string v = take(key);
    try {
      std::size_t pos = 0;
      const std::uint64_t x = std::stoull(v, &pos);
      if (pos != v.size()) throw std::invalid_argument(v);
      return x;
    } catch (const std::exception&) {
      throw ConfigError(key, "expected an unsigned integer, got '" + v + "'");
    }
  }
  bool take_bool(const std::string& key) {
    const std::string v = take(key);
    if (v == "true" || v == "on" || v == "1") return true;
    if (v == "false" || v == "off" || v == "0") return false;
    throw ConfigError(key, "expected a boolean, got '" + v + "'");
  }
  std::vector<double> take_real_list(const std::string& key) {
    std::vector<double> out;
    for (const auto& item : split(take(key))) out.push_back(parse_real(key, item));
    if (out.empty()) throw ConfigError(key, "expected a non-empty list");
    return out;
  }
  std::vector<long> take_int_list(const std::string& key) {
    std::vector<long> out;
    for (const auto& item : split(take(key))) out.push_back(parse_int(key, item));
    if (out.empty()) throw ConfigError(key, "expected a non-empty list");
    return out;
  }

  void reject_leftovers() const {
    if (!values_.empty()) {
      throw ConfigError(values_.begin()->first, "unknown key");
    }
  }

 private:
  static std::vector<std::string> split(const std::string& v) {
    std::vector<std::string> out;
    std::istringstream is(v);
    std::string item;
    while (std::getline(is, item, ',')) {
      item = trim(item);
      if (!item.empty()) out.push_back(item);
    }
    return out;
  }
  static double parse_real(const std::string& key, const std::string& v) {
    try {
      std::size_t pos = 0;
      const double x = std::stod(v, &pos);
      if (pos != v.size()) throw std::invalid_argument(v);
      return x;
    } catch (const std::exception&) {
      throw ConfigError(key, "expected a real number, got '" + v + "'");
    }
  }
  static long parse_int(const std::string& key, const std::string& v) {
    try {
      std::size_t pos = 0;
      const long x = std::stol(v, &pos);
      if (pos != v.size()) throw std::invalid_argument(v);
      return x;
    } catch (const std::exception&) {
      throw ConfigError(key, "expected an integer, got '" + v + "'");
    }
  }

  std::map<std::string, std::string> values_;
};

GeneratorSpec parse_generator(KeyValues& kv) {
  GeneratorSpec gen = GeneratorSpec::rademacher();
  if (!kv.has("generator.kind")) return gen;
  const std::string kind = kv.take("generator.kind");
  if (kind == "rademacher") {
    gen = GeneratorSpec::rademacher();
  } else if (kind == "qv") {
    double hurst = 0.6;
    bool normalize = true;
    if (kv.has("generator.hurst")) hurst = kv.take_real("generator.hurst");
    if (kv.has("generator.normalize")) normalize = kv.take_bool("generator.normalize");
    if (!(hurst > 0.0) || !(hurst < 0.75)) {
      throw ConfigError("generator.hurst",
                        "qv generator requires hurst in (0, 3/4)");
    }
    gen = GeneratorSpec::qv(hurst, normalize);
  } else {
    throw ConfigError("generator.kind",
                      "expected rademacher or qv, got '" + kind + "'");
  }
  return gen;
}

WeightSpec parse_weight(KeyValues& kv) {
  WeightSpec w = WeightSpec::linear();
  if (!kv.has("weight.kind")) return w;
  const std::string kind = kv.take("weight.kind");
  if (kind == "linear") {
    w = WeightSpec::linear();
  } else if (kind == "polynomial") {
    if (!kv.has("weight.coeffs")) {
      throw ConfigError("weight.coeffs", "polynomial weight requires coefficients");
    }
    w = WeightSpec::polynomial(kv.take_real_list("weight.coeffs"));
  } else if (kind == "fbm") {
    double hurst = 0.75;
    if (kv.has("weight.hurst")) hurst = kv.take_real("weight.hurst");
    if (!(hurst > 0.5) || !(hurst < 1.0)) {
      throw ConfigError("weight.hurst", "fbm weight requires hurst in (1/2, 1)");
    }
    w = WeightSpec::fbm_sample(hurst);
  } else {
    throw ConfigError("weight.kind",
                      "expected linear, polynomial or fbm, got '" + kind + "'");
  }
  return w;
}

ExperimentConfig parse_from(KeyValues& kv, ExperimentKind kind) {
  ExperimentConfig cfg = default_config(kind);

  if (kv.has("experiment")) {
    const std::string name = kv.take("experiment");
    if (name != experiment_name(kind)) {
      throw ConfigError("experiment", std::string("config is for '") + name +
                                          "' but the subcommand runs '" +
                                          experiment_name(kind) + "'");
    }
  }

  const bool wants_m_list =
      kind == ExperimentKind::pvar_scan || kind == ExperimentKind::tightness;
  if (!kv.has("replicas")) {
    throw ConfigError("replicas", "required key is missing");
  }
  cfg.replicas = kv.take_int("replicas");
  if (cfg.replicas < 1) throw ConfigError("replicas", "must be positive");

  if (!kv.has("m")) throw ConfigError("m", "required key is missing");
  if (wants_m_list) {
    cfg.m_list = kv.take_int_list("m");
    for (long m : cfg.m_list) {
      if (m < 1) throw ConfigError("m", "grid sizes must be positive");
    }
  } else {
    cfg.m = kv.take_int("m");
    if (cfg.m < 1) throw ConfigError("m", "must be positive");
  }

  if (kv.has("master_seed")) cfg.master_seed = kv.take_u64("master_seed");
  if (kv.has("output_dir")) cfg.output_dir = kv.take("output_dir");
  if (kv.has("threads")) {
    const long t = kv.take_int("threads");
    if (t < 0) throw ConfigError("threads", "must be nonnegative");
    cfg.threads = static_cast<unsigned>(t);
  }

  if (kind == ExperimentKind::rate) {
    if (kv.has("n")) cfg.n_list = kv.take_int_list("n");
    std::vector<long> sorted = cfg.n_list;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != cfg.n_list || sorted.size() < 2 ||
        std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw ConfigError("n", "need at least 2 strictly increasing block counts");
    }
    if (cfg.m < 32 * cfg.n_list.back()) {
      throw ConfigError("n", "rate experiment requires m >= 32 * max(n)");
    }
  }
  if (kind == ExperimentKind::identity) {
    if (kv.has("gamma")) cfg.gammas = kv.take_real_list("gamma");
    for (double g : cfg.gammas) {
      if (!(g > 0.5) || !(g < 1.0)) {
        throw ConfigError("gamma", "every gamma must lie in (1/2, 1)");
      }
    }
    if (kv.has("quad_points")) cfg.quad_points = kv.take_int("quad_points");
    if (cfg.quad_points < 2) throw ConfigError("quad_points", "must be >= 2");
    if (kv.has("refinement")) cfg.refinement = kv.take_int("refinement");
    if (cfg.refinement < 1) throw ConfigError("refinement", "must be positive");
  }
  if (kind == ExperimentKind::pvar_scan) {
    if (kv.has("p") && kv.has("beta")) {
      throw ConfigError("beta", "give either p or beta, not both");
    }
    if (kv.has("p")) cfg.p = kv.take_real("p");
    if (kv.has("beta")) {
      const double beta = kv.take_real("beta");
      if (!(beta > 0.0) || !(beta < 0.5)) {
        throw ConfigError("beta", "variation exponent beta must lie in (0, 1/2)");
      }
      cfg.p = 1.0 / beta;
    }
    if (!(cfg.p > 2.0)) {
      throw ConfigError("p", "the scan requires p > 2");
    }
  }
  if (kind == ExperimentKind::stable_cf) {
    if (kv.has("u")) cfg.u_grid = kv.take_real_list("u");
    if (cfg.replicas < 100) {
      throw ConfigError("replicas", "stable-cf needs at least 100 replicas");
    }
  }

  cfg.generator = parse_generator(kv);
  cfg.weight = parse_weight(kv);
  kv.reject_leftovers();
  return cfg;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text, ExperimentKind kind) {
  KeyValues kv(text);
  return parse_from(kv, kind);
}

ExperimentConfig parse_config_file(const std::string& path, ExperimentKind kind) {
  std::ifstream is(path);
  if (!is) throw ConfigError("config", "cannot open file '" + path + "'");
  std::ostringstream buffer;
  buffer << is.rdbuf();
  return parse_config_text(buffer.str(), kind);
}

}  // namespace wrs
