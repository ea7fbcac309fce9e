#include "lsieve/harness/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "lsieve/sieve.hpp"
#include "lsieve/spacing.hpp"

namespace lsieve::harness {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError(key, "not a number: \"" + v + "\"");
  }
}

std::int64_t parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const long long d = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError(key, "not an integer: \"" + v + "\"");
  }
}

std::uint64_t parse_uint(const std::string& key, const std::string& v) {
  if (!v.empty() && v[0] == '-') throw ConfigError(key, "must be non-negative");
  try {
    std::size_t used = 0;
    const unsigned long long d = std::stoull(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError(key, "not a non-negative integer: \"" + v + "\"");
  }
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(key, "not a boolean: \"" + v + "\"");
}

std::string fmt_double(double d) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", d);
  return buf;
}

template <class T, class F>
std::string join(const std::vector<T>& v, F&& f) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += f(v[i]);
  }
  return out;
}

template <class T>
void nonempty(const std::vector<T>& v, const char* key) {
  if (v.empty()) throw ConfigError(key, "list must be nonempty");
}

bool member(const std::string& s, std::initializer_list<const char*> set) {
  for (const char* x : set)
    if (s == x) return true;
  return false;
}

template <class T>
T get(const nlohmann::json& j, const char* key, const T& fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(key, e.what());
  }
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{
      "family", "k",        "Q",    "N",    "seeds",      "coeffs",         "eps",     "C",
      "tol",    "associates", "range", "Q0",  "matrices",   "rows",           "cols",    "max_points",
      "max_operations", "threads", "timing", "out", "format"};
  return keys;
}

void ExperimentConfig::validate() const {
  nonempty(family, "family");
  for (const auto& f : family)
    if (!member(f, {"all", "squares", "power", "square_norm"})) throw ConfigError("family", "unknown family \"" + f + "\"");
  if (k < 1 || k > 8) throw ConfigError("k", "must lie in [1, 8]");
  nonempty(Q, "Q");
  for (double q : Q)
    if (!(q >= 1.0) || !std::isfinite(q)) throw ConfigError("Q", "values must be finite and >= 1");
  nonempty(N, "N");
  for (double n : N) {
    if (!(n >= 1.0) || !std::isfinite(n)) throw ConfigError("N", "values must be finite and >= 1");
    try {
      (void)ratio_from_double(n);
    } catch (const std::exception&) {
      throw ConfigError("N", "values must be integers or short binary fractions");
    }
  }
  nonempty(seeds, "seeds");
  nonempty(coeffs, "coeffs");
  for (const auto& c : coeffs)
    if (!member(c, {"ones", "random", "extremal"})) throw ConfigError("coeffs", "unknown coefficient kind \"" + c + "\"");
  if (!(eps >= 0.0) || !std::isfinite(eps)) throw ConfigError("eps", "must be finite and >= 0");
  if (!(C > 0.0) || !std::isfinite(C)) throw ConfigError("C", "must be positive");
  if (tol && !(*tol > 0.0)) throw ConfigError("tol", "must be positive");
  if (!member(associates, {"literal", "units"})) throw ConfigError("associates", "expected literal or units");
  if (!member(range, {"full", "dyadic"})) throw ConfigError("range", "expected full or dyadic");
  nonempty(Q0, "Q0");
  for (double q : Q0)
    if (!(q >= 1.0) || !std::isfinite(q)) throw ConfigError("Q0", "values must be finite and >= 1");
  if (matrices < 1) throw ConfigError("matrices", "must be >= 1");
  if (rows < 1) throw ConfigError("rows", "must be >= 1");
  if (cols < 1) throw ConfigError("cols", "must be >= 1");
  if (threads < 0) throw ConfigError("threads", "must be >= 0");
  if (!member(format, {"csv", "json"})) throw ConfigError("format", "expected csv or json");
}

nlohmann::ordered_json ExperimentConfig::to_json() const {
  nlohmann::ordered_json j;
  j["family"] = family;
  j["k"] = k;
  j["Q"] = Q;
  j["N"] = N;
  j["seeds"] = seeds;
  j["coeffs"] = coeffs;
  j["eps"] = eps;
  j["C"] = C;
  j["tol"] = tol ? nlohmann::ordered_json(*tol) : nlohmann::ordered_json(nullptr);
  j["associates"] = associates;
  j["range"] = range;
  j["Q0"] = Q0;
  j["matrices"] = matrices;
  j["rows"] = rows;
  j["cols"] = cols;
  j["max_points"] = max_points;
  j["max_operations"] = max_operations;
  j["threads"] = threads;
  j["timing"] = timing;
  j["out"] = out;
  j["format"] = format;
  return j;
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("<root>", "expected a JSON object");
  for (const auto& [key, _] : j.items()) {
    bool known = false;
    for (const auto& k : config_keys()) known = known || k == key;
    if (!known) throw ConfigError(key, "unknown key");
  }
  ExperimentConfig c;
  c.family = get(j, "family", c.family);
  c.k = get(j, "k", c.k);
  c.Q = get(j, "Q", c.Q);
  c.N = get(j, "N", c.N);
  c.seeds = get(j, "seeds", c.seeds);
  c.coeffs = get(j, "coeffs", c.coeffs);
  c.eps = get(j, "eps", c.eps);
  c.C = get(j, "C", c.C);
  if (j.contains("tol") && !j.at("tol").is_null()) c.tol = get(j, "tol", 0.0);
  c.associates = get(j, "associates", c.associates);
  c.range = get(j, "range", c.range);
  c.Q0 = get(j, "Q0", c.Q0);
  c.matrices = get(j, "matrices", c.matrices);
  c.rows = get(j, "rows", c.rows);
  c.cols = get(j, "cols", c.cols);
  c.max_points = get(j, "max_points", c.max_points);
  c.max_operations = get(j, "max_operations", c.max_operations);
  c.threads = get(j, "threads", c.threads);
  c.timing = get(j, "timing", c.timing);
  c.out = get(j, "out", c.out);
  c.format = get(j, "format", c.format);
  return c;
}

std::map<std::string, std::string> ExperimentConfig::to_flat() const {
  const auto id = [](const std::string& s) { return s; };
  const auto u64 = [](std::uint64_t v) { return std::to_string(v); };
  std::map<std::string, std::string> kv{
      {"family", join(family, id)},
      {"k", std::to_string(k)},
      {"Q", join(Q, fmt_double)},
      {"N", join(N, fmt_double)},
      {"seeds", join(seeds, u64)},
      {"coeffs", join(coeffs, id)},
      {"eps", fmt_double(eps)},
      {"C", fmt_double(C)},
      {"associates", associates},
      {"range", range},
      {"Q0", join(Q0, fmt_double)},
      {"matrices", std::to_string(matrices)},
      {"rows", std::to_string(rows)},
      {"cols", std::to_string(cols)},
      {"max_points", u64(max_points)},
      {"max_operations", u64(max_operations)},
      {"threads", std::to_string(threads)},
      {"timing", timing ? "true" : "false"},
      {"out", out},
      {"format", format},
  };
  if (tol) kv["tol"] = fmt_double(*tol);
  return kv;
}

ExperimentConfig ExperimentConfig::from_flat(const std::map<std::string, std::string>& kv) {
  ExperimentConfig c;
  const auto doubles = [](const std::string& key, const std::string& v) {
    std::vector<double> out;
    for (const auto& s : split_list(v)) out.push_back(parse_double(key, s));
    return out;
  };
  for (const auto& [key, raw] : kv) {
    const std::string v = trim(raw);
    if (key == "family") c.family = split_list(v);
    else if (key == "k") c.k = static_cast<int>(parse_int(key, v));
    else if (key == "Q") c.Q = doubles(key, v);
    else if (key == "N") c.N = doubles(key, v);
    else if (key == "seeds") {
      c.seeds.clear();
      for (const auto& s : split_list(v)) c.seeds.push_back(parse_uint(key, s));
    } else if (key == "coeffs") c.coeffs = split_list(v);
    else if (key == "eps") c.eps = parse_double(key, v);
    else if (key == "C") c.C = parse_double(key, v);
    else if (key == "tol") c.tol = parse_double(key, v);
    else if (key == "associates") c.associates = v;
    else if (key == "range") c.range = v;
    else if (key == "Q0") c.Q0 = doubles(key, v);
    else if (key == "matrices") c.matrices = static_cast<int>(parse_int(key, v));
    else if (key == "rows") c.rows = static_cast<int>(parse_int(key, v));
    else if (key == "cols") c.cols = static_cast<int>(parse_int(key, v));
    else if (key == "max_points") c.max_points = parse_uint(key, v);
    else if (key == "max_operations") c.max_operations = parse_uint(key, v);
    else if (key == "threads") c.threads = static_cast<int>(parse_int(key, v));
    else if (key == "timing") c.timing = parse_bool(key, v);
    else if (key == "out") c.out = v;
    else if (key == "format") c.format = v;
    else throw ConfigError(key, "unknown key");
  }
  return c;
}

std::string ExperimentConfig::hash() const {
  nlohmann::ordered_json j = to_json();
  for (const char* key : {"out", "format", "timing", "threads"}) j.erase(key);
  const std::string text = j.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::map<std::string, std::string> parse_flat(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno), "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno), "empty key");
    kv[key] = trim(line.substr(eq + 1));
  }
  return kv;
}

std::map<std::string, std::string> read_flat_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open \"" + path + "\"");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_flat(ss.str());
}

std::string write_flat(const std::map<std::string, std::string>& kv) {
  std::string out;
  for (const auto& key : config_keys()) {
    const auto it = kv.find(key);
    if (it != kv.end()) out += key + " = " + it->second + "\n";
  }
  return out;
}

}  // namespace lsieve::harness
