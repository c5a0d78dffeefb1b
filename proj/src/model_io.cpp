#include "lsv/model_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "lsv/errors.hpp"

namespace lsv {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& s, const std::string& key) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0' || !std::isfinite(v)) {
    throw std::invalid_argument("model file: bad numeric value for '" + key +
                                "': " + s);
  }
  return v;
}

std::vector<double> parse_doubles(const std::string& s,
                                  const std::string& key) {
  std::istringstream iss(s);
  std::vector<double> out;
  std::string tok;
  while (iss >> tok) out.push_back(parse_double(tok, key));
  if (out.empty()) {
    throw std::invalid_argument("model file: empty value for '" + key + "'");
  }
  return out;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

bool parse_table_key(const std::string& key, std::string& name, int& i,
                     int& j) {
  static const std::set<std::string> kNames = {"a", "b", "c", "alpha",
                                               "gamma"};
  const auto p1 = key.find('_');
  if (p1 == std::string::npos) return false;
  const auto p2 = key.find('_', p1 + 1);
  if (p2 == std::string::npos) return false;
  name = key.substr(0, p1);
  if (!kNames.count(name)) return false;
  try {
    i = std::stoi(key.substr(p1 + 1, p2 - p1 - 1));
    j = std::stoi(key.substr(p2 + 1));
  } catch (const std::exception&) {
    return false;
  }
  return i >= 0 && j >= 0;
}

const std::map<std::string, std::vector<std::string>>& kind_params() {
  static const std::map<std::string, std::vector<std::string>> m = {
      {"heston_td",
       {"kappa", "theta0", "theta1", "delta0", "delta1", "rho0", "rho1"}},
      {"three_halves", {"kappa", "theta", "delta", "rho"}},
      {"jdcev", {"delta", "beta", "b", "c"}},
      {"cev", {"delta", "beta"}},
      {"bs_const", {"sigma"}},
      {"displaced", {"sigma2_0", "sigma2_1", "sigma2_2", "displacement"}},
      {"custom", {}},
  };
  return m;
}

// keys that may be omitted (default 0)
bool optional_param(const std::string& kind, const std::string& key) {
  return kind == "displaced" && (key == "sigma2_1" || key == "sigma2_2");
}

}  // namespace

ModelConfig ModelConfig::parse(std::istream& in) {
  ModelConfig cfg;
  std::set<std::string> seen;
  bool have_kind = false, have_order = false;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("model file: line " + std::to_string(lineno) +
                                  " is not 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw std::invalid_argument("model file: line " + std::to_string(lineno) +
                                  " has an empty key or value");
    }
    if (!seen.insert(key).second) {
      throw std::invalid_argument("model file: duplicate key '" + key + "'");
    }
    if (key == "kind") {
      cfg.kind = value;
      have_kind = true;
    } else if (key == "order") {
      cfg.order = int(parse_double(value, key));
      have_order = true;
    } else if (key == "x0") {
      cfg.x0 = parse_double(value, key);
    } else if (key == "y0") {
      cfg.y0 = parse_double(value, key);
    } else {
      std::string name;
      int i = 0, j = 0;
      if (parse_table_key(key, name, i, j)) {
        cfg.tables[key] = TimeCoeff(parse_doubles(value, key));
      } else {
        cfg.params[key] = parse_double(value, key);
      }
    }
  }
  if (!have_kind) throw std::invalid_argument("model file: missing 'kind'");
  if (!have_order) throw std::invalid_argument("model file: missing 'order'");
  return cfg;
}

ModelConfig ModelConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open model file: " + path);
  return parse(in);
}

void ModelConfig::write(std::ostream& out) const {
  out << "kind = " << kind << "\n";
  out << "order = " << order << "\n";
  out << "x0 = " << format_double(x0) << "\n";
  out << "y0 = " << format_double(y0) << "\n";
  for (const auto& [key, value] : params) {
    out << key << " = " << format_double(value) << "\n";
  }
  for (const auto& [key, coeff] : tables) {
    out << key << " =";
    if (coeff.c.empty()) {
      out << " 0";
    } else {
      for (double v : coeff.c) out << " " << format_double(v);
    }
    out << "\n";
  }
}

void ModelConfig::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write model file: " + path);
  write(out);
}

ModelSpec ModelConfig::build() const {
  const auto& kinds = kind_params();
  const auto it = kinds.find(kind);
  if (it == kinds.end()) {
    throw std::invalid_argument("model file: unknown kind '" + kind + "'");
  }
  // exact key discipline: no extras, no missing
  std::set<std::string> allowed(it->second.begin(), it->second.end());
  for (const auto& [key, v] : params) {
    if (!allowed.count(key)) {
      throw std::invalid_argument("model file: unknown key '" + key +
                                  "' for kind " + kind);
    }
  }
  if (kind != "custom" && !tables.empty()) {
    throw std::invalid_argument(
        "model file: raw coefficient tables are only valid for kind custom");
  }
  auto need = [&](const std::string& key) {
    const auto p = params.find(key);
    if (p == params.end()) {
      if (optional_param(kind, key)) return 0.0;
      throw std::invalid_argument("model file: missing key '" + key +
                                  "' for kind " + kind);
    }
    return p->second;
  };

  if (kind == "heston_td") {
    return zoo_heston_td(need("kappa"), need("theta0"), need("theta1"),
                         need("delta0"), need("delta1"), need("rho0"),
                         need("rho1"), x0, y0, order);
  }
  if (kind == "three_halves") {
    return zoo_three_halves(need("kappa"), need("theta"), need("delta"),
                            need("rho"), x0, y0, order);
  }
  if (kind == "jdcev") {
    return zoo_jdcev(need("delta"), need("beta"), need("b"), need("c"), x0,
                     order);
  }
  if (kind == "cev") return zoo_cev(need("delta"), need("beta"), x0, order);
  if (kind == "bs_const") return zoo_bs_const(need("sigma"), x0, order);
  if (kind == "displaced") {
    return zoo_displaced_lognormal(
        TimeCoeff({need("sigma2_0"), need("sigma2_1"), need("sigma2_2")}),
        need("displacement"), x0, order);
  }

  // custom: raw tables
  if (tables.empty()) {
    throw std::invalid_argument(
        "model file: kind custom requires coefficient tables (a_i_j, ...)");
  }
  CoeffTable a(order), b(order), c(order), alpha(order), gamma(order);
  for (const auto& [key, coeff] : tables) {
    std::string name;
    int i = 0, j = 0;
    parse_table_key(key, name, i, j);
    if (i + j > order) {
      throw std::invalid_argument("model file: table entry '" + key +
                                  "' exceeds order " + std::to_string(order));
    }
    if (name == "a") a.set(i, j, coeff);
    else if (name == "b") b.set(i, j, coeff);
    else if (name == "c") c.set(i, j, coeff);
    else if (name == "alpha") alpha.set(i, j, coeff);
    else gamma.set(i, j, coeff);
  }
  return ModelSpec(order, x0, y0, std::move(a), std::move(b), std::move(c),
                   std::move(alpha), std::move(gamma));
}

}  // namespace lsv
