#pragma once

#include <iosfwd>
#include <map>
#include <string>

#include "lsv/model.hpp"

namespace lsv {

/// Declarative key/value model description, the on-disk form used by the
/// CLI. Unknown keys are errors; files round-trip exactly.
struct ModelConfig {
  std::string kind;  // heston_td | three_halves | jdcev | cev | bs_const |
                     // displaced | custom
  int order = 2;
  double x0 = 0.0;
  double y0 = 0.0;
  std::map<std::string, double> params;
  /// custom tables, keys like "a_0_0"; values are time-polynomial
  /// coefficients in ascending powers
  std::map<std::string, TimeCoeff> tables;

  ModelSpec build() const;

  static ModelConfig parse(std::istream& in);
  static ModelConfig load(const std::string& path);
  void write(std::ostream& out) const;
  void save(const std::string& path) const;

  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

}  // namespace lsv
