#include "qdswap/io/outputs.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "qdswap/common/error.hpp"

namespace qdswap {

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

nlohmann::json density_matrix_json(const DensityMatrix2Q& rho) {
  nlohmann::json entries = nlohmann::json::array();
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      entries.push_back({rho.matrix()(i, j).real(), rho.matrix()(i, j).imag()});
    }
  }
  return entries;
}

DensityMatrix2Q density_matrix_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 16) {
    throw_invalid("density matrix JSON must be an array of 16 [re, im] pairs");
  }
  Matrix4c m;
  int k = 0;
  for (int i = 0; i < 4; ++i) {
    for (int c = 0; c < 4; ++c, ++k) {
      const auto& pair = j[k];
      if (!pair.is_array() || pair.size() != 2) {
        throw_invalid("density matrix JSON entries must be [re, im] pairs");
      }
      m(i, c) = Complex(pair[0].get<double>(), pair[1].get<double>());
    }
  }
  return DensityMatrix2Q::make(m);
}

nlohmann::json state_summary_json(const DensityMatrix2Q& rho) {
  const BellFidelity best = best_bell_fidelity(rho);
  return nlohmann::json{
      {"fef", fully_entangled_fraction(rho)},
      {"best_bell_label", std::string(to_string(best.label))},
      {"best_bell_fidelity", best.fidelity},
      {"concurrence", concurrence(rho)},
      {"purity", rho.purity()},
  };
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw_invalid("cannot open output file: " + path);
  out << content;
  if (!out) throw_invalid("failed writing output file: " + path);
}

}  // namespace qdswap
