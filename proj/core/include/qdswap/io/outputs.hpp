#pragma once

#include <string>

#include <json.hpp>

#include "qdswap/quantum/two_qubit.hpp"

namespace qdswap {

/// Full-precision, locale-independent number formatting ("inf" for infinity).
std::string format_double(double v);

/// Density matrix as 16 [re, im] pairs in row-major order.
nlohmann::json density_matrix_json(const DensityMatrix2Q& rho);

/// Parses the density_matrix_json layout back into a matrix (validated).
DensityMatrix2Q density_matrix_from_json(const nlohmann::json& j);

/// Entanglement summary block: fef, best Bell fidelity with its label,
/// concurrence, purity.
nlohmann::json state_summary_json(const DensityMatrix2Q& rho);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace qdswap
