#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "hrmod/hr_model.hpp"

namespace hrmod::cli {

/// Malformed input file (not JSON, wrong shape, non-numeric entries).
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ModelKind { Variogram, Precision };

struct ModelFile {
  int d = 0;
  ModelKind kind = ModelKind::Variogram;
  Matrix matrix;
  std::optional<std::string> name;
};

ModelFile parse_model(const nlohmann::json& doc);
nlohmann::json to_json(const ModelFile& model);

/// Raw bytes of a file; throws SchemaError when unreadable.
std::string read_file(const std::string& path);

/// Lower-case hex SHA-256 of the bytes.
std::string sha256_hex(const std::string& bytes);

// Row sums of a precision file must vanish to this absolute level.
inline constexpr double kPrecisionRowSumTol = 1e-9;
// Symmetry required of any matrix in a model file.
inline constexpr double kFileSymmetryTol = 1e-12;

/// Certified variogram from a model file of either kind. Throws hrmod::Error
/// with the validation code when the content is not a valid model.
Variogram model_variogram(const ModelFile& model, const Tolerance& tol);

}  // namespace hrmod::cli
