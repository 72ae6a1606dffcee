#include "model_file.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace hrmod::cli {

ModelFile parse_model(const nlohmann::json& doc) {
  if (!doc.is_object()) throw SchemaError("model file must be a JSON object");
  for (const char* key : {"d", "kind", "matrix"})
    if (!doc.contains(key)) throw SchemaError(std::string("missing field \"") + key + "\"");
  ModelFile m;
  if (!doc["d"].is_number_integer() || doc["d"].get<int>() < 1) throw SchemaError("\"d\" must be a positive integer");
  m.d = doc["d"].get<int>();
  const auto& kind = doc["kind"];
  if (kind == "variogram") m.kind = ModelKind::Variogram;
  else if (kind == "precision") m.kind = ModelKind::Precision;
  else throw SchemaError("\"kind\" must be \"variogram\" or \"precision\"");
  if (doc.contains("name")) {
    if (!doc["name"].is_string()) throw SchemaError("\"name\" must be a string");
    m.name = doc["name"].get<std::string>();
  }
  const auto& rows = doc["matrix"];
  if (!rows.is_array() || static_cast<int>(rows.size()) != m.d) throw SchemaError("\"matrix\" must have d rows");
  m.matrix.resize(m.d, m.d);
  for (int i = 0; i < m.d; ++i) {
    if (!rows[i].is_array() || static_cast<int>(rows[i].size()) != m.d) throw SchemaError("every row must have d entries");
    for (int j = 0; j < m.d; ++j) {
      if (!rows[i][j].is_number()) throw SchemaError("matrix entries must be numbers");
      m.matrix(i, j) = rows[i][j].get<double>();
      if (!std::isfinite(m.matrix(i, j))) throw SchemaError("matrix entries must be finite");
    }
  }
  return m;
}

nlohmann::json to_json(const ModelFile& model) {
  nlohmann::json doc;
  doc["d"] = model.d;
  doc["kind"] = model.kind == ModelKind::Variogram ? "variogram" : "precision";
  auto rows = nlohmann::json::array();
  for (int i = 0; i < model.d; ++i) {
    auto row = nlohmann::json::array();
    for (int j = 0; j < model.d; ++j) row.push_back(model.matrix(i, j));
    rows.push_back(row);
  }
  doc["matrix"] = rows;
  if (model.name) doc["name"] = *model.name;
  return doc;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 failed");
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return hex.str();
}

Variogram model_variogram(const ModelFile& model, const Tolerance& tol) {
  const Matrix& m = model.matrix;
  const double scale = floor_scale({m.cwiseAbs().maxCoeff()});
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > kFileSymmetryTol * scale)
    throw Error(ErrorCode::NotSymmetric, "matrix is not symmetric");
  if (model.kind == ModelKind::Variogram) return Variogram::from_matrix(m, tol);
  const Vector rows = m.rowwise().sum();
  const double worst = rows.cwiseAbs().maxCoeff();
  if (worst > kPrecisionRowSumTol)
    throw Error(ErrorCode::BadKernel, "precision row sums must vanish (max |row sum| = " + std::to_string(worst) + ")");
  return variogram_from_precision(SymMatrix(m), tol);
}

}  // namespace hrmod::cli
