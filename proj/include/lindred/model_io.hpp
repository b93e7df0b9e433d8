#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "lindred/expansion.hpp"
#include "lindred/lindblad.hpp"
#include "lindred/propagate.hpp"
#include "lindred/spectral.hpp"
#include "lindred/types.hpp"

namespace lindred {

/// Thrown on malformed model files; carries 1-based line/column when the
/// failure happened at the JSON level.
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& what, int line = 0, int column = 0)
      : std::runtime_error(what), line_(line), column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

private:
  int line_;
  int column_;
};

/// On-disk model document: the GKSL pair plus run configuration.
struct ModelFile {
  GKSLModel model;
  int order = 2;
  Tolerances tolerances;
  uint64_t seed = kDefaultSeed;
};

ModelFile parse_model_file(const std::string& text);
ModelFile load_model_file(const std::string& path);
nlohmann::json model_file_to_json(const ModelFile& mf);
void write_model_file(const std::string& path, const ModelFile& mf);

/// FNV-1a 64-bit digest of the canonical model serialization, hex encoded.
std::string model_digest(const ModelFile& mf);

// Report fragments (assembled by the CLI, unit-tested here).
nlohmann::json complex_to_json(const Complex& z);
nlohmann::json matrix_to_json(const ComplexMatrix& m);
nlohmann::json real_matrix_to_json(const RealMatrix& m);
ComplexMatrix matrix_from_json(const nlohmann::json& j, Eigen::Index dim, const std::string& where);

nlohmann::json split_to_json(const FastSlowSplit& split);
nlohmann::json expansion_to_json(const SlowExpansion& slow, const FastExpansion& fast);
nlohmann::json closeness_to_json(const ClosenessRecord& rec);
nlohmann::json second_order_to_json(const SecondOrderRecord& rec);
nlohmann::json order_scaling_to_json(const OrderScalingRecord& rec);

/// One CSV row of cmd_sweep output.
struct SweepRow {
  double epsilon = 0.0;
  int order = 0;
  double slow_coord_error = 0.0;
  double state_error = 0.0;
  double min_choi_eig = 0.0;
  double trace_defect = 0.0;
  double fitted_rate = 0.0;
};

std::string sweep_csv_header();
std::string sweep_row_to_csv(const SweepRow& row);
std::vector<SweepRow> parse_sweep_csv(const std::string& text);

std::string tool_version();

} // namespace lindred
