#include "lindred/model_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace lindred {

namespace {

using nlohmann::json;

std::pair<int, int> offset_to_line_column(const std::string& text, size_t offset) {
  int line = 1, column = 1;
  for (size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

double finite_number(const json& j, const std::string& where) {
  if (!j.is_number())
    throw ParseError(where + ": expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v))
    throw ParseError(where + ": non-finite number");
  return v;
}

GeneratorSpec generator_from_json(const json& j, Eigen::Index dim, const std::string& where) {
  if (!j.is_object())
    throw ParseError(where + ": expected an object with 'hamiltonian' and 'collapse'");
  GeneratorSpec spec;
  if (j.contains("hamiltonian"))
    spec.hamiltonian = matrix_from_json(j.at("hamiltonian"), dim, where + ".hamiltonian");
  else
    spec.hamiltonian = ComplexMatrix::Zero(dim, dim);
  if (j.contains("collapse")) {
    const json& coll = j.at("collapse");
    if (!coll.is_array())
      throw ParseError(where + ".collapse: expected an array of matrices");
    for (size_t k = 0; k < coll.size(); ++k)
      spec.collapse_ops.push_back(
          matrix_from_json(coll[k], dim, where + ".collapse[" + std::to_string(k) + "]"));
  }
  return spec;
}

json generator_to_json(const GeneratorSpec& spec) {
  json j;
  j["hamiltonian"] = matrix_to_json(spec.hamiltonian);
  json coll = json::array();
  for (const ComplexMatrix& l : spec.collapse_ops) coll.push_back(matrix_to_json(l));
  j["collapse"] = coll;
  return j;
}

json tolerances_to_json(const Tolerances& t) {
  return json{{"hermiticity", t.hermiticity},
              {"orthonormality", t.orthonormality},
              {"zero_cluster", t.zero_cluster},
              {"biorthogonality", t.biorthogonality},
              {"resolvent", t.resolvent},
              {"recursion_residual", t.recursion_residual},
              {"gauge", t.gauge},
              {"fit_floor", t.fit_floor},
              {"validity_warn", t.validity_warn},
              {"max_order", t.max_order}};
}

void tolerances_from_json(const json& j, Tolerances& t) {
  if (!j.is_object()) throw ParseError("tolerances: expected an object");
  auto get = [&](const char* key, double& slot) {
    if (j.contains(key)) slot = finite_number(j.at(key), std::string("tolerances.") + key);
  };
  get("hermiticity", t.hermiticity);
  get("orthonormality", t.orthonormality);
  get("zero_cluster", t.zero_cluster);
  get("biorthogonality", t.biorthogonality);
  get("resolvent", t.resolvent);
  get("recursion_residual", t.recursion_residual);
  get("gauge", t.gauge);
  get("fit_floor", t.fit_floor);
  get("validity_warn", t.validity_warn);
  if (j.contains("max_order")) t.max_order = j.at("max_order").get<int>();
}

json slope_fit_to_json(const SlopeFit& fit) {
  return json{{"slope", fit.slope}, {"points_used", fit.points_used}, {"at_floor", fit.at_floor}};
}

} // namespace

ComplexMatrix matrix_from_json(const json& j, Eigen::Index dim, const std::string& where) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != dim)
    throw ParseError(where + ": expected " + std::to_string(dim) + " rows");
  ComplexMatrix m(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    const json& row = j[r];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != dim)
      throw ParseError(where + ": ragged row " + std::to_string(r));
    for (Eigen::Index c = 0; c < dim; ++c) {
      const json& cell = row[c];
      if (!cell.is_array() || cell.size() != 2)
        throw ParseError(where + ": entries must be [re, im] pairs");
      const std::string cell_where =
          where + "[" + std::to_string(r) + "][" + std::to_string(c) + "]";
      m(r, c) = Complex(finite_number(cell[0], cell_where), finite_number(cell[1], cell_where));
    }
  }
  return m;
}

ModelFile parse_model_file(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, column] = offset_to_line_column(text, e.byte > 0 ? e.byte - 1 : 0);
    std::ostringstream msg;
    msg << "JSON syntax error at line " << line << ", column " << column << ": " << e.what();
    throw ParseError(msg.str(), line, column);
  } catch (const json::exception& e) {
    // e.g. number overflow while reading a literal
    throw ParseError(std::string("JSON error: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("model file: top level must be an object");
  if (!j.contains("dim")) throw ParseError("model file: missing 'dim'");
  if (!j.at("dim").is_number_integer() || j.at("dim").get<int>() <= 0)
    throw ParseError("model file: 'dim' must be a positive integer");

  ModelFile mf;
  mf.model.dim = j.at("dim").get<int>();
  if (!j.contains("fast")) throw ParseError("model file: missing 'fast' generator");
  mf.model.fast = generator_from_json(j.at("fast"), mf.model.dim, "fast");
  if (!j.contains("slow")) throw ParseError("model file: missing 'slow' generator");
  mf.model.slow = generator_from_json(j.at("slow"), mf.model.dim, "slow");

  if (!j.contains("epsilon")) throw ParseError("model file: missing 'epsilon'");
  const json& eps = j.at("epsilon");
  if (eps.is_array()) {
    if (eps.empty()) throw ParseError("epsilon: list must not be empty");
    for (size_t i = 0; i < eps.size(); ++i)
      mf.model.epsilons.push_back(finite_number(eps[i], "epsilon[" + std::to_string(i) + "]"));
  } else {
    mf.model.epsilons.push_back(finite_number(eps, "epsilon"));
  }
  for (double e : mf.model.epsilons)
    if (!(e > 0.0)) throw ParseError("epsilon: values must be positive");

  if (j.contains("order")) {
    if (!j.at("order").is_number_integer() || j.at("order").get<int>() < 1)
      throw ParseError("order: must be a positive integer");
    mf.order = j.at("order").get<int>();
  }
  if (j.contains("tolerances")) tolerances_from_json(j.at("tolerances"), mf.tolerances);
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_integer()) throw ParseError("seed: must be an integer");
    mf.seed = j.at("seed").get<uint64_t>();
  }

  try {
    validate_model(mf.model, mf.tolerances.hermiticity);
  } catch (const ReductionError& e) {
    throw ParseError(std::string("model validation: ") + e.what());
  }
  return mf;
}

ModelFile load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open model file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_model_file(buffer.str());
}

json model_file_to_json(const ModelFile& mf) {
  json j;
  j["dim"] = static_cast<int>(mf.model.dim);
  j["fast"] = generator_to_json(mf.model.fast);
  j["slow"] = generator_to_json(mf.model.slow);
  if (mf.model.epsilons.size() == 1)
    j["epsilon"] = mf.model.epsilons.front();
  else
    j["epsilon"] = mf.model.epsilons;
  j["order"] = mf.order;
  j["tolerances"] = tolerances_to_json(mf.tolerances);
  j["seed"] = mf.seed;
  return j;
}

void write_model_file(const std::string& path, const ModelFile& mf) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::InvalidArgument, "cannot write model file '" + path + "'");
  out << model_file_to_json(mf).dump(2) << "\n";
}

std::string model_digest(const ModelFile& mf) {
  const std::string canonical = model_file_to_json(mf).dump();
  uint64_t hash = 0xcbf29ce484222325ull;
  for (unsigned char c : canonical) {
    hash ^= c;
    hash *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

json complex_to_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(row);
  }
  return rows;
}

json real_matrix_to_json(const RealMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

json split_to_json(const FastSlowSplit& split) {
  json j;
  j["dbar"] = static_cast<int>(split.dbar);
  j["gamma"] = split.gamma;
  j["generator_norm"] = split.gap.norm;
  json zero = json::array(), fast = json::array();
  for (const Complex& lam : split.gap.zero_group) zero.push_back(complex_to_json(lam));
  for (const Complex& lam : split.gap.fast_group) fast.push_back(complex_to_json(lam));
  j["zero_group"] = zero;
  j["fast_group"] = fast;
  return j;
}

json expansion_to_json(const SlowExpansion& slow, const FastExpansion& fast) {
  json j;
  j["order"] = slow.order;
  json f = json::array(), g = json::array();
  for (int n = 1; n <= slow.order; ++n) f.push_back(real_matrix_to_json(slow.F[n]));
  for (int n = 1; n <= fast.order; ++n) g.push_back(real_matrix_to_json(fast.G[n]));
  j["F"] = f;
  j["G"] = g;
  j["slow_residuals"] = std::vector<double>(slow.residuals.begin() + 1, slow.residuals.end());
  j["fast_residuals"] = std::vector<double>(fast.residuals.begin() + 1, fast.residuals.end());
  j["slow_gauge_defects"] =
      std::vector<double>(slow.gauge_defects.begin() + 1, slow.gauge_defects.end());
  j["fast_gauge_defects"] =
      std::vector<double>(fast.gauge_defects.begin() + 1, fast.gauge_defects.end());
  j["imag_residue"] = std::max(slow.imag_residue, fast.imag_residue);
  // The kernel component of every correction is fixed to zero on both sides;
  // the adjoint-side gauge mirrors the Schroedinger-side choice.
  j["gauge_convention"] = "Tr(J_d' S_d^(n)) = 0 and Tr(S_d' J_d^(n)) = 0 for n >= 1";
  return j;
}

json closeness_to_json(const ClosenessRecord& rec) {
  json entries = json::array();
  for (const ClosenessEntry& e : rec.entries)
    entries.push_back(json{{"T", e.T}, {"error", e.error}});
  return json{{"eps", rec.eps},
              {"order", rec.order},
              {"gamma", rec.gamma},
              {"entries", entries},
              {"fitted_rate", rec.fitted_rate},
              {"envelope_M", rec.envelope_M},
              {"points_used", rec.points_used},
              {"at_floor", rec.at_floor},
              {"rate_ok", rec.rate_ok},
              {"envelope_ok", rec.envelope_ok},
              {"passed", rec.passed}};
}

json second_order_to_json(const SecondOrderRecord& rec) {
  json entries = json::array();
  for (const SecondOrderEntry& e : rec.entries)
    entries.push_back(json{{"eps", e.eps},
                           {"T", e.T},
                           {"state_error", e.state_error},
                           {"min_choi_eigenvalue", e.min_choi_eigenvalue},
                           {"trace_defect", e.trace_defect}});
  return json{{"tbar", rec.tbar},
              {"entries", entries},
              {"state_fit", slope_fit_to_json(rec.state_fit)},
              {"choi_fit", slope_fit_to_json(rec.choi_fit)},
              {"defect_fit", slope_fit_to_json(rec.defect_fit)},
              {"state_ok", rec.state_ok},
              {"choi_ok", rec.choi_ok},
              {"defect_ok", rec.defect_ok},
              {"passed", rec.passed}};
}

json order_scaling_to_json(const OrderScalingRecord& rec) {
  return json{{"order", rec.order},
              {"eps_grid", rec.eps_grid},
              {"errors", rec.errors},
              {"fit", slope_fit_to_json(rec.fit)}};
}

std::string sweep_csv_header() {
  return "epsilon,order,slow_coord_error,state_error,min_choi_eig,trace_defect,fitted_rate";
}

std::string sweep_row_to_csv(const SweepRow& row) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%.17g,%d,%.17g,%.17g,%.17g,%.17g,%.17g", row.epsilon,
                row.order, row.slow_coord_error, row.state_error, row.min_choi_eig,
                row.trace_defect, row.fitted_rate);
  return buf;
}

std::vector<SweepRow> parse_sweep_csv(const std::string& text) {
  std::vector<SweepRow> rows;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (first) {
      first = false;
      if (line == sweep_csv_header()) continue;
    }
    SweepRow row;
    if (std::sscanf(line.c_str(), "%lg,%d,%lg,%lg,%lg,%lg,%lg", &row.epsilon, &row.order,
                    &row.slow_coord_error, &row.state_error, &row.min_choi_eig,
                    &row.trace_defect, &row.fitted_rate) != 7)
      throw ParseError("sweep CSV: malformed row '" + line + "'");
    rows.push_back(row);
  }
  return rows;
}

std::string tool_version() { return "0.1.0"; }

} // namespace lindred
