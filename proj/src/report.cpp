#include "oschalf/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <system_error>

#include "oschalf/oscillator.hpp"

namespace oschalf {

namespace {

void indent(std::string& out, int depth) { out.append(static_cast<std::size_t>(2 * depth), ' '); }

void dump_into(std::string& out, const Json& value, int depth) {
  switch (value.type()) {
    case Json::value_t::object: {
      if (value.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, item] : value.items()) {
        if (!first) out += ",\n";
        first = false;
        indent(out, depth + 1);
        out += Json(key).dump();
        out += ": ";
        dump_into(out, item, depth + 1);
      }
      out += "\n";
      indent(out, depth);
      out += "}";
      return;
    }
    case Json::value_t::array: {
      if (value.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      bool first = true;
      for (const auto& item : value) {
        if (!first) out += ",\n";
        first = false;
        indent(out, depth + 1);
        dump_into(out, item, depth + 1);
      }
      out += "\n";
      indent(out, depth);
      out += "]";
      return;
    }
    case Json::value_t::number_float: {
      const double v = value.get<double>();
      out += std::isfinite(v) ? format_double(v) : "null";
      return;
    }
    default:
      out += value.dump();
  }
}

}  // namespace

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string dump_json(const Json& value) {
  std::string out;
  dump_into(out, value, 0);
  out += "\n";
  return out;
}

std::string to_csv(const CsvTable& table) {
  std::string out;
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    if (i) out += ",";
    out += table.header[i];
  }
  out += "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ",";
      out += format_double(row[i]);
    }
    out += "\n";
  }
  return out;
}

void write_atomic(const std::filesystem::path& path, const std::string& contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream file(tmp, std::ios::binary | std::ios::trunc);
    if (!file) throw IoError("cannot open " + tmp.string() + " for writing");
    file.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    file.flush();
    if (!file) {
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw IoError("write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignored;
    std::filesystem::remove(tmp, ignored);
    throw IoError("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
  }
}

Json number(double value) { return std::isfinite(value) ? Json(value) : Json(nullptr); }

Json to_json(const Tolerances& tol) {
  Json j;
  j["gradient"] = tol.gradient;
  j["nehari"] = tol.nehari;
  j["pohozaev"] = tol.pohozaev;
  j["power_identity"] = tol.power_identity;
  j["energy_slack"] = tol.energy_slack;
  return j;
}

Json to_json(const Nonlinearity& nl) {
  Json j;
  j["kind"] = to_string(nl.kind());
  j["dim"] = nl.dim();
  switch (nl.kind()) {
    case NonlinearityKind::Power:
      j["p"] = nl.p();
      break;
    case NonlinearityKind::CriticalPlus:
      j["critical_exponent"] = nl.critical();
      j["lambda"] = nl.lambda();
      j["q"] = nl.q();
      break;
    case NonlinearityKind::Custom:
      break;
  }
  j["theta"] = number(nl.theta());
  return j;
}

Json to_json(const SolveReport& r, bool include_coefficients) {
  Json j;
  j["status"] = to_string(r.status);
  j["message"] = r.message;
  j["max_degree"] = r.max_degree;
  j["order"] = r.order;
  j["seed"] = r.seed;
  j["tolerances"] = to_json(r.tolerances);
  j["iterations"] = r.iterations;
  j["gradient_norm"] = number(r.gradient_norm);
  j["energy"] = number(r.energy_value);
  j["nehari_value"] = number(r.nehari_value);
  j["pohozaev_rel"] = number(r.pohozaev_rel);
  j["power_identity_rel"] = number(r.power_identity_rel);
  j["power_identity_coefficient"] = number(r.power_identity_coefficient);
  j["mp_level_estimate"] = number(r.mp_level_estimate);
  j["level_bound"] = number(r.level_bound);
  j["truncation_tainted"] = r.truncation_tainted;
  j["energy_monotone"] = r.energy_monotone;
  if (include_coefficients && r.field.coeffs.size() > 0) {
    Json c = Json::array();
    for (Eigen::Index i = 0; i < r.field.coeffs.size(); ++i) c.push_back(number(r.field.coeffs(i)));
    j["coefficients"] = std::move(c);
  }
  return j;
}

Json to_json(const EnergyBreakdown& e) {
  Json j;
  j["grad_y"] = number(e.grad_y);
  j["grad_x"] = number(e.grad_x);
  j["potential"] = number(e.potential);
  j["boundary_F"] = number(e.boundary_F);
  j["boundary_xF"] = number(e.boundary_xF);
  return j;
}

Json to_json(const PohozaevTerms& t) {
  Json j;
  j["gradient_term"] = number(t.gradient_term);
  j["potential_term"] = number(t.potential_term);
  j["source_term"] = number(t.source_term);
  j["weighted_source_term"] = number(t.weighted_source_term);
  j["residual"] = number(t.residual);
  j["truncation_tainted"] = t.truncation_tainted;
  return j;
}

Json to_json(const PowerIdentity& p) {
  Json j;
  j["coefficient"] = number(p.coefficient);
  j["lhs"] = number(p.lhs);
  j["rhs"] = number(p.rhs);
  j["residual"] = number(p.residual);
  j["nonexistence_regime"] = p.nonexistence_regime;
  return j;
}

Json to_json(const LpReport& r) {
  Json norms = Json::array();
  for (std::size_t i = 0; i < r.exponents.size(); ++i) {
    Json row;
    row["p"] = std::isinf(r.exponents[i]) ? Json("inf") : Json(r.exponents[i]);
    row["norm"] = number(r.norms[i]);
    norms.push_back(std::move(row));
  }
  Json j;
  j["norms"] = std::move(norms);
  j["all_finite"] = r.all_finite;
  j["interpolation_checks"] = r.interpolation_checks;
  j["interpolation_violations"] = r.interpolation_violations;
  j["worst_interpolation_excess"] = number(r.worst_interpolation_excess);
  return j;
}

Json to_json(const DecayReport& r) {
  Json j;
  j["constant"] = number(r.constant);
  j["trust_radius"] = r.trust_radius;
  j["no_upward_trend"] = r.no_upward_trend;
  j["non_increasing"] = r.non_increasing;
  Json rows = Json::array();
  for (const auto& row : r.profile) rows.push_back(Json::array({row.radius, number(row.weighted_max)}));
  j["profile"] = std::move(rows);
  return j;
}

Json to_json(const ScanReport& r) {
  Json j;
  j["dim"] = r.params.dim;
  j["eps"] = r.params.eps;
  j["radius"] = r.params.radius;
  j["potential_slope"] = number(r.potential_slope);
  j["quotient_monotone"] = r.quotient_monotone;
  j["sobolev_estimate"] = number(r.sobolev_estimate);
  j["plateau_gap"] = number(r.plateau_gap);
  j["sobolev_drift"] = number(r.sobolev_drift);
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    Json x;
    x["scale"] = row.scale;
    x["sobolev_quotient"] = number(row.sobolev_quotient);
    x["lambda_quotient"] = number(row.lambda_quotient);
    x["potential_term"] = number(row.potential_term);
    rows.push_back(std::move(x));
  }
  j["rows"] = std::move(rows);
  return j;
}

Json to_json(const FitReport& r) {
  Json j;
  j["dim"] = r.dim;
  j["radius"] = r.radius;
  j["q"] = r.q;
  j["gradient_excess_slope"] = number(r.gradient_excess_slope);
  j["gradient_excess_target"] = number(r.gradient_excess_target);
  j["l2_slope"] = number(r.l2_slope);
  j["l2_log_model_residual"] = number(r.l2_log_model_residual);
  j["l2_power_model_residual"] = number(r.l2_power_model_residual);
  j["l2_prefers_log_model"] = r.l2_prefers_log_model;
  j["lq_slope"] = number(r.lq_slope);
  j["lq_target"] = number(r.lq_target);
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    Json x;
    x["eps"] = row.eps;
    x["gradient"] = number(row.gradient);
    x["trace_l2"] = number(row.trace_l2);
    x["trace_lq"] = number(row.trace_lq);
    rows.push_back(std::move(x));
  }
  j["rows"] = std::move(rows);
  return j;
}

Json to_json(const ProbeReport& r) {
  Json j;
  j["dim"] = r.dim;
  j["quotient_strictly_decreasing"] = r.quotient_strictly_decreasing;
  j["potential_share_decreasing"] = r.potential_share_decreasing;
  j["participation_increasing"] = r.participation_increasing;
  j["all_converged"] = r.all_converged;
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    Json x;
    x["max_degree"] = row.max_degree;
    x["lambda_quotient"] = number(row.lambda_quotient);
    x["sobolev_quotient"] = number(row.sobolev_quotient);
    x["potential_share"] = number(row.potential_share);
    x["participation"] = number(row.participation);
    x["iterations"] = row.iterations;
    x["status"] = to_string(row.status);
    rows.push_back(std::move(x));
  }
  j["rows"] = std::move(rows);
  return j;
}

CsvTable scan_table(const ScanReport& r) {
  CsvTable t{{"scale", "sobolev_quotient", "lambda_quotient", "potential_term"}, {}};
  for (const auto& row : r.rows) {
    t.rows.push_back({row.scale, row.sobolev_quotient, row.lambda_quotient, row.potential_term});
  }
  return t;
}

CsvTable fit_table(const FitReport& r) {
  CsvTable t{{"eps", "gradient", "trace_l2", "trace_lq"}, {}};
  for (const auto& row : r.rows) t.rows.push_back({row.eps, row.gradient, row.trace_l2, row.trace_lq});
  return t;
}

CsvTable decay_table(const DecayReport& r) {
  CsvTable t{{"radius", "weighted_max"}, {}};
  for (const auto& row : r.profile) t.rows.push_back({row.radius, row.weighted_max});
  return t;
}

CsvTable axis_profile_table(const SpectralSpace& space, const SpectralField& u, int points) {
  const int dim = space.dim();
  const double rt = trust_radius(space.max_degree());
  std::vector<double> coords(static_cast<std::size_t>(points) * dim, 0.0);
  for (int i = 0; i < points; ++i) coords[static_cast<std::size_t>(i) * dim] = rt * i / (points - 1);
  const Eigen::VectorXd values = space.evaluate(u, coords);
  CsvTable t{{"radius", "value"}, {}};
  for (int i = 0; i < points; ++i) t.rows.push_back({coords[static_cast<std::size_t>(i) * dim], values(i)});
  return t;
}

}  // namespace oschalf
