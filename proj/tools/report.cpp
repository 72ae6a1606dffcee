#include "report.hpp"

#include <cmath>
#include <set>

namespace hrmod::cli {

using nlohmann::json;

// Adding 0.0 turns -0.0 into 0.0.
json number_or_null(double x) { return std::isfinite(x) ? json(x + 0.0) : json(nullptr); }

json to_json(const ModularityReport& r) {
  json j{{"A", r.A.to_string()},
         {"B", r.B.to_string()},
         {"C", r.C.to_string()},
         {"fn", std::string(to_string(r.fn))},
         {"vABC", r.vABC},
         {"vC", r.vC},
         {"vAC", r.vAC},
         {"vBC", r.vBC},
         {"gap", r.gap},
         {"tol_used", r.tol_used},
         {"scale", r.scale},
         {"verdict", std::string(to_string(r.verdict))}};
  if (r.emtp2) {
    j["emtp2"] = r.emtp2->holds;
    j["emtp2_boundary"] = r.emtp2->boundary;
    j["max_offdiag_theta"] = r.emtp2->max_offdiag;
  }
  if (r.p_sign) {
    j["p_positive"] = r.p_sign->positive;
    j["p_nonneg"] = r.p_sign->nonnegative;
    j["p_min"] = r.p_sign->min_entry;
  }
  return j;
}

json to_json(const CIVerdict& v) {
  json diag = json::array();
  for (const auto& c : v.diagnostics)
    diag.push_back({{"criterion", c.name},
                    {"residual", number_or_null(c.residual)},
                    {"scale", c.scale},
                    {"verdict", to_string(c.verdict)}});
  json j{{"statement", v.statement.to_string()},
         {"A", v.statement.A.to_string()},
         {"B", v.statement.B.to_string()},
         {"C", v.statement.C.to_string()},
         {"method", std::string(to_string(v.method))},
         {"verdict", to_string(v.verdict)},
         {"holds", v.holds()},
         {"applicable", v.applicable},
         {"diagnostics", diag},
         {"notes", v.notes}};
  if (v.modularity) j["modularity"] = to_json(*v.modularity);
  if (v.emtp2_on_margin) j["emtp2_on_margin"] = *v.emtp2_on_margin;
  if (v.p_positive_on_margin) j["p_positive_on_margin"] = *v.p_positive_on_margin;
  if (v.p_nonneg_on_margin) j["p_nonneg_on_margin"] = *v.p_nonneg_on_margin;
  return j;
}

json to_json(const MarkovGraph& g) {
  json edges = json::array();
  for (const auto& e : g.edges())
    edges.push_back({{"u", e.u + 1}, {"v", e.v + 1}, {"weight", e.weight}});
  return {{"vertices", g.num_vertices()}, {"edges", edges}, {"edge_list", g.to_string()}};
}

json to_json(const GlobalMarkovReport& r) {
  auto list = [](const std::vector<CIVerdict>& vs) {
    json a = json::array();
    for (const auto& v : vs) a.push_back(to_json(v));
    return a;
  };
  return {{"separated_statements", r.separated_statements},
          {"passes", r.passes()},
          {"violations", list(r.violations)},
          {"indeterminate", list(r.indeterminate)},
          {"disagreements", list(r.disagreements)}};
}

json to_json(const ElliptopeClassification& c) {
  json j{{"tag", std::string(to_string(c.tag))}, {"rank", c.rank}, {"min_eigenvalue", c.min_eigenvalue}};
  if (c.kernel) j["kernel"] = std::vector<double>(c.kernel->data(), c.kernel->data() + c.kernel->size());
  if (c.kernel_dot_ones) j["kernel_dot_ones"] = *c.kernel_dot_ones;
  return j;
}

namespace {

const std::set<std::string>& verdict_words() {
  static const std::set<std::string> words = {"holds", "fails", "indeterminate", "modular", "strictly-non-modular"};
  return words;
}

std::string check_verdicts(const json& node, const std::string& path) {
  if (node.is_object()) {
    for (const auto& [key, value] : node.items()) {
      if (key == "verdict") {
        if (!value.is_string() || !verdict_words().count(value.get<std::string>()))
          return path + "/verdict has an unknown value";
      }
      if (auto err = check_verdicts(value, path + "/" + key); !err.empty()) return err;
    }
  } else if (node.is_array()) {
    for (std::size_t i = 0; i < node.size(); ++i)
      if (auto err = check_verdicts(node[i], path + "/" + std::to_string(i)); !err.empty()) return err;
  }
  return {};
}

}  // namespace

std::string check_report_schema(const json& report) {
  if (!report.is_object()) return "report is not an object";
  if (!report.contains("command") || !report["command"].is_string()) return "missing string \"command\"";
  if (!report.contains("version") || report["version"] != kVersion) return "missing or wrong \"version\"";
  if (!report.contains("tolerance") || !report["tolerance"].is_object() ||
      !report["tolerance"].contains("rel") || !report["tolerance"]["rel"].is_number() ||
      !report["tolerance"].contains("source") || !report["tolerance"]["source"].is_string())
    return "missing \"tolerance\" {rel, source}";
  if (!report.contains("input") || !report["input"].is_object()) return "missing \"input\" object";
  const bool has_results = report.contains("results") && report["results"].is_object();
  const bool has_error = report.contains("error") && report["error"].is_object();
  if (has_results == has_error) return "exactly one of \"results\" and \"error\" must be present";
  if (has_error && (!report["error"].contains("code") || !report["error"].contains("message")))
    return "\"error\" needs code and message";
  return check_verdicts(report, "");
}

}  // namespace hrmod::cli
