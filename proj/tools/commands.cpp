#include "commands.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <span>
#include <sstream>

#include "hrmod/elliptope.hpp"
#include "hrmod/generators.hpp"
#include "hrmod/independence.hpp"
#include "hrmod/set_functions.hpp"
#include "model_file.hpp"
#include "report.hpp"

namespace hrmod::cli {

namespace {

using nlohmann::json;

constexpr int kMaxAllSubsetsDim = 12;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Context {
  Tolerance tol;
  std::string tol_source = "default";
  std::ostream* out = nullptr;
  std::ostream* err = nullptr;
};

struct Envelope {
  std::string command;
  json input = json::object();
};

json make_report(const Context& ctx, const Envelope& env) {
  return {{"command", env.command},
          {"version", kVersion},
          {"input", env.input},
          {"tolerance", {{"rel", ctx.tol.rel}, {"source", ctx.tol_source}}}};
}

int emit(const Context& ctx, json report, int code) {
  *ctx.out << report.dump(2) << '\n';
  return code;
}

int emit_error(const Context& ctx, const Envelope& env, const std::string& code, const std::string& message,
               int exit_code) {
  auto report = make_report(ctx, env);
  report["error"] = {{"code", code}, {"message", message}};
  *ctx.err << "hrmod " << env.command << ": " << message << '\n';
  return emit(ctx, std::move(report), exit_code);
}

struct LoadedModel {
  ModelFile file;
  std::string digest;
};

LoadedModel load_model(const std::string& path, Envelope& env) {
  const std::string bytes = read_file(path);
  LoadedModel m;
  m.digest = sha256_hex(bytes);
  env.input = {{"file", path}, {"sha256", m.digest}};
  json doc;
  try {
    doc = json::parse(bytes);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("invalid JSON: ") + e.what());
  }
  m.file = parse_model(doc);
  if (m.file.name) env.input["name"] = *m.file.name;
  env.input["d"] = m.file.d;
  env.input["kind"] = m.file.kind == ModelKind::Variogram ? "variogram" : "precision";
  return m;
}

void args_input(Envelope& env, json args) {
  env.input = {{"args", args}, {"sha256", sha256_hex(args.dump())}};
}

IndexSet parse_set(const std::string& text, int d, const char* what) {
  IndexSet s;
  try {
    s = IndexSet::parse(text);
  } catch (const Error& e) {
    throw UsageError(std::string(what) + ": " + e.what());
  }
  if (!s.is_subset_of(IndexSet::full(d)))
    throw UsageError(std::string(what) + " has an index outside 1.." + std::to_string(d));
  return s;
}

// Runs `body` and maps failures onto the exit-code contract.
template <class Body>
int guarded(const Context& ctx, Envelope& env, Body&& body) {
  try {
    return body();
  } catch (const UsageError& e) {
    return emit_error(ctx, env, "Usage", e.what(), kExitUsage);
  } catch (const SchemaError& e) {
    return emit_error(ctx, env, "Schema", e.what(), kExitUsage);
  } catch (const CriterionDisagreement& e) {
    auto report = make_report(ctx, env);
    report["error"] = {{"code", "CriterionDisagreement"}, {"message", e.what()}, {"verdict", to_json(e.verdict())}};
    *ctx.err << "hrmod " << env.command << ": " << e.what() << '\n';
    return emit(ctx, std::move(report), kExitDisagreement);
  } catch (const Error& e) {
    return emit_error(ctx, env, std::string(to_string(e.code())), e.what(), kExitUsage);
  }
}

// ---------------------------------------------------------------- validate

int cmd_validate(const Context& ctx, const std::string& path) {
  Envelope env{"validate"};
  return guarded(ctx, env, [&] {
    const auto model = load_model(path, env);
    json results{{"d", model.file.d}};
    try {
      const auto gamma = model_variogram(model.file, ctx.tol);
      results["valid"] = true;
      results["sigma2"] = fiedler_bapat(gamma).sigma2;
    } catch (const Error& e) {
      results["valid"] = false;
      results["reason"] = std::string(to_string(e.code()));
      results["message"] = e.what();
      if (model.file.kind == ModelKind::Variogram) {
        const auto v = validate_variogram(model.file.matrix, ctx.tol);
        if (!v.ok()) results["offending_value"] = number_or_null(v.offending_value);
      }
    }
    const bool valid = results["valid"].get<bool>();
    auto report = make_report(ctx, env);
    report["results"] = results;
    return emit(ctx, std::move(report), valid ? kExitOk : kExitNegative);
  });
}

// ------------------------------------------------------------------- setfn

struct SetfnArgs {
  std::string file;
  std::string fn = "mhr";
  std::string subsets = "all";
  std::string reps;
};

std::vector<IndexSet> requested_subsets(const std::string& spec, int d) {
  if (spec == "all") {
    if (d > kMaxAllSubsetsDim)
      throw Error(ErrorCode::UnsupportedSize, "--subsets all needs d <= " + std::to_string(kMaxAllSubsetsDim));
    return nonempty_subsets_lex(d);
  }
  std::vector<IndexSet> out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ';')) out.push_back(parse_set(item, d, "--subsets"));
  std::sort(out.begin(), out.end(), IndexSet::lex_less);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

template <class Rep>
std::vector<Rep> requested_reps(const std::string& spec, std::span<const Rep> defaults, std::span<const Rep> every,
                                std::optional<Rep> (*parse)(std::string_view)) {
  if (spec.empty()) return {};
  if (spec == "default") return {defaults.begin(), defaults.end()};
  if (spec == "all") return {every.begin(), every.end()};
  std::vector<Rep> out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto r = parse(item);
    if (!r) throw UsageError("unknown representation \"" + item + "\"");
    out.push_back(*r);
  }
  return out;
}

int cmd_setfn(const Context& ctx, const SetfnArgs& args) {
  Envelope env{"setfn"};
  return guarded(ctx, env, [&] {
    const auto fn = parse_set_fn(args.fn);
    if (!fn) throw UsageError("--fn must be mhr or sigma2");
    const auto model = load_model(args.file, env);
    env.input["fn"] = args.fn;
    env.input["subsets"] = args.subsets;
    env.input["reps"] = args.reps;
    const auto gamma = model_variogram(model.file, ctx.tol);
    const int d = gamma.dim();

    static constexpr MhrRep kAllMhr[] = {MhrRep::Definition, MhrRep::CmDet, MhrRep::MinorDet,
                                         MhrRep::PseudoDet, MhrRep::Integral, MhrRep::SpanningTree};
    static constexpr Sigma2Rep kAllSigma2[] = {Sigma2Rep::InverseRowsum, Sigma2Rep::DetQuotient, Sigma2Rep::Integral,
                                               Sigma2Rep::MaxQuadratic, Sigma2Rep::ThetaSum, Sigma2Rep::Trace};
    const auto mhr_reps = *fn == SetFn::Mhr ? requested_reps<MhrRep>(args.reps, kDefaultMhrReps, kAllMhr, parse_mhr_rep)
                                            : std::vector<MhrRep>{};
    const auto s2_reps = *fn == SetFn::Sigma2
                             ? requested_reps<Sigma2Rep>(args.reps, kDefaultSigma2Reps, kAllSigma2, parse_sigma2_rep)
                             : std::vector<Sigma2Rep>{};

    json table = json::array();
    for (const auto& I : requested_subsets(args.subsets, d)) {
      json row{{"subset", I.to_string()}, {"size", I.size()}};
      row["value"] = number_or_null(*fn == SetFn::Mhr ? m_hr(gamma, I) : sigma2(gamma, I));
      if (I.size() >= 2 && (!mhr_reps.empty() || !s2_reps.empty())) {
        json reps = json::object();
        json skipped = json::array();
        auto attempt = [&](std::string_view name, auto&& compute) {
          try {
            reps[std::string(name)] = number_or_null(compute());
          } catch (const Error& e) {
            if (e.code() != ErrorCode::UnsupportedSize) throw;
            skipped.push_back(std::string(name));
          }
        };
        for (auto r : mhr_reps) attempt(to_string(r), [&] { return m_hr_rep(gamma, I, r); });
        for (auto r : s2_reps) attempt(to_string(r), [&] { return sigma2_rep(gamma, I, r); });
        row["reps"] = reps;
        if (!skipped.empty()) row["reps_skipped_for_size"] = skipped;
      }
      table.push_back(row);
    }
    auto report = make_report(ctx, env);
    report["results"] = {{"fn", args.fn}, {"d", d}, {"values", table}};
    return emit(ctx, std::move(report), kExitOk);
  });
}

// ---------------------------------------------------------------------- ci

struct CiArgs {
  std::string file, A, B, C;
  std::string method = "auto";
};

int verdict_exit(Verdict v) {
  switch (v) {
    case Verdict::Holds: return kExitOk;
    case Verdict::Fails: return kExitNegative;
    case Verdict::Indeterminate: return kExitIndeterminate;
  }
  return kExitIndeterminate;
}

int cmd_ci(const Context& ctx, const CiArgs& args) {
  Envelope env{"ci"};
  return guarded(ctx, env, [&] {
    if (args.method != "auto" && args.method != "mhr" && args.method != "sigma2" && args.method != "singleton")
      throw UsageError("--method must be auto, mhr, sigma2 or singleton");
    const auto model = load_model(args.file, env);
    env.input["A"] = args.A;
    env.input["B"] = args.B;
    env.input["C"] = args.C;
    env.input["method"] = args.method;
    const auto gamma = model_variogram(model.file, ctx.tol);
    const int d = gamma.dim();
    const CIStatement s{parse_set(args.A, d, "--A"), parse_set(args.B, d, "--B"), parse_set(args.C, d, "--C")};
    if (s.C.empty()) throw UsageError("--C must be nonempty: the criteria are only established for C != {}");
    if (s.A.empty() || s.B.empty()) throw UsageError("--A and --B must be nonempty");
    if (!s.A.disjoint(s.B) || !s.A.disjoint(s.C) || !s.B.disjoint(s.C))
      throw UsageError("--A, --B and --C must be pairwise disjoint");

    json results{{"statement", s.to_string()}};
    Verdict final_verdict = Verdict::Indeterminate;
    if (args.method == "singleton") {
      if (s.A.size() != 1 || s.B.size() != 1) throw UsageError("--method singleton needs |A| = |B| = 1");
      const auto v = ci_singleton(gamma, s.A.elements()[0], s.B.elements()[0], s.C, ctx.tol);
      results["singleton"] = to_json(v);
      final_verdict = v.verdict;
    } else if (args.method == "mhr") {
      const auto v = ci_general_mhr(gamma, s, ctx.tol);
      results["mhr"] = to_json(v);
      final_verdict = v.verdict;
    } else if (args.method == "sigma2") {
      const auto v = ci_sigma2(gamma, s, ctx.tol);
      results["sigma2"] = to_json(v);
      final_verdict = v.verdict;
    } else {
      const auto mhr = ci_general_mhr(gamma, s, ctx.tol);
      const auto s2 = ci_sigma2(gamma, s, ctx.tol);
      results["mhr"] = to_json(mhr);
      results["sigma2"] = to_json(s2);
      final_verdict = mhr.verdict;
      const bool comparable = s2.applicable && s2.verdict != Verdict::Indeterminate && mhr.verdict != Verdict::Indeterminate;
      results["methods_compared"] = comparable;
      if (comparable && s2.verdict != mhr.verdict) {
        auto payload = mhr;
        payload.notes.push_back("sigma2 criterion gives " + std::string(to_string(s2.verdict)));
        throw CriterionDisagreement(payload);
      }
    }
    results["verdict"] = to_string(final_verdict);
    auto report = make_report(ctx, env);
    report["results"] = results;
    return emit(ctx, std::move(report), verdict_exit(final_verdict));
  });
}

// ------------------------------------------------------------------ markov

struct MarkovArgs {
  std::string file;
  std::string graph;
  int max_d = kDefaultGlobalMarkovMaxD;
};

int cmd_markov(const Context& ctx, const MarkovArgs& args) {
  Envelope env{"markov"};
  return guarded(ctx, env, [&] {
    const auto model = load_model(args.file, env);
    env.input["graph"] = args.graph;
    env.input["max_d"] = args.max_d;
    const auto gamma = model_variogram(model.file, ctx.tol);
    json results{{"pairwise_graph", to_json(pairwise_markov_graph(gamma, ctx.tol))}};
    int code = kExitOk;
    if (!args.graph.empty()) {
      MarkovGraph g;
      try {
        g = MarkovGraph::parse(args.graph, gamma.dim());
      } catch (const Error& e) {
        throw UsageError(std::string("--graph: ") + e.what());
      }
      const auto sweep = check_global_markov(gamma, g, args.max_d, ctx.tol);
      results["graph"] = to_json(g);
      results["global_markov"] = to_json(sweep);
      if (!sweep.passes()) code = sweep.violations.empty() ? kExitDisagreement : kExitNegative;
    }
    auto report = make_report(ctx, env);
    report["results"] = results;
    return emit(ctx, std::move(report), code);
  });
}

// --------------------------------------------------------------------- gen

struct GenArgs {
  std::string mode = "points";
  int d = 0;
  std::uint64_t seed = 0;
  std::string graph;
};

int cmd_gen(const Context& ctx, const GenArgs& args) {
  Envelope env{"gen"};
  args_input(env, {{"mode", args.mode}, {"d", args.d}, {"seed", args.seed}, {"graph", args.graph}});
  return guarded(ctx, env, [&] {
    Rng rng(args.seed);
    ModelFile model;
    if (args.mode == "points") {
      if (!args.graph.empty()) throw UsageError("--graph only applies to --mode laplacian");
      if (args.d < 2) throw UsageError("--d must be at least 2");
      const auto gamma = random_point_variogram(args.d, rng);
      model = {args.d, ModelKind::Variogram, gamma.matrix().dense(),
               "points-d" + std::to_string(args.d) + "-seed" + std::to_string(args.seed)};
    } else if (args.mode == "laplacian") {
      MarkovGraph g;
      if (args.graph.empty()) {
        if (args.d < 2) throw UsageError("--d must be at least 2");
        g = random_connected_graph(args.d, rng);
      } else {
        g = MarkovGraph::parse(args.graph, args.d);
      }
      if (g.num_vertices() < 2) throw UsageError("graph needs at least 2 vertices");
      if (!g.connected()) throw Error(ErrorCode::BadGraph, "graph must be connected");
      const auto weighted = with_random_weights(g, rng);
      model = {g.num_vertices(), ModelKind::Precision, weighted.laplacian().dense(),
               "laplacian-" + (args.graph.empty() ? std::string("random") : args.graph) + "-seed" +
                   std::to_string(args.seed)};
    } else {
      throw UsageError("--mode must be points or laplacian");
    }
    *ctx.out << to_json(model).dump(2) << '\n';
    return int(kExitOk);
  });
}

// --------------------------------------------------------------- elliptope

struct ElliptopeArgs {
  int n = 1000;
  std::uint64_t seed = 0;
  std::string filters;
  std::string out;
  bool normalize = false;
  std::string excluded_out;
  int excluded_n = 1000;
};

int cmd_elliptope(const Context& ctx, const ElliptopeArgs& args) {
  Envelope env{"elliptope"};
  args_input(env, {{"n", args.n},
                   {"seed", args.seed},
                   {"filters", args.filters},
                   {"out", args.out},
                   {"normalize", args.normalize},
                   {"excluded_out", args.excluded_out},
                   {"excluded_n", args.excluded_n}});
  return guarded(ctx, env, [&] {
    if (args.n <= 0) throw UsageError("--n must be positive");
    SampleFilters filters;
    std::stringstream ss(args.filters);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item == "emtp2") filters.emtp2 = true;
      else if (item == "boundary") filters.boundary_only = true;
      else if (!item.empty()) throw UsageError("unknown filter \"" + item + "\" (emtp2, boundary)");
    }
    const auto sample = sample_f3(args.n, args.seed, filters, args.normalize, ctx.tol);

    std::ofstream csv(args.out);
    if (!csv) throw UsageError("cannot write " + args.out);
    write_csv_header(csv);
    for (const auto& pt : sample.points) write_csv_row(csv, pt);
    if (!csv) throw UsageError("write failed for " + args.out);

    int emtp2 = 0, boundary = 0;
    for (const auto& pt : sample.points) {
      emtp2 += pt.emtp2;
      boundary += pt.flag == BoundaryFlag::Boundary;
    }
    json results{{"draws", sample.draws},
                 {"accepted", sample.accepted},
                 {"acceptance_rate", double(sample.accepted) / sample.draws},
                 {"emitted", sample.passed_filters},
                 {"emitted_emtp2", emtp2},
                 {"emitted_boundary", boundary},
                 {"filters", {{"emtp2", filters.emtp2}, {"boundary", filters.boundary_only}}},
                 {"normalized", args.normalize},
                 {"csv", args.out}};
    if (!args.excluded_out.empty()) {
      if (args.excluded_n <= 0) throw UsageError("--excluded-n must be positive");
      const auto locus = sample_excluded_locus(args.excluded_n, args.seed, ctx.tol);
      std::ofstream ex(args.excluded_out);
      if (!ex) throw UsageError("cannot write " + args.excluded_out);
      write_csv_header(ex);
      for (const auto& pt : locus) write_csv_row(ex, pt);
      results["excluded"] = {{"csv", args.excluded_out}, {"points", locus.size()}};
    }
    auto report = make_report(ctx, env);
    report["results"] = results;
    return emit(ctx, std::move(report), kExitOk);
  });
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Context ctx;
  ctx.out = &out;
  ctx.err = &err;
  if (const char* env_tol = std::getenv("HRMOD_TOL"); env_tol && *env_tol) {
    char* end = nullptr;
    const double t = std::strtod(env_tol, &end);
    if (*end != '\0' || !(t > 0.0)) {
      err << "hrmod: HRMOD_TOL must be a positive number\n";
      return kExitUsage;
    }
    ctx.tol.rel = t;
    ctx.tol_source = "env";
  }

  CLI::App app{"Hüsler–Reiss set functions, extremal conditional independence and elliptope tools", "hrmod"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  double tol_flag = 0.0;
  auto* tol_opt = app.add_option("--tol", tol_flag, "relative tolerance (default 1e-9 or $HRMOD_TOL)")
                      ->check(CLI::PositiveNumber);

  std::string validate_file;
  auto* validate = app.add_subcommand("validate", "check a model file");
  validate->add_option("file", validate_file, "model JSON")->required();

  SetfnArgs setfn_args;
  auto* setfn = app.add_subcommand("setfn", "evaluate m^HR or sigma2 on subsets");
  setfn->add_option("file", setfn_args.file, "model JSON")->required();
  setfn->add_option("--fn", setfn_args.fn, "mhr or sigma2")->capture_default_str();
  setfn->add_option("--subsets", setfn_args.subsets, "all, or 1-based lists separated by ';' (e.g. \"1,2,4;2,4\")")
      ->capture_default_str();
  setfn->add_option("--reps", setfn_args.reps, "default, all, or comma list of representation names");

  CiArgs ci_args;
  auto* ci = app.add_subcommand("ci", "decide Y_A _||_ Y_B | Y_C");
  ci->add_option("file", ci_args.file, "model JSON")->required();
  ci->add_option("--A", ci_args.A, "1-based comma list")->required();
  ci->add_option("--B", ci_args.B, "1-based comma list")->required();
  ci->add_option("--C", ci_args.C, "1-based comma list")->required();
  ci->add_option("--method", ci_args.method, "auto, mhr, sigma2 or singleton")->capture_default_str();

  MarkovArgs markov_args;
  auto* markov = app.add_subcommand("markov", "pairwise Markov graph and global Markov check");
  markov->add_option("file", markov_args.file, "model JSON")->required();
  markov->add_option("--graph", markov_args.graph, "cycle4, path5, ... or 1-based edge list \"1-2,2-3\"");
  markov->add_option("--max-d", markov_args.max_d, "largest dimension for the sweep")->capture_default_str();

  GenArgs gen_args;
  auto* gen = app.add_subcommand("gen", "generate a random model file");
  gen->add_option("--mode", gen_args.mode, "points or laplacian")->capture_default_str();
  gen->add_option("--d", gen_args.d, "dimension");
  gen->add_option("--seed", gen_args.seed, "random seed")->capture_default_str();
  gen->add_option("--graph", gen_args.graph, "graph for laplacian mode (default: random connected)");

  ElliptopeArgs ell_args;
  auto* ell = app.add_subcommand("elliptope", "sample the three-dimensional Hüsler–Reiss elliptope");
  ell->add_option("--n", ell_args.n, "number of draws from [0,4]^3")->capture_default_str();
  ell->add_option("--seed", ell_args.seed, "random seed")->capture_default_str();
  ell->add_option("--filters", ell_args.filters, "comma list of emtp2, boundary");
  ell->add_option("--out", ell_args.out, "CSV output path")->required();
  ell->add_flag("--normalize", ell_args.normalize, "rescale accepted points to sigma2 = 1");
  ell->add_option("--excluded-out", ell_args.excluded_out, "CSV path for the excluded boundary locus");
  ell->add_option("--excluded-n", ell_args.excluded_n, "points on the excluded locus")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  if (tol_opt->count() > 0) {
    ctx.tol.rel = tol_flag;
    ctx.tol_source = "flag";
  }

  if (*validate) return cmd_validate(ctx, validate_file);
  if (*setfn) return cmd_setfn(ctx, setfn_args);
  if (*ci) return cmd_ci(ctx, ci_args);
  if (*markov) return cmd_markov(ctx, markov_args);
  if (*gen) return cmd_gen(ctx, gen_args);
  if (*ell) return cmd_elliptope(ctx, ell_args);
  return kExitUsage;
}

}  // namespace hrmod::cli
