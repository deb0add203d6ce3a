// qaw: numerical workbench for weights on R^n -- classification of
// quasi-analytic weights, moment sequences, Ostrowski constructions,
// pathological sequence generation, measure determinacy, and the
// weighted-approximation lab.
//
// stdout carries machine-readable JSON only; diagnostics go to stderr.
// Exit codes: 0 definite verdict / successful run, 2 inconclusive, 1 error.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "qaw/approx.hpp"
#include "qaw/classifier.hpp"
#include "qaw/determinacy.hpp"
#include "qaw/errors.hpp"
#include "qaw/pathology.hpp"
#include "qaw/report.hpp"
#include "qaw/weight_json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace qaw;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_artifact(const std::string& out_dir, const std::string& name,
                    const std::string& content) {
  if (out_dir.empty()) return;
  fs::create_directories(out_dir);
  fs::path p = fs::path(out_dir) / name;
  std::ofstream out(p);
  if (!out) throw Error("cannot write artifact: " + p.string());
  out << content;
  std::cerr << "wrote " << p.string() << "\n";
}

struct GridArg {
  double radius = 0.0;  // 0: derive from the weight
  std::size_t count = 2001;
};

GridArg parse_grid(const std::string& s) {
  GridArg g;
  if (s.empty()) return g;
  auto colon = s.find(':');
  if (colon == std::string::npos)
    throw Error("--grid expects RANGE:COUNT, e.g. 20:2001");
  g.radius = std::stod(s.substr(0, colon));
  g.count = static_cast<std::size_t>(std::stoul(s.substr(colon + 1)));
  if (!(g.radius > 0.0) || g.count < 16)
    throw Error("--grid expects a positive range and >= 16 points");
  return g;
}

std::vector<BasisSpec> load_bases(const std::string& path) {
  if (path.empty()) return {};
  json j = json::parse(read_file(path));
  std::vector<Vec> vs;
  for (const auto& row : j) vs.push_back(row.get<Vec>());
  return {BasisSpec(std::move(vs))};
}

int exit_code_for(WeightClass cls) {
  return cls == WeightClass::Inconclusive ? 2 : 0;
}

TargetFn named_target(const std::string& name) {
  if (name == "runge") return [](double t) { return 1.0 / (1.0 + t * t); };
  if (name == "sin") return [](double t) { return std::sin(t); };
  if (name == "enveloped_sin")
    return [](double t) {
      return std::sin(t) * std::exp(-(t / 60.0) * (t / 60.0));
    };
  if (name == "bump") return [](double t) { return std::exp(-0.5 * t * t); };
  if (name == "constant") return [](double) { return 1.0; };
  throw Error("unknown target '" + name +
              "' (runge|sin|enveloped_sin|bump|constant)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qaw: quasi-analytic weight workbench"};
  app.require_subcommand(1);
  app.fallthrough();  // app-level flags remain valid after a subcommand

  std::string weight_file, measure_file, basis_file, out_dir, grid_arg;
  std::string target_name = "runge", family = "poly";
  int max_m = 60, max_degree = 30, blocks = 2, k_sequences = 2;
  long long seed = 0;
  double rtol = 1e-9;

  app.add_option("--seed", seed,
                 "seed for randomized property sweeps (recorded)");

  auto add_common = [&](CLI::App* cmd, bool needs_weight) {
    auto* opt = cmd->add_option("--weight", weight_file, "weight-spec JSON");
    if (needs_weight) opt->required();
    cmd->add_option("--out", out_dir, "output directory for CSV/SVG");
    cmd->add_option("--rtol", rtol, "relative tolerance override");
  };

  CLI::App* classify_cmd = app.add_subcommand("classify", "classify a weight");
  add_common(classify_cmd, true);
  classify_cmd->add_option("--basis", basis_file, "candidate basis JSON");
  classify_cmd->add_option("--max-m", max_m, "series test order");

  CLI::App* moments_cmd =
      app.add_subcommand("moments", "moment sequence M_w(v, m)");
  add_common(moments_cmd, true);
  moments_cmd->add_option("--basis", basis_file, "basis JSON");
  moments_cmd->add_option("--max-m", max_m, "highest order");

  CLI::App* regularize_cmd =
      app.add_subcommand("regularize", "log-log convex regularization");
  add_common(regularize_cmd, true);
  regularize_cmd->add_option("--grid", grid_arg, "s-grid RANGE:COUNT");

  CLI::App* pathology_cmd =
      app.add_subcommand("pathology", "tangentialized counterexamples");
  CLI::App* path_seq = pathology_cmd->add_subcommand(
      "sequences", "generate the tangentialized pair");
  CLI::App* path_unique = pathology_cmd->add_subcommand(
      "unique-basis", "unique-basis weight evidence");
  CLI::App* path_sum =
      pathology_cmd->add_subcommand("sum", "sum counterexample");
  for (CLI::App* c : {path_seq, path_unique, path_sum}) {
    c->add_option("--blocks", blocks, "number of tangentialized blocks");
    c->add_option("--k", k_sequences, "number of sequences");
    c->add_option("--max-m", max_m, "export window");
    c->add_option("--out", out_dir, "output directory");
  }

  CLI::App* determinacy_cmd =
      app.add_subcommand("determinacy", "integral criterion for a measure");
  add_common(determinacy_cmd, true);
  determinacy_cmd->add_option("--measure", measure_file, "measure JSON")
      ->required();

  CLI::App* approx_cmd =
      app.add_subcommand("approx", "weighted approximation lab");
  add_common(approx_cmd, true);
  approx_cmd->add_option("--family", family, "poly or trig");
  approx_cmd->add_option("--max-degree", max_degree, "schedule endpoint");
  approx_cmd->add_option("--grid", grid_arg, "grid RANGE:COUNT");
  approx_cmd->add_option("--target", target_name,
                         "runge|sin|enveloped_sin|bump|constant");

  CLI::App* hall_cmd =
      app.add_subcommand("hall", "Hall integral on the raw weight");
  add_common(hall_cmd, true);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*classify_cmd) {
      WeightExpr w = parse_weight_spec(read_file(weight_file));
      ClassifyOptions opts;
      opts.series_m_max = max_m;
      opts.moments.rtol = rtol;
      Verdict v = classify(w, load_bases(basis_file), opts);
      std::string out = verdict_to_json(v);
      std::cout << out << "\n";
      write_artifact(out_dir, "verdict.json", out);
      return exit_code_for(v.cls);
    }

    if (*moments_cmd) {
      WeightExpr w = parse_weight_spec(read_file(weight_file));
      std::vector<BasisSpec> bases = load_bases(basis_file);
      BasisSpec basis =
          bases.empty() ? BasisSpec::standard(w.dimension()) : bases[0];
      MomentOptions mopts;
      mopts.rtol = rtol;
      json j;
      j["max_m"] = max_m;
      json per_vector = json::array();
      for (std::size_t i = 0; i < basis.vectors.size(); ++i) {
        MomentSequence s =
            moment_sequence(w, basis.vectors[i], max_m, mopts);
        per_vector.push_back({{"vector", basis.vectors[i]},
                              {"log_values", s.log_values},
                              {"log_convex", s.log_convex}});
        write_artifact(out_dir, "moments_v" + std::to_string(i) + ".csv",
                       s.to_csv());
      }
      j["sequences"] = per_vector;
      std::cout << j.dump(2) << "\n";
      return 0;
    }

    if (*regularize_cmd) {
      WeightExpr w = parse_weight_spec(read_file(weight_file));
      RegularizationOptions ropts;
      GridArg g = parse_grid(grid_arg);
      if (g.radius > 0.0) {
        ropts.s_max = std::log(g.radius);
        ropts.points = g.count;
      }
      RegularizedWeight r = convex_regularization(w, ropts);
      json j;
      j["identically_zero"] = r.identically_zero();
      j["zero_tail"] = r.zero_tail();
      j["log_log_convex"] = r.is_log_log_convex();
      j["knots"] = r.knots().size();
      if (!r.identically_zero()) {
        j["right_slope"] = r.right_slope();
        write_artifact(out_dir, "regularized.csv", r.to_csv());
      }
      std::cout << j.dump(2) << "\n";
      return 0;
    }

    if (*path_seq) {
      TangentializedPair pair =
          tangentialize_sequences(k_sequences, blocks, max_m);
      std::cout << pair.to_json() << "\n";
      if (!out_dir.empty()) {
        std::int64_t hi = std::min<std::int64_t>(pair.blocks()[0].N_prime,
                                                 4096);
        for (int j = 1; j <= pair.k(); ++j)
          write_artifact(out_dir, "sequence_" + std::to_string(j) + ".csv",
                         pair.sequence_csv(j, hi));
      }
      return 0;
    }

    if (*path_unique) {
      TangentializedPair pair =
          tangentialize_sequences(k_sequences, blocks, max_m);
      json j;
      j["pair"] = json::parse(pair.to_json());
      json axes = json::array();
      for (int axis = 1; axis <= pair.k(); ++axis) {
        EvidenceRecord e = unique_basis_axis_evidence(pair, axis);
        axes.push_back({{"axis", axis},
                        {"conclusion", to_string(e.conclusion)},
                        {"rule", e.rule}});
      }
      j["axis_series"] = axes;
      Vec diag(static_cast<std::size_t>(pair.k()),
               1.0 / std::sqrt(static_cast<double>(pair.k())));
      EvidenceRecord cross = unique_basis_cross_evidence(pair, diag);
      j["cross_series"] = {{"vector", diag},
                           {"conclusion", to_string(cross.conclusion)},
                           {"rule", cross.rule}};
      j["summary"] =
          "quasi-analytic w.r.t. the standard basis only (up to scaling)";
      std::cout << j.dump(2) << "\n";
      return 0;
    }

    if (*path_sum) {
      TangentializedPair pair = tangentialize_sequences(2, blocks, max_m);
      SumCounterexample sc = sum_counterexample(pair);
      json j;
      j["summand_1"] = {{"conclusion", to_string(sc.w1_series.conclusion)},
                        {"rule", sc.w1_series.rule}};
      j["summand_2"] = {{"conclusion", to_string(sc.w2_series.conclusion)},
                        {"rule", sc.w2_series.rule}};
      j["sum"] = json::parse(verdict_to_json(sc.sum_verdict));
      std::cout << j.dump(2) << "\n";
      return exit_code_for(sc.sum_verdict.cls);
    }

    if (*determinacy_cmd) {
      WeightExpr w = parse_weight_spec(read_file(weight_file));
      MeasureSpec mu = MeasureSpec::parse_json(read_file(measure_file));
      ClassifyOptions opts;
      opts.series_m_max = max_m;
      DeterminacyReport r = integral_criterion(mu, w, opts);
      std::string out = determinacy_report_to_json(r);
      std::cout << out << "\n";
      write_artifact(out_dir, "determinacy.json", out);
      return r.certified
                 ? 0
                 : (r.integral.conclusion == Conclusion::Undetermined ? 2 : 0);
    }

    if (*approx_cmd) {
      WeightExpr w = parse_weight_spec(read_file(weight_file));
      GridArg g = parse_grid(grid_arg);
      std::vector<double> grid =
          g.radius > 0.0 ? chebyshev_points(-g.radius, g.radius, g.count)
                         : default_grid(w, g.count);
      std::vector<int> schedule;
      for (int s = 0; s <= max_degree; s = s == 0 ? 1 : 2 * s)
        schedule.push_back(s);
      if (schedule.back() != max_degree) schedule.push_back(max_degree);
      ApproxFamily fam =
          family == "trig" ? ApproxFamily::Trigonometric
                           : ApproxFamily::Polynomial;
      std::vector<double> spectral;
      if (fam == ApproxFamily::Trigonometric) {
        schedule.erase(schedule.begin());  // counts start at 1
        for (int i = 0; i < schedule.back(); ++i)
          spectral.push_back(static_cast<double>(i) / schedule.back());
      }
      std::vector<NamedTarget> targets = {
          {target_name, named_target(target_name)}};
      ApproxReport rep =
          density_experiment(w, targets, fam, schedule, grid, spectral);
      std::string out = approx_report_json(rep);
      std::cout << out << "\n";
      write_artifact(out_dir, "approx.csv", approx_report_csv(rep));
      write_artifact(out_dir, "approx.svg", approx_report_svg(rep));
      write_artifact(out_dir, "approx.json", out);
      return 0;
    }

    if (*hall_cmd) {
      WeightExpr w = parse_weight_spec(read_file(weight_file));
      EvidenceRecord ev = hall_test(w);
      json j = {{"kind", to_string(ev.kind)},
                {"conclusion", to_string(ev.conclusion)},
                {"rule", ev.rule},
                {"payload_summary",
                 std::vector<double>(ev.payload.begin(),
                                     ev.payload.begin() +
                                         std::min<std::size_t>(
                                             ev.payload.size(), 16))}};
      if (ev.conclusion == Conclusion::Converges)
        j["consequence"] = "polynomials are not dense in the associated space";
      std::cout << j.dump(2) << "\n";
      return ev.conclusion == Conclusion::Undetermined ? 2 : 0;
    }
  } catch (const ContradictionError& e) {
    std::cerr << "contradiction: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
