// Batch front-end: generate instances, run the estimators, verify against
// the brute-force references, and emit machine-readable results.
//
// Exit codes: 0 success, 2 precondition violation, 3 I/O failure,
// 4 internal invariant breach.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "mdist/errors.hpp"
#include "mdist/estimator.hpp"
#include "mdist/instances.hpp"
#include "mdist/refcheck.hpp"

namespace {

using namespace mdist;

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t lane) {
  // splitmix64 step over (master, lane)
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (lane + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

estimator::EstimatorParams build_params(const std::string& preset,
                                        const std::string& params_file,
                                        double epsilon, index_t n) {
  estimator::EstimatorParams p;
  if (preset == "relaxed")
    p = estimator::EstimatorParams::relaxed(n, epsilon);
  else if (preset == "paper")
    p = estimator::EstimatorParams::paper_defaults(epsilon);
  else
    throw std::invalid_argument("unknown preset: " + preset);
  if (!params_file.empty()) {
    std::ifstream in(params_file);
    if (!in) throw std::runtime_error("cannot open params file: " + params_file);
    std::string line;
    while (std::getline(in, line)) {
      if (const auto hash = line.find('#'); hash != std::string::npos)
        line.erase(hash);
      std::replace(line.begin(), line.end(), '=', ' ');
      std::istringstream ls(line);
      std::string key, value;
      if (ls >> key >> value) p.apply(key, value, n);
    }
  }
  return p;
}

estimator::EstimateReport dispatch_mode(const std::string& mode,
                                        const Matrix& a, const Matrix& b,
                                        MatrixOracle& oa, MatrixOracle& ob,
                                        const estimator::EstimatorParams& p,
                                        double tol, RngBundle& rngs) {
  const OraclePair pair{&oa, &ob, tol};
  if (mode == "auto") {
    if (a.is_symmetric() && b.is_symmetric())
      return estimator::symm_estimate(pair, p, rngs);
    return estimator::arbitrary_estimate(oa, ob, p, rngs, tol);
  }
  if (mode == "symmetric") return estimator::symm_estimate(pair, p, rngs);
  if (mode == "trivial") return estimator::trivial_estimate(pair, p, rngs);
  if (mode.rfind("guess:", 0) == 0)
    return estimator::guess_estimate(pair, p, std::stod(mode.substr(6)),
                                     rngs);
  throw std::invalid_argument("unknown mode: " + mode);
}

struct EstimateArgs {
  std::string file_a, file_b;
  double epsilon = 0.25;
  std::uint64_t seed = 0;
  std::string mode = "auto";
  std::string preset = "relaxed";
  std::string params_file;
  std::string out_file;
  double real_tol = 1e-9;
};

int cmd_estimate(const EstimateArgs& args) {
  const Matrix a = Matrix::load(args.file_a);
  const Matrix b = Matrix::load(args.file_b);
  if (a.n() != b.n())
    throw std::invalid_argument("matrix dimensions must match");
  const bool any_real =
      a.mode() == EntryMode::real || b.mode() == EntryMode::real;
  const double tol = any_real ? args.real_tol : 0.0;
  const auto params =
      build_params(args.preset, args.params_file, args.epsilon, a.n());

  RngBundle rngs(args.seed);
  MatrixOracle oa(a), ob(b);
  auto rep = dispatch_mode(args.mode, a, b, oa, ob, params, tol, rngs);
  rep.seed = args.seed;

  const std::string json = estimator::report_to_json(rep);
  std::cout << json;
  if (!args.out_file.empty()) {
    std::ofstream out(args.out_file);
    if (!out) throw std::runtime_error("cannot write: " + args.out_file);
    out << json;
  }
  return 0;
}

struct GenArgs {
  std::string kind;
  std::uint64_t n = 0;
  std::uint64_t d = 0;
  std::uint64_t t = 0;
  int intersect = 0;
  std::uint64_t seed = 0;
  bool real_mode = false;
  std::string out_prefix;
};

int cmd_gen(const GenArgs& args) {
  instances::InstanceSpec spec;
  spec.kind = instances::kind_from_string(args.kind);
  spec.n = static_cast<index_t>(args.n);
  const bool planted = spec.kind == instances::Kind::planted_random ||
                       spec.kind == instances::Kind::planted_symmetric;
  spec.d_or_t = planted ? args.d : args.t;
  spec.seed = args.seed;
  spec.real_mode = args.real_mode;
  spec.intersect = args.intersect;
  const auto pair = instances::generate(spec);
  instances::write_pair(pair, spec, args.out_prefix);
  std::cout << "wrote " << args.out_prefix << "_a.mat " << args.out_prefix
            << "_b.mat " << args.out_prefix
            << ".json (true_distance=" << pair.true_distance << ")\n";
  return 0;
}

struct VerifyArgs {
  std::string file_a, file_b;
  std::string sidecar;
  double real_tol = 1e-9;
};

int cmd_verify(const VerifyArgs& args) {
  const Matrix a = Matrix::load(args.file_a);
  const Matrix b = Matrix::load(args.file_b);
  if (a.n() != b.n())
    throw std::invalid_argument("matrix dimensions must match");
  const index_t n = a.n();
  const bool any_real =
      a.mode() == EntryMode::real || b.mode() == EntryMode::real;
  const double tol = any_real ? args.real_tol : 0.0;

  // direct cell scan, independent of the per-row decomposition below
  std::uint64_t direct = 0;
  for (index_t i = 0; i < n; ++i)
    for (index_t j = 0; j < n; ++j) {
      const bool differs =
          (a.mode() == EntryMode::integer && b.mode() == EntryMode::integer)
              ? a.geti(i, j) != b.geti(i, j)
              : std::fabs(a.value(i, j) - b.value(i, j)) > tol;
      direct += differs;
    }

  std::uint64_t row_sum = 0, nonzero_rows = 0, max_row = 0;
  for (index_t i = 0; i < n; ++i) {
    const auto d = refcheck::exact_row_distance(a, b, i, tol);
    row_sum += d;
    nonzero_rows += (d > 0);
    max_row = std::max(max_row, d);
  }

  std::cout << "n: " << n << "\n"
            << "mode: " << (any_real ? "real" : "integer") << "\n"
            << "symmetric_a: " << (a.is_symmetric() ? "true" : "false")
            << "\n"
            << "symmetric_b: " << (b.is_symmetric() ? "true" : "false")
            << "\n"
            << "exact_distance: " << direct << "\n"
            << "row_distance_sum: " << row_sum << "\n"
            << "rows_with_mismatches: " << nonzero_rows << "\n"
            << "max_row_distance: " << max_row << "\n"
            << "row_decomposition_check: "
            << (direct == row_sum ? "pass" : "FAIL") << "\n";
  if (direct != row_sum)
    throw InternalError("cell scan and row decomposition disagree");

  if (!args.sidecar.empty()) {
    std::ifstream in(args.sidecar);
    if (!in) throw std::runtime_error("cannot open sidecar: " + args.sidecar);
    const auto j = nlohmann::json::parse(in);
    const auto want = j.at("true_distance").get<std::uint64_t>();
    std::cout << "sidecar_distance: " << want << " ("
              << (want == direct ? "match" : "MISMATCH") << ")\n";
    if (want != direct) return 2;
  }
  return 0;
}

struct SweepArgs {
  std::string config;
  std::string out_file;
  std::uint64_t trials_override = 0;
};

int cmd_sweep(const SweepArgs& args) {
  std::ifstream in(args.config);
  if (!in) throw std::runtime_error("cannot open config: " + args.config);
  nlohmann::json cfg;
  try {
    cfg = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("bad sweep config: ") + e.what());
  }
  if (!cfg.is_array())
    throw std::invalid_argument("sweep config must be a JSON array");

  std::ostringstream csv;
  csv << "name,kind,n,trial,seed,true_d,mode,epsilon,conforming,d_hat,"
         "rel_error,queries_row_phase,queries_sampler_phase,queries_total\n";

  char buf[64];
  for (const auto& entry : cfg) {
    const std::string name = entry.value("name", std::string("entry"));
    const std::string kind = entry.at("kind").get<std::string>();
    const auto n = entry.at("n").get<std::uint64_t>();
    const double epsilon = entry.value("epsilon", 0.25);
    const std::string mode = entry.value("mode", std::string("auto"));
    const auto trials = args.trials_override
                            ? args.trials_override
                            : entry.value("trials", std::uint64_t{1});
    const auto master = entry.value("seed", std::uint64_t{0});
    const std::string preset = entry.value("preset", std::string("relaxed"));

    for (std::uint64_t trial = 0; trial < trials; ++trial) {
      instances::InstanceSpec spec;
      spec.kind = instances::kind_from_string(kind);
      spec.n = static_cast<index_t>(n);
      const bool planted = spec.kind == instances::Kind::planted_random ||
                           spec.kind == instances::Kind::planted_symmetric;
      spec.d_or_t = planted ? entry.value("d", std::uint64_t{0})
                            : entry.value("t", std::uint64_t{0});
      spec.intersect = entry.value("intersect", 0);
      spec.real_mode = entry.value("real", false);
      spec.seed = derive_seed(master, 2 * trial);
      const auto pair = instances::generate(spec);

      estimator::EstimatorParams params =
          build_params(preset, "", epsilon, static_cast<index_t>(n));
      if (entry.contains("params")) {
        for (const auto& [key, value] : entry.at("params").items()) {
          const std::string sval =
              value.is_string() ? value.get<std::string>() : value.dump();
          params.apply(key, sval, static_cast<index_t>(n));
        }
      }

      const std::uint64_t est_seed = derive_seed(master, 2 * trial + 1);
      RngBundle rngs(est_seed);
      MatrixOracle oa(pair.a), ob(pair.b);
      const double tol = spec.real_mode ? 1e-9 : 0.0;
      const auto rep =
          dispatch_mode(mode, pair.a, pair.b, oa, ob, params, tol, rngs);

      const double rel =
          std::fabs(rep.d_hat - static_cast<double>(pair.true_distance)) /
          std::max<double>(1.0, static_cast<double>(pair.true_distance));
      csv << name << ',' << kind << ',' << n << ',' << trial << ','
          << est_seed << ',' << pair.true_distance << ',' << mode << ',';
      std::snprintf(buf, sizeof buf, "%.6g", epsilon);
      csv << buf << ',' << (rep.conforming ? 1 : 0) << ',';
      std::snprintf(buf, sizeof buf, "%.10g", rep.d_hat);
      csv << buf << ',';
      std::snprintf(buf, sizeof buf, "%.6g", rel);
      csv << buf << ',' << rep.queries.row_phase << ','
          << rep.queries.sampler_phase << ',' << rep.queries.total << '\n';
    }
  }

  if (args.out_file.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream out(args.out_file);
    if (!out) throw std::runtime_error("cannot write: " + args.out_file);
    out << csv.str();
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "sublinear matrix-distance estimation over inner-product query "
      "oracles"};
  app.require_subcommand(1);

  GenArgs ga;
  auto* gen =
      app.add_subcommand("gen", "generate a matrix pair with a known "
                                "distance");
  gen->add_option("--kind", ga.kind,
                  "planted_random | planted_symmetric | disjointness_ip | "
                  "disjointness_decip")
      ->required();
  gen->add_option("--n", ga.n, "matrix side length")->required();
  gen->add_option("--d", ga.d, "planted distance (planted kinds)");
  gen->add_option("--t", ga.t, "block parameter (disjointness kinds)");
  gen->add_option("--intersect", ga.intersect,
                  "number of common 1-positions (disjointness kinds)");
  gen->add_option("--seed", ga.seed, "generator seed");
  gen->add_flag("--real", ga.real_mode, "real-valued entries");
  gen->add_option("--out", ga.out_prefix, "output path prefix")->required();

  EstimateArgs ea;
  auto* est = app.add_subcommand(
      "estimate", "estimate the distance between two matrix files");
  est->add_option("--a", ea.file_a, "first matrix file")->required();
  est->add_option("--b", ea.file_b, "second matrix file")->required();
  est->add_option("--epsilon", ea.epsilon, "accuracy target in (0, 1/2)");
  est->add_option("--seed", ea.seed, "estimator seed");
  est->add_option("--mode", ea.mode, "auto | symmetric | trivial | guess:T");
  est->add_option("--preset", ea.preset, "relaxed | paper");
  est->add_option("--params", ea.params_file, "key-value parameter document");
  est->add_option("--out", ea.out_file, "also write the JSON report here");
  est->add_option("--tol", ea.real_tol, "real-mode comparison tolerance");

  VerifyArgs va;
  auto* ver = app.add_subcommand(
      "verify", "exact distances and consistency checks");
  ver->add_option("--a", va.file_a, "first matrix file")->required();
  ver->add_option("--b", va.file_b, "second matrix file")->required();
  ver->add_option("--sidecar", va.sidecar, "compare against a sidecar");
  ver->add_option("--tol", va.real_tol, "real-mode comparison tolerance");

  SweepArgs sa;
  auto* swp = app.add_subcommand("sweep", "run a batch of trials to CSV");
  swp->add_option("--config", sa.config, "JSON sweep description")->required();
  swp->add_option("--out", sa.out_file, "CSV output path (default stdout)");
  swp->add_option("--trials", sa.trials_override,
                  "override the per-entry trial count");

  try {
    app.parse(argc, argv);
    if (gen->parsed()) return cmd_gen(ga);
    if (est->parsed()) return cmd_estimate(ea);
    if (ver->parsed()) return cmd_verify(va);
    if (swp->parsed()) return cmd_sweep(sa);
    return 2;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const mdist::InternalError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
