#include "mdist/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "mdist/errors.hpp"
#include "mdist/sampler.hpp"

namespace mdist::estimator {

namespace {

double log2n(index_t n) {
  return std::log2(static_cast<double>(std::max<index_t>(n, 2)));
}

void require_symmetric(const OraclePair& pair) {
  if (!pair.a->is_symmetric() || !pair.b->is_symmetric())
    throw std::invalid_argument(
        "the symmetric estimator needs symmetric matrices (use the arbitrary "
        "estimator or a mirrored view)");
}

void check_epsilon(double eps) {
  if (!(eps > 0.0 && eps <= 0.5))
    throw std::invalid_argument("epsilon must lie in (0, 1/2]");
}

}  // namespace

double EstimatorParams::eta(index_t n) const {
  return std::pow(static_cast<double>(std::max<index_t>(n, 2)),
                  -eta_exponent);
}

double EstimatorParams::psi(index_t n) const {
  if (psi_override > 0) return psi_override;
  const double l = log2n(n);
  return psi_constant * (l * l * l * l) / std::pow(epsilon, 4);
}

std::uint64_t EstimatorParams::gamma_size(index_t n, double T) const {
  const double l = log2n(n);
  const double v = gamma_multiplier * static_cast<double>(n) * l * l /
                   (epsilon * epsilon * std::sqrt(T));
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(v)));
}

int EstimatorParams::bucket_count(index_t n) const {
  const double r = ratio();
  int t = static_cast<int>(
      std::ceil(std::log(static_cast<double>(n)) / std::log(r)));
  t = std::max(t, 1);
  while (std::pow(r, t) < static_cast<double>(n)) ++t;
  return t + 1;  // top bucket absorbs values in [n, n*ratio)
}

double EstimatorParams::tau(std::uint64_t gamma, index_t n, double T) const {
  return (static_cast<double>(gamma) / static_cast<double>(n)) *
         std::sqrt(epsilon * T) / (tau_divisor * bucket_count(n));
}

bool EstimatorParams::conforming() const {
  return bucket_ratio_divisor == 50.0 && tau_divisor == 40.0 &&
         ss_divisor == 1600.0 && quit_slack_divisor == 10.0 &&
         sampler_constant == 50.0 && psi_constant == 1.0 &&
         psi_override == 0.0 && gamma_multiplier == 1.0 &&
         eta_exponent == 3.0 && !force_sampling;
}

EstimatorParams EstimatorParams::paper_defaults(double epsilon) {
  EstimatorParams p;
  p.epsilon = epsilon;
  return p;
}

EstimatorParams EstimatorParams::relaxed(index_t n, double epsilon) {
  EstimatorParams p;
  p.epsilon = epsilon;
  p.bucket_ratio_divisor = 8.0;
  p.tau_divisor = 8.0;
  p.sampler_constant = 8.0;
  const double l2 = log2n(n);
  p.psi_override = std::max(16.0, l2 * l2 / (epsilon * epsilon));
  // largest multiplier keeping |Gamma| <= n down to the smallest guess psi
  p.gamma_multiplier = epsilon * epsilon * std::sqrt(p.psi_override) /
                       (l2 * l2);
  return p;
}

void EstimatorParams::apply(const std::string& key, const std::string& value,
                            index_t n) {
  auto as_double = [&]() {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size())
      throw std::invalid_argument("bad numeric value for " + key);
    return v;
  };
  if (key == "preset") {
    if (value == "relaxed")
      *this = relaxed(n, epsilon);
    else if (value == "paper")
      *this = paper_defaults(epsilon);
    else
      throw std::invalid_argument("unknown preset: " + value);
  } else if (key == "epsilon")
    epsilon = as_double();
  else if (key == "bucket_ratio_divisor")
    bucket_ratio_divisor = as_double();
  else if (key == "tau_divisor")
    tau_divisor = as_double();
  else if (key == "ss_divisor")
    ss_divisor = as_double();
  else if (key == "quit_slack_divisor")
    quit_slack_divisor = as_double();
  else if (key == "sampler_constant")
    sampler_constant = as_double();
  else if (key == "psi_constant")
    psi_constant = as_double();
  else if (key == "psi_override")
    psi_override = as_double();
  else if (key == "gamma_multiplier")
    gamma_multiplier = as_double();
  else if (key == "eta_exponent")
    eta_exponent = as_double();
  else if (key == "force_sampling")
    force_sampling = (value == "1" || value == "true");
  else
    throw std::invalid_argument("unknown parameter key: " + key);
}

EstimatorParams EstimatorParams::from_file(const std::string& path,
                                           double epsilon, index_t n) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open params file: " + path);
  EstimatorParams p = paper_defaults(epsilon);
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    std::replace(line.begin(), line.end(), '=', ' ');
    std::istringstream ls(line);
    std::string key, value;
    if (!(ls >> key)) continue;
    if (!(ls >> value))
      throw std::invalid_argument("missing value for key: " + key);
    p.apply(key, value, n);
  }
  return p;
}

int bucket_index(double a_hat_value, double ratio) {
  if (!(ratio > 1.0)) throw std::invalid_argument("bucket ratio must be > 1");
  if (!(a_hat_value >= 1.0)) return 0;  // zero-bucket sentinel
  int k =
      static_cast<int>(std::floor(std::log(a_hat_value) / std::log(ratio))) +
      1;
  if (k < 1) k = 1;
  while (k > 1 && std::pow(ratio, k - 1) > a_hat_value) --k;
  while (std::pow(ratio, k) <= a_hat_value) ++k;
  return k;
}

EstimateReport guess_estimate(const OraclePair& pair,
                              const EstimatorParams& params, double T,
                              RngBundle& rngs, const Backend& backend) {
  check_epsilon(params.epsilon);
  require_symmetric(pair);
  const index_t n = pair.n();
  const double psi = params.psi(n);
  if (T < psi) throw GuessTooSmall(T, psi);

  const double ratio = params.ratio();
  const int t = params.bucket_count(n);
  const double eta = params.eta(n);
  const std::uint64_t gsize = params.gamma_size(n, T);

  rowdist::RowDistParams rp;
  rp.alpha = params.beta();
  rp.delta = eta;
  rp.allow_exact_path = !params.force_sampling;

  sampler::SamplerParams sp;
  sp.alpha = params.beta();
  sp.delta = eta;
  sp.subdivide_constant = params.sampler_constant;
  sp.row = rp;

  BucketTable bt;
  bt.t = t;
  bt.ratio = ratio;
  bt.a_hat.assign(n, -1.0);
  bt.buckets.assign(static_cast<std::size_t>(t) + 1, {});

  // each row's distance is estimated at most once per run
  std::vector<std::uint8_t> fetched(n, 0);
  auto fetch_distance = [&](index_t row) -> double {
    if (fetched[row]) return bt.a_hat[row];
    fetched[row] = 1;
    const double v = backend.row_dist
                         ? backend.row_dist(row)
                         : rowdist::estimate_row_distance(pair, row, rp, rngs);
    bt.a_hat[row] = v;
    return v;
  };

  const std::uint64_t q0 = pair.effective_binary_total();

  bt.gamma.reserve(gsize);
  for (std::uint64_t s = 0; s < gsize; ++s) {
    const auto row = static_cast<index_t>(rngs.gamma.below(n));
    bt.gamma.push_back(row);
    const int k = bucket_index(fetch_distance(row), ratio);
    if (k == 0) {
      bt.zero_bucket.push_back(row);
    } else {
      if (k > t) throw InternalError("bucket index beyond the top bucket");
      bt.buckets[k].push_back(row);
    }
  }

  bt.tau = params.tau(gsize, n, T);
  std::vector<char> is_large(static_cast<std::size_t>(t) + 1, 0);
  for (int k = 1; k <= t; ++k) {
    if (!bt.buckets[k].empty() &&
        static_cast<double>(bt.buckets[k].size()) >= bt.tau) {
      bt.large.push_back(k);
      is_large[k] = 1;
    } else {
      bt.small.push_back(k);
    }
  }

  double d_hat_l = 0.0;
  for (const int k : bt.large)
    d_hat_l += static_cast<double>(bt.buckets[k].size()) * std::pow(ratio, k);
  d_hat_l *= static_cast<double>(n) / static_cast<double>(gsize);

  const std::uint64_t q1 = pair.effective_binary_total();

  EstimateReport rep;
  double d_hat_s = 0.0;
  for (const int k : bt.large) {
    const auto& slots = bt.buckets[k];
    const std::uint64_t draws = slots.size();
    std::uint64_t counted_small = 0;
    for (std::uint64_t d = 0; d < draws; ++d) {
      const index_t row = slots[rngs.zk.below(draws)];
      index_t col = 0;
      bool sampled = false;
      for (int attempt = 0; attempt < 5 && !sampled; ++attempt) {
        try {
          col = backend.sample_col ? backend.sample_col(row)
                                   : sampler::approx_sample(pair, row, sp,
                                                            rngs);
          sampled = true;
        } catch (const sampler::EmptyRow&) {
          // the row had a nonzero (hence true) estimate; a missed draw has
          // vanishing probability
        }
      }
      if (!sampled) continue;
      const int kj = bucket_index(fetch_distance(col), ratio);
      if (kj > t) throw InternalError("bucket index beyond the top bucket");
      if (kj == 0 || !is_large[kj]) ++counted_small;
    }
    const double zeta =
        draws ? static_cast<double>(counted_small) / static_cast<double>(draws)
              : 0.0;
    if (!(zeta >= 0.0 && zeta <= 1.0))
      throw InternalError("zeta estimate outside [0,1]");
    rep.zeta_hat[k] = zeta;
    d_hat_s += zeta * static_cast<double>(draws) * std::pow(ratio, k);
  }
  d_hat_s *= static_cast<double>(n) / static_cast<double>(gsize);

  double max_zeta = 0.0;
  for (const auto& [k, z] : rep.zeta_hat) max_zeta = std::max(max_zeta, z);
  if (d_hat_s > max_zeta * d_hat_l * (1.0 + 1e-12) + 1e-9)
    throw InternalError("small-bucket estimate exceeds its trivial bound");

  const std::uint64_t q2 = pair.effective_binary_total();

  if (backend.observe_buckets) backend.observe_buckets(bt);

  rep.d_hat_l = d_hat_l;
  rep.d_hat_s = d_hat_s;
  rep.d_hat = d_hat_l + d_hat_s;
  rep.queries = {q1 - q0, q2 - q1, q2 - q0};
  rep.guess_trace = {};
  rep.conforming = params.conforming();
  rep.epsilon = params.epsilon;
  rep.n = n;
  rep.mode = "guess";
  return rep;
}

EstimateReport trivial_estimate(const OraclePair& pair,
                                const EstimatorParams& params,
                                RngBundle& rngs) {
  const index_t n = pair.n();
  rowdist::RowDistParams rp;
  rp.alpha = params.epsilon;
  rp.delta = std::pow(static_cast<double>(n), -10.0);
  // per-row work stays on the sampling path so the total keeps its
  // row-count-times-polylog query profile regardless of the distance
  rp.allow_exact_path = false;

  const std::uint64_t q0 = pair.effective_binary_total();
  double sum = 0.0;
  for (index_t i = 0; i < n; ++i)
    sum += rowdist::estimate_row_distance(pair, i, rp, rngs);
  const std::uint64_t q1 = pair.effective_binary_total();

  EstimateReport rep;
  rep.d_hat = rep.d_hat_l = sum;
  rep.d_hat_s = 0.0;
  rep.queries = {q1 - q0, 0, q1 - q0};
  rep.conforming = params.conforming();
  rep.epsilon = params.epsilon;
  rep.n = n;
  rep.mode = "trivial";
  return rep;
}

EstimateReport symm_estimate(const OraclePair& pair,
                             const EstimatorParams& params, RngBundle& rngs,
                             const Backend& backend) {
  check_epsilon(params.epsilon);
  require_symmetric(pair);
  const index_t n = pair.n();
  const double psi = params.psi(n);
  const double quit_factor = 1.0 + params.epsilon / params.quit_slack_divisor;

  std::vector<GuessStep> trace;
  PhaseQueries totals;
  double T = 0.5 * static_cast<double>(n) * static_cast<double>(n);
  while (T >= psi) {
    EstimateReport g = guess_estimate(pair, params, T, rngs, backend);
    totals.row_phase += g.queries.row_phase;
    totals.sampler_phase += g.queries.sampler_phase;
    totals.total += g.queries.total;
    const bool quit = T <= g.d_hat / quit_factor;
    trace.push_back({T, g.d_hat, quit ? "quit" : "continue"});
    if (quit) {
      g.guess_trace = std::move(trace);
      g.queries = totals;
      g.mode = "symmetric";
      return g;
    }
    T /= 2.0;
  }

  EstimateReport rep = trivial_estimate(pair, params, rngs);
  totals.row_phase += rep.queries.row_phase;
  totals.total += rep.queries.total;
  trace.push_back({T, rep.d_hat, "trivial"});
  rep.guess_trace = std::move(trace);
  rep.queries = totals;
  rep.mode = "symmetric";
  return rep;
}

EstimateReport arbitrary_estimate(MatrixOracle& a, MatrixOracle& b,
                                  const EstimatorParams& params,
                                  RngBundle& rngs, double eq_tol) {
  check_epsilon(params.epsilon);
  if (a.n() != b.n())
    throw std::invalid_argument("matrix dimensions must match");

  EstimatorParams half = params;
  half.epsilon = params.epsilon / 2.0;

  SymmetrizedOracle lower_a(a, MirrorMode::lower);
  SymmetrizedOracle lower_b(b, MirrorMode::lower);
  SymmetrizedOracle upper_a(a, MirrorMode::upper);
  SymmetrizedOracle upper_b(b, MirrorMode::upper);
  const OraclePair lower_pair{&lower_a, &lower_b, eq_tol};
  const OraclePair upper_pair{&upper_a, &upper_b, eq_tol};

  EstimateReport rl = symm_estimate(lower_pair, half, rngs);
  EstimateReport ru = symm_estimate(upper_pair, half, rngs);

  EstimateReport rep;
  rep.d_hat = 0.5 * (rl.d_hat + ru.d_hat);
  rep.d_hat_l = 0.5 * (rl.d_hat_l + ru.d_hat_l);
  rep.d_hat_s = 0.5 * (rl.d_hat_s + ru.d_hat_s);
  rep.queries.row_phase = rl.queries.row_phase + ru.queries.row_phase;
  rep.queries.sampler_phase =
      rl.queries.sampler_phase + ru.queries.sampler_phase;
  rep.queries.total = rl.queries.total + ru.queries.total;
  rep.guess_trace = rl.guess_trace;
  rep.guess_trace.insert(rep.guess_trace.end(), ru.guess_trace.begin(),
                         ru.guess_trace.end());
  rep.conforming = rl.conforming && ru.conforming;
  rep.epsilon = params.epsilon;
  rep.n = a.n();
  rep.mode = "arbitrary";
  return rep;
}

std::string report_to_json(const EstimateReport& r) {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["mode"] = r.mode;
  j["n"] = r.n;
  j["epsilon"] = r.epsilon;
  j["seed"] = r.seed;
  j["conforming"] = r.conforming;
  j["d_hat"] = r.d_hat;
  j["d_hat_l"] = r.d_hat_l;
  j["d_hat_s"] = r.d_hat_s;
  nlohmann::json zetas = nlohmann::json::object();
  for (const auto& [k, z] : r.zeta_hat) zetas[std::to_string(k)] = z;
  j["zeta_hat"] = zetas;
  j["queries"] = {{"row_phase", r.queries.row_phase},
                  {"sampler_phase", r.queries.sampler_phase},
                  {"effective_binary_total", r.queries.total}};
  nlohmann::json trace = nlohmann::json::array();
  for (const auto& s : r.guess_trace)
    trace.push_back({{"t_guess", s.t_guess},
                     {"m_hat", s.m_hat},
                     {"decision", s.decision}});
  j["guess_trace"] = trace;
  return j.dump(2) + "\n";
}

}  // namespace mdist::estimator
