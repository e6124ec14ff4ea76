#include "fjmask/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <thread>

#include "fjmask/attacker.hpp"
#include "fjmask/dynamics.hpp"
#include "fjmask/errors.hpp"
#include "fjmask/mask.hpp"
#include "fjmask/metrics.hpp"
#include "fjmask/rng.hpp"
#include "json.hpp"

namespace fjmask {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string format_g17(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string swept_parameter_name(SweptParameter p) {
  switch (p) {
    case SweptParameter::kPhi:
      return "phi";
    case SweptParameter::kSusceptibilityMidpoint:
      return "susceptibility_midpoint";
    case SweptParameter::kDegree:
      return "degree";
  }
  throw ParameterError("unknown swept parameter");
}

SweptParameter swept_parameter_from_name(const std::string& name) {
  if (name == "phi") return SweptParameter::kPhi;
  if (name == "susceptibility_midpoint")
    return SweptParameter::kSusceptibilityMidpoint;
  if (name == "degree") return SweptParameter::kDegree;
  throw ParameterError("unknown swept parameter: " + name);
}

void SweepConfig::validate() const {
  if (base.n < 1) throw ParameterError("n must be positive");
  if (base.d < 1 || base.d > base.n)
    throw ParameterError("degree must satisfy 1 <= d <= n");
  if (!(base.phi > 0.0)) throw ParameterError("phi must be positive");
  if (!(base.eps > 0.0)) throw ParameterError("eps must be positive");
  if (base.lambda_lo < 0.0 || base.lambda_hi > 1.0 ||
      base.lambda_lo > base.lambda_hi)
    throw ParameterError("susceptibility bounds must satisfy 0 <= lo <= hi <= 1");
  if (trials < 1) throw ParameterError("trials must be at least 1");
  if (values.empty()) throw ParameterError("sweep needs a nonempty value list");
  for (double v : values) {
    switch (swept) {
      case SweptParameter::kPhi:
        if (!(v > 0.0)) throw ParameterError("swept phi values must be positive");
        break;
      case SweptParameter::kSusceptibilityMidpoint:
        if (v < 0.05 || v > 0.95)
          throw ParameterError("susceptibility midpoints must lie in [0.05, 0.95]");
        break;
      case SweptParameter::kDegree:
        if (v < 1.0 || v > static_cast<double>(base.n) ||
            v != std::floor(v))
          throw ParameterError("swept degrees must be integers in [1, n]");
        break;
    }
  }
}

TrialOutcome run_trial(const BaseParams& base, SweptParameter swept,
                       double value, std::uint64_t trial_seed) {
  BaseParams p = base;
  double midpoint = -1.0;
  switch (swept) {
    case SweptParameter::kPhi:
      p.phi = value;
      break;
    case SweptParameter::kSusceptibilityMidpoint:
      midpoint = value;
      p.lambda_lo = std::max(0.0, midpoint - 0.05);
      p.lambda_hi = std::min(1.0, midpoint + 0.05);
      break;
    case SweptParameter::kDegree:
      p.d = static_cast<int>(value);
      break;
  }

  TrialOutcome out;
  try {
    const Network net =
        random_regular_network(p.n, p.d, mix_keys(trial_seed, 1));
    const FjSystem sys =
        random_fj_system(net, p.lambda_lo, p.lambda_hi, mix_keys(trial_seed, 2));
    if (!is_stable(sys)) {
      out.excluded = true;
      out.reason = "unstable";
      return out;
    }
    const MaskConfig mask(p.phi, mix_keys(trial_seed, 3));
    const MaskedRun run = simulate_masked(sys, mask, p.eps, p.t_max);
    if (!run.trajectory.converged) {
      out.excluded = true;
      out.reason = "non-converged";
      return out;
    }
    const KnowledgeSet knowledge(sys.net, sys.u, sys.lambda,
                                 run.trajectory.states);
    const auto obs = build_observations(knowledge, 0);
    std::vector<Eigen::VectorXd> rows;
    rows.reserve(obs.size());
    for (const auto& o : obs) rows.push_back(o.a);
    if (p.d == 1) {
      out.error = 0.0;  // single-neighbor row is pinned by row stochasticity
      return out;
    }
    out.error = estimate_error(information_matrix(rows, p.phi));
  } catch (const NumericalError& e) {
    out.excluded = true;
    out.reason = e.what();
  } catch (const ParameterError& e) {
    out.excluded = true;
    out.reason = e.what();
  }
  return out;
}

SweepResult run_sweep(const SweepConfig& cfg, int workers) {
  cfg.validate();
  if (workers < 1) throw ParameterError("worker count must be positive");
  SweepResult result;
  result.values = cfg.values;
  result.outcomes.assign(cfg.values.size(),
                         std::vector<TrialOutcome>(cfg.trials));

  const std::size_t total = cfg.values.size() * cfg.trials;
  std::atomic<std::size_t> cursor{0};
  auto work = [&]() {
    for (;;) {
      const std::size_t idx = cursor.fetch_add(1);
      if (idx >= total) return;
      const std::size_t vi = idx / cfg.trials;
      const std::size_t ti = idx % cfg.trials;
      const std::uint64_t trial_seed =
          mix_keys(cfg.seed, static_cast<std::uint64_t>(vi),
                   static_cast<std::uint64_t>(ti));
      result.outcomes[vi][ti] =
          run_trial(cfg.base, cfg.swept, cfg.values[vi], trial_seed);
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  return result;
}

std::string SweepResult::to_csv() const {
  std::ostringstream out;
  out << "swept_value,trial,estimate_error\n";
  for (std::size_t vi = 0; vi < values.size(); ++vi) {
    for (std::size_t ti = 0; ti < outcomes[vi].size(); ++ti) {
      const auto& o = outcomes[vi][ti];
      if (o.excluded) continue;
      out << format_g17(values[vi]) << "," << ti << ","
          << format_g17(o.error) << "\n";
    }
  }
  return out.str();
}

double interpolated_quantile(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) throw ParameterError("quantile of empty sample");
  if (sorted.size() == 1) return sorted.front();
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

std::vector<ValueSummary> summarize(const SweepResult& result) {
  if (result.values.empty()) throw ParameterError("empty sweep result");
  std::vector<ValueSummary> rows;
  rows.reserve(result.values.size());
  for (std::size_t vi = 0; vi < result.values.size(); ++vi) {
    ValueSummary s;
    s.swept_value = result.values[vi];
    std::vector<double> finite;
    int infinite = 0;
    for (const auto& o : result.outcomes[vi]) {
      if (o.excluded) {
        ++s.excluded;
        continue;
      }
      ++s.count;
      if (std::isinf(o.error))
        ++infinite;
      else
        finite.push_back(o.error);
    }
    s.fraction_infinite =
        s.count > 0 ? static_cast<double>(infinite) / s.count : 0.0;
    if (!finite.empty()) {
      std::sort(finite.begin(), finite.end());
      s.min = finite.front();
      s.q1 = interpolated_quantile(finite, 0.25);
      s.median = interpolated_quantile(finite, 0.5);
      s.q3 = interpolated_quantile(finite, 0.75);
      s.max = finite.back();
      double sum = 0.0;
      for (double e : finite) sum += e;
      s.mean = sum / static_cast<double>(finite.size());
    }
    rows.push_back(s);
  }
  return rows;
}

std::string summary_to_csv(const std::vector<ValueSummary>& summary) {
  std::ostringstream out;
  out << "swept_value,count,excluded,fraction_infinite,min,q1,median,q3,max,"
         "mean\n";
  for (const auto& s : summary) {
    out << format_g17(s.swept_value) << "," << s.count << "," << s.excluded
        << "," << format_g17(s.fraction_infinite) << "," << format_g17(s.min)
        << "," << format_g17(s.q1) << "," << format_g17(s.median) << ","
        << format_g17(s.q3) << "," << format_g17(s.max) << ","
        << format_g17(s.mean) << "\n";
  }
  return out.str();
}

std::string SweepConfig::to_json() const {
  nlohmann::ordered_json j;
  j["n"] = base.n;
  j["d"] = base.d;
  j["phi"] = base.phi;
  j["eps"] = base.eps;
  j["lambda_lo"] = base.lambda_lo;
  j["lambda_hi"] = base.lambda_hi;
  j["swept"] = swept_parameter_name(swept);
  j["values"] = values;
  j["trials"] = trials;
  j["seed"] = seed;
  return j.dump(2);
}

SweepConfig SweepConfig::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed sweep config: ") + e.what());
  }
  SweepConfig cfg;
  try {
    if (j.contains("n")) cfg.base.n = j["n"].get<int>();
    if (j.contains("d")) cfg.base.d = j["d"].get<int>();
    if (j.contains("phi")) cfg.base.phi = j["phi"].get<double>();
    if (j.contains("eps")) cfg.base.eps = j["eps"].get<double>();
    if (j.contains("lambda_lo")) cfg.base.lambda_lo = j["lambda_lo"].get<double>();
    if (j.contains("lambda_hi")) cfg.base.lambda_hi = j["lambda_hi"].get<double>();
    if (j.contains("swept"))
      cfg.swept = swept_parameter_from_name(j["swept"].get<std::string>());
    if (j.contains("values")) cfg.values = j["values"].get<std::vector<double>>();
    if (j.contains("trials")) cfg.trials = j["trials"].get<int>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("invalid sweep config field: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

}  // namespace fjmask
