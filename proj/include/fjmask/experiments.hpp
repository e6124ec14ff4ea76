#ifndef FJMASK_EXPERIMENTS_HPP
#define FJMASK_EXPERIMENTS_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace fjmask {

enum class SweptParameter { kPhi, kSusceptibilityMidpoint, kDegree };

std::string swept_parameter_name(SweptParameter p);
SweptParameter swept_parameter_from_name(const std::string& name);

struct BaseParams {
  int n = 100;
  int d = 10;
  double phi = 0.3;
  double eps = 1e-4;
  double lambda_lo = 0.0;
  double lambda_hi = 1.0;
  long t_max = 200000;
};

struct SweepConfig {
  BaseParams base;
  SweptParameter swept = SweptParameter::kPhi;
  std::vector<double> values;
  int trials = 1;
  std::uint64_t seed = 0;

  void validate() const;
  std::string to_json() const;
  static SweepConfig from_json(const std::string& text);
};

struct TrialOutcome {
  double error = 0.0;   // +inf allowed
  bool excluded = false;
  std::string reason;   // set when excluded
};

// One end-to-end sample: network -> system -> masked run -> observations of
// agent 0 -> information matrix -> estimate error. Pure function of its
// arguments; unstable or non-converged trials come back excluded.
TrialOutcome run_trial(const BaseParams& base, SweptParameter swept,
                       double value, std::uint64_t trial_seed);

struct ValueSummary {
  double swept_value = 0.0;
  int count = 0;            // trials that produced an error (incl. infinite)
  int excluded = 0;
  double fraction_infinite = 0.0;
  // Quartiles by linear interpolation and the mean, over finite errors only.
  double min = 0.0, q1 = 0.0, median = 0.0, q3 = 0.0, max = 0.0, mean = 0.0;
};

struct SweepResult {
  std::vector<double> values;
  std::vector<std::vector<TrialOutcome>> outcomes;  // [value][trial]

  std::string to_csv() const;  // swept_value,trial,estimate_error
};

// trials x values independent trials with per-trial keyed seeding; the
// result is identical for any worker count.
SweepResult run_sweep(const SweepConfig& cfg, int workers = 1);

std::vector<ValueSummary> summarize(const SweepResult& result);

std::string summary_to_csv(const std::vector<ValueSummary>& summary);

// Linear-interpolation quantile of a sorted sample.
double interpolated_quantile(const std::vector<double>& sorted, double q);

}  // namespace fjmask

#endif
