#ifndef FJMASK_DYNAMICS_HPP
#define FJMASK_DYNAMICS_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "fjmask/network.hpp"

namespace fjmask {

// The tuple (W, lambda, u, x0) driving x_{t+1} = L W x_t + (I - L) u with
// L = diag(lambda). Validated on construction: W adapted to the network,
// rows summing to 1 within 1e-12, nonnegative entries, lambda in [0, 1].
struct FjSystem {
  FjSystem(Network net, Eigen::MatrixXd W, Eigen::VectorXd lambda,
           Eigen::VectorXd u, Eigen::VectorXd x0);

  Network net;
  Eigen::MatrixXd W;
  Eigen::VectorXd lambda;
  Eigen::VectorXd u;
  Eigen::VectorXd x0;

  int agent_count() const { return net.agent_count(); }

  std::string to_json(bool redact_weights = false) const;
  static FjSystem from_json(const std::string& text);
};

struct Trajectory {
  std::vector<Eigen::VectorXd> states;  // x_0 ... x_T
  bool converged = false;

  int final_step() const { return static_cast<int>(states.size()) - 1; }
  const Eigen::VectorXd& final_state() const { return states.back(); }

  std::string to_csv() const;
  static Trajectory from_csv(const std::string& text);
};

// One update of the recurrence.
Eigen::VectorXd step(const FjSystem& sys, const Eigen::VectorXd& x);

// Iterates until the max-abs change over one iteration drops below eps, or
// t_max steps have been taken. Records every state including x0.
Trajectory simulate(const FjSystem& sys, double eps, long t_max);

// Closed-form limit (I - L W)^{-1} (I - L) u via a pivoted linear solve.
Eigen::VectorXd limit_opinions(const FjSystem& sys);

// Graph criterion: every agent must be (indirectly) influenced, through
// nonzero weights, by some agent with lambda < 1.
bool is_stable(const FjSystem& sys);

// Numerical cross-check for is_stable.
double spectral_radius(const FjSystem& sys);

// Influence elements of each row drawn uniform(0,1) and normalized; lambda
// uniform in [lambda_lo, lambda_hi]; x0 = u with entries uniform(0,1).
FjSystem random_fj_system(const Network& net, double lambda_lo,
                          double lambda_hi, std::uint64_t seed);

// The 3-agent system printed in the identification example: dense graph,
// lambda = [0.4, 0.5, 0.6], x0 = u = [1, 2, 3].
FjSystem example1_system();

}  // namespace fjmask

#endif
