#ifndef FJMASK_ATTACKER_HPP
#define FJMASK_ATTACKER_HPP

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "fjmask/metrics.hpp"
#include "fjmask/network.hpp"

namespace fjmask {

// Everything the eavesdropper holds: the graph, the public biases and
// susceptibilities, and the broadcast opinions x_0 ... x_T. Deliberately
// excludes W and the noise stream.
struct KnowledgeSet {
  KnowledgeSet(Network net, Eigen::VectorXd u, Eigen::VectorXd lambda,
               std::vector<Eigen::VectorXd> states);

  Network net;
  Eigen::VectorXd u;
  Eigen::VectorXd lambda;
  std::vector<Eigen::VectorXd> states;

  int horizon() const { return static_cast<int>(states.size()) - 1; }
};

// One timestep's linear restriction A_t w_t = b_t on the target row.
// Entries of a follow the canonical sorted neighbor order.
struct Observation {
  Eigen::VectorXd a;
  double b;
};

struct Identification {
  Eigen::VectorXd lambda_hat;
  Eigen::MatrixXd w_hat;
  // Rows with vanishing susceptibility cannot be split into lambda and W.
  std::vector<bool> identifiable;
};

struct EstimateReport {
  Eigen::VectorXd w_hat;
  std::optional<InfoMatrix> info;  // absent when d == 1
  Eigen::MatrixXd cov;             // empty when info is singular or absent
  double error = 0.0;
  bool fully_determined = false;   // d == 1: the simplex has one vertex
  // Weighted-residual objective after each active-set solve; must be
  // nondecreasing as constraints are added.
  std::vector<double> objective_trace;

  std::string to_json(int agent) const;
};

// Exact identification of an unmasked system from successive differences:
// solves LW on the difference matrices, then splits each row into lambda
// (its 1-norm) and the normalized influence row.
Identification identify_unmasked(const KnowledgeSet& k);

// A_t = neighbor opinions of the target at time t; b_t the rescaled update
// residual. Requires lambda > 0 for the target; covers t = 0 ... T-1.
std::vector<Observation> build_observations(const KnowledgeSet& k, int agent);

// Maximum-likelihood estimate of the target row under the decaying mask:
// equality-constrained weighted least squares solved through the nullspace
// reduction, then a restrict-only active-set loop for w >= 0.
EstimateReport mle_estimate(const std::vector<Observation>& obs, double phi);

}  // namespace fjmask

#endif
