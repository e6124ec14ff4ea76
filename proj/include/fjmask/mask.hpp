#ifndef FJMASK_MASK_HPP
#define FJMASK_MASK_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "fjmask/dynamics.hpp"

namespace fjmask {

struct MaskConfig {
  double phi;          // exponential decay rate, > 0
  std::uint64_t seed;  // noise stream key
  bool zero_noise = false;  // test hook: forces V_t = 0

  MaskConfig(double phi_, std::uint64_t seed_, bool zero_noise_ = false);
};

struct MaskedRun {
  Trajectory trajectory;
  std::vector<Eigen::MatrixXd> noise_log;  // V_t, ground truth for tests
  std::vector<Eigen::MatrixXd> decoy_log;  // W_t, only kept on request

  // Noise log serialized for test use; never part of eavesdropper exports.
  std::string noise_log_to_json() const;
};

// Standard-normal draws at every influence element, exact zeros elsewhere.
// Row i comes from an independent substream keyed by (seed, i, t), so rows
// can be generated in any order or in parallel with identical results.
Eigen::MatrixXd draw_noise(const Network& net, std::uint64_t seed, long t);

// W + e^{-phi t} V_t. Deliberately not renormalized: the decoy need not be
// row stochastic or nonnegative.
Eigen::MatrixXd decoy_weights(const Eigen::MatrixXd& W, double phi, long t,
                              const Eigen::MatrixXd& noise);

// Runs x_{t+1} = L W_t x_t + (I - L) u with a fresh decoy each step, using
// the same stopping rule as simulate(). Non-finite states abort with a
// divergence error; hitting t_max reports converged = false.
MaskedRun simulate_masked(const FjSystem& sys, const MaskConfig& mask,
                          double eps, long t_max, bool keep_decoys = false);

}  // namespace fjmask

#endif
