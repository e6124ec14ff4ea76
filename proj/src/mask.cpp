#include "fjmask/mask.hpp"

#include <cmath>

#include "fjmask/errors.hpp"
#include "fjmask/rng.hpp"
#include "json.hpp"

namespace fjmask {

MaskConfig::MaskConfig(double phi_, std::uint64_t seed_, bool zero_noise_)
    : phi(phi_), seed(seed_), zero_noise(zero_noise_) {
  if (!(phi > 0.0)) throw ParameterError("decay rate phi must be positive");
}

Eigen::MatrixXd draw_noise(const Network& net, std::uint64_t seed, long t) {
  const int n = net.agent_count();
  Eigen::MatrixXd noise = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    SplitMix64 row_stream(
        mix_keys(seed, static_cast<std::uint64_t>(i),
                 static_cast<std::uint64_t>(t)));
    for (int j : net.in_neighbors(i)) noise(i, j) = row_stream.normal();
  }
  return noise;
}

Eigen::MatrixXd decoy_weights(const Eigen::MatrixXd& W, double phi, long t,
                              const Eigen::MatrixXd& noise) {
  if (noise.rows() != W.rows() || noise.cols() != W.cols())
    throw ParameterError("noise matrix dimensions do not match W");
  return W + std::exp(-phi * static_cast<double>(t)) * noise;
}

MaskedRun simulate_masked(const FjSystem& sys, const MaskConfig& mask,
                          double eps, long t_max, bool keep_decoys) {
  if (eps <= 0.0) throw ParameterError("tolerance must be positive");
  if (t_max < 1) throw ParameterError("step cap must be at least 1");
  const int n = sys.agent_count();
  const Eigen::VectorXd stubborn_bias =
      (Eigen::VectorXd::Ones(n) - sys.lambda).cwiseProduct(sys.u);

  MaskedRun run;
  run.trajectory.states.push_back(sys.x0);
  Eigen::VectorXd x = sys.x0;
  for (long t = 0; t < t_max; ++t) {
    Eigen::MatrixXd noise = mask.zero_noise
                                ? Eigen::MatrixXd::Zero(n, n)
                                : draw_noise(sys.net, mask.seed, t);
    Eigen::MatrixXd decoy = decoy_weights(sys.W, mask.phi, t, noise);
    Eigen::VectorXd next =
        sys.lambda.asDiagonal() * (decoy * x) + stubborn_bias;
    if (!next.allFinite())
      throw NumericalError("masked run diverged to non-finite state");
    run.noise_log.push_back(std::move(noise));
    if (keep_decoys) run.decoy_log.push_back(std::move(decoy));
    run.trajectory.states.push_back(next);
    if ((next - x).cwiseAbs().maxCoeff() < eps) {
      run.trajectory.converged = true;
      break;
    }
    x = std::move(next);
  }
  return run;
}

std::string MaskedRun::noise_log_to_json() const {
  nlohmann::ordered_json j;
  j["steps"] = nlohmann::ordered_json::array();
  for (const auto& noise : noise_log) {
    std::vector<std::vector<double>> rows(noise.rows());
    for (int i = 0; i < noise.rows(); ++i) {
      rows[i].resize(noise.cols());
      for (int k = 0; k < noise.cols(); ++k) rows[i][k] = noise(i, k);
    }
    j["steps"].push_back(rows);
  }
  return j.dump();
}

}  // namespace fjmask
