#include "fjmask/dynamics.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "fjmask/errors.hpp"
#include "fjmask/rng.hpp"
#include "json.hpp"

namespace fjmask {

namespace {

constexpr double kRowSumTol = 1e-12;

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

FjSystem::FjSystem(Network net_, Eigen::MatrixXd W_, Eigen::VectorXd lambda_,
                   Eigen::VectorXd u_, Eigen::VectorXd x0_)
    : net(std::move(net_)),
      W(std::move(W_)),
      lambda(std::move(lambda_)),
      u(std::move(u_)),
      x0(std::move(x0_)) {
  const int n = net.agent_count();
  if (W.rows() != n || W.cols() != n)
    throw ParameterError("W must be n x n");
  if (lambda.size() != n || u.size() != n || x0.size() != n)
    throw ParameterError("lambda, u, x0 must have length n");
  for (int i = 0; i < n; ++i) {
    if (lambda(i) < 0.0 || lambda(i) > 1.0)
      throw ParameterError("susceptibilities must lie in [0, 1]");
    double row_sum = 0.0;
    for (int j = 0; j < n; ++j) {
      const double w = W(i, j);
      if (w != 0.0 && !net.is_influence_element(i, j))
        throw ParameterError("W has a nonzero entry off the influence graph");
      if (w < 0.0) throw ParameterError("W entries must be nonnegative");
      row_sum += w;
    }
    if (std::abs(row_sum - 1.0) > kRowSumTol)
      throw ParameterError("W rows must sum to 1");
  }
}

Eigen::VectorXd step(const FjSystem& sys, const Eigen::VectorXd& x) {
  if (x.size() != sys.agent_count())
    throw ParameterError("state vector has wrong length");
  return sys.lambda.asDiagonal() * (sys.W * x) +
         (Eigen::VectorXd::Ones(x.size()) - sys.lambda).cwiseProduct(sys.u);
}

Trajectory simulate(const FjSystem& sys, double eps, long t_max) {
  if (eps <= 0.0) throw ParameterError("tolerance must be positive");
  if (t_max < 1) throw ParameterError("step cap must be at least 1");
  Trajectory traj;
  traj.states.push_back(sys.x0);
  Eigen::VectorXd x = sys.x0;
  for (long t = 0; t < t_max; ++t) {
    Eigen::VectorXd next = step(sys, x);
    if (!next.allFinite())
      throw NumericalError("non-finite state: system is unstable");
    traj.states.push_back(next);
    if ((next - x).cwiseAbs().maxCoeff() < eps) {
      traj.converged = true;
      break;
    }
    x = std::move(next);
  }
  return traj;
}

Eigen::VectorXd limit_opinions(const FjSystem& sys) {
  const int n = sys.agent_count();
  if (!is_stable(sys))
    throw NumericalError("system is not stable; no limit exists");
  const Eigen::MatrixXd A =
      Eigen::MatrixXd::Identity(n, n) - sys.lambda.asDiagonal() * sys.W;
  const Eigen::VectorXd rhs =
      (Eigen::VectorXd::Ones(n) - sys.lambda).cwiseProduct(sys.u);
  return Eigen::PartialPivLU<Eigen::MatrixXd>(A).solve(rhs);
}

bool is_stable(const FjSystem& sys) {
  // rho(LW) < 1 for a nonnegative matrix with row sums lambda_i iff every
  // agent reaches, along nonzero entries of LW, some agent with lambda < 1.
  const int n = sys.agent_count();
  std::vector<char> good(n, 0);
  std::vector<int> frontier;
  for (int i = 0; i < n; ++i) {
    if (sys.lambda(i) < 1.0) {
      good[i] = 1;
      frontier.push_back(i);
    }
  }
  // Walk the reversed support graph: j -> i whenever lambda_i * W_ij != 0.
  std::vector<std::vector<int>> rev(n);
  for (int i = 0; i < n; ++i) {
    if (sys.lambda(i) == 0.0) continue;
    for (int j : sys.net.in_neighbors(i))
      if (sys.W(i, j) != 0.0) rev[j].push_back(i);
  }
  while (!frontier.empty()) {
    const int j = frontier.back();
    frontier.pop_back();
    for (int i : rev[j]) {
      if (!good[i]) {
        good[i] = 1;
        frontier.push_back(i);
      }
    }
  }
  for (int i = 0; i < n; ++i)
    if (!good[i]) return false;
  return true;
}

double spectral_radius(const FjSystem& sys) {
  const Eigen::MatrixXd M = sys.lambda.asDiagonal() * sys.W;
  return Eigen::EigenSolver<Eigen::MatrixXd>(M, false)
      .eigenvalues()
      .cwiseAbs()
      .maxCoeff();
}

FjSystem random_fj_system(const Network& net, double lambda_lo,
                          double lambda_hi, std::uint64_t seed) {
  if (lambda_lo < 0.0 || lambda_hi > 1.0 || lambda_lo > lambda_hi)
    throw ParameterError("susceptibility bounds must satisfy 0 <= lo <= hi <= 1");
  const int n = net.agent_count();
  SplitMix64 rng(mix_keys(seed, 0x73797374656dULL));
  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const auto& nbrs = net.in_neighbors(i);
    if (nbrs.empty())
      throw ParameterError("agent with empty neighbor list cannot pool opinions");
    double sum = 0.0;
    std::vector<double> raw(nbrs.size());
    for (std::size_t k = 0; k < nbrs.size(); ++k) {
      raw[k] = rng.uniform01();
      sum += raw[k];
    }
    if (sum == 0.0) {
      raw.assign(nbrs.size(), 1.0);
      sum = static_cast<double>(nbrs.size());
    }
    for (std::size_t k = 0; k < nbrs.size(); ++k) W(i, nbrs[k]) = raw[k] / sum;
    // Renormalize the stored row so the sum is exact to roundoff.
    W.row(i) /= W.row(i).sum();
  }
  Eigen::VectorXd lambda(n), u(n);
  for (int i = 0; i < n; ++i) lambda(i) = rng.uniform(lambda_lo, lambda_hi);
  for (int i = 0; i < n; ++i) u(i) = rng.uniform01();
  return FjSystem(net, std::move(W), std::move(lambda), u, u);
}

FjSystem example1_system() {
  Network net(3, {{0, 1, 2}, {0, 1, 2}, {0, 1, 2}});
  Eigen::MatrixXd W(3, 3);
  W << 0.0, 0.5, 0.5, 0.2, 0.2, 0.6, 0.5, 0.0, 0.5;
  Eigen::VectorXd lambda(3), u(3);
  lambda << 0.4, 0.5, 0.6;
  u << 1.0, 2.0, 3.0;
  return FjSystem(std::move(net), std::move(W), std::move(lambda), u, u);
}

std::string FjSystem::to_json(bool redact_weights) const {
  nlohmann::ordered_json j;
  j["network"] = nlohmann::ordered_json::parse(net.to_json());
  if (!redact_weights) {
    std::vector<std::vector<double>> rows(agent_count());
    for (int i = 0; i < agent_count(); ++i) {
      rows[i].resize(agent_count());
      for (int k = 0; k < agent_count(); ++k) rows[i][k] = W(i, k);
    }
    j["W"] = rows;
  }
  j["lambda"] = std::vector<double>(lambda.data(), lambda.data() + lambda.size());
  j["u"] = std::vector<double>(u.data(), u.data() + u.size());
  j["x0"] = std::vector<double>(x0.data(), x0.data() + x0.size());
  return j.dump();
}

FjSystem FjSystem::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed system JSON: ") + e.what());
  }
  if (!j.contains("network"))
    throw IoError("system JSON missing 'network' (the attack pipeline requires graph knowledge)");
  Network net = Network::from_json(j["network"].dump());
  const int n = net.agent_count();
  if (!j.contains("W"))
    throw IoError("system JSON has no 'W'; load it as a redacted system instead");
  auto rows = j["W"].get<std::vector<std::vector<double>>>();
  if (static_cast<int>(rows.size()) != n)
    throw IoError("W row count does not match agent count");
  Eigen::MatrixXd W(n, n);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(rows[i].size()) != n)
      throw IoError("W column count does not match agent count");
    for (int k = 0; k < n; ++k) W(i, k) = rows[i][k];
  }
  auto vec = [&](const char* key) {
    if (!j.contains(key)) throw IoError(std::string("system JSON missing ") + key);
    auto v = j[key].get<std::vector<double>>();
    if (static_cast<int>(v.size()) != n)
      throw IoError(std::string(key) + " length does not match agent count");
    return Eigen::Map<Eigen::VectorXd>(v.data(), n).eval();
  };
  return FjSystem(std::move(net), std::move(W), vec("lambda"), vec("u"), vec("x0"));
}

std::string Trajectory::to_csv() const {
  if (states.empty()) throw IoError("empty trajectory");
  std::ostringstream out;
  out << "t";
  for (int i = 0; i < states.front().size(); ++i) out << ",x" << i;
  out << "\n";
  for (std::size_t t = 0; t < states.size(); ++t) {
    out << t;
    for (int i = 0; i < states[t].size(); ++i)
      out << "," << format_g17(states[t](i));
    out << "\n";
  }
  return out.str();
}

Trajectory Trajectory::from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("t,", 0) != 0)
    throw IoError("trajectory CSV must start with header 't,x0,...'");
  Trajectory traj;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    std::vector<double> vals;
    bool first = true;
    while (std::getline(row, cell, ',')) {
      if (first) {
        first = false;
        continue;
      }
      try {
        vals.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw IoError("trajectory CSV has a non-numeric cell: " + cell);
      }
    }
    if (!traj.states.empty() &&
        static_cast<int>(vals.size()) != traj.states.front().size())
      throw IoError("trajectory CSV rows have inconsistent width");
    traj.states.push_back(
        Eigen::Map<Eigen::VectorXd>(vals.data(), vals.size()).eval());
  }
  if (traj.states.empty()) throw IoError("trajectory CSV has no data rows");
  return traj;
}

}  // namespace fjmask
