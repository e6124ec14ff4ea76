#include "fjmask/attacker.hpp"

#include <cmath>
#include <limits>

#include "fjmask/errors.hpp"
#include "json.hpp"

namespace fjmask {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kConditionLimit = 1e12;
constexpr double kLambdaIdentifiable = 1e-9;
constexpr double kNegativityTol = 1e-12;

nlohmann::ordered_json json_number_or_inf(double v) {
  if (std::isinf(v)) return "inf";
  return v;
}

}  // namespace

KnowledgeSet::KnowledgeSet(Network net_, Eigen::VectorXd u_,
                           Eigen::VectorXd lambda_,
                           std::vector<Eigen::VectorXd> states_)
    : net(std::move(net_)),
      u(std::move(u_)),
      lambda(std::move(lambda_)),
      states(std::move(states_)) {
  const int n = net.agent_count();
  if (u.size() != n || lambda.size() != n)
    throw ParameterError("u and lambda must have length n");
  if (states.empty()) throw ParameterError("knowledge set needs observed states");
  for (const auto& x : states)
    if (x.size() != n)
      throw ParameterError("observed state has wrong length");
}

Identification identify_unmasked(const KnowledgeSet& k) {
  const int n = k.net.agent_count();
  const int m = static_cast<int>(k.states.size());
  if (m < n + 2)
    throw InsufficientExcitationError(
        "identification needs at least n+2 successive states");

  // Successive differences remove the bias term; stack all of them.
  Eigen::MatrixXd diffs(n, m - 1);
  for (int t = 0; t + 1 < m; ++t)
    diffs.col(t) = k.states[t + 1] - k.states[t];
  const Eigen::MatrixXd lhs = diffs.leftCols(m - 2);
  const Eigen::MatrixXd rhs = diffs.rightCols(m - 2);

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      lhs.transpose(), Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (sv(sv.size() - 1) <= 0.0 ||
      sv(0) / sv(sv.size() - 1) > kConditionLimit)
    throw InsufficientExcitationError(
        "difference matrix is ill-conditioned; trajectory not sufficiently excited");

  const Eigen::MatrixXd lw = svd.solve(rhs.transpose()).transpose();

  Identification out;
  out.lambda_hat.resize(n);
  out.w_hat = Eigen::MatrixXd::Zero(n, n);
  out.identifiable.assign(n, true);
  for (int i = 0; i < n; ++i) {
    const double lam = lw.row(i).cwiseAbs().sum();
    out.lambda_hat(i) = lam;
    if (lam < kLambdaIdentifiable) {
      out.identifiable[i] = false;
      continue;
    }
    out.w_hat.row(i) = lw.row(i) / lam;
  }
  return out;
}

std::vector<Observation> build_observations(const KnowledgeSet& k, int agent) {
  const int n = k.net.agent_count();
  if (agent < 0 || agent >= n) throw ParameterError("agent index out of range");
  const double lam = k.lambda(agent);
  if (lam <= 0.0)
    throw ParameterError(
        "target agent has zero susceptibility; its influence row is unobservable");
  const auto& nbrs = k.net.in_neighbors(agent);
  std::vector<Observation> obs;
  obs.reserve(k.states.size() - 1);
  for (std::size_t t = 0; t + 1 < k.states.size(); ++t) {
    Observation o;
    o.a.resize(static_cast<int>(nbrs.size()));
    for (std::size_t j = 0; j < nbrs.size(); ++j)
      o.a(static_cast<int>(j)) = k.states[t](nbrs[j]);
    o.b = (k.states[t + 1](agent) - (1.0 - lam) * k.u(agent)) / lam;
    obs.push_back(std::move(o));
  }
  return obs;
}

namespace {

// Orthonormal nullspace of the stacked rows {1'} and {e_j' : j active}.
Eigen::MatrixXd simplex_face_nullspace(int d, const std::vector<bool>& active) {
  int n_active = 0;
  for (bool a : active) n_active += a ? 1 : 0;
  Eigen::MatrixXd rows(1 + n_active, d);
  rows.row(0).setOnes();
  int r = 1;
  for (int j = 0; j < d; ++j) {
    if (active[j]) {
      rows.row(r).setZero();
      rows(r, j) = 1.0;
      ++r;
    }
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(rows.transpose());
  Eigen::MatrixXd q = qr.householderQ();
  return q.rightCols(d - 1 - n_active);
}

}  // namespace

EstimateReport mle_estimate(const std::vector<Observation>& obs, double phi) {
  if (obs.empty()) throw ParameterError("no observations");
  if (!(phi > 0.0)) throw ParameterError("phi must be positive");
  const int d = static_cast<int>(obs.front().a.size());
  const int T = static_cast<int>(obs.size());

  std::vector<Eigen::VectorXd> rows;
  rows.reserve(obs.size());
  for (const auto& o : obs) {
    if (static_cast<int>(o.a.size()) != d)
      throw ParameterError("observations have inconsistent degree");
    if (o.a.norm() == 0.0)
      throw ParameterError("observation row is zero");
    rows.push_back(o.a);
  }

  EstimateReport report;
  if (d == 1) {
    report.w_hat = Eigen::VectorXd::Ones(1);
    report.error = 0.0;
    report.fully_determined = true;
    return report;
  }

  // Normalized restriction per timestep and likelihood weights, rescaled so
  // the largest weight is 1 (a constant factor does not move the argmin).
  Eigen::MatrixXd a_hat(T, d);
  Eigen::VectorXd b_hat(T), weight(T);
  for (int t = 0; t < T; ++t) {
    const double norm = obs[t].a.norm();
    a_hat.row(t) = obs[t].a.transpose() / norm;
    b_hat(t) = obs[t].b / norm;
    const double lw = 2.0 * phi * static_cast<double>(t - (T - 1));
    weight(t) = lw > -745.0 ? std::exp(lw) : 0.0;
  }

  std::vector<bool> active(d, false);
  int n_active = 0;
  Eigen::VectorXd w;
  for (;;) {
    // Minimum-norm particular point of the face: uniform on free entries.
    Eigen::VectorXd w_part = Eigen::VectorXd::Zero(d);
    for (int j = 0; j < d; ++j)
      if (!active[j]) w_part(j) = 1.0 / static_cast<double>(d - n_active);

    if (n_active == d - 1) {
      w = w_part;  // a simplex vertex; nothing left to optimize
    } else {
      const Eigen::MatrixXd q_face = simplex_face_nullspace(d, active);
      const Eigen::MatrixXd design = a_hat * q_face;           // T x free
      const Eigen::VectorXd resid = b_hat - a_hat * w_part;    // T
      const Eigen::MatrixXd gram =
          design.transpose() * weight.asDiagonal() * design;
      const Eigen::VectorXd rhs_v =
          design.transpose() * weight.cwiseProduct(resid);
      // Pseudo-inverse solve: uninformative directions get the min-norm
      // component, matching the unconstrained-likelihood plateau.
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
      const double cutoff =
          es.eigenvalues().maxCoeff() * 1e-12;
      Eigen::VectorXd s = Eigen::VectorXd::Zero(gram.rows());
      for (int k = 0; k < es.eigenvalues().size(); ++k) {
        const double ev = es.eigenvalues()(k);
        if (ev > cutoff && ev > 0.0)
          s += es.eigenvectors().col(k) *
               (es.eigenvectors().col(k).dot(rhs_v) / ev);
      }
      w = w_part + q_face * s;
    }
    for (int j = 0; j < d; ++j)
      if (active[j]) w(j) = 0.0;

    const Eigen::VectorXd resid_final = b_hat - a_hat * w;
    report.objective_trace.push_back(
        resid_final.dot(weight.cwiseProduct(resid_final)));

    int worst = -1;
    double worst_val = -kNegativityTol;
    for (int j = 0; j < d; ++j) {
      if (!active[j] && w(j) < worst_val) {
        worst_val = w(j);
        worst = j;
      }
    }
    if (worst < 0 || n_active == d - 1) break;
    active[worst] = true;
    ++n_active;
  }

  report.w_hat = w.cwiseMax(0.0);
  report.info = information_matrix(rows, phi);
  report.error = estimate_error(*report.info);
  if (std::isfinite(report.error)) {
    const Eigen::MatrixXd m = report.info->matrix();
    if (m.allFinite())
      report.cov = m.inverse();
  }
  return report;
}

std::string EstimateReport::to_json(int agent) const {
  nlohmann::ordered_json j;
  j["agent"] = agent;
  j["w_hat"] =
      std::vector<double>(w_hat.data(), w_hat.data() + w_hat.size());
  j["estimate_error"] = json_number_or_inf(error);
  nlohmann::ordered_json eigs = nlohmann::ordered_json::array();
  if (info) {
    for (double ev : info->eigenvalues()) eigs.push_back(json_number_or_inf(ev));
  }
  j["info_eigenvalues"] = eigs;
  if (fully_determined) j["fully_determined"] = true;
  return j.dump();
}

}  // namespace fjmask
