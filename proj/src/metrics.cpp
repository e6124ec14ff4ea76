#include "fjmask/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "fjmask/errors.hpp"

namespace fjmask {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSingularLambdaCutoff = 1e-12;

// In-group dynamic range and freeze margin for the deflation sweep. Terms
// within e^20 of the group head share one eigensolve; eigenvalues at least
// 1e8 times the next remaining weight are frozen.
constexpr double kGroupWindow = 20.0;
const double kFreezeMargin = std::log(1e8);

void apply_canonical_sign(Eigen::MatrixXd& Q) {
  for (int c = 0; c < Q.cols(); ++c) {
    for (int r = 0; r < Q.rows(); ++r) {
      if (std::abs(Q(r, c)) > 1e-12) {
        if (Q(r, c) < 0.0) Q.col(c) = -Q.col(c);
        break;
      }
    }
  }
}

}  // namespace

Eigen::MatrixXd nullspace_basis(const Eigen::VectorXd& a) {
  const int m = static_cast<int>(a.size());
  if (m < 2) throw ParameterError("nullspace basis needs dimension >= 2");
  if (a.norm() == 0.0) throw ParameterError("nullspace basis of zero vector");
  Eigen::MatrixXd col = a;
  col.resize(m, 1);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(col);
  Eigen::MatrixXd full = qr.householderQ();
  Eigen::MatrixXd Q = full.rightCols(m - 1);
  apply_canonical_sign(Q);
  return Q;
}

double projection_identity_check(const Eigen::VectorXd& a) {
  const Eigen::MatrixXd Q = nullspace_basis(a);
  const Eigen::VectorXd ah = a / a.norm();
  const int m = static_cast<int>(a.size());
  const Eigen::MatrixXd lhs = Q * Q.transpose();
  const Eigen::MatrixXd rhs =
      Eigen::MatrixXd::Identity(m, m) - ah * ah.transpose();
  return (lhs - rhs).cwiseAbs().maxCoeff();
}

InfoMatrix::InfoMatrix(int d, double phi, int horizon, Eigen::MatrixXd scaled,
                       double log_scale, std::vector<double> log_weights,
                       std::vector<Eigen::VectorXd> directions,
                       int skipped_zero_rows)
    : d_(d),
      phi_(phi),
      horizon_(horizon),
      skipped_zero_rows_(skipped_zero_rows),
      scaled_(std::move(scaled)),
      log_scale_(log_scale),
      log_weights_(std::move(log_weights)),
      directions_(std::move(directions)) {}

Eigen::MatrixXd InfoMatrix::matrix() const {
  return scaled_ * std::exp(log_scale_);
}

std::vector<double> InfoMatrix::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(scaled_);
  std::vector<double> out(es.eigenvalues().size());
  for (int i = 0; i < es.eigenvalues().size(); ++i)
    out[i] = es.eigenvalues()(i) * std::exp(log_scale_);
  return out;
}

double InfoMatrix::log_lambda_min() const {
  if (!directions_.empty())
    return log_lambda_min_of_terms(log_weights_, directions_,
                                   static_cast<int>(scaled_.rows()));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(scaled_);
  const double lmin = es.eigenvalues().minCoeff();
  if (lmin <= 0.0) return -kInf;
  return log_scale_ + std::log(lmin);
}

double log_lambda_min_of_terms(const std::vector<double>& log_weights,
                               const std::vector<Eigen::VectorXd>& directions,
                               int dim) {
  if (dim < 1) throw ParameterError("dimension must be positive");
  if (log_weights.size() != directions.size())
    throw ParameterError("weights/directions size mismatch");
  if (log_weights.empty()) return -kInf;

  std::vector<int> order(log_weights.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return log_weights[a] > log_weights[b];
  });

  // Active subspace basis; the carry matrix C lives in its coordinates and
  // is diagonal at the start of every round.
  Eigen::MatrixXd U = Eigen::MatrixXd::Identity(dim, dim);
  Eigen::VectorXd carry_diag;  // log eigenvalues; empty before first round
  bool have_carry = false;
  double ref = 0.0;
  double min_frozen = kInf;
  std::size_t i = 0;
  const std::size_t n = order.size();

  auto freeze_all = [&](const Eigen::VectorXd& eigvals, double scale) {
    for (int k = 0; k < eigvals.size(); ++k) {
      const double mu = eigvals(k);
      min_frozen = std::min(
          min_frozen, mu > 0.0 ? scale + std::log(mu) : -kInf);
    }
  };

  while (U.cols() > 0) {
    if (i == n) {
      // Directions never touched by any remaining term carry zero info.
      if (!have_carry) return -kInf;
      for (int k = 0; k < carry_diag.size(); ++k)
        min_frozen = std::min(min_frozen, ref + carry_diag(k));
      break;
    }
    const double new_ref = log_weights[order[i]];
    const int active = static_cast<int>(U.cols());
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(active, active);
    if (have_carry) {
      for (int k = 0; k < active; ++k) {
        const double shifted = carry_diag(k) + (ref - new_ref);
        C(k, k) = shifted > -745.0 ? std::exp(shifted) : 0.0;
      }
    }
    ref = new_ref;
    have_carry = true;
    while (i < n && log_weights[order[i]] >= ref - kGroupWindow) {
      const Eigen::VectorXd q = U.transpose() * directions[order[i]];
      C.selfadjointView<Eigen::Lower>().rankUpdate(
          q, std::exp(log_weights[order[i]] - ref));
      ++i;
    }
    C = C.selfadjointView<Eigen::Lower>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(C);
    if (i == n) {
      freeze_all(es.eigenvalues(), ref);
      break;
    }
    const double next_weight = log_weights[order[i]];
    // Freeze in log space: the remaining terms are bounded by n * e^{next},
    // so eigenvalues at least e^{margin} above that cannot move. A zero
    // eigenvalue is never frozen mid-sweep; later terms may still fill it.
    std::vector<int> kept;
    for (int k = 0; k < es.eigenvalues().size(); ++k) {
      const double mu = es.eigenvalues()(k);
      if (mu > 0.0 && std::log(mu) >= next_weight - ref + kFreezeMargin) {
        min_frozen = std::min(min_frozen, ref + std::log(mu));
      } else {
        kept.push_back(k);
      }
    }
    Eigen::MatrixXd Uk(active, static_cast<int>(kept.size()));
    carry_diag.resize(static_cast<int>(kept.size()));
    for (std::size_t k = 0; k < kept.size(); ++k) {
      Uk.col(static_cast<int>(k)) = es.eigenvectors().col(kept[k]);
      const double mu = std::max(es.eigenvalues()(kept[k]), 0.0);
      carry_diag(static_cast<int>(k)) =
          mu > 0.0 ? std::log(mu) : -kInf;
    }
    U = (U * Uk).eval();
  }
  return min_frozen;
}

InfoMatrix information_matrix(const std::vector<Eigen::VectorXd>& rows,
                              double phi) {
  if (rows.empty()) throw ParameterError("no observation rows");
  if (!(phi > 0.0)) throw ParameterError("phi must be positive");
  const int d = static_cast<int>(rows.front().size());
  if (d < 2) throw ParameterError("rows must have length >= 2");
  const int T = static_cast<int>(rows.size());
  const Eigen::MatrixXd Q1 = nullspace_basis(Eigen::VectorXd::Ones(d));

  const double log_scale = 2.0 * phi * static_cast<double>(T - 1);
  Eigen::MatrixXd scaled = Eigen::MatrixXd::Zero(d - 1, d - 1);
  std::vector<double> log_weights;
  std::vector<Eigen::VectorXd> directions;
  int skipped = 0;
  for (int t = 0; t < T; ++t) {
    if (static_cast<int>(rows[t].size()) != d)
      throw ParameterError("observation rows have inconsistent length");
    const double norm = rows[t].norm();
    if (norm == 0.0) {
      ++skipped;
      continue;
    }
    const Eigen::VectorXd q = Q1.transpose() * (rows[t] / norm);
    const double lw = 2.0 * phi * static_cast<double>(t);
    const double rel = lw - log_scale;
    if (rel > -745.0)
      scaled.selfadjointView<Eigen::Lower>().rankUpdate(q, std::exp(rel));
    log_weights.push_back(lw);
    directions.push_back(q);
  }
  scaled = scaled.selfadjointView<Eigen::Lower>();
  scaled = 0.5 * (scaled + scaled.transpose()).eval();
  return InfoMatrix(d, phi, T, std::move(scaled), log_scale,
                    std::move(log_weights), std::move(directions), skipped);
}

InfoMatrix full_kkt_information(const std::vector<Eigen::VectorXd>& rows,
                                double phi) {
  if (rows.empty()) throw ParameterError("no observation rows");
  if (!(phi > 0.0)) throw ParameterError("phi must be positive");
  const int d = static_cast<int>(rows.front().size());
  if (d < 2) throw ParameterError("rows must have length >= 2");

  // Keep only nonzero rows, mirroring information_matrix.
  std::vector<Eigen::VectorXd> obs;
  std::vector<int> times;
  for (int t = 0; t < static_cast<int>(rows.size()); ++t) {
    if (rows[t].norm() != 0.0) {
      obs.push_back(rows[t]);
      times.push_back(t);
    }
  }
  const int T = static_cast<int>(obs.size());
  const int skipped = static_cast<int>(rows.size()) - T;
  if (T == 0) {
    return InfoMatrix(d, phi, static_cast<int>(rows.size()),
                      Eigen::MatrixXd::Zero(d - 1, d - 1), 0.0, {}, {},
                      skipped);
  }

  // Q = diag(Q_0, ..., Q_{T-1}, Q_1): nullspace of the stacked equality
  // constraints.
  const int nv = (T + 1) * d;
  const int ns = (T + 1) * (d - 1);
  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(nv, ns);
  for (int k = 0; k < T; ++k)
    Q.block(k * d, k * (d - 1), d, d - 1) = nullspace_basis(obs[k]);
  Q.block(T * d, T * (d - 1), d, d - 1) =
      nullspace_basis(Eigen::VectorXd::Ones(d));

  // Y maps [w_0, ..., w_{T-1}, w] to the stacked differences w_t - w.
  Eigen::MatrixXd Y = Eigen::MatrixXd::Zero(T * d, nv);
  for (int k = 0; k < T; ++k) {
    Y.block(k * d, k * d, d, d) = Eigen::MatrixXd::Identity(d, d);
    Y.block(k * d, T * d, d, d) = -Eigen::MatrixXd::Identity(d, d);
  }

  Eigen::VectorXd weights(T * d);
  for (int k = 0; k < T; ++k)
    weights.segment(k * d, d).setConstant(
        std::exp(2.0 * phi * static_cast<double>(times[k])));

  const Eigen::MatrixXd YQ = Y * Q;
  const Eigen::MatrixXd info_full =
      YQ.transpose() * weights.asDiagonal() * YQ;

  // Schur complement onto the trailing w block.
  const int head = T * (d - 1);
  const Eigen::MatrixXd A = info_full.topLeftCorner(head, head);
  const Eigen::MatrixXd B = info_full.topRightCorner(head, d - 1);
  const Eigen::MatrixXd D = info_full.bottomRightCorner(d - 1, d - 1);
  const Eigen::MatrixXd schur =
      D - B.transpose() * Eigen::LLT<Eigen::MatrixXd>(A).solve(B);

  const double log_scale = 2.0 * phi * static_cast<double>(rows.size() - 1);
  Eigen::MatrixXd sym = 0.5 * (schur + schur.transpose());
  return InfoMatrix(d, phi, static_cast<int>(rows.size()),
                    sym * std::exp(-log_scale), log_scale, {}, {}, skipped);
}

double estimate_error(const InfoMatrix& info) {
  const double llm = info.log_lambda_min();
  if (!(llm > std::log(kSingularLambdaCutoff))) return kInf;
  return std::exp(-0.5 * llm);
}

}  // namespace fjmask
