#ifndef FJMASK_METRICS_HPP
#define FJMASK_METRICS_HPP

#include <Eigen/Dense>
#include <vector>

namespace fjmask {

// Weighted information accumulated from the eavesdropper's observation rows.
//
// The weights e^{2 phi t} overflow double precision long before the sweeps
// stop caring about them, so the matrix is stored scaled: the true matrix is
// scaled_matrix * exp(log_scale). The raw per-observation terms are kept as
// (log weight, projected direction) pairs; the smallest eigenvalue is
// recovered from those by descending-scale deflation, which stays accurate
// even when the weights span thousands of orders of magnitude.
class InfoMatrix {
 public:
  InfoMatrix(int d, double phi, int horizon, Eigen::MatrixXd scaled,
             double log_scale, std::vector<double> log_weights,
             std::vector<Eigen::VectorXd> directions, int skipped_zero_rows);

  int d() const { return d_; }
  double phi() const { return phi_; }
  int horizon() const { return horizon_; }
  int skipped_zero_rows() const { return skipped_zero_rows_; }

  const Eigen::MatrixXd& scaled_matrix() const { return scaled_; }
  double log_scale() const { return log_scale_; }

  // True matrix; entries may overflow to +inf for large phi * T.
  Eigen::MatrixXd matrix() const;

  // Eigenvalues of the true matrix, ascending; may contain +inf.
  std::vector<double> eigenvalues() const;

  // log(lambda_min) of the true matrix, or -inf when singular.
  double log_lambda_min() const;

 private:
  int d_;
  double phi_;
  int horizon_;
  int skipped_zero_rows_;
  Eigen::MatrixXd scaled_;
  double log_scale_;
  std::vector<double> log_weights_;
  std::vector<Eigen::VectorXd> directions_;
};

// Orthonormal basis of the nullspace of a nonzero row vector a (m >= 2):
// an m x (m-1) matrix Q with Q'Q = I and aQ = 0. Canonical sign: the first
// entry of each column larger than 1e-12 in magnitude is positive.
Eigen::MatrixXd nullspace_basis(const Eigen::VectorXd& a);

// max-abs deviation of Q Q' from I - a_hat' a_hat.
double projection_identity_check(const Eigen::VectorXd& a);

// Closed-form accumulation: sum over t of e^{2 phi t} Q1' A_hat_t' A_hat_t Q1
// with Q1 the nullspace basis of the all-ones row. Zero rows are skipped and
// counted.
InfoMatrix information_matrix(const std::vector<Eigen::VectorXd>& rows,
                              double phi);

// Full (T+1)d-variable construction: block-diagonal nullspace bases, the
// successive-difference operator, raw exponential weights, and a Schur
// complement onto the w block. Cross-validation oracle for
// information_matrix; cost grows as (Td)^3, only sensible for small inputs.
InfoMatrix full_kkt_information(const std::vector<Eigen::VectorXd>& rows,
                                double phi);

// 1/sqrt(lambda_min), or +infinity when lambda_min <= 1e-12 (the row is
// undiscoverable: some direction of it carries no information).
double estimate_error(const InfoMatrix& info);

// lambda_min of a sum of rank-one terms exp(log_weight) * q q' given in any
// order, returned as a logarithm (-inf when singular). Exposed for tests.
double log_lambda_min_of_terms(const std::vector<double>& log_weights,
                               const std::vector<Eigen::VectorXd>& directions,
                               int dim);

}  // namespace fjmask

#endif
