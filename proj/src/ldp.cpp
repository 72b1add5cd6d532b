#include "ocms/ldp.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace ocms {
namespace {

void check_epsilon(double epsilon) {
  if (!(epsilon > 0.0) || epsilon > 50.0)
    throw std::invalid_argument("epsilon must be in (0, 50]");
}

}  // namespace

std::uint64_t rr_perturb(std::uint64_t y, double epsilon, std::uint64_t m,
                         Rng& rng) {
  check_epsilon(epsilon);
  if (m < 2) throw std::invalid_argument("rr_perturb: m must be >= 2");
  if (y >= m) throw std::invalid_argument("rr_perturb: y must be < m");
  double a = std::exp(epsilon);
  if (rng.next_bernoulli(a / (a + double(m) - 1.0))) return y;
  std::uint64_t other = rng.next_below(m - 1);
  return other + (other >= y ? 1 : 0);
}

double rr_decode(bool match, double epsilon, std::uint64_t m) {
  check_epsilon(epsilon);
  if (m < 2) throw std::invalid_argument("rr_decode: m must be >= 2");
  double a = std::exp(epsilon);
  if (match) return (a + double(m) - 2.0) / (a - 1.0);
  return -1.0 / (a - 1.0);
}

ResponseVariances mechanism_variances(const MechanismSpec& spec) {
  check_epsilon(spec.epsilon);
  double a = std::exp(spec.epsilon);
  ResponseVariances v;
  switch (spec.kind) {
    case Mechanism::RR: {
      if (spec.m < 2)
        throw std::invalid_argument("mechanism_variances: m must be >= 2");
      double md = double(spec.m);
      v.var_eq = a * (md - 1.0) / ((a - 1.0) * (a - 1.0));
      v.var_neq = (a + md - 2.0) / ((a - 1.0) * (a - 1.0));
      break;
    }
    case Mechanism::SymmetricRappor: {
      double s = std::exp(spec.epsilon / 2.0);
      v.var_eq = s / ((s - 1.0) * (s - 1.0));
      v.var_neq = v.var_eq;
      break;
    }
    case Mechanism::AsymmetricRappor: {
      v.var_eq = (a + 1.0) * (a + 1.0) / ((a - 1.0) * (a - 1.0));
      v.var_neq = 4.0 * a / ((a - 1.0) * (a - 1.0));
      break;
    }
  }
  return v;
}

TransitionMatrix build_decoder(const Matrix& p) {
  if (p.empty() || p.front().empty())
    throw std::invalid_argument("build_decoder: empty matrix");
  std::size_t rows = p.size(), cols = p.front().size();
  if (rows < cols)
    throw std::invalid_argument(
        "build_decoder: need at least as many responses as inputs");
  Eigen::MatrixXd P(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (p[i].size() != cols)
      throw std::invalid_argument("build_decoder: ragged matrix");
    for (std::size_t j = 0; j < cols; ++j) {
      double e = p[i][j];
      if (!(e >= -1e-12) || !(e <= 1.0 + 1e-12))
        throw std::invalid_argument(
            "build_decoder: entries must be probabilities");
      P(Eigen::Index(i), Eigen::Index(j)) = e;
    }
  }
  for (std::size_t j = 0; j < cols; ++j) {
    double sum = P.col(Eigen::Index(j)).sum();
    if (std::abs(sum - 1.0) > 5e-3)
      throw std::invalid_argument(
          "build_decoder: columns must each sum to 1");
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(P);
  if (qr.rank() < Eigen::Index(cols))
    throw std::invalid_argument("build_decoder: matrix is column-deficient");
  // Least-squares decoder (P^T P)^{-1} P^T, the pseudo-inverse of a
  // full-column-rank P.
  Eigen::MatrixXd Q =
      (P.transpose() * P).ldlt().solve(P.transpose());
  Eigen::MatrixXd QP = Q * P;
  for (Eigen::Index i = 0; i < QP.rows(); ++i)
    for (Eigen::Index j = 0; j < QP.cols(); ++j) {
      double want = i == j ? 1.0 : 0.0;
      if (std::abs(QP(i, j) - want) > 1e-9)
        throw std::runtime_error("build_decoder: Q*P deviates from identity");
    }
  TransitionMatrix out;
  out.P = p;
  out.Q.assign(cols, std::vector<double>(rows));
  for (std::size_t i = 0; i < cols; ++i)
    for (std::size_t j = 0; j < rows; ++j)
      out.Q[i][j] = Q(Eigen::Index(i), Eigen::Index(j));
  return out;
}

TransitionMatrix rr_transition(const MechanismSpec& spec) {
  if (spec.kind != Mechanism::RR)
    throw std::invalid_argument("rr_transition: spec must be RR");
  check_epsilon(spec.epsilon);
  if (spec.m < 2)
    throw std::invalid_argument("rr_transition: m must be >= 2");
  double a = std::exp(spec.epsilon);
  double keep = a / (a + double(spec.m) - 1.0);
  double move = 1.0 / (a + double(spec.m) - 1.0);
  Matrix p(spec.m, std::vector<double>(spec.m, move));
  for (std::uint64_t i = 0; i < spec.m; ++i) p[i][i] = keep;
  return build_decoder(p);
}

}  // namespace ocms
