#include "ocms/cms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ocms/ldp.hpp"

namespace ocms {
namespace {

void check_epsilon(double epsilon) {
  if (!(epsilon > 0.0) || epsilon > 50.0)
    throw std::invalid_argument("epsilon must be in (0, 50]");
}

void check_fraction(double f, const char* what) {
  if (!(f >= 0.0) || !(f <= 1.0))
    throw std::invalid_argument(std::string(what) + " must be in [0, 1]");
}

// Worst-case variance over frequencies in [0, f_star]; the variance is linear
// in f, so the endpoints suffice. n is a scale factor and drops out of the
// argmin.
double mse_objective(double m, double epsilon, double f_star) {
  return std::max(predict_variance(0.0, epsilon, m, 1),
                  predict_variance(f_star, epsilon, m, 1));
}

// Summed variance over a dictionary whose frequencies add to 1:
// d*Var(0) + (Var(1) - Var(0)).
double l_objective(double m, double epsilon, std::uint64_t d) {
  double v0 = predict_variance(0.0, epsilon, m, 1);
  double v1 = predict_variance(1.0, epsilon, m, 1);
  return double(d) * v0 + (v1 - v0);
}

}  // namespace

std::uint64_t hash_range(double epsilon, std::uint64_t d, double f_star,
                         RangeMode mode) {
  check_epsilon(epsilon);
  check_fraction(f_star, "f_star");
  if (d < 2) throw std::invalid_argument("hash_range: d must be >= 2");
  double a = std::exp(epsilon);
  double s = std::exp(epsilon / 2.0);
  double m_real;
  if (mode == RangeMode::MseOpt) {
    if (f_star > 0.5) {
      m_real = 1.0 + s;
    } else {
      double delta = s * std::sqrt((f_star * a + 1.0 - f_star) *
                                   ((1.0 - f_star) * a + f_star));
      m_real = 1.0 + delta / (f_star * a + 1.0 - f_star);
    }
  } else if (mode == RangeMode::LOpt) {
    double dd = double(d);
    double delta = s * std::sqrt((a + dd - 1.0) * (dd * a - a + 1.0));
    m_real = 1.0 + delta / (a + dd - 1.0);
  } else {
    throw std::invalid_argument("hash_range: mode must pick a range");
  }
  if (!(m_real < 9.0e18))
    throw std::domain_error("hash_range: optimum exceeds representable range");
  std::uint64_t lo = std::max<std::uint64_t>(2, std::uint64_t(m_real));
  std::uint64_t hi = std::max<std::uint64_t>(2, std::uint64_t(std::ceil(m_real)));
  if (lo == hi) return lo;
  // Score both integer neighbours: the real optimum does not round blindly.
  double obj_lo, obj_hi;
  if (mode == RangeMode::MseOpt) {
    obj_lo = mse_objective(double(lo), epsilon, f_star);
    obj_hi = mse_objective(double(hi), epsilon, f_star);
  } else {
    obj_lo = l_objective(double(lo), epsilon, d);
    obj_hi = l_objective(double(hi), epsilon, d);
  }
  double tol = 1e-12 * std::max(std::abs(obj_lo), std::abs(obj_hi));
  if (std::abs(obj_lo - obj_hi) <= tol)
    return std::max<std::uint64_t>(2, std::uint64_t(std::llround(m_real)));
  return obj_lo < obj_hi ? lo : hi;
}

EstimatorParams make_params(double epsilon, std::uint64_t d, RangeMode mode,
                            double f_star, std::uint64_t fixed_m, bool clip) {
  check_epsilon(epsilon);
  check_fraction(f_star, "f_star");
  if (d < 2) throw std::invalid_argument("make_params: d must be >= 2");
  EstimatorParams p;
  p.epsilon = epsilon;
  p.d = d;
  p.mode = mode;
  p.f_star = f_star;
  p.clip = clip;
  if (mode == RangeMode::FixedM) {
    if (fixed_m < 2)
      throw std::invalid_argument("make_params: fixed_m must be >= 2");
    p.m = fixed_m;
  } else {
    p.m = hash_range(epsilon, d, f_star, mode);
  }
  if (p.m > 0xFFFFFFFFull)
    throw std::invalid_argument("make_params: hash range exceeds 32 bits");
  p.field = finite_field_size(d, p.m);
  p.stats = api_stats(p.field, p.m);
  return p;
}

Report client_encode(std::uint64_t x, const EstimatorParams& params,
                     Rng& rng) {
  if (x >= params.d)
    throw std::invalid_argument("client_encode: x must be < d");
  HashFn h = sample_hash(params.field, params.m, rng);
  std::uint64_t y = hash_eval(h, x);
  std::uint64_t z = rr_perturb(y, params.epsilon, params.m, rng);
  return Report{std::uint32_t(z), h.a0, h.a1};
}

std::vector<double> server_estimate(const std::vector<std::uint64_t>& x_set,
                                    const std::vector<Report>& reports,
                                    const EstimatorParams& params) {
  if (reports.empty())
    throw std::invalid_argument("server_estimate: no reports");
  const FieldSpec& field = params.field;
  const std::uint64_t m = params.m;
  for (const Report& rep : reports) {
    if (rep.z >= m || !field.element_ok(rep.a0) || !field.element_ok(rep.a1))
      throw std::invalid_argument("server_estimate: malformed report");
  }
  for (std::uint64_t x : x_set) {
    if (x >= params.d)
      throw std::invalid_argument("server_estimate: query outside dictionary");
  }
  double dec_eq = rr_decode(true, params.epsilon, m);
  double dec_neq = rr_decode(false, params.epsilon, m);
  double mp = params.stats.m_prime;
  double n = double(reports.size());
  std::vector<double> out;
  out.reserve(x_set.size());
  for (std::uint64_t x : x_set) {
    std::uint64_t cnt = 0;
    for (const Report& rep : reports) {
      std::uint64_t y = ff_add(field, rep.a0, ff_mul(field, rep.a1, x)) % m;
      cnt += (y == rep.z);
    }
    // The decode average is two-valued, so it sums exactly from the match
    // count.
    double dbar =
        (double(cnt) * dec_eq + (n - double(cnt)) * dec_neq) / n;
    double est = (mp * dbar - 1.0) / (mp - 1.0);
    if (params.clip) est = std::min(1.0, std::max(0.0, est));
    out.push_back(est);
  }
  return out;
}

double predict_variance(double f, double epsilon, double m, std::uint64_t n) {
  check_epsilon(epsilon);
  check_fraction(f, "f");
  if (!(m > 1.0))
    throw std::invalid_argument("predict_variance: m must be > 1");
  if (n < 1) throw std::invalid_argument("predict_variance: n must be >= 1");
  double a = std::exp(epsilon);
  double nn = double(n);
  return (1.0 - f) / (nn * (m - 1.0)) +
         m * ((1.0 - f) * (a - 1.0) * (2.0 - m) + m * a) /
             (nn * (m - 1.0) * (a - 1.0) * (a - 1.0));
}

double predict_variance_general(double f_x, double var_eq, double var_neq,
                                double c_bar, double m, std::uint64_t n) {
  check_fraction(f_x, "f_x");
  if (!(var_eq >= 0.0) || !(var_neq >= 0.0))
    throw std::invalid_argument(
        "predict_variance_general: variances must be >= 0");
  if (!(c_bar > 0.0) || !(c_bar <= 1.0))
    throw std::invalid_argument(
        "predict_variance_general: c_bar must be in (0, 1]");
  if (!(m > 1.0))
    throw std::invalid_argument("predict_variance_general: m must be > 1");
  if (n < 1)
    throw std::invalid_argument("predict_variance_general: n must be >= 1");
  double scale = m * m / ((m - 1.0) * (m - 1.0) * double(n));
  return scale * (f_x * var_eq +
                  (1.0 - f_x) * (c_bar * var_eq + (1.0 - c_bar) * var_neq +
                                 c_bar * (1.0 - c_bar)));
}

std::vector<double> predict_expectation(
    const std::vector<std::vector<double>>& c_matrix,
    const std::vector<double>& f_vec, double m) {
  std::size_t d = f_vec.size();
  if (d == 0 || c_matrix.size() != d)
    throw std::invalid_argument(
        "predict_expectation: collision matrix must match f");
  if (!(m > 1.0))
    throw std::invalid_argument("predict_expectation: m must be > 1");
  for (std::size_t i = 0; i < d; ++i) {
    if (c_matrix[i].size() != d)
      throw std::invalid_argument("predict_expectation: ragged matrix");
    if (std::abs(c_matrix[i][i] - 1.0) > 1e-12)
      throw std::invalid_argument(
          "predict_expectation: diagonal must be 1 (an item collides with "
          "itself)");
    for (std::size_t j = 0; j < i; ++j)
      if (std::abs(c_matrix[i][j] - c_matrix[j][i]) > 1e-12)
        throw std::invalid_argument(
            "predict_expectation: collision matrix must be symmetric");
    check_fraction(f_vec[i], "f entry");
  }
  std::vector<double> out(d);
  for (std::size_t i = 0; i < d; ++i) {
    double acc = f_vec[i];
    for (std::size_t j = 0; j < d; ++j)
      if (j != i) acc += c_matrix[i][j] * f_vec[j];
    out[i] = m / (m - 1.0) * acc - 1.0 / (m - 1.0);
  }
  return out;
}

double worst_case_mse(double epsilon, std::uint64_t n, double f_star,
                      double delta) {
  check_epsilon(epsilon);
  check_fraction(f_star, "f_star");
  if (n < 1) throw std::invalid_argument("worst_case_mse: n must be >= 1");
  if (!(delta >= 0.0) || f_star + delta > 1.0 + 1e-9)
    throw std::invalid_argument(
        "worst_case_mse: delta must be >= 0 with f_star + delta <= 1");
  double nn = double(n);
  double a = std::exp(epsilon);
  double s = std::exp(epsilon / 2.0);
  if (f_star > 0.5) return s / (nn * (s - 1.0) * (s - 1.0));
  double dm = s * std::sqrt((f_star * a + 1.0 - f_star) *
                            ((1.0 - f_star) * a + f_star));
  return 2.0 * (dm + a) / (nn * (a - 1.0) * (a - 1.0)) +
         delta * (1.0 - 2.0 * f_star) * a / (nn * dm);
}

OptimalLosses optimal_losses(double epsilon, std::uint64_t n,
                             std::uint64_t d) {
  check_epsilon(epsilon);
  if (n < 1) throw std::invalid_argument("optimal_losses: n must be >= 1");
  if (d < 2) throw std::invalid_argument("optimal_losses: d must be >= 2");
  double a = std::exp(epsilon);
  double s = std::exp(epsilon / 2.0);
  double dd = double(d);
  double nn = double(n);
  double dl = s * std::sqrt((a + dd - 1.0) * (dd * a - a + 1.0));
  OptimalLosses out;
  out.l2_star = 2.0 * (dl + dd * a) / (nn * (a - 1.0) * (a - 1.0));
  out.l1_upper = std::sqrt(dd * out.l2_star);
  out.l2_limit = 4.0 * dd * a / (nn * (a - 1.0) * (a - 1.0));
  out.l1_limit = 2.0 * dd * s / (std::sqrt(nn) * (a - 1.0));
  return out;
}

double concentration_bound(double alpha, double epsilon, std::uint64_t m,
                           std::uint64_t n) {
  check_epsilon(epsilon);
  if (m < 2) throw std::invalid_argument("concentration_bound: m must be >= 2");
  if (n < 1) throw std::invalid_argument("concentration_bound: n must be >= 1");
  double a = std::exp(epsilon);
  double md = double(m);
  double limit = std::sqrt(a * double(n) / (md - 1.0));
  if (!(alpha >= 0.0) || alpha > limit)
    throw std::domain_error(
        "concentration_bound: alpha outside [0, sqrt(a*n/(m-1))]");
  return 2.0 * std::exp(-alpha * alpha / 3.0 * (md - 1.0) / (a + md - 1.0));
}

BiasStats original_cms_bias_stats(const std::vector<double>& f,
                                  std::uint64_t m, std::uint64_t k,
                                  std::uint64_t x) {
  if (m < 2)
    throw std::invalid_argument("original_cms_bias_stats: m must be >= 2");
  if (k < 1)
    throw std::invalid_argument("original_cms_bias_stats: k must be >= 1");
  if (x >= f.size())
    throw std::invalid_argument("original_cms_bias_stats: x outside f");
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    check_fraction(f[i], "f entry");
    if (i != x) acc += f[i] * f[i];
  }
  BiasStats out;
  out.mean = 0.0;
  out.variance = acc / (double(m - 1) * double(k));
  return out;
}

}  // namespace ocms
