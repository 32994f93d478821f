#include "shiftlab/space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace shiftlab {

const char* to_string(WeightKind kind) {
  switch (kind) {
    case WeightKind::Hardy: return "hardy";
    case WeightKind::Bergman: return "bergman";
    case WeightKind::Dirichlet: return "dirichlet";
    case WeightKind::Custom: return "custom";
  }
  return "unknown";
}

WeightSequence::WeightSequence(WeightKind kind, std::vector<double> values)
    : kind_(kind), values_(std::move(values)) {
  ratio_bound_ = 0.0;
  inv_ratio_bound_ = 0.0;
  for (std::size_t n = 0; n + 1 < values_.size(); ++n) {
    ratio_bound_ = std::max(ratio_bound_, values_[n + 1] / values_[n]);
    inv_ratio_bound_ = std::max(inv_ratio_bound_, values_[n] / values_[n + 1]);
  }
  if (values_.size() < 2) ratio_bound_ = inv_ratio_bound_ = 1.0;
}

WeightSequence WeightSequence::preset(WeightKind kind, int trunc_len) {
  if (kind == WeightKind::Custom)
    throw std::invalid_argument("custom weights need explicit values");
  std::vector<double> values(static_cast<std::size_t>(trunc_len) + 1);
  for (int n = 0; n <= trunc_len; ++n) {
    switch (kind) {
      case WeightKind::Hardy: values[n] = 1.0; break;
      case WeightKind::Bergman: values[n] = 1.0 / std::sqrt(n + 1.0); break;
      case WeightKind::Dirichlet: values[n] = std::sqrt(n + 1.0); break;
      default: break;
    }
  }
  return WeightSequence(kind, std::move(values));
}

WeightSequence WeightSequence::custom(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("empty weight sequence");
  if (std::abs(values.front() - 1.0) > 1e-12)
    throw std::invalid_argument("weight sequence must start at beta_0 = 1");
  for (double v : values)
    if (!(v > 0.0))
      throw std::invalid_argument("weights must be strictly positive");
  return WeightSequence(WeightKind::Custom, std::move(values));
}

double WeightSequence::beta(int n) const {
  if (n < 0) throw std::invalid_argument("negative degree");
  if (n < static_cast<int>(values_.size())) return values_[n];
  switch (kind_) {
    case WeightKind::Hardy: return 1.0;
    case WeightKind::Bergman: return 1.0 / std::sqrt(n + 1.0);
    case WeightKind::Dirichlet: return std::sqrt(n + 1.0);
    case WeightKind::Custom:
      return values_.back() *
             std::pow(ratio_bound_, n - trunc_len());
  }
  return 1.0;
}

double WeightSequence::up_ratio_sup() const {
  switch (kind_) {
    case WeightKind::Hardy: return 1.0;
    case WeightKind::Bergman: return 1.0;  // ratios increase toward 1
    case WeightKind::Dirichlet: return std::sqrt(2.0);  // attained at n = 0
    case WeightKind::Custom: return ratio_bound_;
  }
  return ratio_bound_;
}

double WeightSequence::down_ratio_sup() const {
  switch (kind_) {
    case WeightKind::Hardy: return 1.0;
    case WeightKind::Bergman: return std::sqrt(2.0);  // attained at n = 0
    case WeightKind::Dirichlet: return 1.0;  // ratios increase toward 1
    case WeightKind::Custom: return inv_ratio_bound_;
  }
  return inv_ratio_bound_;
}

double WeightSequence::up_ratio_tail() const {
  const int N = trunc_len();
  switch (kind_) {
    case WeightKind::Hardy: return 1.0;
    case WeightKind::Bergman: return 1.0;
    case WeightKind::Dirichlet:
      return std::sqrt((N + 2.0) / (N + 1.0));
    case WeightKind::Custom: return ratio_bound_;
  }
  return ratio_bound_;
}

double WeightSequence::down_ratio_tail() const {
  const int N = trunc_len();
  switch (kind_) {
    case WeightKind::Hardy: return 1.0;
    case WeightKind::Bergman:
      return std::sqrt((N + 2.0) / (N + 1.0));
    case WeightKind::Dirichlet: return 1.0;
    case WeightKind::Custom: return inv_ratio_bound_;
  }
  return inv_ratio_bound_;
}

double WeightSequence::disc_radius() const {
  if (kind_ != WeightKind::Custom) return 1.0;
  const int N = trunc_len();
  if (N == 0) return 1.0;
  return std::pow(values_.back(), 1.0 / N);
}

SpaceModel make_space(WeightKind kind, int fiber_dim, int trunc_len, double tol,
                      std::vector<double> custom_beta) {
  if (trunc_len < 8)
    throw std::invalid_argument(
        "truncation length below 8 cannot hold any test function");
  if (fiber_dim < 1) throw std::invalid_argument("fiber dimension must be >= 1");
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (kind == WeightKind::Custom) {
    if (static_cast<int>(custom_beta.size()) != trunc_len + 1) {
      std::ostringstream msg;
      msg << "custom weights need exactly " << trunc_len + 1
          << " values (got " << custom_beta.size() << ")";
      throw std::invalid_argument(msg.str());
    }
    return SpaceModel{WeightSequence::custom(std::move(custom_beta)), fiber_dim,
                      trunc_len, tol};
  }
  return SpaceModel{WeightSequence::preset(kind, trunc_len), fiber_dim,
                    trunc_len, tol};
}

CoeffFunction::CoeffFunction(Eigen::MatrixXcd coeffs, double tail_bound)
    : fiber_dim_(static_cast<int>(coeffs.rows())),
      coeffs_(std::move(coeffs)),
      tail_bound_(tail_bound) {
  if (fiber_dim_ < 1 || coeffs_.cols() < 1)
    throw std::invalid_argument("coefficient matrix must be nonempty");
  if (!(tail_bound_ >= 0.0))
    throw std::invalid_argument("tail bound must be nonnegative");
}

CoeffFunction CoeffFunction::zero(int fiber_dim) {
  return CoeffFunction(Eigen::MatrixXcd::Zero(fiber_dim, 1));
}

CoeffFunction CoeffFunction::constant(const Eigen::VectorXcd& value) {
  if (value.size() < 1) throw std::invalid_argument("empty constant");
  Eigen::MatrixXcd m(value.size(), 1);
  m.col(0) = value;
  return CoeffFunction(std::move(m));
}

CoeffFunction CoeffFunction::monomial(int fiber_dim, int degree, int fiber,
                                      Complex scale) {
  if (degree < 0 || fiber < 0 || fiber >= fiber_dim)
    throw std::invalid_argument("monomial index out of range");
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(fiber_dim, degree + 1);
  m(fiber, degree) = scale;
  return CoeffFunction(std::move(m));
}

Eigen::VectorXcd CoeffFunction::coeff(int n) const {
  if (n < 0) throw std::invalid_argument("negative degree");
  if (n > degree()) return Eigen::VectorXcd::Zero(fiber_dim_);
  return coeffs_.col(n);
}

void CoeffFunction::set_tail_bound(double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("tail bound must be nonnegative");
  tail_bound_ = t;
}

CoeffFunction& CoeffFunction::operator+=(const CoeffFunction& other) {
  if (fiber_dim_ != other.fiber_dim_)
    throw std::invalid_argument("fiber dimension mismatch");
  if (other.coeffs_.cols() > coeffs_.cols())
    coeffs_.conservativeResizeLike(
        Eigen::MatrixXcd::Zero(fiber_dim_, other.coeffs_.cols()));
  coeffs_.leftCols(other.coeffs_.cols()) += other.coeffs_;
  tail_bound_ += other.tail_bound_;
  return *this;
}

CoeffFunction& CoeffFunction::operator-=(const CoeffFunction& other) {
  if (fiber_dim_ != other.fiber_dim_)
    throw std::invalid_argument("fiber dimension mismatch");
  if (other.coeffs_.cols() > coeffs_.cols())
    coeffs_.conservativeResizeLike(
        Eigen::MatrixXcd::Zero(fiber_dim_, other.coeffs_.cols()));
  coeffs_.leftCols(other.coeffs_.cols()) -= other.coeffs_;
  tail_bound_ += other.tail_bound_;
  return *this;
}

CoeffFunction& CoeffFunction::operator*=(Complex scale) {
  coeffs_ *= scale;
  tail_bound_ *= std::abs(scale);
  return *this;
}

double norm(const SpaceModel& model, const CoeffFunction& f) {
  double sum = 0.0;
  for (int n = 0; n <= f.degree(); ++n) {
    const double b = model.weights.beta(n);
    sum += b * b * f.coeffs().col(n).squaredNorm();
  }
  return std::sqrt(sum);
}

Complex inner(const SpaceModel& model, const CoeffFunction& f,
              const CoeffFunction& g) {
  if (f.fiber_dim() != g.fiber_dim())
    throw std::invalid_argument("fiber dimension mismatch");
  Complex sum = 0.0;
  const int top = std::min(f.degree(), g.degree());
  for (int n = 0; n <= top; ++n) {
    const double b = model.weights.beta(n);
    // Eigen's dot conjugates its receiver, so this is conjugate-linear in g.
    sum += b * b * g.coeffs().col(n).dot(f.coeffs().col(n));
  }
  return sum;
}

Eigen::VectorXcd embed(const SpaceModel& model, const CoeffFunction& f) {
  const int d = model.fiber_dim;
  const int N = model.trunc_len;
  if (f.fiber_dim() != d) throw std::invalid_argument("fiber dimension mismatch");
  if (f.degree() > N)
    throw std::invalid_argument("degree exceeds truncation length");
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<long>(d) * (N + 1));
  for (int n = 0; n <= f.degree(); ++n)
    v.segment(static_cast<long>(d) * n, d) =
        model.weights.beta(n) * f.coeffs().col(n);
  return v;
}

CoeffFunction unembed(const SpaceModel& model, const Eigen::VectorXcd& v,
                      double tail_bound) {
  const int d = model.fiber_dim;
  const int N = model.trunc_len;
  if (v.size() != static_cast<long>(d) * (N + 1))
    throw std::invalid_argument("coordinate vector has wrong length");
  Eigen::MatrixXcd coeffs(d, N + 1);
  for (int n = 0; n <= N; ++n)
    coeffs.col(n) = v.segment(static_cast<long>(d) * n, d) /
                    model.weights.beta(n);
  int top = N;
  while (top > 0 && coeffs.col(top).norm() == 0.0) --top;
  return CoeffFunction(coeffs.leftCols(top + 1), tail_bound);
}

CoeffFunction apply_Mz(const SpaceModel& model, const CoeffFunction& f) {
  const int N = model.trunc_len;
  const int deg = f.degree();
  double tail = model.weights.up_ratio_sup() * f.tail_bound();
  int new_deg = deg + 1;
  if (new_deg > N) {
    // The top coefficient leaves the stored range; its mass moves to the
    // tail bound so nothing is dropped silently.
    tail += model.weights.beta(N + 1) * f.coeffs().col(N).norm();
    new_deg = N;
  }
  Eigen::MatrixXcd coeffs =
      Eigen::MatrixXcd::Zero(f.fiber_dim(), new_deg + 1);
  const int copy = std::min(deg, new_deg - 1);
  coeffs.rightCols(new_deg).leftCols(copy + 1) = f.coeffs().leftCols(copy + 1);
  CoeffFunction out(std::move(coeffs));
  out.set_tail_bound(tail);
  return out;
}

CoeffFunction apply_L(const SpaceModel& model, const CoeffFunction& f) {
  const double tail = model.weights.down_ratio_sup() * f.tail_bound();
  CoeffFunction out = CoeffFunction::zero(f.fiber_dim());
  if (f.degree() >= 1) {
    out = CoeffFunction(f.coeffs().rightCols(f.degree()));
  }
  out.set_tail_bound(tail);
  return out;
}

CoeffFunction difference_quotient(const SpaceModel& model,
                                  const CoeffFunction& f, Complex lambda) {
  if (std::abs(lambda) >= model.weights.disc_radius())
    throw std::invalid_argument(
        "difference quotient point outside the model disc");
  double tail = 0.0;
  if (f.tail_bound() > 0.0) {
    // The discarded mass passes through repeated down-shifts; the geometric
    // sum of their norms is finite only strictly inside 1 / ||L||.
    const double c = model.weights.down_ratio_sup();
    const double r = std::abs(lambda) * c;
    if (r >= 1.0)
      throw std::invalid_argument(
          "tail bound cannot be propagated at this point");
    tail = f.tail_bound() * c / (1.0 - r);
  }
  const int deg = f.degree();
  if (deg == 0) {
    CoeffFunction out = CoeffFunction::zero(f.fiber_dim());
    out.set_tail_bound(tail);
    return out;
  }
  Eigen::MatrixXcd coeffs(f.fiber_dim(), deg);
  // b_n = a_{n+1} + lambda * b_{n+1}, accumulated top-down.
  coeffs.col(deg - 1) = f.coeffs().col(deg);
  for (int n = deg - 2; n >= 0; --n)
    coeffs.col(n) = f.coeffs().col(n + 1) + lambda * coeffs.col(n + 1);
  CoeffFunction out(std::move(coeffs));
  out.set_tail_bound(tail);
  return out;
}

namespace detail {

// Sum of r^(2n) / beta_n^2 over n >= start_deg, as a scaled square root:
// returns sqrt of the sum, computed in log space so deep tails that
// underflow double range still yield a usable value.
double inverse_weighted_tail(const WeightSequence& w, int start_deg, double r) {
  if (r < 0.0) throw std::invalid_argument("negative radius");
  if (r == 0.0) return start_deg == 0 ? 1.0 / w.beta(0) : 0.0;
  const double ratio = r * w.down_ratio_tail();
  if (ratio >= 1.0) return std::numeric_limits<double>::infinity();
  // Terms beyond the stored range decay at least geometrically with
  // quotient ratio^2; sum the stored range exactly and close with the
  // geometric majorant.
  const int N = w.trunc_len();
  const int top = std::max(start_deg, N + 1);
  double log_scale = start_deg * std::log(r) - std::log(w.beta(start_deg));
  double sum = 0.0;
  for (int n = start_deg; n <= top; ++n) {
    const double log_term = n * std::log(r) - std::log(w.beta(n));
    sum += std::exp(2.0 * (log_term - log_scale));
  }
  // Geometric closure for n > top.
  const double last = std::exp(
      2.0 * (top * std::log(r) - std::log(w.beta(top)) - log_scale));
  sum += last * ratio * ratio / (1.0 - ratio * ratio);
  return std::exp(log_scale) * std::sqrt(sum);
}

// Sum of beta_n^2 r^(2n) over n >= start_deg, as a scaled square root.
double weighted_tail(const WeightSequence& w, int start_deg, double r) {
  if (r < 0.0) throw std::invalid_argument("negative radius");
  if (r == 0.0) return start_deg == 0 ? w.beta(0) : 0.0;
  const double ratio = r * w.up_ratio_tail();
  if (ratio >= 1.0) return std::numeric_limits<double>::infinity();
  const int N = w.trunc_len();
  const int top = std::max(start_deg, N + 1);
  double log_scale = start_deg * std::log(r) + std::log(w.beta(start_deg));
  double sum = 0.0;
  for (int n = start_deg; n <= top; ++n) {
    const double log_term = n * std::log(r) + std::log(w.beta(n));
    sum += std::exp(2.0 * (log_term - log_scale));
  }
  const double last = std::exp(
      2.0 * (top * std::log(r) + std::log(w.beta(top)) - log_scale));
  sum += last * ratio * ratio / (1.0 - ratio * ratio);
  return std::exp(log_scale) * std::sqrt(sum);
}

}  // namespace detail

EvalResult evaluate_with_bound(const SpaceModel& model, const CoeffFunction& f,
                               Complex z, bool allow_outside) {
  const double r = std::abs(z);
  double bound = 0.0;
  if (f.tail_bound() > 0.0) {
    // Cauchy-Schwarz against the full point-evaluation functional, since the
    // discarded mass carries no degree information.
    const double factor = detail::inverse_weighted_tail(model.weights, 0, r);
    if (!std::isfinite(factor) && !allow_outside)
      throw std::invalid_argument(
          "evaluation point outside the certified disc for this tail");
    bound = f.tail_bound() * factor;
  }
  Eigen::VectorXcd value = f.coeffs().col(f.degree());
  for (int n = f.degree() - 1; n >= 0; --n)
    value = f.coeffs().col(n) + z * value;
  EvalResult out;
  out.value = value;
  out.error_bound = bound;
  return out;
}

Eigen::VectorXcd evaluate(const SpaceModel& model, const CoeffFunction& f,
                          Complex z, bool allow_outside) {
  return evaluate_with_bound(model, f, z, allow_outside).value;
}

CoeffFunction truncated_kernel(const SpaceModel& model, Complex a, int fiber,
                               Complex scale) {
  const int d = model.fiber_dim;
  const int N = model.trunc_len;
  if (fiber < 0 || fiber >= d) throw std::invalid_argument("fiber out of range");
  if (std::abs(a) >= model.weights.disc_radius())
    throw std::invalid_argument("kernel point outside the model disc");
  Eigen::MatrixXcd coeffs = Eigen::MatrixXcd::Zero(d, N + 1);
  Complex an = scale;  // conj(a)^n / beta_n^2 at n = 0
  for (int n = 0; n <= N; ++n) {
    const double b = model.weights.beta(n);
    coeffs(fiber, n) = an / (b * b);
    an *= std::conj(a);
  }
  CoeffFunction out(std::move(coeffs));
  // Dropped mass: sqrt(sum_{n>N} beta_n^2 |a|^{2n} / beta_n^4), exact for
  // the kernel's coefficients a^n / beta_n^2.
  out.set_tail_bound(std::abs(scale) *
                     detail::inverse_weighted_tail(model.weights, N + 1,
                                                   std::abs(a)));
  return out;
}

double ProbeGenerator::uniform() {
  // 53-bit mantissa draw in [0, 1); engine output is portable across
  // platforms, unlike std::uniform_real_distribution.
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double ProbeGenerator::gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 == 0.0) u1 = uniform();
  const double u2 = uniform();
  const double mag = std::sqrt(-2.0 * std::log(u1));
  const double ang = 2.0 * std::numbers::pi * u2;
  spare_ = mag * std::sin(ang);
  have_spare_ = true;
  return mag * std::cos(ang);
}

Complex ProbeGenerator::complex_gaussian() {
  return Complex(gaussian(), gaussian()) / std::sqrt(2.0);
}

Complex ProbeGenerator::uniform_disc(double rmin, double rmax) {
  if (!(0.0 <= rmin && rmin <= rmax))
    throw std::invalid_argument("bad annulus radii");
  // Area-uniform radius in the annulus.
  const double u = uniform();
  const double r =
      std::sqrt(rmin * rmin + u * (rmax * rmax - rmin * rmin));
  const double ang = 2.0 * std::numbers::pi * uniform();
  return Complex(r * std::cos(ang), r * std::sin(ang));
}

CoeffFunction ProbeGenerator::random_function(const SpaceModel& model,
                                              int max_degree) {
  const int top = max_degree < 0 ? model.trunc_len : max_degree;
  if (top > model.trunc_len)
    throw std::invalid_argument("degree exceeds truncation length");
  Eigen::MatrixXcd coeffs(model.fiber_dim, top + 1);
  for (int n = 0; n <= top; ++n)
    for (int i = 0; i < model.fiber_dim; ++i)
      coeffs(i, n) = complex_gaussian() / model.weights.beta(n);
  CoeffFunction out(std::move(coeffs));
  const double nrm = norm(model, out);
  if (nrm > 0.0) out *= Complex(1.0 / nrm, 0.0);
  return out;
}

CoeffFunction ProbeGenerator::random_polynomial(const SpaceModel& model,
                                                int degree) {
  return random_function(model, degree);
}

}  // namespace shiftlab
