#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <vector>

#include "shiftlab/types.hpp"

namespace shiftlab {

enum class WeightKind { Hardy, Bergman, Dirichlet, Custom };

const char* to_string(WeightKind kind);

/// Weight sequence beta_0..beta_N attached to the coefficient norm
/// ||f||^2 = sum_n beta_n^2 |a_n|^2.  beta_0 = 1 and every entry is positive.
class WeightSequence {
 public:
  static WeightSequence preset(WeightKind kind, int trunc_len);
  static WeightSequence custom(std::vector<double> values);

  WeightKind kind() const { return kind_; }
  int trunc_len() const { return static_cast<int>(values_.size()) - 1; }

  // beta(n) beyond the stored range uses the preset formula; for Custom it is
  // the upper estimate beta_N * ratio_bound^(n-N), the best certificate
  // available without a formula for the continuation of the sequence.
  double beta(int n) const;

  // max beta_{n+1}/beta_n over the stored range (reported bound for ||Mz||).
  double ratio_bound() const { return ratio_bound_; }

  // Supremum of beta_{n+1}/beta_n over ALL n, preset-aware.  The stored-range
  // maximum can undershoot the true sup (Bergman ratios increase toward 1),
  // and certified tail propagation must not undershoot.
  double up_ratio_sup() const;
  // Supremum of beta_n/beta_{n+1} over all n; bounds the left-inverse norm.
  double down_ratio_sup() const;
  // Same suprema restricted to n >= trunc_len; tighter for tail propagation.
  double up_ratio_tail() const;
  double down_ratio_tail() const;

  // Radius of the disc carrying the model: lim beta_n^(1/n).  1 for presets.
  double disc_radius() const;

 private:
  WeightSequence(WeightKind kind, std::vector<double> values);

  WeightKind kind_;
  std::vector<double> values_;
  double ratio_bound_;
  double inv_ratio_bound_;
};

struct SpaceModel {
  WeightSequence weights;
  int fiber_dim;
  int trunc_len;
  double tol;
};

/// Builds a model.  trunc_len >= 8, fiber_dim >= 1, tol > 0.  Custom weights
/// must be supplied explicitly and positive; presets ignore custom_beta.
SpaceModel make_space(WeightKind kind, int fiber_dim, int trunc_len, double tol,
                      std::vector<double> custom_beta = {});

/// Finitely supported coefficient list of a vector-valued analytic function,
/// plus a certified bound on the norm of whatever the stored truncation
/// leaves out: ||f_true - f_stored|| <= tail_bound, with no support
/// information (operations may scatter the discarded mass across degrees).
class CoeffFunction {
 public:
  CoeffFunction() : fiber_dim_(1), coeffs_(1, 1), tail_bound_(0.0) {
    coeffs_.setZero();
  }
  // coeffs: fiber_dim rows, one column per degree starting at z^0.
  CoeffFunction(Eigen::MatrixXcd coeffs, double tail_bound = 0.0);

  static CoeffFunction zero(int fiber_dim);
  static CoeffFunction constant(const Eigen::VectorXcd& value);
  // e_fiber * z^degree
  static CoeffFunction monomial(int fiber_dim, int degree, int fiber = 0,
                                Complex scale = Complex(1.0, 0.0));

  int fiber_dim() const { return fiber_dim_; }
  int degree() const { return static_cast<int>(coeffs_.cols()) - 1; }
  const Eigen::MatrixXcd& coeffs() const { return coeffs_; }
  Eigen::VectorXcd coeff(int n) const;  // zero vector beyond stored degree
  double tail_bound() const { return tail_bound_; }
  void set_tail_bound(double t);

  CoeffFunction& operator+=(const CoeffFunction& other);
  CoeffFunction& operator-=(const CoeffFunction& other);
  CoeffFunction& operator*=(Complex scale);
  friend CoeffFunction operator+(CoeffFunction a, const CoeffFunction& b) {
    return a += b;
  }
  friend CoeffFunction operator-(CoeffFunction a, const CoeffFunction& b) {
    return a -= b;
  }
  friend CoeffFunction operator*(Complex s, CoeffFunction f) { return f *= s; }

 private:
  int fiber_dim_;
  Eigen::MatrixXcd coeffs_;
  double tail_bound_;
};

double norm(const SpaceModel& model, const CoeffFunction& f);
Complex inner(const SpaceModel& model, const CoeffFunction& f,
              const CoeffFunction& g);

// Weighted coordinate embedding: component (n, i) = beta_n * a_{n,i}, degrees
// 0..trunc_len.  Euclidean geometry of the embedding = geometry of the space.
Eigen::VectorXcd embed(const SpaceModel& model, const CoeffFunction& f);
CoeffFunction unembed(const SpaceModel& model, const Eigen::VectorXcd& v,
                      double tail_bound = 0.0);

/// Coefficient up-shift (multiplication by z).  A stored top coefficient at
/// the truncation edge is folded into the tail bound, never dropped silently.
CoeffFunction apply_Mz(const SpaceModel& model, const CoeffFunction& f);

/// Coefficient down-shift: (Lf)_n = a_{n+1}.  Left inverse of apply_Mz.
CoeffFunction apply_L(const SpaceModel& model, const CoeffFunction& f);

/// Difference quotient (f(z) - f(lambda)) / (z - lambda) as an element of the
/// space: coefficients sum_{k>n} a_k lambda^(k-n-1).  lambda = 0 reduces to
/// apply_L.  Requires |lambda| strictly inside the weight disc radius.
CoeffFunction difference_quotient(const SpaceModel& model,
                                  const CoeffFunction& f, Complex lambda);

struct EvalResult {
  Eigen::VectorXcd value;
  double error_bound;  // certified from tail_bound and the weights
};

/// Horner evaluation of the stored coefficients.  Points outside the weight
/// disc radius are rejected when a nonzero tail bound makes the tail
/// uncontrolled; allow_outside skips that guard (entire truncations, kernel
/// elements).  Functions with tail_bound == 0 evaluate everywhere.
EvalResult evaluate_with_bound(const SpaceModel& model, const CoeffFunction& f,
                               Complex z, bool allow_outside = false);
Eigen::VectorXcd evaluate(const SpaceModel& model, const CoeffFunction& f,
                          Complex z, bool allow_outside = false);

/// Truncation of the kernel function 1/(1 - a z) tensored with direction e,
/// with the exact weighted tail mass recorded.  |a| < 1.
CoeffFunction truncated_kernel(const SpaceModel& model, Complex a,
                               int fiber = 0, Complex scale = Complex(1, 0));

/// Deterministic complex-Gaussian coefficients scaled by 1/beta_n, normalized
/// to unit weighted norm.  Same seed, same function, on every platform.
class ProbeGenerator {
 public:
  explicit ProbeGenerator(std::uint64_t seed) : engine_(seed) {}

  double uniform();             // [0, 1), from the standardized engine output
  double gaussian();            // Box-Muller; avoids libstdc++-specific paths
  Complex complex_gaussian();
  Complex uniform_disc(double radius_min, double radius_max);
  CoeffFunction random_function(const SpaceModel& model, int max_degree = -1);
  CoeffFunction random_polynomial(const SpaceModel& model, int degree);

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

namespace detail {

// sqrt(sum_{n >= start_deg} beta_n^2 r^(2n)), computed in scaled form so that
// deep tails (r^(2N) below the normal range) still produce a valid bound.
double weighted_tail(const WeightSequence& w, int start_deg, double r);

// sqrt(sum_{n >= start_deg} (r^n / beta_n)^2); +inf when the sum cannot be
// certified finite from the weights.
double inverse_weighted_tail(const WeightSequence& w, int start_deg, double r);

}  // namespace detail

}  // namespace shiftlab
