#include "shiftlab/resolvent.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Dense>

#include "shiftlab/subspace.hpp"
#include "shiftlab/types.hpp"

namespace shiftlab {

namespace {

// Smallest singular value of the shifted matrix, relative to this floor times
// its scale, below which the solve reports a spectrum hit instead of returning
// amplified noise.  The relative pivot test of the LU cannot flag an absolute
// near-zero in a 1 x 1 solve.
constexpr double kSpectrumHitFloor = 1e-12;

// Norm of the degree >= 1 part; the defect of membership in ker L.
double nonconstant_mass(const SpaceModel& model, const CoeffFunction& f) {
  double sum = 0.0;
  for (int n = 1; n <= f.degree(); ++n) {
    const double b = model.weights.beta(n);
    sum += b * b * f.coeffs().col(n).squaredNorm();
  }
  return std::sqrt(sum);
}

CoeffFunction constant_part(const CoeffFunction& f) {
  return CoeffFunction::constant(f.coeff(0));
}

}  // namespace

CoeffFunction resolvent_R(const SpaceModel& model, const CoeffFunction& f,
                          Complex lambda, const InvariantSubspace* subspace,
                          const NeumannOptions& opts) {
  if (subspace != nullptr) {
    const int m = subspace->dim();
    const Eigen::VectorXcd x = subspace->coordinates(model, f);
    const Eigen::MatrixXcd shifted =
        Eigen::MatrixXcd::Identity(m, m) - lambda * subspace->restriction();
    const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(shifted);
    const double scale =
        1.0 + std::abs(lambda) * subspace->restriction().norm();
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(shifted);
    if (svd.singularValues().minCoeff() <= kSpectrumHitFloor * scale ||
        !lu.isInvertible()) {
      std::ostringstream msg;
      msg << "1/lambda is an eigenvalue of the restriction (lambda = "
          << lambda << ")";
      throw SpectrumHitError(msg.str());
    }
    return subspace->combine(model, lu.solve(x));
  }

  const double fnorm = norm(model, f);
  if (fnorm == 0.0 && f.tail_bound() == 0.0) return f;
  const double threshold = model.tol * fnorm;

  CoeffFunction sum = f;
  CoeffFunction term = f;
  double prev = std::numeric_limits<double>::infinity();
  int quiet = 0;
  int growth = 0;
  bool converged = false;
  for (int k = 1; k <= opts.max_terms; ++k) {
    term = apply_L(model, term);
    term *= lambda;
    const double tnorm = norm(model, term);
    if (tnorm == 0.0 && term.tail_bound() == 0.0) {
      // The shift nilpotates polynomials; the series is exhausted exactly.
      converged = true;
      break;
    }
    sum += term;
    if (tnorm < threshold) {
      if (++quiet >= opts.quiet_terms) {
        converged = true;
        break;
      }
    } else {
      quiet = 0;
    }
    if (tnorm >= prev && tnorm >= threshold) {
      if (++growth >= opts.growth_terms)
        throw NeumannDivergenceError(
            "series terms stopped decreasing; the parameter lies outside "
            "the convergence disc");
    } else {
      growth = 0;
    }
    prev = tnorm;
  }
  if (!converged)
    throw NeumannDivergenceError("term budget exhausted before convergence");

  // Close the tail certificate over the discarded remainder of the series.
  if (f.tail_bound() > 0.0) {
    const double step = std::abs(lambda) * model.weights.down_ratio_sup();
    sum.set_tail_bound(step < 1.0
                           ? f.tail_bound() / (1.0 - step)
                           : std::numeric_limits<double>::infinity());
  }
  return sum;
}

Decomposition decompose(const SpaceModel& model, const CoeffFunction& f,
                        Complex lambda, const NeumannOptions& opts) {
  const CoeffFunction g =
      resolvent_R(model, apply_L(model, f), lambda, nullptr, opts);
  CoeffFunction diff = f;
  diff -= apply_Mz(model, g);
  diff += lambda * g;
  Decomposition out;
  out.g = g;
  out.h = constant_part(diff);
  out.residual = nonconstant_mass(model, diff);
  return out;
}

CoeffFunction kernel_component_c(const SpaceModel& model,
                                 const CoeffFunction& f, Complex lambda,
                                 const InvariantSubspace* subspace,
                                 double* residual_out) {
  if (lambda == Complex(0.0, 0.0))
    throw std::invalid_argument(
        "kernel component is degenerate at the origin");
  const CoeffFunction R = resolvent_R(model, f, lambda, subspace);
  const CoeffFunction c = constant_part(R);

  // Defining identity: (Mz - lambda) R f = Mz f - lambda c.
  CoeffFunction defect = apply_Mz(model, R);
  defect -= lambda * R;
  defect -= apply_Mz(model, f);
  defect += lambda * c;
  const double residual = norm(model, defect);
  if (residual_out != nullptr) *residual_out = residual;
  const double budget = 10.0 * model.tol * norm(model, f);
  if (residual > budget) {
    std::ostringstream msg;
    msg << "kernel component identity failed: residual " << residual
        << " exceeds budget " << budget;
    throw std::runtime_error(msg.str());
  }
  return c;
}

ContinuationResult continue_f(const SpaceModel& model, const CoeffFunction& f,
                              Complex lambda,
                              const InvariantSubspace* subspace) {
  if (lambda == Complex(0.0, 0.0))
    throw std::invalid_argument(
        "kernel component is degenerate at the origin");
  const CoeffFunction R = resolvent_R(model, f, lambda, subspace);
  const CoeffFunction c = constant_part(R);

  CoeffFunction defect = apply_Mz(model, R);
  defect -= lambda * R;
  defect -= apply_Mz(model, f);
  defect += lambda * c;
  const double residual = norm(model, defect);
  const double budget = 10.0 * model.tol * norm(model, f);

  // On the full space the series certificate only covers parameters strictly
  // inside the disc; a subspace solve that succeeded has already placed
  // 1/lambda off the restriction spectrum.
  bool certified = residual <= budget;
  if (subspace == nullptr)
    certified = certified && std::abs(lambda) < model.weights.disc_radius();

  ContinuationResult out;
  out.lambda = lambda;
  out.value = evaluate(model, c, lambda, /*allow_outside=*/true);
  out.kernel_component = c;
  out.residual = residual;
  out.in_paper_domain = certified;
  return out;
}

CoeffFunction eigenvector_at(const SpaceModel& model, Complex lambda,
                             const Eigen::VectorXcd& e) {
  const double r = std::abs(lambda);
  if (r <= model.weights.disc_radius())
    throw SpectrumHitError(
        "shift resolvent undefined on the closed model disc");
  if (e.size() != model.fiber_dim)
    throw std::invalid_argument("direction has wrong fiber dimension");
  if (e.norm() == 0.0) throw std::invalid_argument("zero direction");
  const int N = model.trunc_len;
  Eigen::MatrixXcd coeffs(model.fiber_dim, N + 1);
  // Each column is mu times the previous one, with the same rounded
  // mu = 1/lambda a caller uses in the eigen-identity; the stored part of
  // L w - mu w then cancels exactly and only the truncation edge remains.
  const Complex mu = Complex(1.0, 0.0) / lambda;
  Eigen::VectorXcd w = (-mu) * e;
  for (int n = 0; n <= N; ++n) {
    coeffs.col(n) = w;
    w = mu * w;
  }
  CoeffFunction out(std::move(coeffs));
  out.set_tail_bound(e.norm() / r *
                     detail::weighted_tail(model.weights, N + 1, 1.0 / r));
  return out;
}

ExteriorSeries exterior_series(const Eigen::MatrixXcd& T,
                               const Eigen::VectorXcd& h, int e_dim,
                               int terms) {
  const long m = T.rows();
  if (T.cols() != m) throw std::invalid_argument("matrix must be square");
  if (h.size() != m) throw std::invalid_argument("vector length mismatch");
  if (e_dim < 1 || e_dim > m)
    throw std::invalid_argument("projection dimension out of range");
  if (terms < 1) throw std::invalid_argument("need at least one term");

  ExteriorSeries out;
  out.coefficients.reserve(terms);
  Eigen::VectorXcd v = h;
  for (int n = 0; n < terms; ++n) {
    v = T * v;
    out.coefficients.push_back(v.head(e_dim));
  }
  out.ratios.reserve(terms > 1 ? terms - 1 : 0);
  for (int n = 0; n + 1 < terms; ++n) {
    const double a = out.coefficients[n].norm();
    const double b = out.coefficients[n + 1].norm();
    out.ratios.push_back(a > 0.0 ? b / a : 0.0);
  }
  return out;
}

}  // namespace shiftlab
