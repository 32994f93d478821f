#include "shiftlab/subspace.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Dense>

#include "shiftlab/types.hpp"

namespace shiftlab {

namespace {

constexpr double kGramConditionLimit = 1e12;
// Orbit extension vectors may approach linear dependence; candidates whose
// orthogonal component falls below this fraction of their norm are dropped,
// which also keeps the retained gram inside the condition guard.
constexpr double kOrbitDedupeThreshold = 1e-5;

}  // namespace

InvariantSubspace InvariantSubspace::build(const SpaceModel& model,
                                           std::vector<CoeffFunction> generators,
                                           SubspaceMode mode,
                                           double tolerance) {
  if (generators.empty())
    throw std::invalid_argument("no generators supplied");
  if (!(tolerance > 0.0))
    throw std::invalid_argument("tolerance must be positive");
  for (const auto& g : generators) {
    if (g.fiber_dim() != model.fiber_dim)
      throw std::invalid_argument("generator fiber dimension mismatch");
    if (g.degree() > model.trunc_len)
      throw std::invalid_argument("generator exceeds the truncation length");
  }

  const bool orbit_mode = std::holds_alternative<OrbitClosure>(mode);
  std::vector<CoeffFunction> raw;
  if (orbit_mode) {
    const int power = std::get<OrbitClosure>(mode).power;
    if (power < 1) throw std::invalid_argument("orbit power must be >= 1");
    // L^k generators for k < power, deduplicated by sequential
    // orthogonalization against what is already accepted.
    std::vector<Eigen::VectorXcd> accepted;
    for (int k = 0; k < power; ++k) {
      for (const auto& g : generators) {
        CoeffFunction cand = g;
        for (int j = 0; j < k; ++j) cand = apply_L(model, cand);
        Eigen::VectorXcd v = embed(model, cand);
        const double vnorm = v.norm();
        if (vnorm < 1e-14) continue;
        Eigen::VectorXcd w = v;
        for (const auto& u : accepted) w -= u.dot(w) * u;
        if (w.norm() <= kOrbitDedupeThreshold * vnorm) continue;
        accepted.push_back(w / w.norm());
        raw.push_back(std::move(cand));
      }
    }
    if (raw.empty())
      throw std::invalid_argument("orbit collapsed to the zero subspace");
  } else {
    raw = std::move(generators);
  }

  InvariantSubspace sub;
  sub.tolerance_ = tolerance;
  sub.basis_.reserve(raw.size());
  for (auto& g : raw) {
    const double n = norm(model, g);
    if (n == 0.0) throw std::invalid_argument("zero generator");
    g *= Complex(1.0 / n, 0.0);
    sub.basis_.push_back(std::move(g));
  }

  const int m = static_cast<int>(sub.basis_.size());
  const long rows = static_cast<long>(model.fiber_dim) * (model.trunc_len + 1);
  sub.embedded_.resize(rows, m);
  for (int j = 0; j < m; ++j)
    sub.embedded_.col(j) = embed(model, sub.basis_[j]);

  sub.gram_ = sub.embedded_.adjoint() * sub.embedded_;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(sub.gram_);
  const double ev_min = es.eigenvalues().minCoeff();
  const double ev_max = es.eigenvalues().maxCoeff();
  sub.gram_condition_ =
      ev_min > 0.0 ? ev_max / ev_min : std::numeric_limits<double>::infinity();
  if (!(ev_min > 0.0) || sub.gram_condition_ > kGramConditionLimit) {
    std::ostringstream msg;
    msg << "generator gram condition " << sub.gram_condition_
        << " exceeds " << kGramConditionLimit;
    throw IllConditionedBasisError(msg.str());
  }

  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(sub.embedded_);
  sub.q_ = qr.householderQ() * Eigen::MatrixXcd::Identity(rows, m);
  sub.r_ = qr.matrixQR()
               .topRows(m)
               .triangularView<Eigen::Upper>();

  Eigen::MatrixXcd shifted(rows, m);
  for (int j = 0; j < m; ++j)
    shifted.col(j) = embed(model, apply_L(model, sub.basis_[j]));
  sub.restriction_ = sub.r_.triangularView<Eigen::Upper>().solve(
      sub.q_.adjoint() * shifted);

  sub.closure_residual_ = 0.0;
  for (int j = 0; j < m; ++j) {
    const double defect =
        (shifted.col(j) - sub.embedded_ * sub.restriction_.col(j)).norm();
    sub.closure_residual_ = std::max(sub.closure_residual_, defect);
  }
  if (!orbit_mode && sub.closure_residual_ > tolerance) {
    std::ostringstream msg;
    msg << "generators do not span an invariant subspace: closure residual "
        << sub.closure_residual_ << " exceeds " << tolerance;
    throw std::invalid_argument(msg.str());
  }
  return sub;
}

Eigen::VectorXcd InvariantSubspace::coordinates(const SpaceModel& model,
                                                const CoeffFunction& f) const {
  const Eigen::VectorXcd v = embed(model, f);
  return r_.triangularView<Eigen::Upper>().solve(q_.adjoint() * v);
}

CoeffFunction InvariantSubspace::project(const SpaceModel& model,
                                         const CoeffFunction& f) const {
  const Eigen::VectorXcd v = embed(model, f);
  // Projections contract, so the input's tail bound still covers the output.
  return unembed(model, q_ * (q_.adjoint() * v), f.tail_bound());
}

CoeffFunction InvariantSubspace::combine(const SpaceModel& model,
                                         const Eigen::VectorXcd& coords) const {
  if (coords.size() != dim())
    throw std::invalid_argument("coordinate length mismatch");
  CoeffFunction out = CoeffFunction::zero(model.fiber_dim);
  for (int j = 0; j < dim(); ++j) out += coords(j) * basis_[j];
  return out;
}

double InvariantSubspace::projection_defect(const SpaceModel& model,
                                            const CoeffFunction& f) const {
  const Eigen::VectorXcd v = embed(model, f);
  return (v - q_ * (q_.adjoint() * v)).norm();
}

Eigen::VectorXcd restriction_spectrum(const InvariantSubspace& sub) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(sub.restriction());
  return es.eigenvalues();
}

MembershipResult membership_test(const SpaceModel& model,
                                 const InvariantSubspace& sub,
                                 const CoeffFunction& f, double threshold) {
  const double fnorm = norm(model, f);
  if (fnorm == 0.0)
    throw std::invalid_argument(
        "membership ratio undefined for the zero function");
  const double thr = threshold > 0.0 ? threshold : sub.tolerance();
  MembershipResult out;
  out.residual = sub.projection_defect(model, f) / fnorm;
  out.threshold = thr;
  out.is_member = out.residual <= thr;
  return out;
}

PointSpectrumResult point_spectrum_restriction(
    const SpaceModel& model, const InvariantSubspace& sub, Complex lambda,
    const std::vector<Eigen::VectorXcd>& kernel_basis, double eigen_tol) {
  if (std::abs(lambda) <= model.weights.disc_radius())
    throw std::domain_error(
        "parameter must lie strictly outside the closed model disc");
  if (kernel_basis.empty())
    throw std::invalid_argument("empty kernel basis");

  const int K = static_cast<int>(kernel_basis.size());
  const long rows = static_cast<long>(model.fiber_dim) * (model.trunc_len + 1);
  Eigen::MatrixXcd X(rows, K);
  Eigen::MatrixXcd D(rows, K);
  for (int j = 0; j < K; ++j) {
    const CoeffFunction cand = eigenvector_at(model, lambda, kernel_basis[j]);
    X.col(j) = embed(model, cand);
    D.col(j) = X.col(j) - embed(model, sub.project(model, cand));
  }

  const Eigen::MatrixXcd B = X.adjoint() * X;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> bes(B);
  const double bmin = bes.eigenvalues().minCoeff();
  const double bmax = bes.eigenvalues().maxCoeff();
  if (!(bmin > 0.0) || bmax / bmin > kGramConditionLimit)
    throw IllConditionedBasisError("kernel directions nearly dependent");

  // Smallest relative projection defect over the whole candidate span.
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXcd> ges(
      D.adjoint() * D, B);
  const double mu = std::max(0.0, ges.eigenvalues().minCoeff());

  PointSpectrumResult out;
  out.membership_residual = std::sqrt(mu);
  out.via_membership = out.membership_residual <= sub.tolerance();

  const Eigen::VectorXcd eigs = restriction_spectrum(sub);
  out.eigenvalue_distance =
      (eigs.array() - Complex(1.0, 0.0) / lambda).abs().minCoeff();
  out.via_eigenvalue = out.eigenvalue_distance <= eigen_tol;

  out.in_point_spectrum = out.via_membership;
  out.agree = out.via_membership == out.via_eigenvalue;
  return out;
}

ArrDiscReport arr_disc_check(const SpaceModel& model,
                             const InvariantSubspace& sub,
                             const std::vector<Complex>& samples,
                             double spectrum_tol) {
  if (model.fiber_dim != 1)
    throw std::invalid_argument("disc comparison is scalar-fiber only");
  ArrDiscReport report;
  report.disagreements = 0;
  const Eigen::VectorXcd eigs = restriction_spectrum(sub);
  for (Complex a : samples) {
    ArrSample s;
    s.a = a;
    s.in_spectrum = (eigs.array() - a).abs().minCoeff() <= spectrum_tol;
    s.is_member =
        membership_test(model, sub, truncated_kernel(model, a)).is_member;
    s.agree = s.in_spectrum == s.is_member;
    if (!s.agree) ++report.disagreements;
    report.samples.push_back(s);
  }
  return report;
}

}  // namespace shiftlab
