#pragma once

#include <variant>
#include <vector>

#include "shiftlab/resolvent.hpp"
#include "shiftlab/space.hpp"

namespace shiftlab {

struct ExactSpan {};
struct OrbitClosure {
  int power;  // augment with L^k generators for k < power
};
using SubspaceMode = std::variant<ExactSpan, OrbitClosure>;

/// Finite-dimensional stand-in for a closed subspace invariant under the
/// down-shift.  Holds a normalized generating basis, its Gram matrix, the
/// matrix A of the restricted down-shift (L b_j ~ sum_i A_ij b_i) and the
/// residual of that approximation.  ExactSpan demands the residual stay under
/// the build tolerance; OrbitClosure reports whatever residual remains.
class InvariantSubspace {
 public:
  static InvariantSubspace build(const SpaceModel& model,
                                 std::vector<CoeffFunction> generators,
                                 SubspaceMode mode = ExactSpan{},
                                 double tolerance = 1e-6);

  int dim() const { return static_cast<int>(basis_.size()); }
  const std::vector<CoeffFunction>& basis() const { return basis_; }
  const Eigen::MatrixXcd& gram() const { return gram_; }
  const Eigen::MatrixXcd& restriction() const { return restriction_; }
  double closure_residual() const { return closure_residual_; }
  double gram_condition() const { return gram_condition_; }
  double tolerance() const { return tolerance_; }

  // Least-squares coordinates of f in the basis, via the cached QR frame.
  Eigen::VectorXcd coordinates(const SpaceModel& model,
                               const CoeffFunction& f) const;
  // Orthogonal projection onto the span.
  CoeffFunction project(const SpaceModel& model, const CoeffFunction& f) const;
  // Recombines basis elements with the given coordinates.
  CoeffFunction combine(const SpaceModel& model,
                        const Eigen::VectorXcd& coords) const;
  // ||f - P f|| in the weighted norm (stored coefficients).
  double projection_defect(const SpaceModel& model,
                           const CoeffFunction& f) const;

 private:
  std::vector<CoeffFunction> basis_;
  Eigen::MatrixXcd embedded_;   // columns: weighted embeddings of the basis
  Eigen::MatrixXcd q_;          // thin orthonormal frame for the span
  Eigen::MatrixXcd r_;          // triangular factor pairing with q_
  Eigen::MatrixXcd gram_;
  Eigen::MatrixXcd restriction_;
  double closure_residual_ = 0.0;
  double gram_condition_ = 1.0;
  double tolerance_ = 1e-6;
};

/// Eigenvalues of the restriction matrix.
Eigen::VectorXcd restriction_spectrum(const InvariantSubspace& sub);

struct MembershipResult {
  bool is_member;
  double residual;   // ||f - P f|| / ||f||
  double threshold;  // the threshold the verdict used
};

/// Relative projection defect versus a configurable threshold (default: the
/// subspace's own tolerance... overridden per call when threshold > 0).
/// Zero input has no meaningful ratio and is rejected.
MembershipResult membership_test(const SpaceModel& model,
                                 const InvariantSubspace& sub,
                                 const CoeffFunction& f,
                                 double threshold = -1.0);

struct PointSpectrumResult {
  bool in_point_spectrum;    // membership-side answer (the defining predicate)
  bool via_membership;
  bool via_eigenvalue;       // 1/lambda close to an eigenvalue of A
  bool agree;
  double membership_residual;  // min over the candidate span, relative
  double eigenvalue_distance;
};

/// Decides whether 1/lambda is an eigenvalue of the restricted down-shift by
/// searching span{ (Mz - lambda)^{-1} e : e in kernel_basis } for a member of
/// the subspace, then cross-checks against the restriction spectrum.
/// |lambda| must exceed the disc radius.
PointSpectrumResult point_spectrum_restriction(
    const SpaceModel& model, const InvariantSubspace& sub, Complex lambda,
    const std::vector<Eigen::VectorXcd>& kernel_basis,
    double eigen_tol = 1e-6);

struct ArrSample {
  Complex a;
  bool in_spectrum;
  bool is_member;
  bool agree;
};

struct ArrDiscReport {
  std::vector<ArrSample> samples;
  int disagreements;
};

/// Scalar fiber only: for each sample a in the disc, compares
/// "a is in the restriction spectrum" with "the kernel function at a belongs
/// to the subspace".  The two verdicts coincide on the whole disc.
ArrDiscReport arr_disc_check(const SpaceModel& model,
                             const InvariantSubspace& sub,
                             const std::vector<Complex>& samples,
                             double spectrum_tol = 1e-6);

}  // namespace shiftlab
