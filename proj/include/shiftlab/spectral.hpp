#pragma once

#include <vector>

#include "shiftlab/subspace.hpp"

namespace shiftlab {

enum class OperatorTag { Mz, L, RestrictionMatrix };

const char* to_string(OperatorTag tag);

/// Smallest singular value of the truncated matrix of (T - lambda).  The
/// up-shift is truncated rectangularly (degrees < n_eff into degrees <=
/// n_eff): the square compression would fabricate a kernel at the top degree.
/// The down-shift maps the truncation into itself, so its square matrix is
/// exact.  RestrictionMatrix ignores n_eff and uses the subspace matrix.
double svd_indicator(const SpaceModel& model, OperatorTag tag, Complex lambda,
                     int n_eff, const InvariantSubspace* sub = nullptr);

/// Two-sided membership proxy for "lambda in the spectrum": the minimum of
/// the forward indicator and the indicator of the adjoint truncation.  The
/// forward side alone misses interior points whose defect is a non-dense
/// range rather than an approximate kernel (the up-shift inside the disc).
double spectrum_membership_indicator(const SpaceModel& model, OperatorTag tag,
                                     Complex lambda, int n_eff,
                                     const InvariantSubspace* sub = nullptr);

/// Number of singular values of the truncated matrix strictly below the
/// threshold, counted with fiber multiplicity (the shifts act fiberwise, so
/// every scalar singular value appears fiber_dim times).
int singular_count_below(const SpaceModel& model, OperatorTag tag,
                         Complex lambda, int n_eff, double threshold,
                         const InvariantSubspace* sub = nullptr);

struct GridSpec {
  Complex center;
  double radius;
  int resolution;  // >= 8; radius 0 degenerates to the single center point
};

struct SpectralScan {
  std::vector<Complex> grid;       // row-major, deterministic order
  std::vector<double> indicator;
  int trunc_len;
  OperatorTag operator_tag;
};

SpectralScan scan_grid(const SpaceModel& model, OperatorTag tag,
                       const GridSpec& spec, int n_eff = -1,
                       const InvariantSubspace* sub = nullptr);

struct SpectralRadiusEstimate {
  double value;                     // max over probes of ||T^k x||^(1/k)
  std::vector<double> per_iteration;  // running estimate, k = 1..iterations
};

/// Growth-rate estimate of the iterated operator over a fixed probe set
/// (default: constant, near-boundary kernel function, seeded random).
SpectralRadiusEstimate spectral_radius_estimate(
    const SpaceModel& model, OperatorTag tag, int iterations,
    const std::vector<CoeffFunction>* probes = nullptr,
    const InvariantSubspace* sub = nullptr);

struct ReciprocityEntry {
  Complex lambda;
  std::vector<double> indicators;  // down-shift indicator at 1/lambda, n_eff doubling
  double witness_residual;         // ||L w - (1/lambda) w|| for the explicit witness
  double witness_tail;             // recorded tail bound of the witness
  bool passed;
};

struct ReciprocityReport {
  std::vector<ReciprocityEntry> entries;
  bool passed;
};

/// For each lambda strictly outside the disc (margin enforced), certifies
/// 1/lambda as an eigenvalue of the down-shift: indicator decay under
/// truncation doubling plus an explicit eigenvector witness.
ReciprocityReport reciprocal_spectrum_check(const SpaceModel& model,
                                            const std::vector<Complex>& lambdas,
                                            double margin = 0.1);

}  // namespace shiftlab
