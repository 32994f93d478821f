#include "shiftlab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "shiftlab/resolvent.hpp"
#include "shiftlab/types.hpp"

namespace shiftlab {

const char* to_string(OperatorTag tag) {
  switch (tag) {
    case OperatorTag::Mz: return "Mz";
    case OperatorTag::L: return "L";
    case OperatorTag::RestrictionMatrix: return "restriction";
  }
  return "unknown";
}

namespace {

// All shifted truncations in the orthonormal frame are bidiagonal, so the
// normal matrix B^H B is Hermitian tridiagonal and needs only the squared
// magnitudes of its entries.  Sturm counting on that matrix gives eigenvalue
// counts (and min eigenvalues by bisection) in O(size) real arithmetic per
// evaluation, instead of a dense SVD per grid point.
struct NormalTridiagonal {
  std::vector<double> diag;    // (B^H B)_{jj}
  std::vector<double> off_sq;  // |(B^H B)_{j,j+1}|^2
};

// Square upper-bidiagonal B: diagonal -lambda, off(j) at (j, j+1).
NormalTridiagonal upper_bidiagonal_normal(double lambda_abs2,
                                          const std::vector<double>& off) {
  const std::size_t n = off.size() + 1;
  NormalTridiagonal t;
  t.diag.resize(n);
  t.off_sq.resize(n - 1);
  for (std::size_t j = 0; j < n; ++j)
    t.diag[j] = lambda_abs2 + (j > 0 ? off[j - 1] * off[j - 1] : 0.0);
  for (std::size_t j = 0; j + 1 < n; ++j)
    t.off_sq[j] = lambda_abs2 * off[j] * off[j];
  return t;
}

// Rectangular (n+1) x n lower-bidiagonal B: diagonal -lambda, off(j) at
// (j+1, j).  Every column has both entries, so the normal matrix is uniform.
NormalTridiagonal lower_bidiagonal_normal(double lambda_abs2,
                                          const std::vector<double>& off) {
  const std::size_t n = off.size();
  NormalTridiagonal t;
  t.diag.resize(n);
  t.off_sq.resize(n - 1);
  for (std::size_t j = 0; j < n; ++j)
    t.diag[j] = lambda_abs2 + off[j] * off[j];
  for (std::size_t j = 0; j + 1 < n; ++j)
    t.off_sq[j] = lambda_abs2 * off[j] * off[j];
  return t;
}

// Eigenvalues of the tridiagonal matrix strictly below x, by LDL inertia.
int sturm_count(const NormalTridiagonal& t, double x) {
  constexpr double kTiny = 1e-290;
  int count = 0;
  double q = t.diag[0] - x;
  if (q < 0.0) ++count;
  for (std::size_t i = 1; i < t.diag.size(); ++i) {
    double denom = q;
    if (std::abs(denom) < kTiny) denom = denom < 0.0 ? -kTiny : kTiny;
    q = t.diag[i] - x - t.off_sq[i - 1] / denom;
    if (q < 0.0) ++count;
  }
  return count;
}

double min_eigenvalue(const NormalTridiagonal& t) {
  double hi = 0.0;
  for (std::size_t j = 0; j < t.diag.size(); ++j) {
    double row = t.diag[j];
    if (j > 0) row += std::sqrt(t.off_sq[j - 1]);
    if (j + 1 < t.diag.size()) row += std::sqrt(t.off_sq[j]);
    hi = std::max(hi, row);
  }
  double lo = 0.0;
  for (int it = 0; it < 110 && hi - lo > 1e-30 + 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (sturm_count(t, mid) >= 1)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<double> up_weights(const SpaceModel& model, int n_eff) {
  std::vector<double> w(n_eff);
  for (int j = 0; j < n_eff; ++j)
    w[j] = model.weights.beta(j + 1) / model.weights.beta(j);
  return w;
}

std::vector<double> down_weights(const SpaceModel& model, int n_eff) {
  std::vector<double> v(n_eff - 1);
  for (int j = 0; j + 1 < n_eff; ++j)
    v[j] = model.weights.beta(j) / model.weights.beta(j + 1);
  return v;
}

NormalTridiagonal shifted_normal(const SpaceModel& model, OperatorTag tag,
                                 Complex lambda, int n_eff) {
  const double l2 = std::norm(lambda);
  if (tag == OperatorTag::Mz)
    return lower_bidiagonal_normal(l2, up_weights(model, n_eff));
  return upper_bidiagonal_normal(l2, down_weights(model, n_eff));
}

void validate_n_eff(const SpaceModel& model, int n_eff) {
  if (n_eff < 4) throw std::invalid_argument("effective size below 4");
  if (n_eff > model.trunc_len)
    throw std::invalid_argument("effective size exceeds the truncation");
}

Eigen::MatrixXcd shifted_restriction(const InvariantSubspace* sub,
                                     Complex lambda) {
  if (sub == nullptr)
    throw std::invalid_argument("restriction indicator needs a subspace");
  const Eigen::MatrixXcd& A = sub->restriction();
  return A - lambda * Eigen::MatrixXcd::Identity(A.rows(), A.cols());
}

}  // namespace

double svd_indicator(const SpaceModel& model, OperatorTag tag, Complex lambda,
                     int n_eff, const InvariantSubspace* sub) {
  if (tag == OperatorTag::RestrictionMatrix) {
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(shifted_restriction(sub, lambda));
    return svd.singularValues().minCoeff();
  }
  validate_n_eff(model, n_eff);
  return std::sqrt(
      std::max(0.0, min_eigenvalue(shifted_normal(model, tag, lambda, n_eff))));
}

double spectrum_membership_indicator(const SpaceModel& model, OperatorTag tag,
                                     Complex lambda, int n_eff,
                                     const InvariantSubspace* sub) {
  const double forward = svd_indicator(model, tag, lambda, n_eff, sub);
  if (tag != OperatorTag::Mz) return forward;
  // Square truncation of the adjoint: an up-shift loses invertibility inside
  // the disc through its range, which only the adjoint kernel exposes.
  const NormalTridiagonal adj =
      upper_bidiagonal_normal(std::norm(lambda), up_weights(model, n_eff));
  const double adjoint = std::sqrt(std::max(0.0, min_eigenvalue(adj)));
  return std::min(forward, adjoint);
}

int singular_count_below(const SpaceModel& model, OperatorTag tag,
                         Complex lambda, int n_eff, double threshold,
                         const InvariantSubspace* sub) {
  if (!(threshold > 0.0))
    throw std::invalid_argument("threshold must be positive");
  if (tag == OperatorTag::RestrictionMatrix) {
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(shifted_restriction(sub, lambda));
    return static_cast<int>(
        (svd.singularValues().array() < threshold).count());
  }
  validate_n_eff(model, n_eff);
  const int scalar = sturm_count(shifted_normal(model, tag, lambda, n_eff),
                                 threshold * threshold);
  return scalar * model.fiber_dim;
}

SpectralScan scan_grid(const SpaceModel& model, OperatorTag tag,
                       const GridSpec& spec, int n_eff,
                       const InvariantSubspace* sub) {
  if (spec.resolution < 8)
    throw std::invalid_argument("grid resolution below 8");
  if (spec.radius < 0.0) throw std::invalid_argument("negative grid radius");
  if (n_eff < 0) n_eff = model.trunc_len;

  SpectralScan scan;
  scan.trunc_len = n_eff;
  scan.operator_tag = tag;
  if (spec.radius == 0.0) {
    scan.grid.push_back(spec.center);
  } else {
    const int res = spec.resolution;
    for (int iy = 0; iy < res; ++iy) {
      const double im =
          spec.center.imag() - spec.radius +
          2.0 * spec.radius * iy / (res - 1);
      for (int ix = 0; ix < res; ++ix) {
        const double re =
            spec.center.real() - spec.radius +
            2.0 * spec.radius * ix / (res - 1);
        scan.grid.emplace_back(re, im);
      }
    }
  }
  scan.indicator.reserve(scan.grid.size());
  for (Complex lambda : scan.grid)
    scan.indicator.push_back(svd_indicator(model, tag, lambda, n_eff, sub));
  return scan;
}

SpectralRadiusEstimate spectral_radius_estimate(
    const SpaceModel& model, OperatorTag tag, int iterations,
    const std::vector<CoeffFunction>* probes, const InvariantSubspace* sub) {
  if (iterations < 4) throw std::invalid_argument("need at least 4 iterations");

  std::vector<CoeffFunction> defaults;
  if (probes == nullptr) {
    if (tag == OperatorTag::RestrictionMatrix) {
      if (sub == nullptr)
        throw std::invalid_argument("restriction estimate needs a subspace");
      for (const auto& b : sub->basis()) defaults.push_back(b);
    } else {
      Eigen::VectorXcd e = Eigen::VectorXcd::Zero(model.fiber_dim);
      e(0) = 1.0;
      defaults.push_back(CoeffFunction::constant(e));
      defaults.push_back(truncated_kernel(
          model, Complex(0.97 * model.weights.disc_radius(), 0.0)));
      ProbeGenerator gen(0x5eed5ab5ULL);
      defaults.push_back(gen.random_function(model));
    }
    probes = &defaults;
  }
  if (probes->empty()) throw std::invalid_argument("empty probe set");

  SpectralRadiusEstimate out;
  out.per_iteration.reserve(iterations);
  std::vector<CoeffFunction> state = *probes;
  std::vector<Eigen::VectorXcd> coords;
  if (tag == OperatorTag::RestrictionMatrix)
    for (const auto& f : state) coords.push_back(sub->coordinates(model, f));

  for (int k = 1; k <= iterations; ++k) {
    double best = 0.0;
    if (tag == OperatorTag::RestrictionMatrix) {
      for (auto& y : coords) {
        y = sub->restriction() * y;
        best = std::max(best, norm(model, sub->combine(model, y)));
      }
    } else {
      for (auto& f : state) {
        f = tag == OperatorTag::Mz ? apply_Mz(model, f) : apply_L(model, f);
        best = std::max(best, norm(model, f));
      }
    }
    out.per_iteration.push_back(std::pow(best, 1.0 / k));
  }
  out.value = out.per_iteration.back();
  return out;
}

ReciprocityReport reciprocal_spectrum_check(const SpaceModel& model,
                                            const std::vector<Complex>& lambdas,
                                            double margin) {
  // Below this the bisection on squared singular values is pure roundoff;
  // decay that has reached it cannot be distinguished from zero.
  constexpr double kIndicatorFloor = 1e-7;

  ReciprocityReport report;
  report.passed = true;
  const double radius = model.weights.disc_radius();
  for (Complex lambda : lambdas) {
    if (std::abs(lambda) <= radius + margin) {
      std::ostringstream msg;
      msg << "sample " << lambda << " is not outside the disc by the margin "
          << margin;
      throw std::domain_error(msg.str());
    }
    ReciprocityEntry entry;
    entry.lambda = lambda;
    const Complex mu = Complex(1.0, 0.0) / lambda;
    for (int n : {model.trunc_len / 4, model.trunc_len / 2, model.trunc_len})
      entry.indicators.push_back(svd_indicator(model, OperatorTag::L, mu, n));

    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(model.fiber_dim);
    e(0) = 1.0;
    const CoeffFunction witness = eigenvector_at(model, lambda, e);
    CoeffFunction defect = apply_L(model, witness);
    defect -= mu * witness;
    entry.witness_residual = norm(model, defect);
    entry.witness_tail = witness.tail_bound();

    bool decay = true;
    for (std::size_t i = 0; i + 1 < entry.indicators.size(); ++i)
      decay = decay && entry.indicators[i + 1] <=
                           std::max(0.9 * entry.indicators[i], kIndicatorFloor);
    decay = decay && entry.indicators.back() <=
                         std::max(0.1 * entry.indicators.front(),
                                  kIndicatorFloor);
    entry.passed = decay && entry.witness_residual <= entry.witness_tail;
    report.passed = report.passed && entry.passed;
    report.entries.push_back(entry);
  }
  return report;
}

}  // namespace shiftlab
