#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "shiftlab/spectral.hpp"

namespace shiftlab {

enum class Comparison { LessEq, GreaterEq };

struct SubCheck {
  std::string name;
  double measured;
  double threshold;
  Comparison cmp;
  bool passed;
};

struct Provenance {
  int trunc_len = 0;
  int fiber_dim = 0;
  std::string weight_kind;
  double tol = 0.0;
  std::uint64_t seed = 0;
  int probes = 0;
  std::map<std::string, double> notes;
};

struct CheckReport {
  std::string name;
  bool passed;  // conjunction of the sub-checks
  std::vector<SubCheck> details;
  Provenance provenance;
  // Named measured sequences backing the verdicts (CSV export).
  std::map<std::string, std::vector<double>> sequences;
};

struct CheckOptions {
  std::uint64_t seed = 0x5eed5ab5;
  int probes = 32;
};

/// Five structural facts every model instance must satisfy: bounded point
/// evaluation inside the disc, d-dimensional down-shift kernel made of
/// constants, solvable decomposition at interior parameters, and an up-shift
/// spectrum filling the disc (small membership indicator inside, bounded
/// below at 1.5 x radius).  Failures are recorded in the report, not thrown.
CheckReport model_axioms_check(const SpaceModel& model,
                               const CheckOptions& opts = {});

/// ||Mz^n L^n f|| is the mass of f above degree n: non-increasing in n and
/// below tol * ||f|| + tail once n clears the truncation.
CheckReport sot_decay_check(const SpaceModel& model,
                            const std::vector<CoeffFunction>& probes,
                            int n_max, const CheckOptions& opts = {});
CheckReport sot_decay_check(const SpaceModel& model,
                            const CheckOptions& opts = {});

/// Four-part eigenstructure audit of the down-shift at interior samples:
/// (i) indicator decay under truncation growth, (ii) solvability of
/// (L - omega) x = basis targets with refinement-stable solution norms,
/// (iii) the kernel functions over the samples fill low-degree truncations,
/// (iv) kernel dimension == expected_n at every sample.
/// Samples must keep 0.05 clear of 0 and of the disc boundary.
CheckReport cd_check(const SpaceModel& model,
                     const std::vector<Complex>& omega_samples, int expected_n,
                     const CheckOptions& opts = {});

/// Partial-sum approximation audit for (Mz - lambda)^{-1} on kernel targets:
/// (a) the truncation error of the geometric partial sums obeys the literal
/// resolvent-series estimate, (b) resolvent vectors at distinct exterior
/// parameters pair against low-degree monomials with full numerical rank,
/// (c) the telescoping reconstruction f = Mz^n L^n f + sum Mz^k h_k is exact.
CheckReport density_check(const SpaceModel& model,
                          const std::vector<Eigen::VectorXcd>& kernel_basis,
                          const std::vector<Complex>& lambda_samples, int K,
                          const CheckOptions& opts = {});
CheckReport density_check(const SpaceModel& model,
                          const CheckOptions& opts = {});

/// Interior/exterior dichotomy for (I - lambda L): inside the disc the solve
/// succeeds and the shifted operator stays bounded below under refinement;
/// outside, the series solve must diverge on a near-boundary kernel probe and
/// the reciprocal eigenvector witness must certify 1/lambda in the spectrum.
/// Grid parameters must avoid the annulus [0.95, 1.05] * radius.
CheckReport decompose_solvability_check(const SpaceModel& model,
                                        const std::vector<Complex>& lambda_grid,
                                        const CheckOptions& opts = {});
CheckReport decompose_solvability_check(const SpaceModel& model,
                                        const CheckOptions& opts = {});

struct BlowupResult {
  double exponent;                 // slope of log||h_k|| vs -log|lambda_k - xi|
  std::vector<double> log_norms;
  std::vector<double> log_dists;
  int fit_points;                  // tail points used for the fit
  CheckReport report;
};

/// Growth diagnostic of the subspace resolvent along a ray approaching a
/// boundary target: fits the blow-up exponent from the points closest to the
/// target.  f must belong to the subspace; a ray point meeting the
/// restriction spectrum raises SpectrumHitError.
BlowupResult boundary_blowup_diagnostic(const SpaceModel& model,
                                        const InvariantSubspace& sub,
                                        const CoeffFunction& f, Complex xi,
                                        const std::vector<Complex>& ray);

/// xi * (1 + 2^-k), k = 1..points.
std::vector<Complex> dyadic_ray(Complex xi, int points);

/// Wraps reciprocal_spectrum_check into a report row per parameter.
CheckReport reciprocity_check_report(const SpaceModel& model,
                                     const std::vector<Complex>& lambdas,
                                     const CheckOptions& opts = {});

/// Default blow-up configuration: pole case span{k_0.9} toward 1/0.9 and an
/// analytic comparison case span{k_0.5} toward 1.2.
CheckReport boundary_blowup_report(const SpaceModel& model,
                                   const CheckOptions& opts = {});

std::vector<CheckReport> run_suite(const SpaceModel& model,
                                   const std::vector<std::string>& names,
                                   const CheckOptions& opts = {});
std::vector<std::string> suite_names();  // the "all" set, fixed order

}  // namespace shiftlab
