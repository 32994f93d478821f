#include "shiftlab/checks.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>

#include "shiftlab/resolvent.hpp"
#include "shiftlab/subspace.hpp"
#include "shiftlab/types.hpp"

namespace shiftlab {

namespace {

SubCheck sub_check(std::string name, double measured, double threshold,
                   Comparison cmp) {
  SubCheck s;
  s.name = std::move(name);
  s.measured = measured;
  s.threshold = threshold;
  s.cmp = cmp;
  s.passed = cmp == Comparison::LessEq ? measured <= threshold
                                       : measured >= threshold;
  return s;
}

void finalize(CheckReport& report) {
  report.passed = true;
  for (const auto& s : report.details) report.passed = report.passed && s.passed;
}

Provenance base_provenance(const SpaceModel& model, const CheckOptions& opts) {
  Provenance p;
  p.trunc_len = model.trunc_len;
  p.fiber_dim = model.fiber_dim;
  p.weight_kind = to_string(model.weights.kind());
  p.tol = model.tol;
  p.seed = opts.seed;
  p.probes = opts.probes;
  return p;
}

std::string indexed(const char* stem, int i) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s_%02d", stem, i);
  return buf;
}

Eigen::VectorXcd fiber_unit(int d, int i) {
  Eigen::VectorXcd e = Eigen::VectorXcd::Zero(d);
  e(i) = 1.0;
  return e;
}

// Columns restricted to degrees <= K, in the weighted coordinates of that
// smaller truncation, then column-normalized.  Rank questions about
// "span versus low-degree polynomials" all reduce to this matrix.
Eigen::MatrixXcd truncated_columns(const SpaceModel& model,
                                   const std::vector<CoeffFunction>& fns,
                                   int K) {
  const int d = model.fiber_dim;
  Eigen::MatrixXcd M(static_cast<long>(d) * (K + 1), fns.size());
  for (std::size_t j = 0; j < fns.size(); ++j) {
    for (int n = 0; n <= K; ++n)
      M.block(static_cast<long>(d) * n, j, d, 1) =
          model.weights.beta(n) * fns[j].coeff(n);
    const double c = M.col(j).norm();
    if (c > 0.0) M.col(j) /= c;
  }
  return M;
}

// Relative size of the r-th singular value; the numerical-rank certificate
// for "these columns span an r-dimensional space".
double rank_ratio(const Eigen::MatrixXcd& M, int r) {
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(M);
  const auto& s = svd.singularValues();
  if (r < 1 || r > s.size()) return 0.0;
  return s(0) > 0.0 ? s(r - 1) / s(0) : 0.0;
}

// Unique solution of the square truncated system (L - omega) x = target,
// obtained top-down; the missing super-diagonal entry of the last row pins
// the top coefficient and the rest follows by back-substitution.
CoeffFunction shifted_downshift_solve(const SpaceModel& model,
                                      const CoeffFunction& target,
                                      Complex omega, int size) {
  const int d = model.fiber_dim;
  Eigen::MatrixXcd x = Eigen::MatrixXcd::Zero(d, size);
  Eigen::VectorXcd carry = -target.coeff(size - 1) / omega;
  x.col(size - 1) = carry;
  for (int n = size - 2; n >= 0; --n) {
    carry = (x.col(n + 1) - target.coeff(n)) / omega;
    x.col(n) = carry;
  }
  return CoeffFunction(std::move(x));
}

double preset_power_norm_sum(const SpaceModel& model, double r) {
  // sum_k r^k ||L^k||, with ||L^k|| = max_n beta_n / beta_(n+k); terms are
  // evaluated directly from the weights until they stop mattering.
  double sum = 0.0;
  for (int k = 0;; ++k) {
    double opnorm = 1.0;
    if (k > 0) {
      opnorm = 0.0;
      for (int n = 0; n <= model.trunc_len; ++n)
        opnorm = std::max(opnorm,
                          model.weights.beta(n) / model.weights.beta(n + k));
    }
    const double term = std::pow(r, k) * opnorm;
    sum += term;
    if (k > 8 && term < 1e-17 * sum) return sum;
    if (k > 4000) return std::numeric_limits<double>::infinity();
  }
}

}  // namespace

CheckReport model_axioms_check(const SpaceModel& model,
                               const CheckOptions& opts) {
  CheckReport report;
  report.name = "model_axioms";
  report.provenance = base_provenance(model, opts);
  ProbeGenerator gen(opts.seed);
  const double radius = model.weights.disc_radius();

  // (a) point evaluation is bounded by the kernel norm at every sample.
  {
    std::vector<Complex> zs{Complex(0.0, 0.0), Complex(0.5 * radius, 0.0)};
    for (int k = 0; k < 8; ++k) {
      const double ang = std::numbers::pi * k / 4.0;
      zs.emplace_back(0.9 * radius * std::cos(ang),
                      0.9 * radius * std::sin(ang));
    }
    double worst = 0.0;
    for (int p = 0; p < opts.probes; ++p) {
      const CoeffFunction f = gen.random_function(model);
      const double fn = norm(model, f);
      for (Complex z : zs) {
        const double cz =
            detail::inverse_weighted_tail(model.weights, 0, std::abs(z));
        const double val = evaluate(model, f, z).norm();
        worst = std::max(worst, val / (cz * fn));
      }
    }
    report.details.push_back(sub_check("point_evaluation_bound", worst,
                                       1.0 + 1e-9, Comparison::LessEq));
  }

  // (b) the down-shift kernel has exactly fiber_dim dimensions.
  {
    const int count = singular_count_below(model, OperatorTag::L,
                                           Complex(0.0, 0.0),
                                           model.trunc_len, 1e-8);
    report.details.push_back(sub_check(
        "kernel_dimension",
        std::abs(count - model.fiber_dim), 0.5, Comparison::LessEq));
  }

  // (c) kernel elements are constants: annihilated by the down-shift and
  // taking the same value everywhere.
  {
    double worst = 0.0;
    for (int i = 0; i < model.fiber_dim; ++i) {
      const CoeffFunction c =
          CoeffFunction::constant(fiber_unit(model.fiber_dim, i));
      worst = std::max(worst, norm(model, apply_L(model, c)));
      const Eigen::VectorXcd v1 =
          evaluate(model, c, Complex(0.5 * radius, 0.0));
      const Eigen::VectorXcd v2 =
          evaluate(model, c, Complex(0.0, -0.3 * radius));
      worst = std::max(worst, (v1 - v2).norm());
    }
    report.details.push_back(
        sub_check("kernel_elements_constant", worst, 1e-15,
                  Comparison::LessEq));
  }

  // (d) the decomposition solves at interior parameters.
  {
    double worst = 0.0;
    for (int p = 0; p < opts.probes; ++p) {
      const CoeffFunction f = gen.random_function(model);
      const Complex lambda = gen.uniform_disc(0.0, 0.9 * radius);
      const Decomposition dec = decompose(model, f, lambda);
      worst = std::max(worst, dec.residual / (model.tol * norm(model, f)));
    }
    report.details.push_back(
        sub_check("decomposition_residual", worst, 10.0, Comparison::LessEq));
  }

  // (e) the up-shift spectrum fills the disc: membership indicator small at
  // interior samples, bounded below at the fixed exterior point 1.5.  The
  // exterior point is deliberately not rescaled by the disc radius, so
  // weight sequences carrying a different radius fail here visibly.
  {
    const std::vector<Complex> interior{Complex(0.0, 0.0),
                                        Complex(0.5 * radius, 0.0),
                                        Complex(0.0, 0.5 * radius)};
    double worst = 0.0;
    for (Complex z : interior)
      worst = std::max(worst,
                       spectrum_membership_indicator(model, OperatorTag::Mz, z,
                                                     model.trunc_len));
    report.details.push_back(
        sub_check("interior_indicator", worst, 1e-4, Comparison::LessEq));
    const double exterior = spectrum_membership_indicator(
        model, OperatorTag::Mz, Complex(1.5, 0.0), model.trunc_len);
    report.details.push_back(
        sub_check("exterior_floor", exterior, 0.3, Comparison::GreaterEq));
  }

  finalize(report);
  return report;
}

CheckReport sot_decay_check(const SpaceModel& model,
                            const std::vector<CoeffFunction>& probes,
                            int n_max, const CheckOptions& opts) {
  if (n_max < 2) throw std::invalid_argument("need n_max >= 2");
  if (probes.empty()) throw std::invalid_argument("empty probe set");

  CheckReport report;
  report.name = "sot_decay";
  report.provenance = base_provenance(model, opts);
  report.provenance.probes = static_cast<int>(probes.size());

  double worst_increase = 0.0;
  double worst_final = 0.0;
  for (std::size_t p = 0; p < probes.size(); ++p) {
    const CoeffFunction& f = probes[p];
    const double fn = norm(model, f);
    std::vector<double> seq;
    seq.reserve(n_max);
    CoeffFunction down = f;  // L^n f, advanced one step per n
    double final_tail = f.tail_bound();
    for (int n = 1; n <= n_max; ++n) {
      down = apply_L(model, down);
      if (norm(model, down) == 0.0 && down.tail_bound() == 0.0) {
        // Annihilated exactly; the remaining sequence is identically zero.
        seq.resize(n_max, 0.0);
        final_tail = 0.0;
        break;
      }
      CoeffFunction up = down;
      for (int k = 0; k < n; ++k) up = apply_Mz(model, up);
      seq.push_back(norm(model, up));
      final_tail = up.tail_bound();
    }
    for (std::size_t i = 0; i + 1 < seq.size(); ++i)
      worst_increase = std::max(worst_increase, (seq[i + 1] - seq[i]) / fn);
    worst_final =
        std::max(worst_final, seq.back() / (model.tol * fn + final_tail));
    report.sequences[indexed("probe", static_cast<int>(p))] = std::move(seq);
  }
  report.details.push_back(sub_check("sequence_monotone", worst_increase,
                                     1e-12, Comparison::LessEq));
  report.details.push_back(
      sub_check("final_mass", worst_final, 1.0, Comparison::LessEq));
  finalize(report);
  return report;
}

CheckReport sot_decay_check(const SpaceModel& model, const CheckOptions& opts) {
  ProbeGenerator gen(opts.seed);
  std::vector<CoeffFunction> probes;
  const int poly_deg = std::min(48, model.trunc_len / 2);
  for (int p = 0; p + 1 < opts.probes; ++p)
    probes.push_back(gen.random_polynomial(model, poly_deg));
  // A kernel probe decays geometrically, never exactly: its radius must be
  // small enough that n_max sweeps clear out all mass above tol * ||f||.
  probes.push_back(truncated_kernel(
      model, Complex(0.8 * model.weights.disc_radius(), 0.0)));
  return sot_decay_check(model, probes, model.trunc_len, opts);
}

CheckReport cd_check(const SpaceModel& model,
                     const std::vector<Complex>& omega_samples, int expected_n,
                     const CheckOptions& opts) {
  for (Complex w : omega_samples) {
    const double r = std::abs(w);
    if (r <= 0.05 || r >= 0.95)
      throw std::invalid_argument(
          "samples must keep a 0.05 margin from 0 and from the circle");
  }
  if (omega_samples.empty()) throw std::invalid_argument("no samples");

  CheckReport report;
  report.name = "cowen_douglas";
  report.provenance = base_provenance(model, opts);
  const int N = model.trunc_len;
  const std::vector<int> sizes{N / 4, N / 2, N};

  // (i) every sample sits in the spectrum: indicator decays as the
  // truncation grows.
  {
    double worst_final = 0.0;
    double worst_increase = 0.0;
    for (std::size_t j = 0; j < omega_samples.size(); ++j) {
      std::vector<double> seq;
      for (int n : sizes)
        seq.push_back(svd_indicator(model, OperatorTag::L, omega_samples[j],
                                    n));
      for (std::size_t i = 0; i + 1 < seq.size(); ++i)
        worst_increase = std::max(worst_increase, seq[i + 1] - seq[i]);
      worst_final = std::max(worst_final, seq.back());
      if (j < 8)
        report.sequences[indexed("indicator_decay", static_cast<int>(j))] =
            std::move(seq);
    }
    report.details.push_back(
        sub_check("spectrum_indicator_final", worst_final, 1e-4,
                  Comparison::LessEq));
    report.details.push_back(sub_check("spectrum_indicator_monotone",
                                       worst_increase, 10.0 * model.tol,
                                       Comparison::LessEq));
  }

  // (ii) (L - omega) x = low-degree targets: the truncated solve is exact
  // and its solution does not move under refinement.
  {
    double worst_residual = 0.0;
    double worst_drift = 0.0;
    for (Complex w : omega_samples) {
      for (int i = 0; i < model.fiber_dim; ++i) {
        for (int deg = 0; deg <= 3; ++deg) {
          const CoeffFunction target =
              CoeffFunction::monomial(model.fiber_dim, deg, i);
          const CoeffFunction x_half =
              shifted_downshift_solve(model, target, w, N / 2 + 1);
          const CoeffFunction x_full =
              shifted_downshift_solve(model, target, w, N + 1);
          CoeffFunction back = apply_L(model, x_full);
          back -= w * x_full;
          back -= target;
          worst_residual =
              std::max(worst_residual,
                       norm(model, back) / norm(model, target));
          const double drift =
              std::abs(norm(model, x_full) - norm(model, x_half)) /
              norm(model, x_half);
          worst_drift = std::max(worst_drift, drift);
        }
      }
    }
    report.details.push_back(sub_check("surjectivity_residual", worst_residual,
                                       10.0 * model.tol, Comparison::LessEq));
    report.details.push_back(sub_check("solution_refinement_drift",
                                       worst_drift, 1e-4, Comparison::LessEq));
  }

  // (iii) the kernel functions across all samples fill the low-degree
  // truncation: full numerical rank against degree <= K.  K is capped well
  // below the sample count because the columns form a Vandermonde-type
  // system whose conditioning degrades quickly with dimension.
  {
    const int m = static_cast<int>(omega_samples.size());
    const int K =
        std::max(1, std::min({m * model.fiber_dim - 1, N / 2, 24}));
    std::vector<CoeffFunction> cols;
    for (Complex w : omega_samples)
      for (int i = 0; i < model.fiber_dim; ++i)
        cols.push_back(truncated_kernel(model, w, i));
    const Eigen::MatrixXcd M = truncated_columns(model, cols, K);
    const int expected_rank = std::min(m, K + 1) * model.fiber_dim;
    const double ratio = rank_ratio(M, expected_rank);
    report.provenance.notes["span_rank_dimension"] = expected_rank;
    report.details.push_back(
        sub_check("kernel_span_rank", ratio, 1e-8, Comparison::GreaterEq));
  }

  // (iv) kernel dimension of (L - omega) equals expected_n at every sample.
  {
    int low = std::numeric_limits<int>::max();
    int high = std::numeric_limits<int>::min();
    for (Complex w : omega_samples) {
      const int count =
          singular_count_below(model, OperatorTag::L, w, N, 1e-4);
      low = std::min(low, count);
      high = std::max(high, count);
    }
    report.details.push_back(
        sub_check("kernel_dimension_max_deviation",
                  std::max(std::abs(high - expected_n),
                           std::abs(low - expected_n)),
                  0.5, Comparison::LessEq));
  }

  finalize(report);
  return report;
}

CheckReport density_check(const SpaceModel& model,
                          const std::vector<Eigen::VectorXcd>& kernel_basis,
                          const std::vector<Complex>& lambda_samples, int K,
                          const CheckOptions& opts) {
  if (kernel_basis.empty()) throw std::invalid_argument("empty kernel basis");
  if (lambda_samples.empty()) throw std::invalid_argument("no parameters");
  if (K < 1) throw std::invalid_argument("K must be positive");
  const double op_norm = model.weights.up_ratio_sup();
  for (Complex lambda : lambda_samples)
    if (std::abs(lambda) <= model.weights.ratio_bound())
      throw std::invalid_argument(
          "parameters must exceed the up-shift norm bound");

  CheckReport report;
  report.name = "density";
  report.provenance = base_provenance(model, opts);

  // (a) partial sums of the geometric expansion approximate the shifted
  // inverse at the series rate.  The exponent pairing |lambda|^-(n+1) with
  // ||Mz||^(n+1) is the sharp one: the n-th error is |lambda|^-(n+2) times
  // the norm of Mz^(n+1) applied to the full series, and the series itself
  // carries one factor of lambda.  The Hardy weights attain it exactly.
  {
    double worst = 0.0;
    for (std::size_t b = 0; b < kernel_basis.size(); ++b) {
      for (std::size_t s = 0; s < lambda_samples.size(); ++s) {
        const Complex lambda = lambda_samples[s];
        const CoeffFunction x =
            eigenvector_at(model, lambda, kernel_basis[b]);
        const double xn = norm(model, x);
        CoeffFunction term =
            CoeffFunction::constant(kernel_basis[b]);  // Mz^n h
        CoeffFunction partial = CoeffFunction::zero(model.fiber_dim);
        Complex scale = -1.0 / lambda;
        std::vector<double> errs;
        for (int n = 0; n <= K; ++n) {
          partial += scale * term;
          CoeffFunction diff = partial;
          diff -= x;
          const double err = norm(model, diff);
          errs.push_back(err);
          const double bound =
              std::pow(std::abs(lambda), -(n + 1)) *
              std::pow(op_norm, n + 1) * xn;
          worst = std::max(worst, err / bound);
          term = apply_Mz(model, term);
          scale /= lambda;
        }
        if (b == 0 && s < 4)
          report.sequences[indexed("partial_sum_error",
                                   static_cast<int>(s))] = std::move(errs);
      }
    }
    report.details.push_back(sub_check("partial_sum_estimate", worst,
                                       1.0 + 1e-9, Comparison::LessEq));
  }

  // (b) shifted-inverse vectors at the sampled parameters span the
  // low-degree truncation with full numerical rank.
  {
    const int m = static_cast<int>(lambda_samples.size());
    const int Kb = std::min(K, std::max(1, m - 1));
    std::vector<CoeffFunction> cols;
    for (Complex lambda : lambda_samples)
      for (const auto& e : kernel_basis)
        cols.push_back(eigenvector_at(model, lambda, e));
    const Eigen::MatrixXcd M = truncated_columns(model, cols, Kb);
    const int expected_rank =
        std::min(m, Kb + 1) * static_cast<int>(kernel_basis.size());
    const double ratio = rank_ratio(M, expected_rank);
    report.provenance.notes["span_rank_dimension"] = expected_rank;
    report.details.push_back(
        sub_check("resolvent_span_rank", ratio, 1e-8, Comparison::GreaterEq));
  }

  // (c) telescoping reconstruction from down-shift slices is exact.
  {
    ProbeGenerator gen(opts.seed);
    std::vector<CoeffFunction> fs;
    fs.push_back(CoeffFunction::monomial(model.fiber_dim, 3, 0));
    for (int p = 0; p < opts.probes; ++p)
      fs.push_back(
          gen.random_polynomial(model, std::min(16, model.trunc_len / 2)));
    double worst = 0.0;
    for (const auto& f : fs) {
      const int n = f.degree() + 1;
      CoeffFunction down = f;
      CoeffFunction sum = CoeffFunction::zero(model.fiber_dim);
      for (int k = 0; k < n; ++k) {
        CoeffFunction slice = CoeffFunction::constant(down.coeff(0));
        for (int j = 0; j < k; ++j) slice = apply_Mz(model, slice);
        sum += slice;
        down = apply_L(model, down);
      }
      CoeffFunction rest = down;  // L^n f
      for (int j = 0; j < n; ++j) rest = apply_Mz(model, rest);
      sum += rest;
      sum -= f;
      worst = std::max(worst, norm(model, sum) / norm(model, f));
    }
    report.details.push_back(
        sub_check("telescoping_residual", worst, 1e-12, Comparison::LessEq));
  }

  finalize(report);
  return report;
}

CheckReport density_check(const SpaceModel& model, const CheckOptions& opts) {
  std::vector<Eigen::VectorXcd> kernel_basis;
  for (int i = 0; i < model.fiber_dim; ++i)
    kernel_basis.push_back(fiber_unit(model.fiber_dim, i));
  std::vector<Complex> lambdas{
      Complex(1.5, 0.0),      Complex(-1.6, 0.0),     Complex(0.0, 1.7),
      Complex(0.0, -1.8),     Complex(2.1, 0.9),      Complex(-2.2, 0.8),
      Complex(2.4, -1.1),     Complex(3.0, 0.0)};
  // The smallest default modulus must clear the up-shift norm bound.
  const double scale = std::max(1.0, model.weights.ratio_bound() / 1.4);
  for (auto& lambda : lambdas) lambda *= scale;
  return density_check(model, kernel_basis, lambdas, 10, opts);
}

CheckReport decompose_solvability_check(const SpaceModel& model,
                                        const std::vector<Complex>& lambda_grid,
                                        const CheckOptions& opts) {
  const double radius = model.weights.disc_radius();
  for (Complex lambda : lambda_grid) {
    const double r = std::abs(lambda) / radius;
    if (r >= 0.95 && r <= 1.05)
      throw std::invalid_argument(
          "grid must avoid the annulus [0.95, 1.05] of the disc radius");
  }

  CheckReport report;
  report.name = "solvability";
  report.provenance = base_provenance(model, opts);
  ProbeGenerator gen(opts.seed);
  const CoeffFunction interior_probe = gen.random_function(model);
  const CoeffFunction exterior_probe =
      truncated_kernel(model, Complex(0.97 * radius, 0.0));

  double worst_dec = 0.0;
  double worst_floor_ratio = std::numeric_limits<double>::infinity();
  bool all_diverged = true;
  bool all_witnessed = true;
  int overlaps = 0;
  int interior_count = 0;
  int exterior_count = 0;

  for (Complex lambda : lambda_grid) {
    if (std::abs(lambda) < 0.95 * radius) {
      ++interior_count;
      const Decomposition dec = decompose(model, interior_probe, lambda);
      const double ratio =
          dec.residual / (model.tol * norm(model, interior_probe));
      worst_dec = std::max(worst_dec, ratio);

      // sigma_min(I - lambda L) against the series lower bound, at two
      // truncation sizes; the bound holds at every truncation.
      const double floor =
          1.0 / preset_power_norm_sum(model, std::abs(lambda));
      for (int n : {model.trunc_len / 2, model.trunc_len}) {
        double ind;
        if (lambda == Complex(0.0, 0.0)) {
          ind = 1.0;
        } else {
          ind = std::abs(lambda) *
                svd_indicator(model, OperatorTag::L,
                              Complex(1.0, 0.0) / lambda, n);
        }
        worst_floor_ratio = std::min(worst_floor_ratio, ind / floor);
      }
    } else {
      ++exterior_count;
      bool diverged = false;
      try {
        resolvent_R(model, exterior_probe, lambda);
      } catch (const NeumannDivergenceError&) {
        diverged = true;
      }
      all_diverged = all_diverged && diverged;

      const ReciprocityReport wit = reciprocal_spectrum_check(
          model, {lambda}, 0.04 * radius);
      const bool witnessed = wit.passed;
      all_witnessed = all_witnessed && witnessed;
      if (!diverged && witnessed) ++overlaps;
    }
  }

  if (interior_count > 0) {
    report.details.push_back(sub_check("interior_decomposition", worst_dec,
                                       10.0, Comparison::LessEq));
    report.details.push_back(sub_check("interior_floor_ratio",
                                       worst_floor_ratio, 0.99,
                                       Comparison::GreaterEq));
  }
  if (exterior_count > 0) {
    report.details.push_back(sub_check("exterior_divergence",
                                       all_diverged ? 1.0 : 0.0, 1.0,
                                       Comparison::GreaterEq));
    report.details.push_back(sub_check("exterior_witness",
                                       all_witnessed ? 1.0 : 0.0, 1.0,
                                       Comparison::GreaterEq));
  }
  report.details.push_back(
      sub_check("dichotomy_overlap", overlaps, 0.5, Comparison::LessEq));
  report.provenance.notes["interior_samples"] = interior_count;
  report.provenance.notes["exterior_samples"] = exterior_count;
  finalize(report);
  return report;
}

CheckReport decompose_solvability_check(const SpaceModel& model,
                                        const CheckOptions& opts) {
  const double r = model.weights.disc_radius();
  const std::vector<Complex> grid{
      Complex(0.0, 0.0),       Complex(0.3 * r, 0.0), Complex(0.0, 0.5 * r),
      Complex(-0.7 * r, 0.0),  Complex(0.9 * r, 0.0), Complex(1.2 * r, 0.0),
      Complex(-1.5 * r, 0.0),  Complex(0.0, 2.0 * r), Complex(3.0 * r, 0.0),
      Complex(10.0 * r, 0.0)};
  return decompose_solvability_check(model, grid, opts);
}

BlowupResult boundary_blowup_diagnostic(const SpaceModel& model,
                                        const InvariantSubspace& sub,
                                        const CoeffFunction& f, Complex xi,
                                        const std::vector<Complex>& ray) {
  if (ray.size() < 4)
    throw std::invalid_argument("ray needs at least 4 points");
  if (!membership_test(model, sub, f).is_member)
    throw std::invalid_argument("probe does not belong to the subspace");

  BlowupResult out;
  for (Complex lambda : ray) {
    const double dist = std::abs(lambda - xi);
    if (dist == 0.0)
      throw std::invalid_argument("ray point coincides with the target");
    const CoeffFunction h = resolvent_R(model, f, lambda, &sub);
    out.log_norms.push_back(std::log(norm(model, h)));
    out.log_dists.push_back(-std::log(dist));
  }

  // Fit only the tail of the ray: the asymptotic exponent is a limit
  // statement and early points far from the target bias the slope.
  const int K = static_cast<int>(ray.size());
  const int P = (K + 1) / 2;
  out.fit_points = P;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (int i = K - P; i < K; ++i) {
    sx += out.log_dists[i];
    sy += out.log_norms[i];
    sxx += out.log_dists[i] * out.log_dists[i];
    sxy += out.log_dists[i] * out.log_norms[i];
  }
  const double denom = P * sxx - sx * sx;
  out.exponent = denom != 0.0 ? (P * sxy - sx * sy) / denom : 0.0;

  out.report.name = "boundary_blowup";
  out.report.provenance.trunc_len = model.trunc_len;
  out.report.provenance.fiber_dim = model.fiber_dim;
  out.report.provenance.weight_kind = to_string(model.weights.kind());
  out.report.provenance.tol = model.tol;
  out.report.provenance.notes["exponent"] = out.exponent;
  out.report.provenance.notes["fit_points"] = P;
  out.report.sequences["log_norms"] = out.log_norms;
  out.report.sequences["log_dists"] = out.log_dists;
  finalize(out.report);
  return out;
}

std::vector<Complex> dyadic_ray(Complex xi, int points) {
  if (points < 1) throw std::invalid_argument("need at least one ray point");
  std::vector<Complex> ray;
  ray.reserve(points);
  for (int k = 1; k <= points; ++k)
    ray.push_back(xi * (1.0 + std::pow(2.0, -k)));
  return ray;
}

CheckReport reciprocity_check_report(const SpaceModel& model,
                                     const std::vector<Complex>& lambdas,
                                     const CheckOptions& opts) {
  CheckReport report;
  report.name = "reciprocity";
  report.provenance = base_provenance(model, opts);
  const ReciprocityReport rec = reciprocal_spectrum_check(model, lambdas);
  for (std::size_t j = 0; j < rec.entries.size(); ++j) {
    const auto& e = rec.entries[j];
    report.details.push_back(
        sub_check(indexed("witness_residual", static_cast<int>(j)),
                  e.witness_residual, e.witness_tail, Comparison::LessEq));
    report.details.push_back(sub_check(
        indexed("indicator_decay", static_cast<int>(j)),
        e.indicators.back(),
        std::max(0.1 * e.indicators.front(), 1e-7), Comparison::LessEq));
    report.sequences[indexed("indicators", static_cast<int>(j))] =
        e.indicators;
  }
  finalize(report);
  return report;
}

CheckReport boundary_blowup_report(const SpaceModel& model,
                                   const CheckOptions& opts) {
  CheckReport report;
  report.name = "boundary_blowup";
  report.provenance = base_provenance(model, opts);
  const double r = model.weights.disc_radius();

  const Complex a_pole(0.9 * r, 0.0);
  const CoeffFunction k_pole = truncated_kernel(model, a_pole);
  const InvariantSubspace sub_pole =
      InvariantSubspace::build(model, {k_pole});
  const Complex xi_pole = Complex(1.0, 0.0) / a_pole;
  const BlowupResult pole = boundary_blowup_diagnostic(
      model, sub_pole, k_pole, xi_pole, dyadic_ray(xi_pole, 12));
  report.details.push_back(sub_check("pole_exponent_error",
                                     std::abs(pole.exponent - 1.0), 0.05,
                                     Comparison::LessEq));
  report.sequences["pole_log_norms"] = pole.log_norms;
  report.provenance.notes["pole_exponent"] = pole.exponent;

  const Complex a_flat(0.5 * r, 0.0);
  const CoeffFunction k_flat = truncated_kernel(model, a_flat);
  const InvariantSubspace sub_flat =
      InvariantSubspace::build(model, {k_flat});
  const Complex xi_flat(1.2 * r, 0.0);
  const BlowupResult flat = boundary_blowup_diagnostic(
      model, sub_flat, k_flat, xi_flat, dyadic_ray(xi_flat, 12));
  report.details.push_back(sub_check("analytic_exponent_magnitude",
                                     std::abs(flat.exponent), 0.05,
                                     Comparison::LessEq));
  report.sequences["analytic_log_norms"] = flat.log_norms;
  report.provenance.notes["analytic_exponent"] = flat.exponent;

  finalize(report);
  return report;
}

std::vector<std::string> suite_names() {
  return {"axioms",      "sot",         "cd",      "density",
          "solvability", "reciprocity", "blowup"};
}

std::vector<CheckReport> run_suite(const SpaceModel& model,
                                   const std::vector<std::string>& names,
                                   const CheckOptions& opts) {
  std::vector<CheckReport> reports;
  for (const auto& name : names) {
    if (name == "axioms") {
      reports.push_back(model_axioms_check(model, opts));
    } else if (name == "sot") {
      reports.push_back(sot_decay_check(model, opts));
    } else if (name == "cd") {
      ProbeGenerator gen(opts.seed);
      std::vector<Complex> omegas;
      for (int i = 0; i < 50; ++i)
        omegas.push_back(gen.uniform_disc(0.1, 0.9));
      reports.push_back(cd_check(model, omegas, model.fiber_dim, opts));
    } else if (name == "density") {
      reports.push_back(density_check(model, opts));
    } else if (name == "solvability") {
      reports.push_back(decompose_solvability_check(model, opts));
    } else if (name == "reciprocity") {
      const double r = model.weights.disc_radius();
      const std::vector<Complex> lambdas{
          Complex(1.2 * r, 0.0), Complex(1.5 * r, 0.5 * r),
          Complex(2.0 * r, 0.0), Complex(-3.0 * r, 0.0),
          Complex(10.0 * r, 0.0)};
      reports.push_back(reciprocity_check_report(model, lambdas, opts));
    } else if (name == "blowup") {
      reports.push_back(boundary_blowup_report(model, opts));
    } else {
      throw std::invalid_argument("unknown check name: " + name);
    }
  }
  return reports;
}

}  // namespace shiftlab
