#pragma once

#include <optional>
#include <vector>

#include "shiftlab/space.hpp"

namespace shiftlab {

class InvariantSubspace;

/// Outcome of evaluating the kernel-component family at one parameter.
struct ContinuationResult {
  Complex lambda;
  Eigen::VectorXcd value;        // fiber_dim entries
  CoeffFunction kernel_component;  // constant function, element of ker L
  double residual;               // defect of (Mz - lambda) R f = Mz f - lambda c
  bool in_paper_domain;          // solve certified 1/lambda off the spectrum
};

struct NeumannOptions {
  int max_terms = 100000;
  int quiet_terms = 3;       // consecutive terms below tol*||f|| to stop
  int growth_terms = 20;     // consecutive non-decreasing terms to declare divergence
};

/// Solves (I - lambda L) g = f.  Without a subspace: Neumann series
/// sum_k lambda^k L^k f with the stop/divergence rules above.  With a
/// subspace: m x m solve in basis coordinates; a singular shifted matrix
/// raises SpectrumHitError.
CoeffFunction resolvent_R(const SpaceModel& model, const CoeffFunction& f,
                          Complex lambda,
                          const InvariantSubspace* subspace = nullptr,
                          const NeumannOptions& opts = {});

struct Decomposition {
  CoeffFunction g;   // solves f = (Mz - lambda) g + h
  CoeffFunction h;   // element of ker L (constant)
  double residual;   // ||f - (Mz - lambda) g - h||
};

Decomposition decompose(const SpaceModel& model, const CoeffFunction& f,
                        Complex lambda, const NeumannOptions& opts = {});

/// c_lambda(f) = (I - Mz L) R_lambda f, the kernel component of the
/// decomposition of f at lambda.  lambda = 0 is degenerate and rejected.
/// Verifies the defining identity to 10 * tol * ||f|| before returning.
CoeffFunction kernel_component_c(const SpaceModel& model,
                                 const CoeffFunction& f, Complex lambda,
                                 const InvariantSubspace* subspace = nullptr,
                                 double* residual_out = nullptr);

/// Evaluates the continuation lambda -> c_lambda(f)(lambda).  Inside the disc
/// this reproduces evaluate(f, lambda); outside it extends f along the
/// parameters where the shifted solve stays regular.
ContinuationResult continue_f(const SpaceModel& model, const CoeffFunction& f,
                              Complex lambda,
                              const InvariantSubspace* subspace = nullptr);

/// (Mz - lambda)^{-1} (constant e) = -sum_n lambda^{-n-1} z^n e for
/// |lambda| > disc radius, truncated with certified tail mass.  The result is
/// an eigenvector of the down-shift with eigenvalue 1/lambda.
CoeffFunction eigenvector_at(const SpaceModel& model, Complex lambda,
                             const Eigen::VectorXcd& e);

struct ExteriorSeries {
  std::vector<Eigen::VectorXcd> coefficients;  // P_E T^n h, n = 1..terms
  std::vector<double> ratios;                  // norm ratios of consecutive terms
};

/// Coefficients of the exterior expansion sum_{n>=1} (P_E T^n h) z^{-n}.
ExteriorSeries exterior_series(const Eigen::MatrixXcd& T,
                               const Eigen::VectorXcd& h, int e_dim,
                               int terms);

}  // namespace shiftlab
