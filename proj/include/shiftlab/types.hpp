#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace shiftlab {

using Complex = std::complex<double>;

// Thrown when a Neumann series shows sustained term growth, i.e. the
// requested parameter lies outside the region where the series solve is valid.
struct NeumannDivergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when a shifted solve meets a (numerically) singular matrix: the
// reciprocal of the parameter sits in the spectrum of the restricted operator.
struct SpectrumHitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when a generating set cannot back a trustworthy projection
// (rank-deficient or condition number beyond the guard).
struct IllConditionedBasisError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace shiftlab
