#include <doctest.h>

#include <cmath>
#include <complex>

#include "shiftlab/space.hpp"

using namespace shiftlab;

namespace {
const SpaceModel& hardy64() {
  static SpaceModel m = make_space(WeightKind::Hardy, 1, 64, 1e-12);
  return m;
}
}  // namespace

TEST_CASE("preset weights match their formulas") {
  const SpaceModel h = make_space(WeightKind::Hardy, 1, 16, 1e-10);
  const SpaceModel b = make_space(WeightKind::Bergman, 1, 16, 1e-10);
  const SpaceModel d = make_space(WeightKind::Dirichlet, 1, 16, 1e-10);
  CHECK(h.weights.beta(3) == doctest::Approx(1.0));
  CHECK(b.weights.beta(3) == doctest::Approx(0.5));
  CHECK(d.weights.beta(3) == doctest::Approx(2.0));
  CHECK(h.weights.disc_radius() == doctest::Approx(1.0));
  CHECK(b.weights.disc_radius() == doctest::Approx(1.0));
  CHECK(d.weights.disc_radius() == doctest::Approx(1.0));
  // beta extends beyond the stored range by the same formula
  CHECK(b.weights.beta(99) == doctest::Approx(0.1));
}

TEST_CASE("custom weights validate and report their radius") {
  std::vector<double> doubling(17);
  for (int n = 0; n <= 16; ++n) doubling[n] = std::pow(2.0, n);
  const SpaceModel m = make_space(WeightKind::Custom, 1, 16, 1e-10, doubling);
  CHECK(m.weights.disc_radius() == doctest::Approx(2.0));
  CHECK(m.weights.ratio_bound() == doctest::Approx(2.0));

  CHECK_THROWS_AS(make_space(WeightKind::Custom, 1, 16, 1e-10,
                             std::vector<double>(10, 1.0)),
                  std::invalid_argument);  // wrong length
  std::vector<double> bad(17, 1.0);
  bad[0] = 2.0;
  CHECK_THROWS_AS(make_space(WeightKind::Custom, 1, 16, 1e-10, bad),
                  std::invalid_argument);  // beta_0 != 1
  bad[0] = 1.0;
  bad[5] = -1.0;
  CHECK_THROWS_AS(make_space(WeightKind::Custom, 1, 16, 1e-10, bad),
                  std::invalid_argument);  // negative entry
}

TEST_CASE("model construction guards") {
  CHECK_THROWS_AS(make_space(WeightKind::Hardy, 1, 4, 1e-10),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_space(WeightKind::Hardy, 0, 64, 1e-10),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_space(WeightKind::Hardy, 1, 64, 0.0),
                  std::invalid_argument);
}

TEST_CASE("norm and inner product follow the weighted formula") {
  const SpaceModel b = make_space(WeightKind::Bergman, 1, 16, 1e-10);
  Eigen::MatrixXcd c(1, 2);
  c << 1.0, 2.0;
  const CoeffFunction f(c);
  // ||1 + 2z||^2 = 1 + 4 * (1/2) = 3 in the Bergman weights
  CHECK(norm(b, f) == doctest::Approx(std::sqrt(3.0)));

  const CoeffFunction g = CoeffFunction::monomial(1, 1);
  const Complex ip = inner(b, f, g);
  CHECK(ip.real() == doctest::Approx(1.0));  // beta_1^2 * 2 * conj(1)
  // conjugate linear in the second slot
  const Complex ip_scaled = inner(b, f, Complex(0.0, 1.0) * g);
  CHECK(ip_scaled.imag() == doctest::Approx(-1.0));
}

TEST_CASE("down-shift is a left inverse of the up-shift") {
  const SpaceModel& m = hardy64();
  ProbeGenerator gen(7);
  const CoeffFunction f = gen.random_polynomial(m, 40);
  const CoeffFunction roundtrip = apply_L(m, apply_Mz(m, f));
  CHECK(norm(m, roundtrip - f) <= 1e-14);
  CHECK(roundtrip.tail_bound() == 0.0);

  // constants span the kernel of the down-shift
  const CoeffFunction c = CoeffFunction::constant(Eigen::VectorXcd::Ones(1));
  CHECK(norm(m, apply_L(m, c)) == 0.0);
}

TEST_CASE("up-shift folds the truncation edge into the tail bound") {
  const SpaceModel& m = hardy64();
  const CoeffFunction top = CoeffFunction::monomial(1, m.trunc_len);
  const CoeffFunction shifted = apply_Mz(m, top);
  CHECK(norm(m, shifted) == 0.0);
  CHECK(shifted.tail_bound() ==
        doctest::Approx(m.weights.beta(m.trunc_len + 1)));
}

TEST_CASE("difference quotient matches the kernel identity") {
  const SpaceModel& m = hardy64();
  const Complex a(0.6, 0.0);
  const Complex lambda(0.3, 0.2);
  const CoeffFunction k = truncated_kernel(m, a);
  // (k_a(z) - k_a(lambda)) / (z - lambda) = a/(1 - a lambda) * k_a(z)
  const CoeffFunction dq = difference_quotient(m, k, lambda);
  const Complex factor = a / (1.0 - a * lambda);
  CoeffFunction expected = k;
  expected *= factor;
  CHECK(norm(m, dq - expected) <= 1e-10);

  // lambda = 0 reduces to the down-shift
  const CoeffFunction at_zero = difference_quotient(m, k, Complex(0.0, 0.0));
  CHECK(norm(m, at_zero - apply_L(m, k)) <= 1e-14);

  CHECK_THROWS_AS(difference_quotient(m, k, Complex(1.0, 0.0)),
                  std::invalid_argument);
}

TEST_CASE("evaluation is exact on polynomials and certified on kernels") {
  const SpaceModel& m = hardy64();
  Eigen::MatrixXcd c(1, 3);
  c << 1.0, 2.0, 3.0;
  const CoeffFunction p(c);
  CHECK(evaluate(m, p, Complex(0.5, 0.0))(0).real() == doctest::Approx(2.75));
  // polynomials have no tail, so exterior points are allowed
  CHECK(evaluate(m, p, Complex(3.0, 0.0))(0).real() ==
        doctest::Approx(1.0 + 6.0 + 27.0));

  const CoeffFunction k = truncated_kernel(m, Complex(0.5, 0.0));
  const EvalResult r = evaluate_with_bound(m, k, Complex(0.5, 0.0));
  CHECK(std::abs(r.value(0) - Complex(4.0 / 3.0, 0.0)) <= r.error_bound);
  // a nonzero tail cannot be certified outside the disc
  CHECK_THROWS_AS(evaluate_with_bound(m, k, Complex(1.5, 0.0)),
                  std::invalid_argument);
  CHECK_NOTHROW(evaluate_with_bound(m, k, Complex(1.5, 0.0), true));
}

TEST_CASE("truncated kernel records exactly the dropped mass") {
  const SpaceModel& m = hardy64();
  const double a = 0.9;
  const CoeffFunction k = truncated_kernel(m, Complex(a, 0.0));
  const double stored = norm(m, k);
  const double total = std::sqrt(stored * stored +
                                 k.tail_bound() * k.tail_bound());
  CHECK(total == doctest::Approx(1.0 / std::sqrt(1.0 - a * a)));
  CHECK_THROWS_AS(truncated_kernel(m, Complex(1.0, 0.0)),
                  std::invalid_argument);
}

TEST_CASE("weighted tail helpers agree with geometric sums") {
  const SpaceModel& m = hardy64();
  const double r = 0.5;
  CHECK(detail::weighted_tail(m.weights, 0, r) ==
        doctest::Approx(1.0 / std::sqrt(1.0 - r * r)));
  CHECK(detail::inverse_weighted_tail(m.weights, 0, r) ==
        doctest::Approx(1.0 / std::sqrt(1.0 - r * r)));
  CHECK(detail::weighted_tail(m.weights, 3, r) ==
        doctest::Approx(std::pow(r, 3) / std::sqrt(1.0 - r * r)));
  // at the radius the sum cannot close
  CHECK(detail::inverse_weighted_tail(m.weights, 0, 1.0) ==
        std::numeric_limits<double>::infinity());
}

TEST_CASE("embed and unembed are mutually inverse") {
  const SpaceModel m = make_space(WeightKind::Dirichlet, 2, 16, 1e-10);
  ProbeGenerator gen(11);
  const CoeffFunction f = gen.random_function(m);
  const Eigen::VectorXcd v = embed(m, f);
  CHECK(v.size() == 2 * (m.trunc_len + 1));
  // euclidean length of the embedding equals the weighted norm
  CHECK(v.norm() == doctest::Approx(norm(m, f)));
  const CoeffFunction back = unembed(m, v, f.tail_bound());
  CHECK(norm(m, back - f) <= 1e-13);
  CHECK(back.tail_bound() == f.tail_bound());
}

TEST_CASE("probe generator is deterministic and normalized") {
  const SpaceModel& m = hardy64();
  ProbeGenerator g1(123), g2(123), g3(321);
  const CoeffFunction f1 = g1.random_function(m);
  const CoeffFunction f2 = g2.random_function(m);
  const CoeffFunction f3 = g3.random_function(m);
  CHECK((f1.coeffs() - f2.coeffs()).norm() == 0.0);
  CHECK((f1.coeffs() - f3.coeffs()).norm() > 0.0);
  CHECK(norm(m, f1) == doctest::Approx(1.0));

  const Complex z = g1.uniform_disc(0.5, 0.9);
  CHECK(std::abs(z) >= 0.5);
  CHECK(std::abs(z) <= 0.9);

  const CoeffFunction p = g1.random_polynomial(m, 7);
  CHECK(p.degree() <= 7);
  CHECK(norm(m, p) == doctest::Approx(1.0));
}
