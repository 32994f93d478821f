#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "shiftlab/checks.hpp"
#include "shiftlab/resolvent.hpp"
#include "shiftlab/serialize.hpp"
#include "shiftlab/subspace.hpp"

using namespace shiftlab;

namespace {

std::vector<std::string> sub_check_names(const CheckReport& rep) {
  std::vector<std::string> names;
  for (const auto& sc : rep.details) names.push_back(sc.name);
  return names;
}

const SubCheck& find_sub(const CheckReport& rep, const std::string& name) {
  for (const auto& sc : rep.details)
    if (sc.name == name) return sc;
  REQUIRE_MESSAGE(false, "missing sub-check " << name);
  return rep.details.front();
}

std::vector<double> doubling_weights(int trunc_len) {
  std::vector<double> beta(trunc_len + 1);
  double b = 1.0;
  for (int n = 0; n <= trunc_len; ++n, b *= 2.0) beta[n] = b;
  return beta;
}

}  // namespace

TEST_CASE("axiom audit passes on the unit-radius preset") {
  const SpaceModel m = make_space(WeightKind::Hardy, 1, 128, 1e-10);
  const CheckReport rep = model_axioms_check(m);

  CHECK(rep.name == "model_axioms");
  CHECK(rep.passed);
  const std::vector<std::string> expected = {
      "point_evaluation_bound", "kernel_dimension", "kernel_elements_constant",
      "decomposition_residual", "interior_indicator", "exterior_floor"};
  CHECK(sub_check_names(rep) == expected);
  for (const auto& sc : rep.details) CHECK_MESSAGE(sc.passed, sc.name);

  CHECK(rep.provenance.trunc_len == 128);
  CHECK(rep.provenance.fiber_dim == 1);
  CHECK(rep.provenance.weight_kind == to_string(WeightKind::Hardy));
  CHECK(rep.provenance.seed == CheckOptions{}.seed);
  CHECK(rep.provenance.probes == CheckOptions{}.probes);
}

TEST_CASE("axiom audit flags the fixed exterior sample on a radius-2 model") {
  // The exterior probe sits at the absolute point 1.5.  For doubling weights
  // the disc radius is 2, the probe is interior, and the floor sub-check is
  // the one that must go red while the remaining five stay green.
  const SpaceModel m =
      make_space(WeightKind::Custom, 1, 16, 1e-10, doubling_weights(16));
  REQUIRE(m.weights.disc_radius() == doctest::Approx(2.0));

  const CheckReport rep = model_axioms_check(m);
  CHECK_FALSE(rep.passed);
  for (const auto& sc : rep.details) {
    if (sc.name == "exterior_floor") {
      CHECK_FALSE(sc.passed);
      CHECK(sc.measured < 0.3);
    } else {
      CHECK_MESSAGE(sc.passed, sc.name);
    }
  }
}

TEST_CASE("power decay audit records exact annihilation of a monomial probe") {
  const SpaceModel m = make_space(WeightKind::Hardy, 1, 16, 1e-10);
  const CoeffFunction probe = CoeffFunction::monomial(1, 3);

  const CheckReport rep = sot_decay_check(m, {probe}, 5, CheckOptions{});
  CHECK(rep.name == "sot_decay");
  CHECK(rep.passed);
  CHECK(find_sub(rep, "sequence_monotone").passed);
  CHECK(find_sub(rep, "final_mass").passed);

  REQUIRE(rep.sequences.count("probe_00") == 1);
  const std::vector<double>& seq = rep.sequences.at("probe_00");
  REQUIRE(seq.size() == 5);
  // Mass of z^3 above degree n: all of it for n <= 3, nothing afterwards.
  CHECK(seq[0] == 1.0);
  CHECK(seq[1] == 1.0);
  CHECK(seq[2] == 1.0);
  CHECK(seq[3] == 0.0);
  CHECK(seq[4] == 0.0);
}

TEST_CASE("power decay audit passes with the default probe set") {
  const SpaceModel m = make_space(WeightKind::Hardy, 1, 64, 1e-10);
  const CheckReport rep = sot_decay_check(m);
  CHECK(rep.passed);
  CHECK(rep.sequences.count("probe_00") == 1);
  CHECK(rep.sequences.count("probe_31") == 1);

  CHECK_THROWS_AS(sot_decay_check(m, {CoeffFunction::monomial(1, 0)}, 1,
                                  CheckOptions{}),
                  std::invalid_argument);
  CHECK_THROWS_AS(sot_decay_check(m, {}, 8, CheckOptions{}),
                  std::invalid_argument);
}

TEST_CASE("kernel bundle audit certifies scalar and two-fiber presets") {
  const CheckOptions opts;

  SUBCASE("scalar fiber") {
    const SpaceModel m = make_space(WeightKind::Hardy, 1, 128, 1e-10);
    ProbeGenerator gen(123);
    std::vector<Complex> omegas;
    for (int i = 0; i < 8; ++i) omegas.push_back(gen.uniform_disc(0.1, 0.85));

    const CheckReport rep = cd_check(m, omegas, 1, opts);
    CHECK(rep.name == "cowen_douglas");
    CHECK(rep.passed);
    const std::vector<std::string> expected = {
        "spectrum_indicator_final", "spectrum_indicator_monotone",
        "surjectivity_residual",    "solution_refinement_drift",
        "kernel_span_rank",         "kernel_dimension_max_deviation"};
    CHECK(sub_check_names(rep) == expected);
    REQUIRE(rep.sequences.count("indicator_decay_00") == 1);
    CHECK(rep.sequences.at("indicator_decay_00").size() == 3);
  }

  SUBCASE("two-dimensional fiber") {
    const SpaceModel m = make_space(WeightKind::Bergman, 2, 64, 1e-10);
    ProbeGenerator gen(77);
    std::vector<Complex> omegas;
    for (int i = 0; i < 6; ++i) omegas.push_back(gen.uniform_disc(0.1, 0.8));

    const CheckReport rep = cd_check(m, omegas, 2, opts);
    CHECK(rep.passed);
  }
}

TEST_CASE("kernel bundle audit rejects samples near 0 or the boundary") {
  const SpaceModel m = make_space(WeightKind::Hardy, 1, 64, 1e-10);
  CHECK_THROWS_AS(cd_check(m, {Complex(0.99, 0.0)}, 1, CheckOptions{}),
                  std::invalid_argument);
  CHECK_THROWS_AS(cd_check(m, {Complex(0.03, 0.0)}, 1, CheckOptions{}),
                  std::invalid_argument);
}

TEST_CASE("kernel bundle audit fails only the dimension count when misstated") {
  const SpaceModel m = make_space(WeightKind::Hardy, 1, 128, 1e-10);
  const CheckReport rep = cd_check(m, {Complex(0.5, 0.0)}, 3, CheckOptions{});
  CHECK_FALSE(rep.passed);
  for (const auto& sc : rep.details) {
    if (sc.name == "kernel_dimension_max_deviation") {
      CHECK_FALSE(sc.passed);
      CHECK(sc.measured == doctest::Approx(2.0));
    } else {
      CHECK_MESSAGE(sc.passed, sc.name);
    }
  }
}

TEST_CASE("series approximation audit attains the bound on geometric weights") {
  const SpaceModel m = make_space(WeightKind::Hardy, 1, 128, 1e-10);
  const CheckReport rep = density_check(m);
  CHECK(rep.name == "density");
  CHECK(rep.passed);

  // For these weights the truncation error equals the bound at every order,
  // so the worst measured ratio must sit just below 1, never far under it.
  const SubCheck& est = find_sub(rep, "partial_sum_estimate");
  CHECK(est.measured <= est.threshold);
  CHECK(est.measured > 0.97);
  CHECK(find_sub(rep, "resolvent_span_rank").passed);
  CHECK(find_sub(rep, "telescoping_residual").passed);
}

TEST_CASE("series approximation audit validates its inputs") {
  const SpaceModel m = make_space(WeightKind::Hardy, 1, 32, 1e-10);
  const std::vector<Eigen::VectorXcd> basis = {Eigen::VectorXcd::Ones(1)};
  const std::vector<Complex> ok = {Complex(2.0, 0.0)};

  // |lambda| = 1 does not clear the up-shift norm bound of these weights.
  CHECK_THROWS_AS(density_check(m, basis, {Complex(1.0, 0.0)}, 5,
                                CheckOptions{}),
                  std::invalid_argument);
  CHECK_THROWS_AS(density_check(m, basis, ok, 0, CheckOptions{}),
                  std::invalid_argument);
  CHECK_THROWS_AS(density_check(m, basis, {}, 5, CheckOptions{}),
                  std::invalid_argument);
  CHECK_THROWS_AS(density_check(m, {}, ok, 5, CheckOptions{}),
                  std::invalid_argument);
}

TEST_CASE("solvability dichotomy audit passes on the default grid") {
  const SpaceModel m = make_space(WeightKind::Hardy, 1, 128, 1e-10);
  const CheckReport rep = decompose_solvability_check(m);
  CHECK(rep.name == "solvability");
  CHECK(rep.passed);
  CHECK(rep.provenance.notes.count("interior_samples") == 1);
  CHECK(rep.provenance.notes.count("exterior_samples") == 1);

  CHECK_THROWS_AS(decompose_solvability_check(m, {Complex(1.0, 0.0)},
                                              CheckOptions{}),
                  std::invalid_argument);
}

TEST_CASE("blow-up diagnostic fits a simple pole with exponent one") {
  const SpaceModel m = make_space(WeightKind::Hardy, 1, 128, 1e-10);
  const CoeffFunction k = truncated_kernel(m, Complex(0.9, 0.0));
  const InvariantSubspace sub = InvariantSubspace::build(m, {k});
  const Complex xi(1.0 / 0.9, 0.0);

  const BlowupResult r =
      boundary_blowup_diagnostic(m, sub, k, xi, dyadic_ray(xi, 12));
  CHECK(r.exponent == doctest::Approx(1.0).epsilon(0.05));
  CHECK(r.fit_points == 6);
  CHECK(r.log_norms.size() == 12);
  CHECK(r.log_dists.size() == 12);
  // Ray points approach the target, so -log(dist) grows along the ray.
  CHECK(std::is_sorted(r.log_dists.begin(), r.log_dists.end()));
  CHECK(r.report.sequences.count("log_norms") == 1);
  CHECK(r.report.provenance.notes.count("exponent") == 1);
}

TEST_CASE("blow-up diagnostic stays flat away from the singularity") {
  const SpaceModel m = make_space(WeightKind::Hardy, 1, 128, 1e-10);
  const CoeffFunction k = truncated_kernel(m, Complex(0.5, 0.0));
  const InvariantSubspace sub = InvariantSubspace::build(m, {k});
  const Complex xi(1.2, 0.0);

  const BlowupResult r =
      boundary_blowup_diagnostic(m, sub, k, xi, dyadic_ray(xi, 12));
  CHECK(std::abs(r.exponent) < 0.05);
}

TEST_CASE("blow-up diagnostic propagates guards and spectrum hits") {
  const SpaceModel m = make_space(WeightKind::Hardy, 1, 64, 1e-10);
  const CoeffFunction k = truncated_kernel(m, Complex(0.5, 0.0));
  const InvariantSubspace sub = InvariantSubspace::build(m, {k});

  const std::vector<Complex> short_ray = {Complex(2.0, 0), Complex(2.2, 0),
                                          Complex(2.4, 0)};
  CHECK_THROWS_AS(
      boundary_blowup_diagnostic(m, sub, k, Complex(3.0, 0), short_ray),
      std::invalid_argument);

  CHECK_THROWS_AS(
      boundary_blowup_diagnostic(m, sub, CoeffFunction::monomial(1, 1),
                                 Complex(3.0, 0), dyadic_ray(Complex(3, 0), 4)),
      std::invalid_argument);

  // 2.0 is the reciprocal of the generator point, so the restriction solve
  // must report the hit rather than return an amplified solution.
  const std::vector<Complex> hit_ray = {Complex(2.0, 0), Complex(2.2, 0),
                                        Complex(2.4, 0), Complex(2.6, 0)};
  CHECK_THROWS_AS(
      boundary_blowup_diagnostic(m, sub, k, Complex(3.0, 0), hit_ray),
      SpectrumHitError);

  CHECK_THROWS_AS(dyadic_ray(Complex(1.1, 0), 0), std::invalid_argument);
  const std::vector<Complex> ray = dyadic_ray(Complex(1.1, 0.0), 3);
  REQUIRE(ray.size() == 3);
  CHECK(ray[0].real() == doctest::Approx(1.65));
  CHECK(ray[1].real() == doctest::Approx(1.375));
  CHECK(ray[2].real() == doctest::Approx(1.2375));
}

TEST_CASE("default blow-up report separates pole and analytic cases") {
  const SpaceModel m = make_space(WeightKind::Hardy, 1, 128, 1e-10);
  const CheckReport rep = boundary_blowup_report(m);
  CHECK(rep.name == "boundary_blowup");
  CHECK(rep.passed);
  CHECK(find_sub(rep, "pole_exponent_error").passed);
  CHECK(find_sub(rep, "analytic_exponent_magnitude").passed);
  CHECK(rep.sequences.count("pole_log_norms") == 1);
  CHECK(rep.sequences.count("analytic_log_norms") == 1);
  CHECK(rep.provenance.notes.at("pole_exponent") ==
        doctest::Approx(1.0).epsilon(0.05));
  CHECK(std::abs(rep.provenance.notes.at("analytic_exponent")) < 0.05);
}

TEST_CASE("reciprocity report carries one witness row per parameter") {
  const SpaceModel m = make_space(WeightKind::Hardy, 1, 128, 1e-10);
  const std::vector<Complex> lambdas = {Complex(2.0, 0.0), Complex(1.5, 0.5)};
  const CheckReport rep = reciprocity_check_report(m, lambdas);
  CHECK(rep.name == "reciprocity");
  CHECK(rep.passed);

  const std::vector<std::string> names = sub_check_names(rep);
  const std::set<std::string> name_set(names.begin(), names.end());
  CHECK(name_set.count("witness_residual_00") == 1);
  CHECK(name_set.count("indicator_decay_00") == 1);
  CHECK(name_set.count("witness_residual_01") == 1);
  CHECK(name_set.count("indicator_decay_01") == 1);
  REQUIRE(rep.sequences.count("indicators_00") == 1);
  CHECK(rep.sequences.at("indicators_00").size() == 3);
}

TEST_CASE("suite runner preserves order, rejects unknown names, and repeats") {
  const SpaceModel m = make_space(WeightKind::Hardy, 1, 64, 1e-10);
  const CheckOptions opts;

  const std::vector<std::string> all = suite_names();
  const std::vector<std::string> expected = {
      "axioms", "sot", "cd", "density", "solvability", "reciprocity", "blowup"};
  CHECK(all == expected);

  // The blow-up default probes a kernel near the boundary, whose orbit only
  // closes up under a long truncation, so that branch gets a bigger model.
  const SpaceModel deep = make_space(WeightKind::Hardy, 1, 256, 1e-10);
  const auto reports = run_suite(deep, {"axioms", "blowup"}, opts);
  REQUIRE(reports.size() == 2);
  CHECK(reports[0].name == "model_axioms");
  CHECK(reports[1].name == "boundary_blowup");

  CHECK_THROWS_WITH_AS(run_suite(m, {"bogus"}, opts),
                       "unknown check name: bogus", std::invalid_argument);

  // Same options, same reports, down to the serialized byte level.
  const auto a = run_suite(m, {"axioms", "sot"}, opts);
  const auto b = run_suite(m, {"axioms", "sot"}, opts);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    CHECK(check_report_to_json(a[i]).dump() ==
          check_report_to_json(b[i]).dump());
}
