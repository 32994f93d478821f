#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "shiftlab/serialize.hpp"
#include "shiftlab/subspace.hpp"

using namespace shiftlab;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split_lines(const std::string& s) {
  std::vector<std::string> lines;
  std::istringstream in(s);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

}  // namespace

TEST_CASE("space descriptors round-trip through json") {
  SUBCASE("preset") {
    const SpaceModel m = make_space(WeightKind::Bergman, 2, 32, 1e-9);
    const Json j = space_to_json(m);
    CHECK(j.at("kind") == "bergman");
    CHECK_FALSE(j.contains("beta"));
    const SpaceModel back = space_from_json(j);
    CHECK(back.weights.kind() == WeightKind::Bergman);
    CHECK(back.fiber_dim == 2);
    CHECK(back.trunc_len == 32);
    CHECK(back.tol == 1e-9);
  }

  SUBCASE("custom weights keep every stored value") {
    std::vector<double> beta(17);
    double b = 1.0;
    for (std::size_t n = 0; n < beta.size(); ++n, b *= 2.0) beta[n] = b;
    const SpaceModel m = make_space(WeightKind::Custom, 1, 16, 1e-10, beta);
    const Json j = space_to_json(m);
    REQUIRE(j.contains("beta"));
    CHECK(j.at("beta").size() == 17);
    const SpaceModel back = space_from_json(j);
    for (int n = 0; n <= 16; ++n)
      CHECK(back.weights.beta(n) == m.weights.beta(n));
  }

  SUBCASE("omitted fields take defaults") {
    const SpaceModel m = space_from_json(Json{{"kind", "hardy"}});
    CHECK(m.fiber_dim == 1);
    CHECK(m.trunc_len == 256);
    CHECK(m.tol == 1e-10);
  }

  SUBCASE("malformed descriptors are rejected") {
    CHECK_THROWS_AS(space_from_json(Json{{"kind", "fock"}}),
                    std::invalid_argument);
    CHECK_THROWS(space_from_json(Json{{"d", 1}}));  // no kind at all
  }
}

TEST_CASE("coefficient functions round-trip through json") {
  const SpaceModel m = make_space(WeightKind::Hardy, 1, 32, 1e-10);

  SUBCASE("scalar fiber") {
    Eigen::MatrixXcd c(1, 3);
    c << Complex(1, 0), Complex(0, -2), Complex(0.5, 0.25);
    const CoeffFunction f(c, 0.125);
    const Json j = function_to_json(f);
    CHECK(j.at("fiber_dim") == 1);
    CHECK(j.at("coeffs").size() == 3);
    CHECK(j.at("tail_bound") == 0.125);
    const CoeffFunction back = function_from_json(m, j);
    CHECK(back.degree() == 2);
    CHECK(back.tail_bound() == 0.125);
    CHECK((back.coeffs() - f.coeffs()).norm() == 0.0);
  }

  SUBCASE("two-dimensional fiber uses nested pairs") {
    const SpaceModel m2 = make_space(WeightKind::Hardy, 2, 32, 1e-10);
    Eigen::MatrixXcd c(2, 2);
    c << Complex(1, 1), Complex(2, 0), Complex(0, 0), Complex(0, -3);
    const CoeffFunction f(c);
    const Json j = function_to_json(f);
    const CoeffFunction back = function_from_json(m2, j);
    CHECK((back.coeffs() - f.coeffs()).norm() == 0.0);

    CHECK_THROWS_AS(function_from_json(m, j), std::invalid_argument);
  }

  SUBCASE("kernel shorthand expands against the model truncation") {
    const Json j = {{"kernel", {0.5, 0.0}}};
    const CoeffFunction k = function_from_json(m, j);
    const CoeffFunction direct = truncated_kernel(m, Complex(0.5, 0.0));
    CHECK((k.coeffs() - direct.coeffs()).norm() == 0.0);
    CHECK(k.tail_bound() == direct.tail_bound());

    const Json scaled = {{"kernel", {0.5, 0.0}}, {"scale", {2.0, 0.0}}};
    const CoeffFunction k2 = function_from_json(m, scaled);
    CHECK((k2.coeffs() - 2.0 * direct.coeffs()).norm() == 0.0);
  }

  SUBCASE("malformed payloads are rejected") {
    CHECK_THROWS_AS(function_from_json(m, Json{{"coeffs", 3}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        function_from_json(m, Json{{"coeffs", Json::array({Json::array(
                                  {1.0, 2.0, 3.0})})}}),
        std::invalid_argument);
    CHECK_THROWS_AS(function_from_json(m, Json{{"kernel", {0.5}}}),
                    std::invalid_argument);
  }
}

TEST_CASE("subspace descriptors build spans and orbits") {
  const SpaceModel m = make_space(WeightKind::Hardy, 1, 32, 1e-10);

  const Json span = {{"generators", Json::array({Json{{"kernel", {0.5, 0.0}}}})},
                     {"mode", "exact_span"}};
  const InvariantSubspace sub = subspace_from_json(m, span);
  CHECK(sub.dim() == 1);

  const Json orbit = {
      {"generators",
       Json::array({function_to_json(CoeffFunction::monomial(1, 2))})},
      {"mode", Json{{"orbit_closure", 3}}},
      {"tolerance", 1e-8}};
  const InvariantSubspace orb = subspace_from_json(m, orbit);
  CHECK(orb.dim() == 3);
  CHECK(orb.tolerance() == 1e-8);

  const Json bad = {{"generators", Json::array({Json{{"kernel", {0.5, 0.0}}}})},
                    {"mode", "closed_span"}};
  CHECK_THROWS_AS(subspace_from_json(m, bad), std::invalid_argument);
}

TEST_CASE("result payloads expose their fields as json") {
  const SpaceModel m = make_space(WeightKind::Hardy, 1, 32, 1e-10);

  const ContinuationResult c = continue_f(
      m, truncated_kernel(m, Complex(0.5, 0.0)), Complex(0.25, 0.0));
  const Json jc = continuation_to_json(c);
  CHECK(jc.at("lambda")[0] == 0.25);
  CHECK(jc.at("value").size() == 1);
  CHECK(jc.contains("kernel_component"));
  CHECK(jc.contains("residual"));
  CHECK(jc.at("in_paper_domain") == true);

  const InvariantSubspace sub =
      InvariantSubspace::build(m, {truncated_kernel(m, Complex(0.5, 0.0))});
  const Json jm = membership_to_json(
      membership_test(m, sub, truncated_kernel(m, Complex(0.5, 0.0))));
  CHECK(jm.at("is_member") == true);
  CHECK(jm.at("residual").get<double>() < 1e-8);

  const Json ja = arr_report_to_json(
      arr_disc_check(m, sub, {Complex(0.5, 0.0), Complex(0.3, 0.0)}));
  CHECK(ja.at("samples").size() == 2);
  CHECK(ja.at("disagreements") == 0);
  CHECK(ja.at("samples")[0].at("agree") == true);
}

TEST_CASE("check reports serialize comparisons and sequences") {
  CheckReport rep;
  rep.name = "demo";
  rep.passed = true;
  rep.details.push_back({"upper", 0.5, 1.0, Comparison::LessEq, true});
  rep.details.push_back({"lower", 2.0, 1.0, Comparison::GreaterEq, true});
  rep.provenance.trunc_len = 16;
  rep.provenance.weight_kind = "hardy";
  rep.provenance.notes["alpha"] = 2.5;
  rep.sequences["decay"] = {1.0, 0.5};

  const Json j = check_report_to_json(rep);
  CHECK(j.at("details")[0].at("cmp") == "<=");
  CHECK(j.at("details")[1].at("cmp") == ">=");
  CHECK(j.at("provenance").at("notes").at("alpha") == 2.5);
  CHECK(j.at("sequences").at("decay").size() == 2);

  const std::string csv = sequences_to_csv(rep);
  const std::vector<std::string> lines = split_lines(csv);
  REQUIRE(lines.size() == 4);
  CHECK(lines[0] == "# report=demo");
  CHECK(lines[1] == "sequence,index,value");
  CHECK(lines[2] == "decay,0,1");
  CHECK(lines[3] == "decay,1,0.5");
}

TEST_CASE("scan export carries grid metadata and one row per point") {
  const SpaceModel m = make_space(WeightKind::Hardy, 1, 32, 1e-10);
  const SpectralScan scan =
      scan_grid(m, OperatorTag::L, GridSpec{Complex(0.5, 0.0), 0.0, 8});
  REQUIRE(scan.grid.size() == 1);

  const std::string csv = scan_to_csv(m, scan);
  const std::vector<std::string> lines = split_lines(csv);
  REQUIRE(lines.size() == 6);
  CHECK(lines[0] == "# operator=L");
  CHECK(lines[1] == "# trunc_len=32");
  CHECK(lines[2] == "# weight=hardy");
  CHECK(lines[3] == "# points=1");
  CHECK(lines[4] == "re,im,indicator");
  CHECK(lines[5].substr(0, 4) == "0.5,");
}

TEST_CASE("printed doubles parse back to the same bits") {
  const std::vector<double> samples = {1.0 / 3.0, 0.1, 1e-300, 12345.678901,
                                       -2.5e17, 0.0};
  for (double x : samples) {
    const std::string s = format_double(x);
    CHECK(std::strtod(s.c_str(), nullptr) == x);
  }
  CHECK(format_double(1.5) == "1.5");
}

TEST_CASE("atomic writes land complete files and replace old content") {
  const std::filesystem::path dir =
      std::filesystem::temp_directory_path() / "shiftlab_serialize_test";
  std::filesystem::remove_all(dir);
  const std::filesystem::path target = dir / "nested" / "out.txt";

  atomic_write(target, "first");
  CHECK(slurp(target) == "first");
  atomic_write(target, "second");
  CHECK(slurp(target) == "second");
  CHECK_FALSE(std::filesystem::exists(target.string() + ".tmp"));
  std::filesystem::remove_all(dir);
}
