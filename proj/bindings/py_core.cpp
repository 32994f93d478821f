#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>

#include "shiftlab/checks.hpp"
#include "shiftlab/resolvent.hpp"
#include "shiftlab/serialize.hpp"
#include "shiftlab/space.hpp"
#include "shiftlab/spectral.hpp"
#include "shiftlab/subspace.hpp"

namespace py = pybind11;
using namespace shiftlab;

namespace {

WeightKind kind_from_name(const std::string& s) {
  if (s == "hardy") return WeightKind::Hardy;
  if (s == "bergman") return WeightKind::Bergman;
  if (s == "dirichlet") return WeightKind::Dirichlet;
  if (s == "custom") return WeightKind::Custom;
  throw std::invalid_argument("unknown weight kind: " + s);
}

OperatorTag tag_from_name(const std::string& s) {
  if (s == "Mz") return OperatorTag::Mz;
  if (s == "L") return OperatorTag::L;
  if (s == "restriction") return OperatorTag::RestrictionMatrix;
  throw std::invalid_argument("unknown operator: " + s);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "shift operators on weighted coefficient spaces";
  m.attr("__version__") = "0.1.0";

  py::register_exception<NeumannDivergenceError>(m, "NeumannDivergenceError");
  py::register_exception<SpectrumHitError>(m, "SpectrumHitError");
  py::register_exception<IllConditionedBasisError>(m,
                                                   "IllConditionedBasisError");

  py::class_<SpaceModel>(m, "SpaceModel")
      .def_readonly("fiber_dim", &SpaceModel::fiber_dim)
      .def_readonly("trunc_len", &SpaceModel::trunc_len)
      .def_readonly("tol", &SpaceModel::tol)
      .def_property_readonly(
          "kind",
          [](const SpaceModel& s) {
            return std::string(to_string(s.weights.kind()));
          })
      .def("beta",
           [](const SpaceModel& s, int n) { return s.weights.beta(n); })
      .def("disc_radius",
           [](const SpaceModel& s) { return s.weights.disc_radius(); })
      .def("__repr__", [](const SpaceModel& s) {
        std::ostringstream os;
        os << "SpaceModel(kind=" << to_string(s.weights.kind())
           << ", d=" << s.fiber_dim << ", N=" << s.trunc_len
           << ", tol=" << s.tol << ")";
        return os.str();
      });

  m.def(
      "make_space",
      [](const std::string& kind, int fiber_dim, int trunc_len, double tol,
         std::vector<double> custom_beta) {
        return make_space(kind_from_name(kind), fiber_dim, trunc_len, tol,
                          std::move(custom_beta));
      },
      py::arg("kind"), py::arg("fiber_dim") = 1, py::arg("trunc_len") = 256,
      py::arg("tol") = 1e-10, py::arg("custom_beta") = std::vector<double>{});

  py::class_<CoeffFunction>(m, "CoeffFunction")
      .def(py::init<Eigen::MatrixXcd, double>(), py::arg("coeffs"),
           py::arg("tail_bound") = 0.0)
      .def_static("zero", &CoeffFunction::zero, py::arg("fiber_dim"))
      .def_static("constant", &CoeffFunction::constant, py::arg("value"))
      .def_static("monomial", &CoeffFunction::monomial, py::arg("fiber_dim"),
                  py::arg("degree"), py::arg("fiber") = 0,
                  py::arg("scale") = Complex(1.0, 0.0))
      .def_property_readonly("fiber_dim", &CoeffFunction::fiber_dim)
      .def_property_readonly("degree", &CoeffFunction::degree)
      .def_property_readonly("tail_bound", &CoeffFunction::tail_bound)
      .def_property_readonly(
          "coeffs", [](const CoeffFunction& f) { return f.coeffs(); })
      .def("coeff", &CoeffFunction::coeff, py::arg("n"))
      .def("__add__",
           [](const CoeffFunction& a, const CoeffFunction& b) { return a + b; })
      .def("__sub__",
           [](const CoeffFunction& a, const CoeffFunction& b) { return a - b; })
      .def("__rmul__",
           [](const CoeffFunction& f, Complex s) { return s * f; });

  m.def("truncated_kernel", &truncated_kernel, py::arg("model"), py::arg("a"),
        py::arg("fiber") = 0, py::arg("scale") = Complex(1.0, 0.0));
  m.def("norm", &norm, py::arg("model"), py::arg("f"));
  m.def("inner", &inner, py::arg("model"), py::arg("f"), py::arg("g"));
  m.def("evaluate", &evaluate, py::arg("model"), py::arg("f"), py::arg("z"),
        py::arg("allow_outside") = false);
  m.def(
      "evaluate_with_bound",
      [](const SpaceModel& model, const CoeffFunction& f, Complex z,
         bool allow_outside) {
        const EvalResult r = evaluate_with_bound(model, f, z, allow_outside);
        return py::make_tuple(r.value, r.error_bound);
      },
      py::arg("model"), py::arg("f"), py::arg("z"),
      py::arg("allow_outside") = false);
  m.def("apply_Mz", &apply_Mz, py::arg("model"), py::arg("f"));
  m.def("apply_L", &apply_L, py::arg("model"), py::arg("f"));
  m.def("difference_quotient", &difference_quotient, py::arg("model"),
        py::arg("f"), py::arg("lambda_"));

  py::class_<ContinuationResult>(m, "ContinuationResult")
      .def_readonly("lambda_", &ContinuationResult::lambda)
      .def_readonly("value", &ContinuationResult::value)
      .def_readonly("kernel_component", &ContinuationResult::kernel_component)
      .def_readonly("residual", &ContinuationResult::residual)
      .def_readonly("in_paper_domain", &ContinuationResult::in_paper_domain)
      .def("__repr__", [](const ContinuationResult& r) {
        std::ostringstream os;
        os << "ContinuationResult(lambda=(" << r.lambda.real() << ","
           << r.lambda.imag() << "), residual=" << r.residual << ")";
        return os.str();
      });

  py::class_<Decomposition>(m, "Decomposition")
      .def_readonly("g", &Decomposition::g)
      .def_readonly("h", &Decomposition::h)
      .def_readonly("residual", &Decomposition::residual);

  py::class_<InvariantSubspace>(m, "InvariantSubspace")
      .def_property_readonly("dim", &InvariantSubspace::dim)
      .def_property_readonly("closure_residual",
                             &InvariantSubspace::closure_residual)
      .def_property_readonly("gram_condition",
                             &InvariantSubspace::gram_condition)
      .def_property_readonly("tolerance", &InvariantSubspace::tolerance)
      .def_property_readonly(
          "restriction",
          [](const InvariantSubspace& s) { return s.restriction(); })
      .def("coordinates", &InvariantSubspace::coordinates, py::arg("model"),
           py::arg("f"))
      .def("project", &InvariantSubspace::project, py::arg("model"),
           py::arg("f"))
      .def("projection_defect", &InvariantSubspace::projection_defect,
           py::arg("model"), py::arg("f"));

  m.def(
      "build_subspace",
      [](const SpaceModel& model, std::vector<CoeffFunction> generators,
         std::optional<int> orbit_power, double tolerance) {
        SubspaceMode mode = ExactSpan{};
        if (orbit_power) mode = OrbitClosure{*orbit_power};
        return InvariantSubspace::build(model, std::move(generators), mode,
                                        tolerance);
      },
      py::arg("model"), py::arg("generators"),
      py::arg("orbit_power") = std::nullopt, py::arg("tolerance") = 1e-6);

  m.def("restriction_spectrum", &restriction_spectrum, py::arg("subspace"));

  py::class_<MembershipResult>(m, "MembershipResult")
      .def_readonly("is_member", &MembershipResult::is_member)
      .def_readonly("residual", &MembershipResult::residual)
      .def_readonly("threshold", &MembershipResult::threshold);

  m.def("membership_test", &membership_test, py::arg("model"),
        py::arg("subspace"), py::arg("f"), py::arg("threshold") = -1.0);

  py::class_<PointSpectrumResult>(m, "PointSpectrumResult")
      .def_readonly("in_point_spectrum",
                    &PointSpectrumResult::in_point_spectrum)
      .def_readonly("via_membership", &PointSpectrumResult::via_membership)
      .def_readonly("via_eigenvalue", &PointSpectrumResult::via_eigenvalue)
      .def_readonly("agree", &PointSpectrumResult::agree)
      .def_readonly("membership_residual",
                    &PointSpectrumResult::membership_residual)
      .def_readonly("eigenvalue_distance",
                    &PointSpectrumResult::eigenvalue_distance);

  m.def(
      "point_spectrum_restriction",
      [](const SpaceModel& model, const InvariantSubspace& sub, Complex lambda,
         const std::vector<Eigen::VectorXcd>& kernel_basis, double eigen_tol) {
        return point_spectrum_restriction(model, sub, lambda, kernel_basis,
                                          eigen_tol);
      },
      py::arg("model"), py::arg("subspace"), py::arg("lambda_"),
      py::arg("kernel_basis"), py::arg("eigen_tol") = 1e-6);

  m.def(
      "resolvent_R",
      [](const SpaceModel& model, const CoeffFunction& f, Complex lambda,
         const InvariantSubspace* sub) {
        return resolvent_R(model, f, lambda, sub);
      },
      py::arg("model"), py::arg("f"), py::arg("lambda_"),
      py::arg("subspace") = nullptr);
  m.def(
      "decompose",
      [](const SpaceModel& model, const CoeffFunction& f, Complex lambda) {
        return decompose(model, f, lambda);
      },
      py::arg("model"), py::arg("f"), py::arg("lambda_"));
  m.def(
      "continue_f",
      [](const SpaceModel& model, const CoeffFunction& f, Complex lambda,
         const InvariantSubspace* sub) {
        return continue_f(model, f, lambda, sub);
      },
      py::arg("model"), py::arg("f"), py::arg("lambda_"),
      py::arg("subspace") = nullptr);
  m.def("eigenvector_at", &eigenvector_at, py::arg("model"),
        py::arg("lambda_"), py::arg("e"));

  m.def(
      "svd_indicator",
      [](const SpaceModel& model, const std::string& op, Complex lambda,
         int n_eff, const InvariantSubspace* sub) {
        return svd_indicator(model, tag_from_name(op), lambda, n_eff, sub);
      },
      py::arg("model"), py::arg("op"), py::arg("lambda_"), py::arg("n_eff"),
      py::arg("subspace") = nullptr);
  m.def(
      "spectrum_membership_indicator",
      [](const SpaceModel& model, const std::string& op, Complex lambda,
         int n_eff) {
        return spectrum_membership_indicator(model, tag_from_name(op), lambda,
                                             n_eff);
      },
      py::arg("model"), py::arg("op"), py::arg("lambda_"), py::arg("n_eff"));

  m.def(
      "scan_grid",
      [](const SpaceModel& model, const std::string& op, Complex center,
         double radius, int resolution, const InvariantSubspace* sub) {
        const SpectralScan scan = scan_grid(
            model, tag_from_name(op), GridSpec{center, radius, resolution},
            -1, sub);
        py::dict out;
        out["grid"] = scan.grid;
        out["indicator"] = scan.indicator;
        out["trunc_len"] = scan.trunc_len;
        out["operator"] = std::string(to_string(scan.operator_tag));
        return out;
      },
      py::arg("model"), py::arg("op"), py::arg("center") = Complex(0.0, 0.0),
      py::arg("radius") = 1.5, py::arg("resolution") = 32,
      py::arg("subspace") = nullptr);

  m.def(
      "run_suite_json",
      [](const SpaceModel& model, std::vector<std::string> names,
         std::uint64_t seed, int probes) {
        if (names.empty()) names = suite_names();
        CheckOptions opts;
        opts.seed = seed;
        opts.probes = probes;
        const std::vector<CheckReport> reports =
            run_suite(model, names, opts);
        Json arr = Json::array();
        for (const CheckReport& r : reports)
          arr.push_back(check_report_to_json(r));
        return arr.dump(2);
      },
      py::arg("model"), py::arg("names") = std::vector<std::string>{},
      py::arg("seed") = std::uint64_t{0x5eed5ab5}, py::arg("probes") = 32);
  m.def("suite_names", &suite_names);
}
