#include "shiftlab/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>

#include "shiftlab/resolvent.hpp"
#include "shiftlab/subspace.hpp"

namespace shiftlab {

namespace {

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2)
    throw std::invalid_argument("expected a [re, im] pair");
  return Complex(j[0].get<double>(), j[1].get<double>());
}

WeightKind kind_from_string(const std::string& s) {
  if (s == "hardy") return WeightKind::Hardy;
  if (s == "bergman") return WeightKind::Bergman;
  if (s == "dirichlet") return WeightKind::Dirichlet;
  if (s == "custom") return WeightKind::Custom;
  throw std::invalid_argument("unknown weight kind: " + s);
}

}  // namespace

Json space_to_json(const SpaceModel& model) {
  Json j;
  j["kind"] = to_string(model.weights.kind());
  if (model.weights.kind() == WeightKind::Custom) {
    Json beta = Json::array();
    for (int n = 0; n <= model.weights.trunc_len(); ++n)
      beta.push_back(model.weights.beta(n));
    j["beta"] = std::move(beta);
  }
  j["d"] = model.fiber_dim;
  j["N"] = model.trunc_len;
  j["tol"] = model.tol;
  return j;
}

SpaceModel space_from_json(const Json& j) {
  const WeightKind kind = kind_from_string(j.at("kind").get<std::string>());
  const int d = j.value("d", 1);
  const int N = j.value("N", 256);
  const double tol = j.value("tol", 1e-10);
  std::vector<double> beta;
  if (kind == WeightKind::Custom)
    beta = j.at("beta").get<std::vector<double>>();
  return make_space(kind, d, N, tol, std::move(beta));
}

Json function_to_json(const CoeffFunction& f) {
  Json j;
  j["fiber_dim"] = f.fiber_dim();
  Json coeffs = Json::array();
  for (int n = 0; n <= f.degree(); ++n) {
    const Eigen::VectorXcd a = f.coeff(n);
    if (f.fiber_dim() == 1) {
      coeffs.push_back(complex_to_json(a(0)));
    } else {
      Json fiber = Json::array();
      for (int i = 0; i < f.fiber_dim(); ++i)
        fiber.push_back(complex_to_json(a(i)));
      coeffs.push_back(std::move(fiber));
    }
  }
  j["coeffs"] = std::move(coeffs);
  j["tail_bound"] = f.tail_bound();
  return j;
}

CoeffFunction function_from_json(const SpaceModel& model, const Json& j) {
  if (j.contains("kernel")) {
    const Complex a = complex_from_json(j.at("kernel"));
    const int fiber = j.value("fiber", 0);
    const Complex scale = j.contains("scale")
                              ? complex_from_json(j.at("scale"))
                              : Complex(1.0, 0.0);
    return truncated_kernel(model, a, fiber, scale);
  }
  const int d = j.value("fiber_dim", model.fiber_dim);
  if (d != model.fiber_dim)
    throw std::invalid_argument("function fiber_dim does not match the space");
  const Json& coeffs = j.at("coeffs");
  if (!coeffs.is_array()) throw std::invalid_argument("coeffs must be a list");
  const int degree = static_cast<int>(coeffs.size()) - 1;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, std::max(degree + 1, 1));
  for (int n = 0; n <= degree; ++n) {
    const Json& entry = coeffs[n];
    if (d == 1 && entry.is_array() && entry.size() == 2 &&
        entry[0].is_number()) {
      m(0, n) = complex_from_json(entry);
    } else {
      if (!entry.is_array() || static_cast<int>(entry.size()) != d)
        throw std::invalid_argument("coefficient entry has the wrong arity");
      for (int i = 0; i < d; ++i) m(i, n) = complex_from_json(entry[i]);
    }
  }
  return CoeffFunction(std::move(m), j.value("tail_bound", 0.0));
}

InvariantSubspace subspace_from_json(const SpaceModel& model, const Json& j) {
  std::vector<CoeffFunction> generators;
  for (const Json& g : j.at("generators"))
    generators.push_back(function_from_json(model, g));
  SubspaceMode mode = ExactSpan{};
  if (j.contains("mode")) {
    const Json& m = j.at("mode");
    if (m.is_string()) {
      if (m.get<std::string>() != "exact_span")
        throw std::invalid_argument("unknown subspace mode");
    } else {
      mode = OrbitClosure{m.at("orbit_closure").get<int>()};
    }
  }
  const double tolerance = j.value("tolerance", 1e-6);
  return InvariantSubspace::build(model, generators, mode, tolerance);
}

Json continuation_to_json(const ContinuationResult& r) {
  Json j;
  j["lambda"] = complex_to_json(r.lambda);
  Json value = Json::array();
  for (int i = 0; i < r.value.size(); ++i)
    value.push_back(complex_to_json(r.value(i)));
  j["value"] = std::move(value);
  j["kernel_component"] = function_to_json(r.kernel_component);
  j["residual"] = r.residual;
  j["in_paper_domain"] = r.in_paper_domain;
  return j;
}

Json membership_to_json(const MembershipResult& r) {
  Json j;
  j["is_member"] = r.is_member;
  j["residual"] = r.residual;
  j["threshold"] = r.threshold;
  return j;
}

Json arr_report_to_json(const ArrDiscReport& r) {
  Json j;
  Json samples = Json::array();
  for (const ArrSample& s : r.samples) {
    Json row;
    row["a"] = complex_to_json(s.a);
    row["in_spectrum"] = s.in_spectrum;
    row["is_member"] = s.is_member;
    row["agree"] = s.agree;
    samples.push_back(std::move(row));
  }
  j["samples"] = std::move(samples);
  j["disagreements"] = r.disagreements;
  return j;
}

Json check_report_to_json(const CheckReport& r) {
  Json j;
  j["name"] = r.name;
  j["passed"] = r.passed;
  Json details = Json::array();
  for (const SubCheck& s : r.details) {
    Json row;
    row["name"] = s.name;
    row["measured"] = s.measured;
    row["threshold"] = s.threshold;
    row["cmp"] = s.cmp == Comparison::LessEq ? "<=" : ">=";
    row["passed"] = s.passed;
    details.push_back(std::move(row));
  }
  j["details"] = std::move(details);
  Json prov;
  prov["trunc_len"] = r.provenance.trunc_len;
  prov["fiber_dim"] = r.provenance.fiber_dim;
  prov["weight_kind"] = r.provenance.weight_kind;
  prov["tol"] = r.provenance.tol;
  prov["seed"] = r.provenance.seed;
  prov["probes"] = r.provenance.probes;
  Json notes;
  for (const auto& [key, value] : r.provenance.notes) notes[key] = value;
  prov["notes"] = std::move(notes);
  j["provenance"] = std::move(prov);
  Json sequences;
  for (const auto& [key, value] : r.sequences) sequences[key] = value;
  j["sequences"] = std::move(sequences);
  return j;
}

std::string scan_to_csv(const SpaceModel& model, const SpectralScan& scan) {
  std::string out;
  out += "# operator=";
  out += to_string(scan.operator_tag);
  out += "\n# trunc_len=" + std::to_string(scan.trunc_len);
  out += "\n# weight=";
  out += to_string(model.weights.kind());
  out += "\n# points=" + std::to_string(scan.grid.size());
  out += "\nre,im,indicator\n";
  for (std::size_t i = 0; i < scan.grid.size(); ++i) {
    out += format_double(scan.grid[i].real());
    out += ',';
    out += format_double(scan.grid[i].imag());
    out += ',';
    out += format_double(scan.indicator[i]);
    out += '\n';
  }
  return out;
}

std::string sequences_to_csv(const CheckReport& report) {
  std::string out;
  out += "# report=" + report.name + "\n";
  out += "sequence,index,value\n";
  for (const auto& [name, values] : report.sequences) {
    for (std::size_t i = 0; i < values.size(); ++i) {
      out += name;
      out += ',';
      out += std::to_string(i);
      out += ',';
      out += format_double(values[i]);
      out += '\n';
    }
  }
  return out;
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void atomic_write(const std::filesystem::path& path, const std::string& data) {
  const std::filesystem::path parent = path.parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string());
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    out.flush();
    if (!out) throw std::runtime_error("write failed on " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace shiftlab
