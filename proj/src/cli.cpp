#include "shiftlab/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "shiftlab/checks.hpp"
#include "shiftlab/resolvent.hpp"
#include "shiftlab/serialize.hpp"
#include "shiftlab/spectral.hpp"
#include "shiftlab/subspace.hpp"

namespace shiftlab {

namespace {

constexpr std::uint64_t kDefaultSeed = 0x5eed5ab5;

Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open input file: " + path);
  return Json::parse(in);
}

SpaceModel load_space(const RunConfig& config) {
  if (config.space_path.empty())
    throw std::invalid_argument("--space is required");
  Json j = load_json(config.space_path);
  if (config.trunc_len_override) j["N"] = *config.trunc_len_override;
  if (config.tol_override) j["tol"] = *config.tol_override;
  return space_from_json(j);
}

Json config_to_json(const RunConfig& config, const SpaceModel& model) {
  Json j;
  j["command"] = config.command;
  j["space"] = config.space_path;
  if (!config.f_path.empty()) j["f"] = config.f_path;
  if (!config.subspace_path.empty()) j["subspace"] = config.subspace_path;
  if (!config.lambdas.empty()) {
    Json ls = Json::array();
    for (Complex l : config.lambdas)
      ls.push_back(Json::array({l.real(), l.imag()}));
    j["lambda"] = std::move(ls);
  }
  if (config.grid) j["grid"] = *config.grid;
  if (config.command == "scan") j["operator"] = config.operator_name;
  if (config.command == "check") j["suite"] = config.suite;
  j["seed"] = config.seed.value_or(kDefaultSeed);
  j["N"] = model.trunc_len;
  j["tol"] = model.tol;
  return j;
}

std::filesystem::path resolve_out(const RunConfig& config,
                                  const char* default_name) {
  std::filesystem::path p =
      config.out_path.empty() ? std::filesystem::path(default_name)
                              : std::filesystem::path(config.out_path);
  if (p.is_relative()) {
    if (const char* dir = std::getenv("SHIFTLAB_OUT_DIR"))
      p = std::filesystem::path(dir) / p;
  }
  return p;
}

void write_json(const std::filesystem::path& path, const Json& j) {
  atomic_write(path, j.dump(2) + "\n");
}

GridSpec parse_grid(const RunConfig& config) {
  // "center_re,center_im,radius,resolution"
  GridSpec spec{Complex(0.0, 0.0), 1.5, 64};
  if (config.grid) {
    std::istringstream ss(*config.grid);
    double cre = 0.0, cim = 0.0, radius = 0.0;
    int res = 0;
    char c1 = 0, c2 = 0, c3 = 0;
    ss >> cre >> c1 >> cim >> c2 >> radius >> c3 >> res;
    if (!ss || c1 != ',' || c2 != ',' || c3 != ',')
      throw std::invalid_argument(
          "--grid expects center_re,center_im,radius,resolution");
    spec = GridSpec{Complex(cre, cim), radius, res};
  }
  if (config.resolution_override) spec.resolution = *config.resolution_override;
  return spec;
}

OperatorTag parse_operator(const std::string& name) {
  if (name == "Mz" || name == "mz") return OperatorTag::Mz;
  if (name == "L" || name == "l") return OperatorTag::L;
  if (name == "restriction") return OperatorTag::RestrictionMatrix;
  throw std::invalid_argument("unknown operator: " + name);
}

int failing_name_message(const std::vector<CheckReport>& reports) {
  bool all = true;
  for (const CheckReport& r : reports) {
    for (const SubCheck& s : r.details) {
      if (!s.passed) {
        all = false;
        std::fprintf(stderr, "check failed: %s/%s (measured %s vs %s)\n",
                     r.name.c_str(), s.name.c_str(),
                     format_double(s.measured).c_str(),
                     format_double(s.threshold).c_str());
      }
    }
  }
  return all ? 0 : 1;
}

int run_space(const RunConfig& config) {
  const SpaceModel model = load_space(config);
  CheckOptions opts;
  opts.seed = config.seed.value_or(kDefaultSeed);
  const CheckReport report = model_axioms_check(model, opts);
  Json out;
  out["config"] = config_to_json(config, model);
  out["space"] = space_to_json(model);
  out["report"] = check_report_to_json(report);
  write_json(resolve_out(config, "space.json"), out);
  return failing_name_message({report});
}

int run_continue(const RunConfig& config) {
  const SpaceModel model = load_space(config);
  if (config.f_path.empty()) throw std::invalid_argument("--f is required");
  if (config.lambdas.empty())
    throw std::invalid_argument("at least one --lambda is required");
  const CoeffFunction f = function_from_json(model, load_json(config.f_path));
  std::optional<InvariantSubspace> sub;
  if (!config.subspace_path.empty())
    sub = subspace_from_json(model, load_json(config.subspace_path));

  Json results = Json::array();
  bool all_ok = true;
  for (Complex lambda : config.lambdas) {
    try {
      const ContinuationResult r =
          continue_f(model, f, lambda, sub ? &*sub : nullptr);
      results.push_back(continuation_to_json(r));
    } catch (const std::exception& e) {
      all_ok = false;
      Json row;
      row["lambda"] = Json::array({lambda.real(), lambda.imag()});
      row["error"] = e.what();
      results.push_back(std::move(row));
      std::fprintf(stderr, "continuation failed at (%s, %s): %s\n",
                   format_double(lambda.real()).c_str(),
                   format_double(lambda.imag()).c_str(), e.what());
    }
  }
  Json out;
  out["config"] = config_to_json(config, model);
  out["results"] = std::move(results);
  write_json(resolve_out(config, "continuation.json"), out);
  return all_ok ? 0 : 1;
}

int run_scan(const RunConfig& config) {
  const SpaceModel model = load_space(config);
  const GridSpec spec = parse_grid(config);
  const OperatorTag tag = parse_operator(config.operator_name);
  std::optional<InvariantSubspace> sub;
  if (!config.subspace_path.empty())
    sub = subspace_from_json(model, load_json(config.subspace_path));
  if (tag == OperatorTag::RestrictionMatrix && !sub)
    throw std::invalid_argument("operator 'restriction' needs --subspace");

  const SpectralScan scan =
      scan_grid(model, tag, spec, -1, sub ? &*sub : nullptr);
  std::string body;
  const Json cfg = config_to_json(config, model);
  for (const auto& [key, value] : cfg.items())
    body += "# " + key + "=" + (value.is_string()
                                    ? value.get<std::string>()
                                    : value.dump()) + "\n";
  body += scan_to_csv(model, scan);
  atomic_write(resolve_out(config, "scan.csv"), body);
  return 0;
}

int run_subspace(const RunConfig& config) {
  const SpaceModel model = load_space(config);
  if (config.subspace_path.empty())
    throw std::invalid_argument("--subspace is required");
  const InvariantSubspace sub =
      subspace_from_json(model, load_json(config.subspace_path));

  Json out;
  out["config"] = config_to_json(config, model);
  out["dim"] = sub.dim();
  out["closure_residual"] = sub.closure_residual();
  out["gram_condition"] = sub.gram_condition();
  const Eigen::VectorXcd spec = restriction_spectrum(sub);
  Json eig = Json::array();
  for (int i = 0; i < spec.size(); ++i)
    eig.push_back(Json::array({spec(i).real(), spec(i).imag()}));
  out["restriction_spectrum"] = std::move(eig);

  int status = 0;
  if (model.fiber_dim == 1) {
    // Samples: the restriction eigenvalues (expected members) plus seeded
    // interior points (expected non-members for a generic subspace).
    ProbeGenerator gen(config.seed.value_or(kDefaultSeed));
    std::vector<Complex> samples;
    for (int i = 0; i < spec.size(); ++i) samples.push_back(spec(i));
    const double r = model.weights.disc_radius();
    for (int i = 0; i < 16; ++i)
      samples.push_back(gen.uniform_disc(0.05 * r, 0.9 * r));
    const ArrDiscReport arr = arr_disc_check(model, sub, samples);
    out["arr"] = arr_report_to_json(arr);
    if (arr.disagreements != 0) {
      status = 1;
      std::fprintf(stderr,
                   "check failed: arr_disc/agreement (%d disagreements)\n",
                   arr.disagreements);
    }
  }
  if (!config.f_path.empty()) {
    const CoeffFunction f =
        function_from_json(model, load_json(config.f_path));
    out["membership"] = membership_to_json(membership_test(model, sub, f));
  }
  write_json(resolve_out(config, "subspace.json"), out);
  return status;
}

int run_check(const RunConfig& config) {
  const SpaceModel model = load_space(config);
  std::vector<std::string> names;
  if (config.suite == "all") {
    names = suite_names();
  } else {
    std::istringstream ss(config.suite);
    std::string item;
    while (std::getline(ss, item, ','))
      if (!item.empty()) names.push_back(item);
    if (names.empty()) throw std::invalid_argument("empty --suite");
  }
  CheckOptions opts;
  opts.seed = config.seed.value_or(kDefaultSeed);
  const std::vector<CheckReport> reports = run_suite(model, names, opts);

  Json out;
  out["config"] = config_to_json(config, model);
  Json rs = Json::array();
  bool all = true;
  for (const CheckReport& r : reports) {
    rs.push_back(check_report_to_json(r));
    all = all && r.passed;
  }
  out["reports"] = std::move(rs);
  out["passed"] = all;
  write_json(resolve_out(config, "checks.json"), out);
  return failing_name_message(reports);
}

}  // namespace

int run(const RunConfig& config) {
  try {
    if (config.command == "space") return run_space(config);
    if (config.command == "continue") return run_continue(config);
    if (config.command == "scan") return run_scan(config);
    if (config.command == "subspace") return run_subspace(config);
    if (config.command == "check") return run_check(config);
    std::fprintf(stderr, "unknown command: %s\n", config.command.c_str());
    return 2;
  } catch (const Json::exception& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return 2;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return 2;
  } catch (const std::filesystem::filesystem_error& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

int run_cli(int argc, const char* const* argv) {
  RunConfig config;
  std::vector<std::string> lambda_args;

  CLI::App app{"numerical laboratory for shift operators on weighted "
               "coefficient spaces"};
  app.require_subcommand(1);

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--space", config.space_path,
                    "space descriptor JSON file");
    sub->add_option("--out", config.out_path, "output file path");
    sub->add_option("--seed", config.seed, "probe generator seed");
    sub->add_option("--N", config.trunc_len_override,
                    "override the truncation length");
    sub->add_option("--tol", config.tol_override,
                    "override the certification tolerance");
  };

  CLI::App* c_space = app.add_subcommand("space", "validate a space model");
  add_common(c_space);

  CLI::App* c_cont =
      app.add_subcommand("continue", "analytic continuation at parameters");
  add_common(c_cont);
  c_cont->add_option("--f", config.f_path, "function descriptor JSON file");
  c_cont->add_option("--subspace", config.subspace_path,
                     "subspace descriptor JSON file");
  c_cont->add_option("--lambda", lambda_args,
                     "parameter, re or re,im (repeatable)");

  CLI::App* c_scan = app.add_subcommand("scan", "singular value grid scan");
  add_common(c_scan);
  c_scan->add_option("--grid", config.grid,
                     "center_re,center_im,radius,resolution");
  c_scan->add_option("--operator", config.operator_name,
                     "Mz, L, or restriction");
  c_scan->add_option("--subspace", config.subspace_path,
                     "subspace descriptor JSON file");
  c_scan->add_option("--resolution", config.resolution_override,
                     "override the grid resolution");

  CLI::App* c_sub =
      app.add_subcommand("subspace", "invariant subspace analysis");
  add_common(c_sub);
  c_sub->add_option("--subspace", config.subspace_path,
                    "subspace descriptor JSON file");
  c_sub->add_option("--f", config.f_path,
                    "optional membership probe JSON file");

  CLI::App* c_check = app.add_subcommand("check", "run the check suite");
  add_common(c_check);
  c_check->add_option("--suite", config.suite,
                      "comma-separated check names, or 'all'");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  config.command = app.get_subcommands().front()->get_name();
  for (const std::string& arg : lambda_args) {
    std::istringstream ss(arg);
    double re = 0.0, im = 0.0;
    char sep = 0;
    ss >> re;
    if (!ss) {
      std::fprintf(stderr, "input error: bad --lambda value '%s'\n",
                   arg.c_str());
      return 2;
    }
    if (ss >> sep) {
      if (sep != ',' || !(ss >> im)) {
        std::fprintf(stderr, "input error: bad --lambda value '%s'\n",
                     arg.c_str());
        return 2;
      }
    }
    config.lambdas.emplace_back(re, im);
  }
  return run(config);
}

}  // namespace shiftlab
