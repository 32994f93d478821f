#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "shiftlab/types.hpp"

namespace shiftlab {

/// Parsed command line.  Subcommands: space, continue, scan, subspace, check.
struct RunConfig {
  std::string command;
  std::string space_path;
  std::string f_path;
  std::string subspace_path;
  std::vector<Complex> lambdas;
  std::optional<std::string> grid;  // "center_re,center_im,radius,resolution"
  std::string operator_name = "L";
  std::string suite = "all";
  std::string out_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> trunc_len_override;
  std::optional<double> tol_override;
  std::optional<int> resolution_override;
};

/// Exit codes: 0 success / all checks passed, 1 a check failed, 2 bad input
/// (parse, schema, precondition).  Identical config and seed produce
/// byte-identical output files.
int run(const RunConfig& config);

/// argv front end; fills RunConfig and dispatches to run().
int run_cli(int argc, const char* const* argv);

}  // namespace shiftlab
