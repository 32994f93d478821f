#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "shiftlab/checks.hpp"

namespace shiftlab {

using Json = nlohmann::ordered_json;

// Space descriptor: {"kind", "beta"?, "d", "N", "tol"}.
Json space_to_json(const SpaceModel& model);
SpaceModel space_from_json(const Json& j);

// Function descriptor: {"fiber_dim", "coeffs", "tail_bound"}.  coeffs holds
// one entry per degree: [re, im] when fiber_dim == 1, else a list of pairs.
// The loader also accepts the generator shorthand {"kernel": [re, im],
// "fiber": i, "fiber_dim": d} which expands against the model's truncation.
Json function_to_json(const CoeffFunction& f);
CoeffFunction function_from_json(const SpaceModel& model, const Json& j);

// Subspace descriptor: {"generators": [...], "mode": "exact_span" |
// {"orbit_closure": K}, "tolerance": t}.
InvariantSubspace subspace_from_json(const SpaceModel& model, const Json& j);

Json continuation_to_json(const ContinuationResult& r);
Json membership_to_json(const MembershipResult& r);
Json arr_report_to_json(const ArrDiscReport& r);
Json check_report_to_json(const CheckReport& r);

std::string scan_to_csv(const SpaceModel& model, const SpectralScan& scan);
std::string sequences_to_csv(const CheckReport& report);

// Fixed-format double printing shared by every writer; %.17g round-trips.
std::string format_double(double x);

// Write-to-temporary-then-rename; partial files never land on the final path.
void atomic_write(const std::filesystem::path& path, const std::string& data);

}  // namespace shiftlab
