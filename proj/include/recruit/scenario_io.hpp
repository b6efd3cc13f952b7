#pragma once

#include <map>
#include <string>

#include "recruit/types.hpp"

namespace recruit {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flat key = value scenario document. Keys: delta, policy (myopic|optimal),
// muA, muB, {A,B}.{p0,v,qH,qL,Pbar} and optional tolerances.{index_tol,
// horizon_cap,prob_tol}. '#' starts a comment. Unknown keys are rejected so a
// typo cannot silently fall back to a default.
Scenario parse_scenario(const std::string& text);

// Same contract, starting from an already-split key/value map (used for CLI
// --set overrides).
Scenario scenario_from_kv(const std::map<std::string, std::string>& kv);

std::map<std::string, std::string> parse_kv(const std::string& text);

// Inverse of parse_scenario for default-pool scenarios; floats are written
// with enough digits to round-trip exactly.
std::string serialize_scenario(const Scenario& s);

// Numeric field setter used by sweeps; throws ParseError on unknown keys.
void set_scenario_field(Scenario& s, const std::string& key, double value);

}  // namespace recruit
