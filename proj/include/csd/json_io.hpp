#pragma once

#include <functional>
#include <string>

#include <nlohmann/json.hpp>

#include "csd/distfam.hpp"
#include "csd/seqcore.hpp"

namespace csd::io {

using json = nlohmann::ordered_json;

// {"kind": "explicit", "values": [...]} or
// {"kind": "builtin", "name": "poisson|su2|su11", "params": {...}}.
seqcore::FactorialSequence sequence_from_json(const json& spec, int n_max_default = 256);

struct FamilySpec {
    distfam::DiscreteFamily family;
    distfam::PriorMeasure prior;
};

// {"family": "poisson"|"binomial"|"negbinomial"|"nonlinear",
//  "params": {...}, "prior": {"kind": "uniform"|"canonical"|"density-expr"|"table", ...}}
// A missing prior falls back to the family's canonical one.
FamilySpec family_from_json(const json& spec, int n_max_override = 0);

// Arithmetic in the single variable `lambda`: numbers, + - * / ^,
// parentheses, and exp/log/sqrt.
std::function<double(double)> parse_density_expr(const std::string& expr);

json load_json_file(const std::string& path);

}  // namespace csd::io
