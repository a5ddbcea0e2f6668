#pragma once

// JSON forms of the core types. Malformed documents and missing or mistyped
// fields raise ParseError; well-formed documents describing invalid objects
// raise the constructors' ArgumentError.

#include <string>

#include <json.hpp>

#include "mdnet/bell_functionals.hpp"
#include "mdnet/causal_graphs.hpp"
#include "mdnet/cone.hpp"
#include "mdnet/probtab.hpp"

namespace mdnet {

using Json = nlohmann::ordered_json;

Json parse_json(const std::string& text);
Json read_json_file(const std::string& path);

// {"variables":[{"name":"X","cardinality":2},...],"probabilities":[...]}
Distribution distribution_from_json(const Json& j);
Json to_json(const Distribution& d);

// {"nodes":[{"name":"X","latent":false},...],"edges":[["Lambda","A"],...]}
Dag dag_from_json(const Json& j);
Json to_json(const Dag& dag);

// {"inputs":[...],"outputs":[...],"table":[...],"input_distribution":[...],
//  "parties":[{"inputs":[0],"outputs":[0]},...]}; the last two are optional.
Behavior behavior_from_json(const Json& j);
Json to_json(const Behavior& b);

// [{"coeffs":{"X,Y":"-1","t":"1"},"rel":">=","rhs":"0"},...]
Cone cone_from_json(const Json& j, const EntropySpace& space);
Json to_json(const Cone& cone);

/// Compact single-line dump with a trailing newline.
std::string dump(const Json& j);

} // namespace mdnet
