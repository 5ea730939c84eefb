// Parsing of operator specifications from JSON, shared by the CLI and tests.
//
// Finite-space kinds:
//   {"kind":"matrix","basis":"value"|"coefficient","J":int,"entries":[[re,im],...]}
//   {"kind":"projector","J":int,"subset":[ints]}
//   {"kind":"multiplication","J":int,"values":[[re,im],...]}
//   {"kind":"permutation","J":int,"image":[ints]}
// Circle kinds:
//   {"kind":"convolution","lambda":{"form":"quadratic_phase","tau":x}
//                                 |{"form":"rotation","alpha":x}
//                                 |{"form":"table","offset":int,"values":[[re,im],...]}}
//   {"kind":"multiplication","coeffs":{"k":[re,im],...}}
//   {"kind":"periodic","tau":int,"block":{"entries":[{"row":r,"offset":s,"value":[re,im]},...]}}
//   {"kind":"product","factors":[...]}
#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "munorm/finite.hpp"
#include "munorm/koopman.hpp"
#include "munorm/lattice.hpp"

namespace munorm {

struct ParsedOperator {
  enum class Domain { finite, permutation, torus };
  Domain domain = Domain::finite;
  std::optional<FiniteOperator> finite_op;
  std::optional<Permutation> permutation;
  std::optional<LatticeOperator> lattice_op;
};

/// Throws std::invalid_argument on malformed specs.
ParsedOperator parse_operator_spec(const nlohmann::json& spec);

ParsedOperator parse_operator_file(const std::string& path);
ParsedOperator parse_operator_string(const std::string& text);

}  // namespace munorm
