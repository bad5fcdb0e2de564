#pragma once

#include <string>
#include <string_view>

#include "srnsens/model/network.hpp"

namespace srn {

/// Parses a model document. Throws ParseError (with line/column) on syntax
/// errors, unknown identifiers and semantically invalid networks.
///
///   species A B;
///   param k = 0.5;
///   init A = 10, B = 0;
///   reaction bind: A + B -> 2 A @ mass_action(k);
///   reaction leak: 0 -> A @ k / (1 + B^2);
ReactionNetwork parse_model(std::string_view text);

/// Renders a network in the model format; parse_model(print_model(n)) is
/// equivalent to n.
std::string print_model(const ReactionNetwork& network);

/// Parses an expression against the identifiers of `network`.
Expr parse_expression(std::string_view text, const ReactionNetwork& network);

/// Parses an output function f(x): species and constants only.
OutputFunction parse_output(std::string_view text, const ReactionNetwork& network);

}  // namespace srn
