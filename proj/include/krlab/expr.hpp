#pragma once

#include <string_view>

namespace krlab {

/// Evaluates a small arithmetic expression: decimal numbers, `pi`,
/// `sqrt(...)`, parentheses, unary minus and + - * /. Lets configs state
/// exact ratios such as "sqrt(3)/4" or "2*pi/49".
/// Throws std::invalid_argument on malformed input.
double evaluate_expression(std::string_view text);

}  // namespace krlab
