#pragma once

#include <memory>
#include <string>

#include "warped/scalar_function.hpp"

namespace warped {

// Parses an arithmetic expression in one free variable into a profile
// function. Grammar: + - * / ^ (right-associative), unary minus, parentheses,
// sqrt/exp/ln/log/arctan/atan, constants pi and e, decimal literals. Any
// other identifier names the free variable; using two distinct names is an
// error. Derivatives are produced by evaluating the tree on univariate jets.
FuncPtr parse_expression(const std::string& text);

// Constant profile as a FuncPtr, handy for defaults.
FuncPtr constant_function(double v);

}  // namespace warped
