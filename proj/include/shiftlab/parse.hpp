#pragma once

#include <stdexcept>
#include <string>

#include "shiftlab/syntax.hpp"

// Concrete syntax:
//
//   t ::= x | \x. t | t t | S x. t | < t >
//
// Application is left-associative; lambda and shift bodies extend as far
// right as possible; parentheses group. Identifiers start with an ASCII
// letter and continue with alphanumerics, underscores, or primes.

namespace shiftlab {

struct ParseError : std::runtime_error {
  int line;
  int column;
  ParseError(const std::string& msg, int line, int column);
};

TermPtr parse(const std::string& text);

std::string print(const TermPtr& t);
std::string print(const PureCtxPtr& e);
std::string print(const EvalCtxPtr& f);

}  // namespace shiftlab
