#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "alp/formula.hpp"

namespace alp {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, std::string found, std::vector<std::string> expected);

  int line() const { return line_; }
  int column() const { return column_; }
  const std::string& found() const { return found_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  int line_;
  int column_;
  std::string found_;
  std::vector<std::string> expected_;
};

// Parses the concrete formula syntax:
//   formula := iff ; iff := imp ("<->" imp)* ; imp := or ("->" imp)? ;
//   or := and ("|" and)* ; and := unary ("&" unary)* ;
//   unary := "~" unary | "A[" ag "," ag "]" unary | "L[" ag "]" unary
//          | "E[" ag "," ag "]" unary | "C[" ag "," ag "]" unary
//          | "K[" ag "," ag "]" unary
//          | "[+" formula "][" ag "," ag "]" unary
//          | "[-" formula "][" ag "," ag "]" unary
//          | "(" formula ")" | prop
// Whitespace-insensitive. "<->" chains associate to the left, "->" to the
// right. A bare A/L/E/C/K identifier not followed by '[' is a proposition.
Formula parse(const std::string& text);

}  // namespace alp
