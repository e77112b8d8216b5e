#pragma once

#include "aim/numcore/ratfun.hpp"

#include <stdexcept>
#include <string>
#include <string_view>

namespace aim::numcore {

enum class ParseMode { plain, eigen };

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Parses a coefficient expression in x (and E in eigen mode).
///
///   expr   := term (("+"|"-") term)*
///   term   := factor (("*"|"/") factor)*
///   factor := ("+"|"-")* base ("^" integer)?
///   base   := number | x | E | i | pi | func "(" expr ")" | "(" expr ")"
///   func   := cos | sin | sqrt | exp        (constant arguments only)
///
/// Decimal literals are exact rationals. Transcendental constants are folded
/// at `bits` of precision.
ParamRatFun parse_expr(std::string_view text, ParseMode mode, unsigned bits = kDefaultPrecision);

}  // namespace aim::numcore
