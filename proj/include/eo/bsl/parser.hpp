#pragma once

#include <string_view>
#include <vector>

#include "eo/bsl/ast.hpp"

namespace eo::bsl
{

/// Parses a whole BSL document. Throws LexError or ParseError on the first problem.
Document parse_document(std::string_view source);

/// Parses a condition/SetValue payload. Throws ExprParseError.
ExprPtr parse_expression(std::string_view text);

/// Parses a SetDo payload: one or more brace objects, optionally wrapped in parentheses.
std::vector<SetDoAction> parse_setdo(std::string_view text);

}  // namespace eo::bsl
