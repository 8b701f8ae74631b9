#pragma once

#include <string>
#include <vector>

#include "eo/bsl/ast.hpp"

namespace eo::bsl
{

std::string print_expression(const Expr & expr);
std::string print_setdo(const std::vector<SetDoAction> & actions);

/// Canonical BSL text; parse_document(pretty_print(d)) == d.
std::string pretty_print(const Document & doc);

}  // namespace eo::bsl
