#pragma once

// Internal helpers shared by the table/set loaders. Not installed.

#include <string>
#include <utility>

#include "linform/field.hpp"

namespace linform::detail {

// First line of every table/set file: "n=<int> q=<field>" (the field part may
// also be a full "p=..,m=..,modulus=.." spec).
std::pair<int, Field> parse_domain_header(const std::string& line);

}  // namespace linform::detail
