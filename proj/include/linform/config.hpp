#pragma once

#include <cstdint>
#include <optional>

namespace linform::config {

// Work cap for brute-force enumeration (inner iterations) and for the
// exhaustive searches. Defaults to 100'000'000; the LINFORM_BUDGET
// environment variable overrides it, and tests may override programmatically
// (a programmatic override wins over the environment).
std::uint64_t enumeration_budget();
void set_enumeration_budget(std::optional<std::uint64_t> value);

// Largest universe size q^n the exhaustive subset/coloring searches accept:
// the largest c with 2^c <= budget/4 (24 at the default budget).
std::uint64_t exhaustive_cell_limit();

}  // namespace linform::config
