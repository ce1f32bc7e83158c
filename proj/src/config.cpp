#include "linform/config.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace linform::config {

namespace {

constexpr std::uint64_t kDefaultBudget = 100'000'000;

// 0 means "no programmatic override".
std::atomic<std::uint64_t> g_override{0};

std::uint64_t env_budget() {
  const char* s = std::getenv("LINFORM_BUDGET");
  if (s == nullptr || *s == '\0') return kDefaultBudget;
  char* end = nullptr;
  unsigned long long v = std::strtoull(s, &end, 10);
  if (end == s || *end != '\0' || v == 0) return kDefaultBudget;
  return static_cast<std::uint64_t>(v);
}

}  // namespace

std::uint64_t enumeration_budget() {
  std::uint64_t o = g_override.load(std::memory_order_relaxed);
  if (o != 0) return o;
  return env_budget();
}

void set_enumeration_budget(std::optional<std::uint64_t> value) {
  g_override.store(value.value_or(0), std::memory_order_relaxed);
}

std::uint64_t exhaustive_cell_limit() {
  std::uint64_t b = enumeration_budget() / 4;
  std::uint64_t c = 0;
  while (c < 62 && (std::uint64_t{1} << (c + 1)) <= b) ++c;
  return c;
}

}  // namespace linform::config
