#pragma once

#include <cstddef>
#include <cstdint>

namespace burnside {

// Resource budgets shared by every enumeration in the library. A hit budget
// never raises by itself; each enumerator reports completeness and returns
// whatever partial structure it built.
struct Limits {
  std::size_t max_elements = 200000;  // interned elements per closure
  std::uint64_t max_steps = 10000000;  // products across one enumeration
  std::uint64_t cap_powers = 1000000;  // power-sequence length per element
};

}  // namespace burnside
