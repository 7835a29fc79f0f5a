#pragma once

#include <cstdint>
#include <string_view>

#include "effcost/errors.hpp"

namespace effcost {

using Count = std::uint64_t;

inline Count checked_add(Count a, Count b, std::string_view what = "count") {
  Count r{};
  if (__builtin_add_overflow(a, b, &r)) {
    throw OverflowError(std::string(what) + " overflows 64-bit accumulator");
  }
  return r;
}

inline Count checked_mul(Count a, Count b, std::string_view what = "count") {
  Count r{};
  if (__builtin_mul_overflow(a, b, &r)) {
    throw OverflowError(std::string(what) + " overflows 64-bit accumulator");
  }
  return r;
}

template <typename... Ts>
Count checked_product(Count first, Ts... rest) {
  Count r = first;
  ((r = checked_mul(r, static_cast<Count>(rest))), ...);
  return r;
}

}  // namespace effcost
