#pragma once

#include <cstdint>
#include <string>

#include <boost/rational.hpp>

namespace baire {

using Ratio = boost::rational<std::int64_t>;

inline std::string to_string(const Ratio& r) {
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

Ratio parse_ratio(const std::string& text);

// floor(r) for r >= 0.
inline std::int64_t floor_nonneg(const Ratio& r) { return r.numerator() / r.denominator(); }

}  // namespace baire
