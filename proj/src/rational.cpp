#include "baire/rational.hpp"

#include "baire/errors.hpp"

namespace baire {

Ratio parse_ratio(const std::string& text) {
  const auto slash = text.find('/');
  try {
    std::size_t used = 0;
    const auto num = std::stoll(text.substr(0, slash), &used);
    if (used != (slash == std::string::npos ? text.size() : slash)) throw ValidationError("malformed ratio '" + text + "'");
    if (slash == std::string::npos) return Ratio(num);
    const auto den_text = text.substr(slash + 1);
    const auto den = std::stoll(den_text, &used);
    if (used != den_text.size() || den == 0) throw ValidationError("malformed ratio '" + text + "'");
    return Ratio(num, den);
  } catch (const std::logic_error&) {
    throw ValidationError("malformed ratio '" + text + "'");
  }
}

}  // namespace baire
