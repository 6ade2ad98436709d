#pragma once

// Hereditarily structured points, interned to dense integer ids.

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "baire/group.hpp"

namespace baire {

using PointId = std::uint32_t;

struct PointData {
  enum class Kind : std::uint8_t { Base, Induced, Copy, Tuple, Side };

  Kind kind = Kind::Base;
  // Base: vertex id; Induced: step id; Copy: copy index; Side: 1 or 2; Tuple: unused.
  std::uint32_t tag = 0;
  std::vector<PointId> children;
  // Base: the group element; Induced: the canonical coset representative.
  GroupElement element;
};

// Append-only registry. Text forms:
//   B<v>(..;..)   I<step>[<y>]<rep>   C<n>[<y>]   T[<a>,<b>,...]   S<tag>[<y>]
class PointTable {
 public:
  PointId base(std::uint32_t vertex, const BaseElement& e);
  PointId induced(std::uint32_t step, PointId y, const GroupElement& rep);
  PointId copy(std::uint32_t n, PointId y);
  PointId tuple(const std::vector<PointId>& entries);
  PointId side(std::uint32_t tag, PointId y);

  const PointData& at(PointId id) const { return data_.at(id); }
  std::size_t size() const noexcept { return data_.size(); }

  std::string text(PointId id) const;
  // Interns every point along the way; throws ValidationError on malformed text.
  PointId parse(std::string_view text);

 private:
  PointId intern(PointData data);
  PointId parse_at(std::string_view text, std::size_t& pos);

  std::vector<PointData> data_;
  std::unordered_map<std::string, PointId> index_;
};

}  // namespace baire
