#include "baire/point.hpp"

#include <cctype>

#include "baire/errors.hpp"

namespace baire {

namespace {

std::string key_of(const PointData& d) {
  std::string key;
  key.push_back(static_cast<char>('0' + static_cast<int>(d.kind)));
  key += std::to_string(d.tag);
  for (auto c : d.children) {
    key.push_back(',');
    key += std::to_string(c);
  }
  if (d.kind == PointData::Kind::Base || d.kind == PointData::Kind::Induced) {
    key.push_back('|');
    key += d.element.encode();
  }
  return key;
}

// End (exclusive) of a group element encoding starting at pos.
std::size_t encoding_end(std::string_view text, std::size_t pos) {
  if (pos >= text.size()) throw ValidationError("truncated point text");
  if (text[pos] == 'b') {
    const auto close = text.find(')', pos);
    if (close == std::string_view::npos) throw ValidationError("unterminated element in point text");
    return close + 1;
  }
  const auto open = text.find('{', pos);
  if (open == std::string_view::npos) throw ValidationError("malformed element in point text");
  int depth = 0;
  for (std::size_t i = open; i < text.size(); ++i) {
    if (text[i] == '{') ++depth;
    if (text[i] == '}' && --depth == 0) return i + 1;
  }
  throw ValidationError("unbalanced element in point text");
}

std::uint32_t read_number(std::string_view text, std::size_t& pos) {
  const auto start = pos;
  while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
  if (pos == start) throw ValidationError("expected a number in point text at offset " + std::to_string(start));
  return static_cast<std::uint32_t>(std::stoul(std::string(text.substr(start, pos - start))));
}

void expect(std::string_view text, std::size_t& pos, char c) {
  if (pos >= text.size() || text[pos] != c)
    throw ValidationError(std::string("expected '") + c + "' in point text at offset " + std::to_string(pos));
  ++pos;
}

}  // namespace

PointId PointTable::intern(PointData data) {
  auto key = key_of(data);
  auto it = index_.find(key);
  if (it != index_.end()) return it->second;
  const auto id = static_cast<PointId>(data_.size());
  data_.push_back(std::move(data));
  index_.emplace(std::move(key), id);
  return id;
}

PointId PointTable::base(std::uint32_t vertex, const BaseElement& e) {
  return intern({PointData::Kind::Base, vertex, {}, BaseGroupNode::wrap(e)});
}

PointId PointTable::induced(std::uint32_t step, PointId y, const GroupElement& rep) {
  return intern({PointData::Kind::Induced, step, {y}, rep});
}

PointId PointTable::copy(std::uint32_t n, PointId y) { return intern({PointData::Kind::Copy, n, {y}, {}}); }

PointId PointTable::tuple(const std::vector<PointId>& entries) {
  return intern({PointData::Kind::Tuple, 0, entries, {}});
}

PointId PointTable::side(std::uint32_t tag, PointId y) { return intern({PointData::Kind::Side, tag, {y}, {}}); }

std::string PointTable::text(PointId id) const {
  const auto& d = at(id);
  switch (d.kind) {
    case PointData::Kind::Base:
      return "B" + std::to_string(d.tag) + format_base(d.element.base);
    case PointData::Kind::Induced:
      return "I" + std::to_string(d.tag) + "[" + text(d.children[0]) + "]" + d.element.encode();
    case PointData::Kind::Copy:
      return "C" + std::to_string(d.tag) + "[" + text(d.children[0]) + "]";
    case PointData::Kind::Side:
      return "S" + std::to_string(d.tag) + "[" + text(d.children[0]) + "]";
    case PointData::Kind::Tuple: {
      std::string out = "T[";
      for (std::size_t i = 0; i < d.children.size(); ++i) {
        if (i) out.push_back(',');
        out += text(d.children[i]);
      }
      return out + "]";
    }
  }
  return {};
}

PointId PointTable::parse(std::string_view text) {
  std::size_t pos = 0;
  const auto id = parse_at(text, pos);
  if (pos != text.size()) throw ValidationError("trailing characters in point text '" + std::string(text) + "'");
  return id;
}

PointId PointTable::parse_at(std::string_view text, std::size_t& pos) {
  if (pos >= text.size()) throw ValidationError("truncated point text");
  const char head = text[pos++];
  switch (head) {
    case 'B': {
      const auto v = read_number(text, pos);
      const auto close = text.find(')', pos);
      if (close == std::string_view::npos) throw ValidationError("unterminated base point");
      const auto e = parse_base(text.substr(pos, close + 1 - pos));
      pos = close + 1;
      return base(v, e);
    }
    case 'I': {
      const auto step = read_number(text, pos);
      expect(text, pos, '[');
      const auto y = parse_at(text, pos);
      expect(text, pos, ']');
      const auto end = encoding_end(text, pos);
      const auto rep = GroupElement::decode(text.substr(pos, end - pos));
      pos = end;
      return induced(step, y, rep);
    }
    case 'C':
    case 'S': {
      const auto tag = read_number(text, pos);
      expect(text, pos, '[');
      const auto y = parse_at(text, pos);
      expect(text, pos, ']');
      return head == 'C' ? copy(tag, y) : side(tag, y);
    }
    case 'T': {
      expect(text, pos, '[');
      std::vector<PointId> entries;
      while (true) {
        entries.push_back(parse_at(text, pos));
        if (pos < text.size() && text[pos] == ',') {
          ++pos;
          continue;
        }
        break;
      }
      expect(text, pos, ']');
      return tuple(entries);
    }
    default:
      throw ValidationError(std::string("unknown point kind '") + head + "'");
  }
}

}  // namespace baire
