#include "baire/group.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "baire/errors.hpp"

namespace baire {

namespace {

class Decoder {
 public:
  explicit Decoder(std::string_view text) : text_(text) {}

  GroupElement element() {
    GroupElement g;
    const char c = take();
    if (c == 'b') {
      g.kind = GroupElement::Kind::Base;
      g.base = parse_base(until(')', true));
    } else if (c == 'h') {
      g.kind = GroupElement::Kind::Hnn;
      expect('{');
      g.parts.push_back(element());
      while (peek() == '|') {
        take();
        const char s = take();
        if (s != '+' && s != '-') fail();
        g.tags.push_back(s == '+' ? 1 : -1);
        g.parts.push_back(element());
      }
      expect('}');
    } else if (c == 'a') {
      g.kind = GroupElement::Kind::Amalgam;
      g.sigma = static_cast<std::uint32_t>(number());
      expect('{');
      if (peek() != '}') {
        while (true) {
          const char f = take();
          if (f != '1' && f != '2') fail();
          g.tags.push_back(static_cast<std::int8_t>(f - '0'));
          g.parts.push_back(element());
          if (peek() != '|') break;
          take();
        }
      }
      expect('}');
    } else {
      fail();
    }
    return g;
  }

  bool at_end() const { return pos_ == text_.size(); }

 private:
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  char take() {
    if (pos_ >= text_.size()) fail();
    return text_[pos_++];
  }
  void expect(char c) {
    if (take() != c) fail();
  }
  std::uint64_t number() {
    std::uint64_t v = 0;
    if (!std::isdigit(static_cast<unsigned char>(peek()))) fail();
    while (std::isdigit(static_cast<unsigned char>(peek()))) v = v * 10 + static_cast<std::uint64_t>(take() - '0');
    return v;
  }
  std::string_view until(char c, bool inclusive) {
    const auto end = text_.find(c, pos_);
    if (end == std::string_view::npos) fail();
    const auto stop = inclusive ? end + 1 : end;
    auto out = text_.substr(pos_, stop - pos_);
    pos_ = stop;
    return out;
  }
  [[noreturn]] void fail() const {
    throw ValidationError("malformed encoded group element '" + std::string(text_) + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

void encode_into(const GroupElement& g, std::string& out) {
  switch (g.kind) {
    case GroupElement::Kind::Base:
      out += 'b';
      out += format_base(g.base);
      break;
    case GroupElement::Kind::Hnn:
      out += "h{";
      encode_into(g.parts[0], out);
      for (std::size_t i = 0; i < g.tags.size(); ++i) {
        out += '|';
        out += g.tags[i] > 0 ? '+' : '-';
        encode_into(g.parts[i + 1], out);
      }
      out += '}';
      break;
    case GroupElement::Kind::Amalgam:
      out += 'a';
      out += std::to_string(g.sigma);
      out += '{';
      for (std::size_t i = 0; i < g.tags.size(); ++i) {
        if (i) out += '|';
        out += static_cast<char>('0' + g.tags[i]);
        encode_into(g.parts[i], out);
      }
      out += '}';
      break;
  }
}

void push_unique(std::vector<GroupElement>& out, GroupElement g) {
  if (std::find(out.begin(), out.end(), g) == out.end()) out.push_back(std::move(g));
}

void append(Word& out, const Word& more) { out.insert(out.end(), more.begin(), more.end()); }

}  // namespace

std::string GroupElement::encode() const {
  std::string out;
  encode_into(*this, out);
  return out;
}

GroupElement GroupElement::decode(std::string_view text) {
  Decoder d(text);
  auto g = d.element();
  if (!d.at_end()) throw ValidationError("trailing characters in encoded group element '" + std::string(text) + "'");
  return g;
}

std::string format_word(const Word& word) {
  if (word.empty()) return "1";
  std::string out;
  for (const auto& l : word) {
    if (!out.empty()) out += ' ';
    if (l.kind == Letter::Kind::Vertex) {
      out += 'v' + std::to_string(l.id) + ':' + format_base(l.element);
    } else {
      out += 'e' + std::to_string(l.id);
      if (l.sign < 0) out += "^-1";
    }
  }
  return out;
}

Word parse_word(std::string_view text) {
  Word word;
  std::istringstream in{std::string(text)};
  std::string tok;
  auto parse_id = [&](std::string_view s) -> std::uint32_t {
    if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
      throw ValidationError("malformed letter '" + tok + "'");
    return static_cast<std::uint32_t>(std::stoul(std::string(s)));
  };
  while (in >> tok) {
    if (tok == "1") continue;
    Letter l;
    std::string_view t = tok;
    if (t.front() == 'v') {
      const auto colon = t.find(':');
      if (colon == std::string_view::npos) throw ValidationError("vertex letter '" + tok + "' lacks ':'");
      l.kind = Letter::Kind::Vertex;
      l.id = parse_id(t.substr(1, colon - 1));
      l.element = parse_base(t.substr(colon + 1));
    } else if (t.front() == 'e') {
      l.kind = Letter::Kind::Edge;
      const auto caret = t.find('^');
      l.id = parse_id(t.substr(1, caret == std::string_view::npos ? std::string_view::npos : caret - 1));
      if (caret != std::string_view::npos) {
        const auto exp = t.substr(caret + 1);
        if (exp == "-1") l.sign = -1;
        else if (exp == "1") l.sign = 1;
        else throw ValidationError("edge letter exponent must be 1 or -1 in '" + tok + "'");
      }
    } else {
      throw ValidationError("unknown letter '" + tok + "'");
    }
    word.push_back(std::move(l));
  }
  return word;
}

GroupElement Group::evaluate(const Word& word) const {
  GroupElement r = identity();
  for (const auto& l : word) {
    GroupElement x;
    if (l.kind == Letter::Kind::Vertex) {
      if (!contains_vertex(l.id)) throw ValidationError("vertex v" + std::to_string(l.id) + " is not part of this group");
      x = include_vertex(l.id, l.element);
    } else {
      auto e = edge_element(l.id);
      if (!e) throw ValidationError("edge e" + std::to_string(l.id) + " is not part of this group");
      x = l.sign < 0 ? inverse(*e) : *e;
    }
    r = mul(r, x);
  }
  return r;
}

GroupElement Group::power(const GroupElement& g, std::int64_t n) const {
  const GroupElement step = n < 0 ? inverse(g) : g;
  GroupElement r = identity();
  for (std::int64_t i = 0; i < (n < 0 ? -n : n); ++i) r = mul(r, step);
  return r;
}

std::pair<FiniteGroup::Index, GroupElement> split_right_coset(const Group& group, const FiniteGroup& domain,
                                                              const std::vector<GroupElement>& sub,
                                                              const GroupElement& x) {
  FiniteGroup::Index best_index = 0;
  GroupElement best = group.mul(sub[0], x);
  for (FiniteGroup::Index i = 1; i < sub.size(); ++i) {
    auto candidate = group.mul(sub[i], x);
    if (group.less(candidate, best)) {
      best = std::move(candidate);
      best_index = i;
    }
  }
  return {domain.inverse(best_index), std::move(best)};
}

// ---------------------------------------------------------------------------
// BaseGroupNode

BaseGroupNode::BaseGroupNode(VertexId vertex, BaseGroup group) : vertex_(vertex), group_(std::move(group)) {
  for (auto& g : group_.generators()) generators_.push_back(wrap(g));
}

GroupElement BaseGroupNode::wrap(BaseElement e) {
  GroupElement g;
  g.kind = GroupElement::Kind::Base;
  g.base = std::move(e);
  return g;
}

GroupElement BaseGroupNode::identity() const { return wrap(group_.identity()); }

GroupElement BaseGroupNode::mul(const GroupElement& a, const GroupElement& b) const {
  return wrap(group_.mul(a.base, b.base));
}

GroupElement BaseGroupNode::inverse(const GroupElement& a) const { return wrap(group_.inverse(a.base)); }

bool BaseGroupNode::less(const GroupElement& a, const GroupElement& b) const {
  return enumeration_less(a.base, b.base);
}

GroupElement BaseGroupNode::include_vertex(VertexId v, const BaseElement& x) const {
  if (v != vertex_ || !group_.contains(x))
    throw ValidationError("element " + format_base(x) + " is not in the group of vertex v" + std::to_string(vertex_));
  return wrap(x);
}

Word BaseGroupNode::letters(const GroupElement& g) const {
  if (g.base == group_.identity()) return {};
  Letter l;
  l.kind = Letter::Kind::Vertex;
  l.id = vertex_;
  l.element = g.base;
  return {l};
}

// ---------------------------------------------------------------------------
// HnnGroup

HnnGroup::HnnGroup(EdgeId edge, std::shared_ptr<const Group> base, FiniteGroup sigma,
                   std::vector<GroupElement> sigma_images, std::vector<GroupElement> theta_images)
    : edge_(edge),
      base_(std::move(base)),
      sigma_(std::move(sigma)),
      sigma_images_(std::move(sigma_images)),
      theta_images_(std::move(theta_images)) {
  if (sigma_images_.size() != sigma_.order() || theta_images_.size() != sigma_.order())
    throw InvariantError("HNN step: subgroup image count does not match the edge group order");
  for (const auto& g : base_->generators()) push_unique(generators_, embed_base(g));
  push_unique(generators_, stable_letter());
  push_unique(generators_, inverse(stable_letter()));
}

GroupElement HnnGroup::identity() const { return embed_base(base_->identity()); }

GroupElement HnnGroup::embed_base(const GroupElement& h) const {
  GroupElement g;
  g.kind = GroupElement::Kind::Hnn;
  g.parts.push_back(h);
  return g;
}

GroupElement HnnGroup::stable_letter() const {
  GroupElement g = identity();
  g.tags.push_back(1);
  g.parts.push_back(base_->identity());
  return g;
}

std::pair<GroupElement, GroupElement> HnnGroup::split_base(const GroupElement& g) const {
  GroupElement rep = g;
  rep.parts[0] = base_->identity();
  return {g.parts[0], std::move(rep)};
}

void HnnGroup::rmul_base(GroupElement& nf, const GroupElement& h) const {
  GroupElement carry = h;
  std::size_t pos = nf.tags.size();
  while (pos > 0) {
    if (base_->is_identity(carry)) return;
    const int sign = nf.tags[pos - 1];
    const auto& sub = sign > 0 ? sigma_images_ : theta_images_;
    auto [a, rep] = split_right_coset(*base_, sigma_, sub, base_->mul(nf.parts[pos], carry));
    nf.parts[pos] = std::move(rep);
    // t s = theta(s) t and t^-1 theta(s) = s t^-1.
    carry = sign > 0 ? theta_images_[a] : sigma_images_[a];
    --pos;
  }
  nf.parts[0] = base_->mul(nf.parts[0], carry);
}

void HnnGroup::rmul_stable(GroupElement& nf, int sign) const {
  const std::size_t n = nf.tags.size();
  if (n > 0 && nf.tags[n - 1] == -sign && base_->is_identity(nf.parts[n])) {
    nf.tags.pop_back();
    nf.parts.pop_back();
    return;
  }
  nf.tags.push_back(static_cast<std::int8_t>(sign));
  nf.parts.push_back(base_->identity());
}

GroupElement HnnGroup::mul(const GroupElement& a, const GroupElement& b) const {
  GroupElement r = a;
  rmul_base(r, b.parts[0]);
  for (std::size_t i = 0; i < b.tags.size(); ++i) {
    rmul_stable(r, b.tags[i]);
    rmul_base(r, b.parts[i + 1]);
  }
  return r;
}

GroupElement HnnGroup::inverse(const GroupElement& a) const {
  GroupElement r = identity();
  for (std::size_t i = a.tags.size(); i > 0; --i) {
    rmul_base(r, base_->inverse(a.parts[i]));
    rmul_stable(r, -a.tags[i - 1]);
  }
  rmul_base(r, base_->inverse(a.parts[0]));
  return r;
}

bool HnnGroup::less(const GroupElement& a, const GroupElement& b) const {
  if (a.tags.size() != b.tags.size()) return a.tags.size() < b.tags.size();
  if (!(a.parts[0] == b.parts[0])) return base_->less(a.parts[0], b.parts[0]);
  for (std::size_t i = 0; i < a.tags.size(); ++i) {
    if (a.tags[i] != b.tags[i]) return a.tags[i] < b.tags[i];
    if (!(a.parts[i + 1] == b.parts[i + 1])) return base_->less(a.parts[i + 1], b.parts[i + 1]);
  }
  return false;
}

GroupElement HnnGroup::include_vertex(VertexId v, const BaseElement& x) const {
  return embed_base(base_->include_vertex(v, x));
}

std::optional<GroupElement> HnnGroup::edge_element(EdgeId e) const {
  if (e == edge_) return stable_letter();
  auto inner = base_->edge_element(e);
  if (!inner) return std::nullopt;
  return embed_base(*inner);
}

Word HnnGroup::letters(const GroupElement& g) const {
  Word out = base_->letters(g.parts[0]);
  for (std::size_t i = 0; i < g.tags.size(); ++i) {
    Letter l;
    l.kind = Letter::Kind::Edge;
    l.id = edge_;
    l.sign = g.tags[i];
    out.push_back(l);
    append(out, base_->letters(g.parts[i + 1]));
  }
  return out;
}

// ---------------------------------------------------------------------------
// AmalgamGroup

AmalgamGroup::AmalgamGroup(EdgeId edge, std::shared_ptr<const Group> first, std::shared_ptr<const Group> second,
                           FiniteGroup sigma, std::vector<GroupElement> first_images,
                           std::vector<GroupElement> second_images)
    : edge_(edge),
      first_(std::move(first)),
      second_(std::move(second)),
      sigma_(std::move(sigma)),
      first_images_(std::move(first_images)),
      second_images_(std::move(second_images)) {
  if (first_images_.size() != sigma_.order() || second_images_.size() != sigma_.order())
    throw InvariantError("amalgam step: subgroup image count does not match the edge group order");
  for (const auto& g : first_->generators()) push_unique(generators_, embed_factor(1, g));
  for (const auto& g : second_->generators()) push_unique(generators_, embed_factor(2, g));
}

GroupElement AmalgamGroup::identity() const {
  GroupElement g;
  g.kind = GroupElement::Kind::Amalgam;
  return g;
}

GroupElement AmalgamGroup::embed_sigma(FiniteGroup::Index s) const {
  GroupElement g = identity();
  g.sigma = s;
  return g;
}

GroupElement AmalgamGroup::embed_factor(int i, const GroupElement& h) const {
  GroupElement g = identity();
  rmul_factor(g, i, h);
  return g;
}

void AmalgamGroup::absorb(GroupElement& nf, std::size_t pos, FiniteGroup::Index carry) const {
  while (pos > 0 && carry != FiniteGroup::identity) {
    const int f = nf.tags[pos - 1];
    const Group& g = factor(f);
    auto [a, rep] = split_right_coset(g, sigma_, images(f), g.mul(nf.parts[pos - 1], images(f)[carry]));
    nf.parts[pos - 1] = std::move(rep);
    carry = a;
    --pos;
  }
  if (carry != FiniteGroup::identity) nf.sigma = sigma_.mul(nf.sigma, carry);
}

void AmalgamGroup::rmul_factor(GroupElement& nf, int f, const GroupElement& x) const {
  const Group& g = factor(f);
  const std::size_t n = nf.tags.size();
  if (n > 0 && nf.tags[n - 1] == f) {
    auto [a, rep] = split_right_coset(g, sigma_, images(f), g.mul(nf.parts[n - 1], x));
    if (g.is_identity(rep)) {
      nf.tags.pop_back();
      nf.parts.pop_back();
    } else {
      nf.parts[n - 1] = std::move(rep);
    }
    absorb(nf, n - 1, a);
  } else {
    auto [a, rep] = split_right_coset(g, sigma_, images(f), x);
    absorb(nf, n, a);
    if (!g.is_identity(rep)) {
      nf.tags.push_back(static_cast<std::int8_t>(f));
      nf.parts.push_back(std::move(rep));
    }
  }
}

GroupElement AmalgamGroup::mul(const GroupElement& a, const GroupElement& b) const {
  GroupElement r = a;
  absorb(r, r.tags.size(), b.sigma);
  for (std::size_t i = 0; i < b.tags.size(); ++i) rmul_factor(r, b.tags[i], b.parts[i]);
  return r;
}

GroupElement AmalgamGroup::inverse(const GroupElement& a) const {
  GroupElement r = identity();
  for (std::size_t i = a.tags.size(); i > 0; --i) rmul_factor(r, a.tags[i - 1], factor(a.tags[i - 1]).inverse(a.parts[i - 1]));
  absorb(r, r.tags.size(), sigma_.inverse(a.sigma));
  return r;
}

bool AmalgamGroup::less(const GroupElement& a, const GroupElement& b) const {
  if (a.tags.size() != b.tags.size()) return a.tags.size() < b.tags.size();
  if (a.sigma != b.sigma) return a.sigma < b.sigma;
  for (std::size_t i = 0; i < a.tags.size(); ++i) {
    if (a.tags[i] != b.tags[i]) return a.tags[i] < b.tags[i];
    if (!(a.parts[i] == b.parts[i])) return factor(a.tags[i]).less(a.parts[i], b.parts[i]);
  }
  return false;
}

bool AmalgamGroup::is_infinite() const { return first_->is_infinite() || second_->is_infinite(); }

std::pair<GroupElement, GroupElement> AmalgamGroup::split_factor(int i, const GroupElement& g) const {
  const Group& fi = factor(i);
  GroupElement rep = g;
  rep.sigma = 0;
  GroupElement h = images(i)[g.sigma];
  if (!g.tags.empty() && g.tags[0] == i) {
    h = fi.mul(h, g.parts[0]);
    rep.tags.erase(rep.tags.begin());
    rep.parts.erase(rep.parts.begin());
  }
  return {std::move(h), std::move(rep)};
}

bool AmalgamGroup::contains_vertex(VertexId v) const {
  return first_->contains_vertex(v) || second_->contains_vertex(v);
}

GroupElement AmalgamGroup::include_vertex(VertexId v, const BaseElement& x) const {
  if (first_->contains_vertex(v)) return embed_factor(1, first_->include_vertex(v, x));
  return embed_factor(2, second_->include_vertex(v, x));
}

std::optional<GroupElement> AmalgamGroup::edge_element(EdgeId e) const {
  if (e == edge_) return identity();
  if (auto inner = first_->edge_element(e)) return embed_factor(1, *inner);
  if (auto inner = second_->edge_element(e)) return embed_factor(2, *inner);
  return std::nullopt;
}

Word AmalgamGroup::letters(const GroupElement& g) const {
  Word out;
  if (g.sigma != 0) out = first_->letters(first_images_[g.sigma]);
  for (std::size_t i = 0; i < g.tags.size(); ++i) append(out, factor(g.tags[i]).letters(g.parts[i]));
  return out;
}

// ---------------------------------------------------------------------------
// BallEnumerator

BallEnumerator::BallEnumerator(const Group& group) : group_(&group) {
  elements_.push_back(group.identity());
  lengths_.push_back(0);
  seen_.insert(elements_.back().encode());
}

bool BallEnumerator::grow() {
  const std::size_t begin = frontier_begin_;
  const std::size_t end = elements_.size();
  if (begin == end) return false;
  for (std::size_t k = begin; k < end; ++k) {
    for (const auto& gen : group_->generators()) {
      auto y = group_->mul(elements_[k], gen);
      if (seen_.insert(y.encode()).second) {
        elements_.push_back(std::move(y));
        lengths_.push_back(radius_ + 1);
      }
    }
  }
  frontier_begin_ = end;
  ++radius_;
  return elements_.size() > end;
}

const GroupElement& BallEnumerator::at(std::size_t k) {
  while (k >= elements_.size()) {
    if (!grow()) throw BudgetError("group enumeration exhausted (finite group)");
  }
  return elements_[k];
}

std::size_t BallEnumerator::length_of(std::size_t k) {
  at(k);
  return lengths_[k];
}

std::size_t BallEnumerator::ball_size(std::size_t r) {
  while (radius_ < r && grow()) {
  }
  return static_cast<std::size_t>(std::count_if(lengths_.begin(), lengths_.end(), [&](auto l) { return l <= r; }));
}

}  // namespace baire
