#include "baire/base_groups.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

#include "baire/errors.hpp"

namespace baire {

FiniteGroup::FiniteGroup() : order_(1), table_{0}, inverse_{0} {}

FiniteGroup FiniteGroup::from_table(std::vector<std::vector<Index>> rows) {
  const auto n = static_cast<Index>(rows.size());
  if (n == 0) throw ValidationError("multiplication table is empty");
  FiniteGroup g;
  g.order_ = n;
  g.table_.assign(static_cast<std::size_t>(n) * n, 0);
  for (Index a = 0; a < n; ++a) {
    if (rows[a].size() != n) throw ValidationError("multiplication table row " + std::to_string(a) + " has wrong length");
    std::vector<bool> seen(n, false);
    for (Index b = 0; b < n; ++b) {
      const Index c = rows[a][b];
      if (c >= n) throw ValidationError("multiplication table entry out of range at row " + std::to_string(a));
      if (seen[c]) throw ValidationError("multiplication table is not a Latin square (row " + std::to_string(a) + ")");
      seen[c] = true;
      g.table_[static_cast<std::size_t>(a) * n + b] = c;
    }
  }
  for (Index b = 0; b < n; ++b) {
    std::vector<bool> seen(n, false);
    for (Index a = 0; a < n; ++a) {
      const Index c = g.mul(a, b);
      if (seen[c]) throw ValidationError("multiplication table is not a Latin square (column " + std::to_string(b) + ")");
      seen[c] = true;
    }
  }
  for (Index a = 0; a < n; ++a) {
    if (g.mul(0, a) != a || g.mul(a, 0) != a) throw ValidationError("element 0 is not the identity");
  }
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b)
      for (Index c = 0; c < n; ++c)
        if (g.mul(g.mul(a, b), c) != g.mul(a, g.mul(b, c)))
          throw ValidationError("multiplication table is not associative at (" + std::to_string(a) + "," +
                                std::to_string(b) + "," + std::to_string(c) + ")");
  g.inverse_.assign(n, 0);
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b)
      if (g.mul(a, b) == 0) g.inverse_[a] = b;
  return g;
}

FiniteGroup FiniteGroup::cyclic(Index n) {
  std::vector<std::vector<Index>> rows(n, std::vector<Index>(n));
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b) rows[a][b] = (a + b) % n;
  return from_table(std::move(rows));
}

std::string FiniteGroup::table_text() const {
  std::ostringstream out;
  for (Index a = 0; a < order_; ++a) {
    if (a) out << ';';
    for (Index b = 0; b < order_; ++b) {
      if (b) out << ',';
      out << mul(a, b);
    }
  }
  return out.str();
}

std::int64_t max_norm(const BaseElement& e) {
  std::int64_t r = 0;
  for (auto v : e.vec) r = std::max(r, std::abs(v));
  return r;
}

bool enumeration_less(const BaseElement& a, const BaseElement& b) {
  const auto na = max_norm(a), nb = max_norm(b);
  if (na != nb) return na < nb;
  if (a.vec != b.vec) return a.vec < b.vec;
  return a.fin < b.fin;
}

std::string format_base(const BaseElement& e) {
  std::ostringstream out;
  out << '(';
  for (std::size_t i = 0; i < e.vec.size(); ++i) {
    if (i) out << ',';
    out << e.vec[i];
  }
  out << ';' << e.fin << ')';
  return out.str();
}

BaseElement parse_base(std::string_view text) {
  if (text.size() < 3 || text.front() != '(' || text.back() != ')')
    throw ValidationError("malformed group element '" + std::string(text) + "'");
  const auto body = text.substr(1, text.size() - 2);
  const auto semi = body.find(';');
  if (semi == std::string_view::npos) throw ValidationError("group element '" + std::string(text) + "' lacks ';'");
  BaseElement e;
  auto parse_int = [&](std::string_view s) -> std::int64_t {
    std::string tmp(s);
    char* end = nullptr;
    const long long v = std::strtoll(tmp.c_str(), &end, 10);
    if (tmp.empty() || *end != '\0') throw ValidationError("malformed integer '" + tmp + "' in '" + std::string(text) + "'");
    return v;
  };
  auto vec_part = body.substr(0, semi);
  while (!vec_part.empty()) {
    const auto comma = vec_part.find(',');
    e.vec.push_back(parse_int(vec_part.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    vec_part.remove_prefix(comma + 1);
  }
  const auto fin = parse_int(body.substr(semi + 1));
  if (fin < 0) throw ValidationError("negative finite index in '" + std::string(text) + "'");
  e.fin = static_cast<FiniteGroup::Index>(fin);
  return e;
}

BaseGroup::BaseGroup(std::size_t rank, FiniteGroup finite) : rank_(rank), finite_(std::move(finite)) {}

BaseElement BaseGroup::identity() const { return BaseElement{std::vector<std::int64_t>(rank_, 0), 0}; }

bool BaseGroup::contains(const BaseElement& e) const {
  return e.vec.size() == rank_ && e.fin < finite_.order();
}

BaseElement BaseGroup::mul(const BaseElement& a, const BaseElement& b) const {
  if (!contains(a) || !contains(b)) throw InvariantError("mul: element does not belong to this base group");
  BaseElement c;
  c.vec.resize(rank_);
  for (std::size_t i = 0; i < rank_; ++i) c.vec[i] = a.vec[i] + b.vec[i];
  c.fin = finite_.mul(a.fin, b.fin);
  return c;
}

BaseElement BaseGroup::inverse(const BaseElement& a) const {
  if (!contains(a)) throw InvariantError("inverse: element does not belong to this base group");
  BaseElement c;
  c.vec.resize(rank_);
  for (std::size_t i = 0; i < rank_; ++i) c.vec[i] = -a.vec[i];
  c.fin = finite_.inverse(a.fin);
  return c;
}

bool BaseGroup::is_torsion(const BaseElement& e) const {
  return std::all_of(e.vec.begin(), e.vec.end(), [](auto v) { return v == 0; });
}

namespace {

std::uint64_t ipow(std::uint64_t base, std::size_t exp) {
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) r *= base;
  return r;
}

// Number of u in [-bound, bound]^d with u <lex v.
std::uint64_t count_lex_less(const std::vector<std::int64_t>& v, std::int64_t bound) {
  if (bound < 0) return 0;
  const std::size_t d = v.size();
  const auto side = static_cast<std::uint64_t>(2 * bound + 1);
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < d; ++i) {
    const std::int64_t hi = std::min(v[i] - 1, bound);
    if (hi >= -bound) total += static_cast<std::uint64_t>(hi + bound + 1) * ipow(side, d - 1 - i);
    if (v[i] < -bound || v[i] > bound) break;
  }
  return total;
}

}  // namespace

std::uint64_t BaseGroup::index_of(const BaseElement& e) const {
  if (!contains(e)) throw InvariantError("index_of: element does not belong to this base group");
  const std::int64_t r = max_norm(e);
  const std::uint64_t order = finite_.order();
  const std::uint64_t below = r == 0 ? 0 : ipow(static_cast<std::uint64_t>(2 * r - 1), rank_);
  const std::uint64_t shell_rank = count_lex_less(e.vec, r) - count_lex_less(e.vec, r - 1);
  return (below + shell_rank) * order + e.fin;
}

std::vector<BaseElement> BaseGroup::generators() const {
  std::vector<BaseElement> gens;
  for (std::size_t i = 0; i < rank_; ++i) {
    for (std::int64_t s : {1, -1}) {
      auto g = identity();
      g.vec[i] = s;
      gens.push_back(g);
    }
  }
  for (FiniteGroup::Index f = 1; f < finite_.order(); ++f) {
    auto g = identity();
    g.fin = f;
    gens.push_back(g);
  }
  return gens;
}

BaseGroup::Enumerator::Enumerator(const BaseGroup& group) : group_(&group), cursor_(group.rank(), 0) {}

bool BaseGroup::Enumerator::advance_vector() {
  const std::size_t d = cursor_.size();
  if (d == 0) return false;
  while (true) {
    std::size_t i = d;
    while (i > 0 && cursor_[i - 1] == radius_) --i;
    if (i == 0) {
      ++radius_;
      std::fill(cursor_.begin(), cursor_.end(), -radius_);
      return true;
    }
    ++cursor_[i - 1];
    for (std::size_t j = i; j < d; ++j) cursor_[j] = -radius_;
    const bool on_shell = std::any_of(cursor_.begin(), cursor_.end(),
                                      [&](auto v) { return v == radius_ || v == -radius_; });
    if (on_shell) return true;
  }
}

std::optional<BaseElement> BaseGroup::Enumerator::next() {
  if (done_) return std::nullopt;
  BaseElement e{cursor_, fin_};
  if (++fin_ == group_->finite().order()) {
    fin_ = 0;
    if (!advance_vector()) done_ = true;
  }
  return e;
}

std::optional<std::string> check_embedding(const FiniteGroup& domain, const BaseGroup& codomain,
                                           std::span<const BaseElement> images) {
  if (images.size() != domain.order())
    return "expected " + std::to_string(domain.order()) + " images, got " + std::to_string(images.size());
  for (std::size_t a = 0; a < images.size(); ++a) {
    if (!codomain.contains(images[a])) return "image of " + std::to_string(a) + " is not an element of the vertex group";
    if (!codomain.is_torsion(images[a]))
      return "image of " + std::to_string(a) + " " + format_base(images[a]) + " has infinite order";
  }
  for (FiniteGroup::Index a = 0; a < domain.order(); ++a)
    for (FiniteGroup::Index b = 0; b < domain.order(); ++b)
      if (!(images[domain.mul(a, b)] == codomain.mul(images[a], images[b])))
        return "not a homomorphism at pair (" + std::to_string(a) + "," + std::to_string(b) + ")";
  for (std::size_t a = 0; a < images.size(); ++a)
    for (std::size_t b = a + 1; b < images.size(); ++b)
      if (images[a] == images[b]) return "not injective: " + std::to_string(a) + " and " + std::to_string(b) + " collide";
  return std::nullopt;
}

std::optional<std::string> check_embedding(const FiniteGroup& domain, const FiniteGroup& codomain,
                                           std::span<const FiniteGroup::Index> images) {
  std::vector<BaseElement> lifted;
  for (auto i : images) lifted.push_back(BaseElement{{}, i});
  return check_embedding(domain, BaseGroup(0, codomain), lifted);
}

}  // namespace baire
