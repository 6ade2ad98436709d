#pragma once

// Vertex groups Z^d x F and finite edge groups given by multiplication tables.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace baire {

class FiniteGroup {
 public:
  using Index = std::uint32_t;
  static constexpr Index identity = 0;

  // The trivial group.
  FiniteGroup();

  // Validates the table exhaustively: square shape, Latin square, index 0 neutral,
  // associativity on all triples. Throws ValidationError on the first violation.
  static FiniteGroup from_table(std::vector<std::vector<Index>> rows);
  static FiniteGroup cyclic(Index n);

  Index order() const noexcept { return order_; }
  Index mul(Index a, Index b) const { return table_[static_cast<std::size_t>(a) * order_ + b]; }
  Index inverse(Index a) const { return inverse_[a]; }

  std::string table_text() const;

  friend bool operator==(const FiniteGroup&, const FiniteGroup&) = default;

 private:
  Index order_;
  std::vector<Index> table_;
  std::vector<Index> inverse_;
};

struct BaseElement {
  std::vector<std::int64_t> vec;
  FiniteGroup::Index fin = 0;

  friend bool operator==(const BaseElement&, const BaseElement&) = default;
};

std::int64_t max_norm(const BaseElement& e);

// The global enumeration order: max-norm of the vector, then lexicographic, then finite index.
bool enumeration_less(const BaseElement& a, const BaseElement& b);

// "(2,-1;1)" ; rank 0 prints "(;1)".
std::string format_base(const BaseElement& e);
BaseElement parse_base(std::string_view text);

class BaseGroup {
 public:
  BaseGroup(std::size_t rank, FiniteGroup finite);

  std::size_t rank() const noexcept { return rank_; }
  const FiniteGroup& finite() const noexcept { return finite_; }
  bool is_infinite() const noexcept { return rank_ > 0; }

  BaseElement identity() const;
  BaseElement mul(const BaseElement& a, const BaseElement& b) const;
  BaseElement inverse(const BaseElement& a) const;
  bool contains(const BaseElement& e) const;
  bool is_torsion(const BaseElement& e) const;

  // Position of e in the global enumeration.
  std::uint64_t index_of(const BaseElement& e) const;

  // Symmetric generating set: +-unit vectors, then every nontrivial finite element.
  std::vector<BaseElement> generators() const;

  class Enumerator {
   public:
    explicit Enumerator(const BaseGroup& group);
    std::optional<BaseElement> next();

   private:
    const BaseGroup* group_;
    std::int64_t radius_ = 0;
    std::vector<std::int64_t> cursor_;
    FiniteGroup::Index fin_ = 0;
    bool done_ = false;
    bool advance_vector();
  };

  Enumerator enumerate() const { return Enumerator(*this); }

  friend bool operator==(const BaseGroup&, const BaseGroup&) = default;

 private:
  std::size_t rank_;
  FiniteGroup finite_;
};

// Checks that images define an injective homomorphism domain -> codomain whose
// image lies in the torsion part. Returns a description of the first violation.
std::optional<std::string> check_embedding(const FiniteGroup& domain, const BaseGroup& codomain,
                                           std::span<const BaseElement> images);
std::optional<std::string> check_embedding(const FiniteGroup& domain, const FiniteGroup& codomain,
                                           std::span<const FiniteGroup::Index> images);

}  // namespace baire
