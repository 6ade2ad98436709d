#pragma once

// Elements and normal forms of the groups met while peeling a graph of groups:
// vertex groups, HNN extensions over a finite subgroup, and amalgams over a finite subgroup.

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "baire/base_groups.hpp"

namespace baire {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;

// A normal form. The meaning of the fields depends on the group that produced it:
//   Base:    `base`.
//   Hnn:     parts[0] is the head h0 in H, parts[i] (i >= 1) is the transversal letter after
//            the stable letter t^tags[i-1].
//   Amalgam: `sigma` indexes the amalgamated subgroup, parts[i] lies in factor tags[i].
struct GroupElement {
  enum class Kind : std::uint8_t { Base, Hnn, Amalgam };

  Kind kind = Kind::Base;
  BaseElement base;
  std::uint32_t sigma = 0;
  std::vector<GroupElement> parts;
  std::vector<std::int8_t> tags;

  std::size_t syllables() const { return tags.size(); }

  // Self-describing text, independent of the owning group.
  std::string encode() const;
  static GroupElement decode(std::string_view text);

  friend bool operator==(const GroupElement&, const GroupElement&) = default;
};

struct Letter {
  enum class Kind : std::uint8_t { Vertex, Edge };

  Kind kind = Kind::Vertex;
  std::uint32_t id = 0;
  BaseElement element;
  int sign = 1;

  friend bool operator==(const Letter&, const Letter&) = default;
};

using Word = std::vector<Letter>;

// Readable words: "v0:(2;1) e1 v1:(0;0) e3^-1"; the empty word prints as "1".
std::string format_word(const Word& word);
Word parse_word(std::string_view text);

class Group {
 public:
  virtual ~Group() = default;

  virtual GroupElement identity() const = 0;
  virtual GroupElement mul(const GroupElement& a, const GroupElement& b) const = 0;
  virtual GroupElement inverse(const GroupElement& a) const = 0;

  // Deterministic total order: syllable count, then componentwise.
  virtual bool less(const GroupElement& a, const GroupElement& b) const = 0;

  virtual bool is_infinite() const = 0;

  // Symmetric finite generating set.
  virtual const std::vector<GroupElement>& generators() const = 0;

  virtual bool contains_vertex(VertexId v) const = 0;
  virtual GroupElement include_vertex(VertexId v, const BaseElement& x) const = 0;

  // The element represented by edge letter e: the stable letter for a peeled non-tree edge,
  // the identity for a tree edge; nullopt if the edge is not part of this group.
  virtual std::optional<GroupElement> edge_element(EdgeId e) const = 0;

  virtual Word letters(const GroupElement& g) const = 0;

  bool is_identity(const GroupElement& g) const { return g == identity(); }
  std::string format(const GroupElement& g) const { return format_word(letters(g)); }

  // Product of the letters; throws ValidationError on letters foreign to this group.
  GroupElement evaluate(const Word& word) const;
  GroupElement power(const GroupElement& g, std::int64_t n) const;
};

// Split x = sub[a] * rep where rep is the least element of the right coset sub * x.
// `sub` lists the subgroup images indexed by the elements of `domain`.
std::pair<FiniteGroup::Index, GroupElement> split_right_coset(const Group& group, const FiniteGroup& domain,
                                                              const std::vector<GroupElement>& sub,
                                                              const GroupElement& x);

class BaseGroupNode final : public Group {
 public:
  BaseGroupNode(VertexId vertex, BaseGroup group);

  const BaseGroup& base() const noexcept { return group_; }
  VertexId vertex() const noexcept { return vertex_; }

  static GroupElement wrap(BaseElement e);

  GroupElement identity() const override;
  GroupElement mul(const GroupElement& a, const GroupElement& b) const override;
  GroupElement inverse(const GroupElement& a) const override;
  bool less(const GroupElement& a, const GroupElement& b) const override;
  bool is_infinite() const override { return group_.is_infinite(); }
  const std::vector<GroupElement>& generators() const override { return generators_; }
  bool contains_vertex(VertexId v) const override { return v == vertex_; }
  GroupElement include_vertex(VertexId v, const BaseElement& x) const override;
  std::optional<GroupElement> edge_element(EdgeId) const override { return std::nullopt; }
  Word letters(const GroupElement& g) const override;

 private:
  VertexId vertex_;
  BaseGroup group_;
  std::vector<GroupElement> generators_;
};

// HNN(H, S, theta) = < H, t | t s t^-1 = theta(s) >, with S finite.
class HnnGroup final : public Group {
 public:
  HnnGroup(EdgeId edge, std::shared_ptr<const Group> base, FiniteGroup sigma,
           std::vector<GroupElement> sigma_images, std::vector<GroupElement> theta_images);

  const Group& base() const noexcept { return *base_; }
  std::shared_ptr<const Group> base_ptr() const noexcept { return base_; }
  const FiniteGroup& sigma() const noexcept { return sigma_; }
  const std::vector<GroupElement>& sigma_images() const noexcept { return sigma_images_; }
  const std::vector<GroupElement>& theta_images() const noexcept { return theta_images_; }
  EdgeId edge() const noexcept { return edge_; }

  GroupElement stable_letter() const;
  GroupElement embed_base(const GroupElement& h) const;

  // g = h * rep with h in H; rep is the canonical representative of the right coset H g.
  std::pair<GroupElement, GroupElement> split_base(const GroupElement& g) const;

  GroupElement identity() const override;
  GroupElement mul(const GroupElement& a, const GroupElement& b) const override;
  GroupElement inverse(const GroupElement& a) const override;
  bool less(const GroupElement& a, const GroupElement& b) const override;
  bool is_infinite() const override { return true; }
  const std::vector<GroupElement>& generators() const override { return generators_; }
  bool contains_vertex(VertexId v) const override { return base_->contains_vertex(v); }
  GroupElement include_vertex(VertexId v, const BaseElement& x) const override;
  std::optional<GroupElement> edge_element(EdgeId e) const override;
  Word letters(const GroupElement& g) const override;

 private:
  void rmul_base(GroupElement& nf, const GroupElement& h) const;
  void rmul_stable(GroupElement& nf, int sign) const;

  EdgeId edge_;
  std::shared_ptr<const Group> base_;
  FiniteGroup sigma_;
  std::vector<GroupElement> sigma_images_;
  std::vector<GroupElement> theta_images_;
  std::vector<GroupElement> generators_;
};

// G1 *_S G2 with S finite; iota_i embeds S into factor i.
class AmalgamGroup final : public Group {
 public:
  AmalgamGroup(EdgeId edge, std::shared_ptr<const Group> first, std::shared_ptr<const Group> second,
               FiniteGroup sigma, std::vector<GroupElement> first_images, std::vector<GroupElement> second_images);

  const Group& factor(int i) const { return i == 1 ? *first_ : *second_; }
  std::shared_ptr<const Group> factor_ptr(int i) const { return i == 1 ? first_ : second_; }
  const FiniteGroup& sigma() const noexcept { return sigma_; }
  const std::vector<GroupElement>& images(int i) const { return i == 1 ? first_images_ : second_images_; }
  EdgeId edge() const noexcept { return edge_; }

  GroupElement embed_factor(int i, const GroupElement& h) const;
  GroupElement embed_sigma(FiniteGroup::Index s) const;

  // g = h * rep with h in factor i; rep is the canonical representative of the right coset G_i g.
  std::pair<GroupElement, GroupElement> split_factor(int i, const GroupElement& g) const;

  GroupElement identity() const override;
  GroupElement mul(const GroupElement& a, const GroupElement& b) const override;
  GroupElement inverse(const GroupElement& a) const override;
  bool less(const GroupElement& a, const GroupElement& b) const override;
  bool is_infinite() const override;
  const std::vector<GroupElement>& generators() const override { return generators_; }
  bool contains_vertex(VertexId v) const override;
  GroupElement include_vertex(VertexId v, const BaseElement& x) const override;
  std::optional<GroupElement> edge_element(EdgeId e) const override;
  Word letters(const GroupElement& g) const override;

 private:
  void rmul_factor(GroupElement& nf, int factor, const GroupElement& x) const;
  void absorb(GroupElement& nf, std::size_t pos, FiniteGroup::Index carry) const;

  EdgeId edge_;
  std::shared_ptr<const Group> first_;
  std::shared_ptr<const Group> second_;
  FiniteGroup sigma_;
  std::vector<GroupElement> first_images_;
  std::vector<GroupElement> second_images_;
  std::vector<GroupElement> generators_;
};

// Coset splitting relative to the distinguished subgroup of one HNN/amalgam step.
class CosetSplitter {
 public:
  virtual ~CosetSplitter() = default;
  // g = h * rep, h in the subgroup, rep canonical.
  virtual std::pair<GroupElement, GroupElement> split(const GroupElement& g) const = 0;
  virtual GroupElement embed(const GroupElement& h) const = 0;
  virtual const Group& subgroup() const = 0;
  virtual const Group& ambient() const = 0;
};

class HnnBaseSplitter final : public CosetSplitter {
 public:
  explicit HnnBaseSplitter(std::shared_ptr<const HnnGroup> group) : group_(std::move(group)) {}
  std::pair<GroupElement, GroupElement> split(const GroupElement& g) const override { return group_->split_base(g); }
  GroupElement embed(const GroupElement& h) const override { return group_->embed_base(h); }
  const Group& subgroup() const override { return group_->base(); }
  const Group& ambient() const override { return *group_; }

 private:
  std::shared_ptr<const HnnGroup> group_;
};

class FactorSplitter final : public CosetSplitter {
 public:
  FactorSplitter(std::shared_ptr<const AmalgamGroup> group, int factor) : group_(std::move(group)), factor_(factor) {}
  std::pair<GroupElement, GroupElement> split(const GroupElement& g) const override {
    return group_->split_factor(factor_, g);
  }
  GroupElement embed(const GroupElement& h) const override { return group_->embed_factor(factor_, h); }
  const Group& subgroup() const override { return group_->factor(factor_); }
  const Group& ambient() const override { return *group_; }

 private:
  std::shared_ptr<const AmalgamGroup> group_;
  int factor_;
};

// Breadth-first enumeration of a group by word length over its generators, deduplicated
// by normal form. Element 0 is the identity.
class BallEnumerator {
 public:
  explicit BallEnumerator(const Group& group);

  const GroupElement& at(std::size_t k);
  // Number of elements of word length <= r.
  std::size_t ball_size(std::size_t r);
  std::size_t length_of(std::size_t k);

 private:
  bool grow();

  const Group* group_;
  std::vector<GroupElement> elements_;
  std::vector<std::size_t> lengths_;
  std::unordered_set<std::string> seen_;
  std::size_t frontier_begin_ = 0;
  std::size_t radius_ = 0;
};

}  // namespace baire
