#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "horolab/graph.hpp"

namespace horolab {

enum class GroupKind { free, free_abelian, heisenberg, free_product };

// Catalog of groups with decidable unique normal forms.
struct GroupSpec {
  GroupKind kind = GroupKind::free_abelian;
  int rank = 1;                        // free / free_abelian
  bool central_generator = false;      // heisenberg: add c^{+-1} to the generating set
  std::vector<GroupSpec> factors;      // free_product

  static GroupSpec free(int rank);
  static GroupSpec free_abelian(int rank);
  static GroupSpec heisenberg(bool central_generator = false);
  static GroupSpec free_product(std::vector<GroupSpec> factors);

  // {"free":k} | {"free_abelian":d} | "heisenberg" | {"heisenberg":{"central_generator":b}}
  // | {"free_product":[...]}
  static GroupSpec from_json(const Json& doc);
  Json to_json() const;

  friend bool operator==(const GroupSpec&, const GroupSpec&) = default;
};

// Reduced word in a free group: adjacent letters use distinct generators,
// exponents are nonzero.
struct FreeLetter {
  int generator = 0;
  std::int64_t exponent = 0;
  friend bool operator==(const FreeLetter&, const FreeLetter&) = default;
};
using FreeWord = std::vector<FreeLetter>;

// Exponent vector of Z^d.
using Exponents = std::vector<std::int64_t>;

// a^p b^q c^r with c = [a,b] = a^-1 b^-1 a b central, so b a = a b c^-1.
struct HeisenbergWord {
  std::int64_t p = 0;
  std::int64_t q = 0;
  std::int64_t r = 0;
  friend bool operator==(const HeisenbergWord&, const HeisenbergWord&) = default;
};

using FactorElement = std::variant<FreeWord, Exponents, HeisenbergWord>;

// Nontrivial element of one factor.
struct Syllable {
  std::size_t factor = 0;
  FactorElement value;
  friend bool operator==(const Syllable&, const Syllable&) = default;
};

// Normal form: alternating nontrivial syllables from distinct factors. Groups
// that are not free products have a single factor, so their elements carry at
// most one syllable. The identity has none.
struct Element {
  std::vector<Syllable> syllables;

  bool is_identity() const { return syllables.empty(); }
  friend bool operator==(const Element&, const Element&) = default;
};

struct Generator {
  std::string name;   // e.g. "a" or "a^-1"
  std::size_t factor = 0;
  Element element;
};

// Compiled group law for a GroupSpec.
//
// Generator names are single letters assigned in factor order: a free or free
// abelian factor of rank k takes k letters, a Heisenberg factor takes three
// (a, b and the central c). The letter e is skipped. Serialized normal forms join syllables with " | ",
// write letters as `x` or `x^k`, and spell the identity `e`.
class Group {
 public:
  explicit Group(GroupSpec spec);

  const GroupSpec& spec() const { return spec_; }
  std::size_t num_factors() const { return factor_specs_.size(); }
  bool is_free_product() const { return spec_.kind == GroupKind::free_product; }
  const GroupSpec& factor_spec(std::size_t factor) const { return factor_specs_.at(factor); }

  Element identity() const { return {}; }
  Element multiply(const Element& x, const Element& y) const;
  Element inverse(const Element& x) const;

  std::string format(const Element& x) const;
  // Throws InputError unless `text` is a well-formed normal form for this group.
  Element parse(std::string_view text) const;

  // Symmetric generating set S: the union of every factor's S_i, in factor
  // order, each generator followed by its inverse.
  const std::vector<Generator>& generators() const { return generators_; }
  std::vector<Generator> factor_generators(std::size_t factor) const;

  // Word length for the default generating set when it has a closed form
  // (free and free abelian factors, and products of those).
  std::optional<std::int64_t> word_length(const Element& x) const;

  // Letter names used by a factor, in generator order.
  const std::vector<std::string>& factor_names(std::size_t factor) const { return names_.at(factor); }

 private:
  FactorElement multiply_factor(std::size_t factor, const FactorElement& x, const FactorElement& y) const;
  FactorElement invert_factor(std::size_t factor, const FactorElement& x) const;
  bool is_trivial(const FactorElement& x) const;
  std::string format_factor(std::size_t factor, const FactorElement& x) const;
  Syllable parse_syllable(std::string_view text) const;

  GroupSpec spec_;
  std::vector<GroupSpec> factor_specs_;
  std::vector<std::vector<std::string>> names_;
  std::vector<Generator> generators_;
};

struct CayleyOptions {
  std::size_t max_vertices = 4'000'000;
};

// Exact ball of Cay(G, S) around the identity.
//
// Vertices are numbered by (word length, normal form text); vertex 0 is the
// identity. Labels are the serialized normal forms.
struct CayleyBall {
  GroupSpec spec;
  Dist radius = 0;
  Graph graph;
  std::vector<Element> elements;
  std::vector<Dist> word_length;

  VertexId basepoint() const { return 0; }
  std::optional<VertexId> find(const Element& x, const Group& group) const;
  std::optional<VertexId> find_label(const std::string& normal_form) const;

  std::unordered_map<std::string, VertexId> index;
};

CayleyBall cayley_ball(const GroupSpec& spec, Dist radius, const CayleyOptions& options = {});

// gH_i intersected with a ball: members in vertex-id order, edges labelled by S_i.
struct CosetSubgraph {
  std::size_t factor_index = 0;
  Element representative;  // shortest element of the coset
  std::vector<VertexId> members;
  std::vector<Edge> edges;
};

// All cosets of H_{factor_index} meeting the ball, ordered by the vertex id of
// their representative.
std::vector<CosetSubgraph> coset_family(const CayleyBall& ball, std::size_t factor_index);

}  // namespace horolab
