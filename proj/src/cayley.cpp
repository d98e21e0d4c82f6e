#include "horolab/cayley.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <numeric>
#include <sstream>

#include "horolab/error.hpp"

namespace horolab {

GroupSpec GroupSpec::free(int rank) {
  if (rank < 1) throw InputError("free group rank must be >= 1");
  GroupSpec s;
  s.kind = GroupKind::free;
  s.rank = rank;
  return s;
}

GroupSpec GroupSpec::free_abelian(int rank) {
  if (rank < 1) throw InputError("free abelian rank must be >= 1");
  GroupSpec s;
  s.kind = GroupKind::free_abelian;
  s.rank = rank;
  return s;
}

GroupSpec GroupSpec::heisenberg(bool central_generator) {
  GroupSpec s;
  s.kind = GroupKind::heisenberg;
  s.rank = 2;
  s.central_generator = central_generator;
  return s;
}

GroupSpec GroupSpec::free_product(std::vector<GroupSpec> factors) {
  if (factors.size() < 2) throw InputError("a free product needs at least 2 factors");
  for (const auto& f : factors) {
    if (f.kind == GroupKind::free_product) {
      throw InputError("nested free products are not supported; list the factors of the inner product directly");
    }
  }
  GroupSpec s;
  s.kind = GroupKind::free_product;
  s.rank = 0;
  s.factors = std::move(factors);
  return s;
}

GroupSpec GroupSpec::from_json(const Json& doc) {
  if (doc.is_string() && doc.get<std::string>() == "heisenberg") return heisenberg();
  if (!doc.is_object() || doc.size() != 1) {
    throw InputError("group spec must be an object with exactly one of free, free_abelian, heisenberg, free_product");
  }
  const auto& [key, value] = *doc.items().begin();
  auto rank_of = [&](const Json& v) {
    if (!v.is_number_integer()) throw InputError("group spec '" + key + "' expects an integer rank");
    return v.get<int>();
  };
  if (key == "free") return free(rank_of(value));
  if (key == "free_abelian") return free_abelian(rank_of(value));
  if (key == "heisenberg") {
    bool central = false;
    if (value.is_boolean()) {
      central = value.get<bool>();
    } else if (value.is_object()) {
      for (const auto& [k, v] : value.items()) {
        if (k != "central_generator" || !v.is_boolean()) {
          throw InputError("heisenberg spec accepts only a boolean 'central_generator'");
        }
        central = v.get<bool>();
      }
    } else if (!value.is_null()) {
      throw InputError("heisenberg spec must be an object");
    }
    return heisenberg(central);
  }
  if (key == "free_product") {
    if (!value.is_array()) throw InputError("free_product expects an array of group specs");
    std::vector<GroupSpec> factors;
    for (const auto& f : value) factors.push_back(from_json(f));
    return free_product(std::move(factors));
  }
  throw InputError("unknown group kind '" + key + "'");
}

Json GroupSpec::to_json() const {
  Json out = Json::object();
  switch (kind) {
    case GroupKind::free:
      out["free"] = rank;
      break;
    case GroupKind::free_abelian:
      out["free_abelian"] = rank;
      break;
    case GroupKind::heisenberg:
      out["heisenberg"] = Json{{"central_generator", central_generator}};
      break;
    case GroupKind::free_product: {
      Json list = Json::array();
      for (const auto& f : factors) list.push_back(f.to_json());
      out["free_product"] = std::move(list);
      break;
    }
  }
  return out;
}

namespace {

FactorElement unit(const GroupSpec& spec, int index, std::int64_t exponent) {
  switch (spec.kind) {
    case GroupKind::free:
      return FreeWord{FreeLetter{index, exponent}};
    case GroupKind::free_abelian: {
      Exponents e(static_cast<std::size_t>(spec.rank), 0);
      e[static_cast<std::size_t>(index)] = exponent;
      return e;
    }
    case GroupKind::heisenberg: {
      HeisenbergWord w;
      (index == 0 ? w.p : index == 1 ? w.q : w.r) = exponent;
      return w;
    }
    case GroupKind::free_product:
      break;
  }
  throw InputError("free product factor cannot be a free product");
}

std::string letter(const std::string& name, std::int64_t exponent) {
  return exponent == 1 ? name : name + "^" + std::to_string(exponent);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Group::Group(GroupSpec spec) : spec_(std::move(spec)) {
  if (spec_.kind == GroupKind::free_product) {
    // Re-run validation for hand-assembled specs.
    spec_ = GroupSpec::free_product(spec_.factors);
    factor_specs_ = spec_.factors;
  } else {
    if (spec_.kind != GroupKind::heisenberg && spec_.rank < 1) throw InputError("group rank must be >= 1");
    factor_specs_ = {spec_};
  }
  char next = 'a';
  for (std::size_t f = 0; f < factor_specs_.size(); ++f) {
    const auto& fs = factor_specs_[f];
    const int letters = fs.kind == GroupKind::heisenberg ? 3 : fs.rank;
    std::vector<std::string> names;
    for (int i = 0; i < letters; ++i) {
      if (next == 'e') ++next;  // reserved for the identity
      if (next > 'z') throw InputError("group needs more than 25 generator letters");
      names.emplace_back(1, next++);
    }
    const int gens = fs.kind == GroupKind::heisenberg ? (fs.central_generator ? 3 : 2) : fs.rank;
    for (int i = 0; i < gens; ++i) {
      for (std::int64_t sign : {std::int64_t{1}, std::int64_t{-1}}) {
        Generator g;
        g.name = letter(names[static_cast<std::size_t>(i)], sign);
        g.factor = f;
        g.element.syllables.push_back(Syllable{f, unit(fs, i, sign)});
        generators_.push_back(std::move(g));
      }
    }
    names_.push_back(std::move(names));
  }
}

std::vector<Generator> Group::factor_generators(std::size_t factor) const {
  std::vector<Generator> out;
  for (const auto& g : generators_) {
    if (g.factor == factor) out.push_back(g);
  }
  return out;
}

bool Group::is_trivial(const FactorElement& x) const {
  return std::visit(
      [](const auto& v) -> bool {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, FreeWord>) {
          return v.empty();
        } else if constexpr (std::is_same_v<T, Exponents>) {
          return std::all_of(v.begin(), v.end(), [](std::int64_t e) { return e == 0; });
        } else {
          return v.p == 0 && v.q == 0 && v.r == 0;
        }
      },
      x);
}

FactorElement Group::multiply_factor(std::size_t factor, const FactorElement& x, const FactorElement& y) const {
  switch (factor_specs_[factor].kind) {
    case GroupKind::free: {
      FreeWord out = std::get<FreeWord>(x);
      for (const FreeLetter& l : std::get<FreeWord>(y)) {
        if (!out.empty() && out.back().generator == l.generator) {
          out.back().exponent += l.exponent;
          if (out.back().exponent == 0) out.pop_back();
        } else {
          out.push_back(l);
        }
      }
      return out;
    }
    case GroupKind::free_abelian: {
      Exponents out = std::get<Exponents>(x);
      const auto& ey = std::get<Exponents>(y);
      for (std::size_t i = 0; i < out.size(); ++i) out[i] += ey[i];
      return out;
    }
    case GroupKind::heisenberg: {
      const auto& a = std::get<HeisenbergWord>(x);
      const auto& b = std::get<HeisenbergWord>(y);
      // b^q a^p' = a^p' b^q c^{-q p'}
      return HeisenbergWord{a.p + b.p, a.q + b.q, a.r + b.r - a.q * b.p};
    }
    case GroupKind::free_product:
      break;
  }
  throw InputError("free product factor cannot be a free product");
}

FactorElement Group::invert_factor(std::size_t factor, const FactorElement& x) const {
  switch (factor_specs_[factor].kind) {
    case GroupKind::free: {
      FreeWord out(std::get<FreeWord>(x).rbegin(), std::get<FreeWord>(x).rend());
      for (auto& l : out) l.exponent = -l.exponent;
      return out;
    }
    case GroupKind::free_abelian: {
      Exponents out = std::get<Exponents>(x);
      for (auto& e : out) e = -e;
      return out;
    }
    case GroupKind::heisenberg: {
      const auto& w = std::get<HeisenbergWord>(x);
      return HeisenbergWord{-w.p, -w.q, -w.r - w.p * w.q};
    }
    case GroupKind::free_product:
      break;
  }
  throw InputError("free product factor cannot be a free product");
}

Element Group::multiply(const Element& x, const Element& y) const {
  Element out = x;
  for (const Syllable& s : y.syllables) {
    if (!out.syllables.empty() && out.syllables.back().factor == s.factor) {
      FactorElement merged = multiply_factor(s.factor, out.syllables.back().value, s.value);
      if (is_trivial(merged)) {
        out.syllables.pop_back();
      } else {
        out.syllables.back().value = std::move(merged);
      }
    } else {
      out.syllables.push_back(s);
    }
  }
  return out;
}

Element Group::inverse(const Element& x) const {
  Element out;
  for (auto it = x.syllables.rbegin(); it != x.syllables.rend(); ++it) {
    out.syllables.push_back(Syllable{it->factor, invert_factor(it->factor, it->value)});
  }
  return out;
}

std::string Group::format_factor(std::size_t factor, const FactorElement& x) const {
  const auto& names = names_[factor];
  std::vector<std::string> parts;
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, FreeWord>) {
          for (const auto& l : v) parts.push_back(letter(names[static_cast<std::size_t>(l.generator)], l.exponent));
        } else if constexpr (std::is_same_v<T, Exponents>) {
          for (std::size_t i = 0; i < v.size(); ++i) {
            if (v[i] != 0) parts.push_back(letter(names[i], v[i]));
          }
        } else {
          const std::int64_t e[] = {v.p, v.q, v.r};
          for (std::size_t i = 0; i < 3; ++i) {
            if (e[i] != 0) parts.push_back(letter(names[i], e[i]));
          }
        }
      },
      x);
  std::string out;
  for (const auto& p : parts) {
    if (!out.empty()) out += ' ';
    out += p;
  }
  return out;
}

std::string Group::format(const Element& x) const {
  if (x.is_identity()) return "e";
  std::string out;
  for (const auto& s : x.syllables) {
    if (!out.empty()) out += " | ";
    out += format_factor(s.factor, s.value);
  }
  return out;
}

Syllable Group::parse_syllable(std::string_view text) const {
  auto fail = [&](const std::string& why) -> Syllable {
    throw InputError("malformed normal form syllable '" + std::string(text) + "': " + why);
  };
  std::istringstream in{std::string(text)};
  std::string token;
  std::optional<std::size_t> factor;
  std::vector<std::pair<int, std::int64_t>> letters;
  while (in >> token) {
    const auto caret = token.find('^');
    const std::string name = token.substr(0, caret);
    std::int64_t exponent = 1;
    if (caret != std::string::npos) {
      const std::string_view digits = std::string_view(token).substr(caret + 1);
      auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), exponent);
      if (ec != std::errc{} || ptr != digits.data() + digits.size() || digits.empty()) fail("bad exponent");
      if (exponent == 0 || exponent == 1) fail("exponent must be omitted for 1 and nonzero");
    }
    std::optional<std::size_t> owner;
    int index = -1;
    for (std::size_t f = 0; f < names_.size() && !owner; ++f) {
      for (std::size_t i = 0; i < names_[f].size(); ++i) {
        if (names_[f][i] == name) {
          owner = f;
          index = static_cast<int>(i);
        }
      }
    }
    if (!owner) fail("unknown generator '" + name + "'");
    if (factor && *factor != *owner) fail("letters from different factors in one syllable");
    factor = owner;
    letters.emplace_back(index, exponent);
  }
  if (!factor) fail("empty syllable");
  const auto& fs = factor_specs_[*factor];
  Syllable s{*factor, {}};
  if (fs.kind == GroupKind::free) {
    FreeWord w;
    for (auto [g, e] : letters) {
      if (!w.empty() && w.back().generator == g) fail("adjacent letters share a generator");
      w.push_back(FreeLetter{g, e});
    }
    s.value = std::move(w);
  } else {
    for (std::size_t i = 1; i < letters.size(); ++i) {
      if (letters[i].first <= letters[i - 1].first) fail("letters out of canonical order");
    }
    if (fs.kind == GroupKind::free_abelian) {
      Exponents e(static_cast<std::size_t>(fs.rank), 0);
      for (auto [g, x] : letters) e[static_cast<std::size_t>(g)] = x;
      s.value = std::move(e);
    } else {
      HeisenbergWord w;
      for (auto [g, x] : letters) (g == 0 ? w.p : g == 1 ? w.q : w.r) = x;
      s.value = w;
    }
  }
  return s;
}

Element Group::parse(std::string_view text) const {
  text = trim(text);
  if (text == "e") return identity();
  Element out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto bar = text.find('|', start);
    const auto piece = trim(text.substr(start, bar == std::string_view::npos ? std::string_view::npos : bar - start));
    Syllable s = parse_syllable(piece);
    if (!out.syllables.empty() && out.syllables.back().factor == s.factor) {
      throw InputError("malformed normal form '" + std::string(text) + "': adjacent syllables from one factor");
    }
    out.syllables.push_back(std::move(s));
    if (bar == std::string_view::npos) break;
    start = bar + 1;
  }
  if (!is_free_product() && out.syllables.size() > 1) {
    throw InputError("malformed normal form '" + std::string(text) + "': '|' only separates free product syllables");
  }
  return out;
}

std::optional<std::int64_t> Group::word_length(const Element& x) const {
  std::int64_t total = 0;
  for (const auto& s : x.syllables) {
    if (const auto* w = std::get_if<FreeWord>(&s.value)) {
      for (const auto& l : *w) total += l.exponent < 0 ? -l.exponent : l.exponent;
    } else if (const auto* e = std::get_if<Exponents>(&s.value)) {
      for (auto v : *e) total += v < 0 ? -v : v;
    } else {
      return std::nullopt;
    }
  }
  return total;
}

std::optional<VertexId> CayleyBall::find(const Element& x, const Group& group) const {
  return find_label(group.format(x));
}

std::optional<VertexId> CayleyBall::find_label(const std::string& normal_form) const {
  if (auto it = index.find(normal_form); it != index.end()) return it->second;
  return std::nullopt;
}

CayleyBall cayley_ball(const GroupSpec& spec, Dist radius, const CayleyOptions& options) {
  if (radius < 1) throw InputError("Cayley ball radius must be >= 1");
  const Group group(spec);
  const auto& gens = group.generators();

  std::vector<Element> elements{group.identity()};
  std::vector<std::string> labels{"e"};
  std::vector<Dist> length{0};
  std::unordered_map<std::string, VertexId> index{{"e", 0}};
  std::vector<Edge> edges;

  for (std::size_t head = 0; head < elements.size(); ++head) {
    for (const auto& s : gens) {
      Element h = group.multiply(elements[head], s.element);
      std::string key = group.format(h);
      auto it = index.find(key);
      if (it == index.end()) {
        if (length[head] >= radius) continue;
        if (elements.size() >= options.max_vertices) {
          // Free-group growth bounds every catalog group with |S| generators.
          long double bound = 1;
          long double sphere = static_cast<long double>(gens.size());
          for (Dist k = 1; k <= radius; ++k) {
            bound += sphere;
            sphere *= static_cast<long double>(gens.size() - 1);
          }
          throw ResourceError("Cayley ball of radius " + std::to_string(radius) + " exceeds the vertex budget of " +
                              std::to_string(options.max_vertices) + " (free-growth bound " +
                              std::to_string(static_cast<unsigned long long>(bound)) + ")");
        }
        const auto id = static_cast<VertexId>(elements.size());
        it = index.emplace(key, id).first;
        elements.push_back(std::move(h));
        labels.push_back(std::move(key));
        length.push_back(length[head] + 1);
      }
      edges.emplace_back(static_cast<VertexId>(head), it->second);
    }
  }

  std::vector<VertexId> order(elements.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](VertexId a, VertexId b) {
    const auto ua = static_cast<std::size_t>(a);
    const auto ub = static_cast<std::size_t>(b);
    return std::tie(length[ua], labels[ua]) < std::tie(length[ub], labels[ub]);
  });
  std::vector<VertexId> renumber(elements.size());
  for (std::size_t i = 0; i < order.size(); ++i) renumber[static_cast<std::size_t>(order[i])] = static_cast<VertexId>(i);

  CayleyBall ball;
  ball.spec = group.spec();
  ball.radius = radius;
  GraphBuilder b(elements.size());
  ball.elements.resize(elements.size());
  ball.word_length.resize(elements.size());
  for (std::size_t old = 0; old < elements.size(); ++old) {
    const auto id = renumber[old];
    b.set_label(id, labels[old]);
    ball.index.emplace(labels[old], id);
    ball.elements[static_cast<std::size_t>(id)] = std::move(elements[old]);
    ball.word_length[static_cast<std::size_t>(id)] = length[old];
  }
  for (auto [u, v] : edges) b.add_edge(renumber[static_cast<std::size_t>(u)], renumber[static_cast<std::size_t>(v)]);
  b.set_metadata("group", group.spec().to_json());
  b.set_metadata("radius", radius);
  Json gen_names = Json::array();
  for (const auto& g : gens) gen_names.push_back(g.name);
  b.set_metadata("generators", std::move(gen_names));
  ball.graph = std::move(b).build();
  return ball;
}

std::vector<CosetSubgraph> coset_family(const CayleyBall& ball, std::size_t factor_index) {
  const Group group(ball.spec);
  if (!group.is_free_product()) throw InputError("coset families require a free product group spec");
  if (factor_index >= group.num_factors()) {
    throw InputError("factor index " + std::to_string(factor_index) + " out of range");
  }
  const auto gens = group.factor_generators(factor_index);

  std::unordered_map<std::string, std::size_t> by_rep;
  std::vector<CosetSubgraph> cosets;
  std::vector<VertexId> rep_vertex;
  for (std::size_t v = 0; v < ball.elements.size(); ++v) {
    Element rep = ball.elements[v];
    if (!rep.syllables.empty() && rep.syllables.back().factor == factor_index) rep.syllables.pop_back();
    std::string key = group.format(rep);
    auto it = by_rep.find(key);
    if (it == by_rep.end()) {
      const auto rep_id = ball.find_label(key);
      if (!rep_id) throw Error("coset representative " + key + " missing from ball");
      it = by_rep.emplace(std::move(key), cosets.size()).first;
      CosetSubgraph c;
      c.factor_index = factor_index;
      c.representative = std::move(rep);
      cosets.push_back(std::move(c));
      rep_vertex.push_back(*rep_id);
    }
    cosets[it->second].members.push_back(static_cast<VertexId>(v));
  }

  for (auto& c : cosets) {
    for (VertexId u : c.members) {
      for (const auto& s : gens) {
        const auto w = ball.find(group.multiply(ball.elements[static_cast<std::size_t>(u)], s.element), group);
        if (w && u < *w) c.edges.emplace_back(u, *w);
      }
    }
    std::sort(c.edges.begin(), c.edges.end());
    c.edges.erase(std::unique(c.edges.begin(), c.edges.end()), c.edges.end());
  }

  std::vector<std::size_t> order(cosets.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return rep_vertex[a] < rep_vertex[b]; });
  std::vector<CosetSubgraph> sorted;
  sorted.reserve(cosets.size());
  for (auto i : order) sorted.push_back(std::move(cosets[i]));
  return sorted;
}

}  // namespace horolab
