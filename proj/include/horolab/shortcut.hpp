#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "horolab/graph.hpp"
#include "horolab/metric.hpp"
#include "horolab/rational.hpp"

namespace horolab {

// Inclusive grid lo, lo + step, ..., <= hi. Empty when lo > hi.
struct LambdaRange {
  Rational lo{1};
  Rational hi{1};
  Rational step{1, 4};

  static LambdaRange single(const Rational& lambda) { return {lambda, lambda, Rational(1, 4)}; }
  std::vector<Rational> grid() const;
  bool empty() const { return hi < lo; }
};

struct ShortcutQuery {
  std::size_t n = 3;  // cycle length
  Rational K{2};
  LambdaRange lambda;
  // Allowed images; empty means every vertex of the target.
  std::vector<VertexId> restriction;
  // Candidates for f(0), e.g. one vertex per automorphism orbit; empty means
  // every allowed image.
  std::vector<VertexId> first_images;
  std::uint64_t node_cap = 20'000'000;  // per lambda cell
};

enum class SearchStatus { found, none, unknown, not_searched };
std::string to_string(SearchStatus s);

// f(0..n-1) with (lambda/K) d_C(i,j) <= d(f(i), f(j)) <= K lambda d_C(i,j).
struct CycleEmbedding {
  std::vector<VertexId> images;
  Rational lambda;
  Rational K_achieved;  // max over pairs of the two-sided distortion
};

struct LambdaCell {
  Rational lambda;
  SearchStatus status = SearchStatus::not_searched;
  std::optional<CycleEmbedding> witness;
  std::uint64_t nodes = 0;
  double seconds = 0;
};

struct CycleSearchResult {
  SearchStatus status = SearchStatus::not_searched;
  std::optional<CycleEmbedding> witness;  // at the smallest lambda found
  std::vector<LambdaCell> cells;          // ascending lambda
  std::uint64_t nodes = 0;
  bool exhaustive = false;                // every cell completed below the cap
};

// d(i, j) on the n-cycle.
Dist cycle_distance(std::size_t n, std::size_t i, std::size_t j);

// Recomputes the distortion of `images` for all n^2 pairs; nullopt unless it
// is a K-bilipschitz embedding at scale lambda.
std::optional<Rational> embedding_distortion(const DistanceMatrix& d, const std::vector<VertexId>& images,
                                             const Rational& lambda, const Rational& K);

// Backtracking over f(0), f(1), ... with candidates bracketed by their
// distance to f(0). Throws InputError when the target is disconnected or the
// query is malformed (n < 3, K < 1, step <= 0).
LambdaCell search_cycle_embedding(const Graph& target, const DistanceMatrix& d, const ShortcutQuery& q,
                                  const Rational& lambda);

CycleSearchResult bilipschitz_cycle_search(const Graph& target, const DistanceMatrix& d, const ShortcutQuery& q,
                                           unsigned threads = 1);
CycleSearchResult bilipschitz_cycle_search(const Graph& target, const ShortcutQuery& q, unsigned threads = 1);

struct ShortcutRow {
  std::size_t n = 0;
  Rational K;
  SearchStatus status = SearchStatus::not_searched;
  std::optional<Rational> best_lambda;  // largest lambda with a witness
  std::uint64_t nodes = 0;
  bool exhaustive = false;
  CycleSearchResult search;
};

struct ShortcutProfile {
  std::vector<ShortcutRow> rows;
};

ShortcutProfile shortcut_profile(const Graph& target, const DistanceMatrix& d, const Rational& K,
                                 const std::vector<std::size_t>& n_list, const LambdaRange& lambda_range,
                                 std::uint64_t node_cap = 20'000'000, unsigned threads = 1);

// One line per (n, lambda) cell: n,K,lambda,status,nodes,seconds.
std::string profile_to_csv(const ShortcutProfile& profile);
Json profile_to_json(const ShortcutProfile& profile);

}  // namespace horolab
