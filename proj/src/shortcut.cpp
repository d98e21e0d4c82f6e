#include "horolab/shortcut.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <sstream>
#include <thread>

#include "horolab/error.hpp"

namespace horolab {

namespace {

// lambda = p/q, K = a/b; all positive.
struct Bracket {
  std::int64_t p, q, a, b;

  Bracket(const Rational& lambda, const Rational& K) : p(lambda.num()), q(lambda.den()), a(K.num()), b(K.den()) {}

  bool admits(Dist d, Dist dc) const {
    return p * b * dc <= static_cast<std::int64_t>(d) * q * a && static_cast<std::int64_t>(d) * b * q <= a * p * dc;
  }
  std::int64_t lowest(Dist dc) const {
    const std::int64_t num = p * b * dc, den = q * a;
    return (num + den - 1) / den;
  }
  std::int64_t highest(Dist dc) const { return (a * p * dc) / (b * q); }
};

void check_query(const Graph& target, const ShortcutQuery& q) {
  if (q.n < 3) throw InputError("shortcut query: cycle length must be >= 3");
  if (q.K < Rational(1)) throw InputError("shortcut query: K must be >= 1");
  if (q.lambda.step <= Rational(0)) throw InputError("shortcut query: lambda step must be positive");
  if (q.lambda.lo <= Rational(0) && !q.lambda.empty()) throw InputError("shortcut query: lambda must be positive");
  if (!is_connected(target)) throw InputError("shortcut query: target must be connected");
  for (VertexId v : q.restriction) target.check_vertex(v);
  for (VertexId v : q.first_images) target.check_vertex(v);
}

class Backtracker {
 public:
  Backtracker(const DistanceMatrix& d, const ShortcutQuery& q, const Rational& lambda, std::vector<VertexId> allowed)
      : d_(d), q_(q), bracket_(lambda, q.K), allowed_(std::move(allowed)), images_(q.n) {}

  SearchStatus run(const std::vector<VertexId>& first_images) {
    for (VertexId f0 : first_images) {
      images_[0] = f0;
      if (++nodes_ > q_.node_cap) return SearchStatus::unknown;
      buckets_.clear();
      for (VertexId v : allowed_) {
        const auto dist = static_cast<std::size_t>(d_(f0, v));
        if (buckets_.size() <= dist) buckets_.resize(dist + 1);
        buckets_[dist].push_back(v);
      }
      const SearchStatus s = extend(1);
      if (s != SearchStatus::none) return s;
    }
    return SearchStatus::none;
  }

  const std::vector<VertexId>& images() const { return images_; }
  std::uint64_t nodes() const { return nodes_; }

 private:
  SearchStatus extend(std::size_t i) {
    if (i == q_.n) return SearchStatus::found;
    const Dist dc0 = cycle_distance(q_.n, 0, i);
    const std::int64_t lo = bracket_.lowest(dc0);
    const std::int64_t hi = std::min<std::int64_t>(bracket_.highest(dc0), static_cast<std::int64_t>(buckets_.size()) - 1);
    for (std::int64_t dist = lo; dist <= hi; ++dist) {
      for (VertexId v : buckets_[static_cast<std::size_t>(dist)]) {
        bool ok = true;
        for (std::size_t j = 1; j < i && ok; ++j) ok = bracket_.admits(d_(images_[j], v), cycle_distance(q_.n, j, i));
        if (!ok) continue;
        images_[i] = v;
        if (++nodes_ > q_.node_cap) return SearchStatus::unknown;
        const SearchStatus s = extend(i + 1);
        if (s != SearchStatus::none) return s;
      }
    }
    return SearchStatus::none;
  }

  const DistanceMatrix& d_;
  const ShortcutQuery& q_;
  Bracket bracket_;
  std::vector<VertexId> allowed_;
  std::vector<VertexId> images_;
  std::vector<std::vector<VertexId>> buckets_;
  std::uint64_t nodes_ = 0;
};

std::vector<VertexId> sorted_unique(std::vector<VertexId> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

std::string to_string(SearchStatus s) {
  switch (s) {
    case SearchStatus::found: return "found";
    case SearchStatus::none: return "none";
    case SearchStatus::unknown: return "unknown";
    case SearchStatus::not_searched: return "not searched";
  }
  return "?";
}

std::vector<Rational> LambdaRange::grid() const {
  std::vector<Rational> out;
  if (step <= Rational(0)) throw InputError("lambda range: step must be positive");
  for (Rational x = lo; x <= hi; x = x + step) out.push_back(x);
  return out;
}

Dist cycle_distance(std::size_t n, std::size_t i, std::size_t j) {
  const std::size_t diff = i > j ? i - j : j - i;
  return static_cast<Dist>(std::min(diff, n - diff));
}

std::optional<Rational> embedding_distortion(const DistanceMatrix& d, const std::vector<VertexId>& images,
                                             const Rational& lambda, const Rational& K) {
  const std::size_t n = images.size();
  const Bracket bracket(lambda, K);
  Rational worst(1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const Dist dc = cycle_distance(n, i, j);
      const Dist dv = d(images[i], images[j]);
      if (dv == kUnreachable || !bracket.admits(dv, dc)) return std::nullopt;
      const Rational scaled = lambda * Rational(dc);
      const Rational ratio = Rational(dv) / scaled;
      worst = std::max({worst, ratio, Rational(1) / ratio});
    }
  }
  return worst;
}

LambdaCell search_cycle_embedding(const Graph& target, const DistanceMatrix& d, const ShortcutQuery& q,
                                  const Rational& lambda) {
  check_query(target, q);
  if (lambda <= Rational(0)) throw InputError("shortcut query: lambda must be positive");
  const auto start = std::chrono::steady_clock::now();

  std::vector<VertexId> allowed;
  if (q.restriction.empty()) {
    for (std::size_t v = 0; v < target.num_vertices(); ++v) allowed.push_back(static_cast<VertexId>(v));
  } else {
    allowed = sorted_unique(q.restriction);
  }
  const std::vector<VertexId> first = q.first_images.empty() ? allowed : sorted_unique(q.first_images);

  Backtracker bt(d, q, lambda, allowed);
  LambdaCell cell;
  cell.lambda = lambda;
  cell.status = bt.run(first);
  cell.nodes = bt.nodes();
  if (cell.status == SearchStatus::found) {
    const auto k = embedding_distortion(d, bt.images(), lambda, q.K);
    if (!k) throw Error("shortcut search produced an embedding that fails re-verification");
    cell.witness = CycleEmbedding{bt.images(), lambda, *k};
  }
  cell.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return cell;
}

CycleSearchResult bilipschitz_cycle_search(const Graph& target, const DistanceMatrix& d, const ShortcutQuery& q,
                                           unsigned threads) {
  check_query(target, q);
  CycleSearchResult result;
  const auto grid = q.lambda.grid();
  result.cells.resize(grid.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < grid.size(); i = next++) result.cells[i] = search_cycle_embedding(target, d, q, grid[i]);
  };
  {
    std::vector<std::jthread> workers;
    for (unsigned t = 1; t < std::max(1u, threads); ++t) workers.emplace_back(work);
    work();
  }

  if (grid.empty()) return result;
  bool any_unknown = false;
  for (const auto& cell : result.cells) {
    result.nodes += cell.nodes;
    if (cell.status == SearchStatus::found && !result.witness) result.witness = cell.witness;
    any_unknown = any_unknown || cell.status == SearchStatus::unknown;
  }
  result.exhaustive = !any_unknown;
  result.status = result.witness ? SearchStatus::found : any_unknown ? SearchStatus::unknown : SearchStatus::none;
  return result;
}

CycleSearchResult bilipschitz_cycle_search(const Graph& target, const ShortcutQuery& q, unsigned threads) {
  if (!is_connected(target)) throw InputError("shortcut query: target must be connected");
  return bilipschitz_cycle_search(target, DistanceMatrix(target, threads), q, threads);
}

ShortcutProfile shortcut_profile(const Graph& target, const DistanceMatrix& d, const Rational& K,
                                 const std::vector<std::size_t>& n_list, const LambdaRange& lambda_range,
                                 std::uint64_t node_cap, unsigned threads) {
  ShortcutProfile profile;
  for (std::size_t n : n_list) {
    ShortcutQuery q;
    q.n = n;
    q.K = K;
    q.lambda = lambda_range;
    q.node_cap = node_cap;
    ShortcutRow row;
    row.n = n;
    row.K = K;
    row.search = bilipschitz_cycle_search(target, d, q, threads);
    row.status = row.search.status;
    row.nodes = row.search.nodes;
    row.exhaustive = row.search.exhaustive;
    for (const auto& cell : row.search.cells) {
      if (cell.status == SearchStatus::found) row.best_lambda = cell.lambda;
    }
    profile.rows.push_back(std::move(row));
  }
  return profile;
}

std::string profile_to_csv(const ShortcutProfile& profile) {
  std::ostringstream out;
  out << "n,K,lambda,status,nodes,seconds\n";
  for (const auto& row : profile.rows) {
    if (row.search.cells.empty()) {
      out << row.n << ',' << row.K.to_string() << ",," << to_string(row.status) << ",0,0\n";
    }
    for (const auto& cell : row.search.cells) {
      out << row.n << ',' << row.K.to_string() << ',' << cell.lambda.to_string() << ',' << to_string(cell.status) << ','
          << cell.nodes << ',' << cell.seconds << '\n';
    }
  }
  return out.str();
}

Json profile_to_json(const ShortcutProfile& profile) {
  Json rows = Json::array();
  for (const auto& row : profile.rows) {
    Json cells = Json::array();
    for (const auto& cell : row.search.cells) {
      Json c{{"lambda", cell.lambda.to_string()}, {"status", to_string(cell.status)}, {"nodes", cell.nodes}};
      if (cell.witness) {
        c["witness"] = Json{{"images", cell.witness->images}, {"K_achieved", cell.witness->K_achieved.to_string()}};
      }
      cells.push_back(std::move(c));
    }
    rows.push_back(Json{{"n", row.n},
                        {"K", row.K.to_string()},
                        {"status", to_string(row.status)},
                        {"best_lambda", row.best_lambda ? Json(row.best_lambda->to_string()) : Json(nullptr)},
                        {"nodes", row.nodes},
                        {"exhaustive", row.exhaustive},
                        {"cells", std::move(cells)}});
  }
  return rows;
}

}  // namespace horolab
