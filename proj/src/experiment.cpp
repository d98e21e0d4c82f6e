#include "horolab/experiment.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <unordered_map>

#include "horolab/error.hpp"
#include "horolab/graph_io.hpp"
#include "horolab/metric.hpp"
#include "horolab/shortcut.hpp"

namespace horolab {

ParabolicChoice parse_parabolic_choice(const std::string& text) {
  if (text == "factors") return ParabolicChoice::factors;
  if (text == "whole_group") return ParabolicChoice::whole_group;
  if (text == "none") return ParabolicChoice::none;
  throw InputError("unknown parabolic family '" + text + "' (expected factors, whole_group or none)");
}

std::string to_string(ParabolicChoice c) {
  switch (c) {
    case ParabolicChoice::factors: return "factors";
    case ParabolicChoice::whole_group: return "whole_group";
    case ParabolicChoice::none: return "none";
  }
  return "?";
}

ParabolicChoice default_parabolics(const GroupSpec& spec) {
  return spec.kind == GroupKind::free_product ? ParabolicChoice::factors : ParabolicChoice::whole_group;
}

std::vector<Subgraph> parabolic_family(const CayleyBall& ball, ParabolicChoice choice) {
  std::vector<Subgraph> family;
  switch (choice) {
    case ParabolicChoice::none:
      break;
    case ParabolicChoice::whole_group: {
      Subgraph all;
      for (std::size_t v = 0; v < ball.graph.num_vertices(); ++v) all.vertices.push_back(static_cast<VertexId>(v));
      all.edges = ball.graph.edges();
      family.push_back(std::move(all));
      break;
    }
    case ParabolicChoice::factors: {
      if (ball.spec.kind != GroupKind::free_product) {
        throw InputError("factor parabolics need a free product group");
      }
      for (std::size_t i = 0; i < ball.spec.factors.size(); ++i) {
        for (auto& coset : coset_family(ball, i)) family.push_back(Subgraph{std::move(coset.members), std::move(coset.edges)});
      }
      break;
    }
  }
  return family;
}

std::vector<ConvexifyRow> convexify_experiment(const CayleyBall& ball, std::span<const int> depths, Dist interior_radius,
                                               std::size_t max_witnesses) {
  if (ball.spec.kind != GroupKind::free_product) throw InputError("convexify experiment needs a free product group");
  if (depths.empty()) throw InputError("convexify experiment needs at least one depth");
  const auto family = parabolic_family(ball, ParabolicChoice::factors);
  if (family.empty()) throw InputError("convexify experiment: empty parabolic family");

  std::vector<ConvexifyRow> rows;
  for (int n : depths) {
    const AugmentedSpace space(ball.graph, family, n);
    const Graph& g = space.carrier();
    BoundedBfs from_origin(g.num_vertices());
    from_origin.run(g, ball.basepoint(), interior_radius);
    std::vector<Dist> origin(g.num_vertices());
    for (std::size_t v = 0; v < origin.size(); ++v) origin[v] = from_origin[static_cast<VertexId>(v)];

    ConvexifyRow row;
    row.depth = n;
    row.carrier_vertices = g.num_vertices();
    ConvexityOptions opts;
    opts.filter = PairFilter::interior_of(interior_radius, ball.basepoint());
    opts.max_witnesses = max_witnesses;
    opts.origin_distances = origin;
    for (std::size_t alpha = 0; alpha < space.family_size(); ++alpha) {
      const auto top = space.level_set(alpha, n);
      if (top.size() < 2) continue;
      const Dist nearest = std::transform_reduce(top.begin(), top.end(), kUnreachable,
                                                 [](Dist a, Dist b) { return std::min(a, b); },
                                                 [&](VertexId v) { return origin[static_cast<std::size_t>(v)]; });
      if (nearest == kUnreachable || nearest >= interior_radius) continue;
      const auto report = convexity_defect(g, top, opts);
      if (report.pairs_checked == 0) continue;
      ++row.members_scanned;
      row.pairs_checked += report.pairs_checked;
      row.witness_count += report.witness_count;
      row.defect = std::max(row.defect, report.defect);
      for (const auto& w : report.witnesses) {
        if (row.witnesses.size() < max_witnesses) row.witnesses.push_back(w);
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

LevelGap parabolic_level_gap(const CayleyBall& ball, const AugmentedSpace& space, Dist interior_radius) {
  const Graph& carrier = space.carrier();
  const int n = space.depth();
  BoundedBfs in_ball(ball.graph.num_vertices());
  BoundedBfs low(carrier.num_vertices());
  BoundedBfs high(carrier.num_vertices());
  LevelGap gap;
  for (std::size_t alpha = 0; alpha < space.family_size(); ++alpha) {
    const auto& member = space.member(alpha);
    for (VertexId x : member.vertices) {
      const Dist r = interior_radius - ball.word_length[static_cast<std::size_t>(x)];
      if (r < 1) continue;
      in_ball.run(ball.graph, x, r);
      low.run(carrier, x, r);
      high.run(carrier, *space.lift(alpha, x, n), r + 2 * n);
      for (VertexId y : member.vertices) {
        // Ids are ordered by word length, so y > x means |y| >= |x|.
        if (y <= x || in_ball[y] == kUnreachable) continue;
        const Dist d0 = low[y];
        const Dist dn = high[*space.lift(alpha, y, n)];
        if (d0 == kUnreachable || dn == kUnreachable) throw Error("parabolic_level_gap: distance outside search radius");
        ++gap.pairs_checked;
        const Dist diff = std::abs(d0 - dn);
        if (diff > gap.max_gap) gap = LevelGap{diff, gap.pairs_checked, alpha, x, y};
      }
    }
  }
  return gap;
}

MilnorSvarcResult milnor_svarc_experiment(const CayleyBall& ball, int depth, std::span<const Dist> ts,
                                          Dist interior_radius, ParabolicChoice parabolics) {
  if (ts.empty()) throw InputError("milnor-svarc experiment needs at least one t");
  const Group group(ball.spec);
  const AugmentedSpace space(ball.graph, parabolic_family(ball, parabolics), depth);
  const Graph& carrier = space.carrier();
  const std::size_t size = ball.graph.num_vertices();

  MilnorSvarcResult result;
  result.depth = depth;
  const auto from_identity = bfs_distances(carrier, ball.basepoint());
  std::vector<OrbitPoint> orbit(size);
  result.min_displacement = kUnreachable;
  for (std::size_t v = 0; v < size; ++v) {
    orbit[v] = OrbitPoint{ball.elements[v], from_identity[v]};
    if (from_identity[v] > 0) result.min_displacement = std::min(result.min_displacement, from_identity[v]);
  }

  // Interior pairs, the augmented distance and the ball index of g^-1 h.
  std::vector<Dist> dx;
  std::vector<VertexId> quotient;
  BoundedBfs in_ball(size);
  BoundedBfs in_carrier(carrier.num_vertices());
  for (std::size_t u = 0; u < size; ++u) {
    const auto gu = static_cast<VertexId>(u);
    const Dist r = interior_radius - ball.word_length[u];
    if (r < 1) continue;
    in_ball.run(ball.graph, gu, r);
    in_carrier.run(carrier, gu, r);
    const Element inv = group.inverse(ball.elements[u]);
    for (VertexId v : in_ball.visited()) {
      if (v <= gu) continue;
      const auto q = ball.find(group.multiply(inv, ball.elements[static_cast<std::size_t>(v)]), group);
      if (!q) throw Error("milnor-svarc: g^-1 h left the ball for an interior pair");
      dx.push_back(in_carrier[v]);
      quotient.push_back(*q);
    }
  }
  result.interior_pairs = dx.size();

  for (Dist t : ts) {
    MilnorSvarcRow row;
    row.t = t;
    std::vector<std::size_t> members;
    try {
      members = displacement_generating_set(group, orbit, t);
    } catch (const InputError& e) {
      row.flagged = true;
      row.flag = e.what();
      result.rows.push_back(std::move(row));
      continue;
    }
    row.generating_set_size = members.size();
    row.contains_factor_generators = std::all_of(group.generators().begin(), group.generators().end(), [&](const Generator& s) {
      const auto id = ball.find(s.element, group);
      return id && orbit[static_cast<std::size_t>(*id)].displacement <= t;
    });

    // Word lengths over S_t by BFS from the identity, staying in the ball.
    std::vector<Dist> word(size, kUnreachable);
    std::vector<VertexId> queue{ball.basepoint()};
    word[0] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const Element& x = ball.elements[static_cast<std::size_t>(queue[head])];
      for (std::size_t m : members) {
        if (orbit[m].element.is_identity()) continue;
        const auto y = ball.find(group.multiply(x, orbit[m].element), group);
        if (y && word[static_cast<std::size_t>(*y)] == kUnreachable) {
          word[static_cast<std::size_t>(*y)] = word[static_cast<std::size_t>(queue[head])] + 1;
          queue.push_back(*y);
        }
      }
    }
    std::vector<Dist> dy(quotient.size());
    for (std::size_t i = 0; i < quotient.size(); ++i) dy[i] = word[static_cast<std::size_t>(quotient[i])];
    if (std::find(dy.begin(), dy.end(), kUnreachable) != dy.end()) {
      row.flagged = true;
      row.flag = "S_t does not generate within ball";
    } else {
      row.fit = qi_distortion(dx, dy, Rational(t), Rational(t));
    }
    result.rows.push_back(std::move(row));
  }
  return result;
}

// --- config ---------------------------------------------------------------

namespace {

[[noreturn]] void config_error(const std::string& path, const std::string& what) {
  throw InputError("config error at " + (path.empty() ? std::string("/") : path) + ": " + what);
}

// Typed access to one config object with unknown-field rejection.
class Fields {
 public:
  Fields(const Json& doc, std::string path, std::initializer_list<const char*> allowed) : doc_(doc), path_(std::move(path)) {
    if (!doc_.is_object()) config_error(path_, "expected an object");
    for (const auto& [key, value] : doc_.items()) {
      if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
        config_error(path_ + "/" + key, "unknown field");
      }
    }
  }

  bool has(const std::string& key) const { return doc_.contains(key); }
  std::string path(const std::string& key) const { return path_ + "/" + key; }

  const Json& at(const std::string& key) const {
    if (!has(key)) config_error(path(key), "missing required field");
    return doc_.at(key);
  }

  std::int64_t integer(const std::string& key, std::int64_t min, std::optional<std::int64_t> fallback = std::nullopt) const {
    if (!has(key)) {
      if (fallback) return *fallback;
      config_error(path(key), "missing required field");
    }
    const Json& v = doc_.at(key);
    if (!v.is_number_integer() || v.get<std::int64_t>() < min) {
      config_error(path(key), "expected an integer >= " + std::to_string(min));
    }
    return v.get<std::int64_t>();
  }

  std::vector<std::int64_t> integer_list(const std::string& key, std::int64_t min) const {
    const Json& v = at(key);
    if (!v.is_array() || v.empty()) config_error(path(key), "expected a nonempty array of integers");
    std::vector<std::int64_t> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number_integer() || v[i].get<std::int64_t>() < min) {
        config_error(path(key) + "/" + std::to_string(i), "expected an integer >= " + std::to_string(min));
      }
      out.push_back(v[i].get<std::int64_t>());
    }
    return out;
  }

  std::string string(const std::string& key, std::optional<std::string> fallback = std::nullopt) const {
    if (!has(key)) {
      if (fallback) return *fallback;
      config_error(path(key), "missing required field");
    }
    if (!doc_.at(key).is_string()) config_error(path(key), "expected a string");
    return doc_.at(key).get<std::string>();
  }

  bool boolean(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    if (!doc_.at(key).is_boolean()) config_error(path(key), "expected true or false");
    return doc_.at(key).get<bool>();
  }

  Rational rational(const std::string& key, std::optional<Rational> fallback = std::nullopt) const {
    if (!has(key)) {
      if (fallback) return *fallback;
      config_error(path(key), "missing required field");
    }
    const Json& v = doc_.at(key);
    try {
      if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
      if (v.is_string()) return Rational::parse(v.get<std::string>());
    } catch (const InputError& e) {
      config_error(path(key), e.what());
    }
    config_error(path(key), "expected an integer or a rational string such as \"6/5\"");
  }

 private:
  const Json& doc_;
  std::string path_;
};

template <typename F>
auto at_path(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const InputError& e) {
    const std::string what = e.what();
    if (what.rfind("config error", 0) == 0) throw;
    config_error(path, what);
  }
}

Graph graph_from_family(const Json& doc, std::uint64_t seed) {
  const std::string path = "/instance/graph";
  if (!doc.is_object()) config_error(path, "expected an object");
  const Fields head(doc, path, {"family", "vertices", "rows", "cols", "depth", "p"});
  const std::string family = head.string("family");
  auto size = [&](const char* key) { return static_cast<std::size_t>(head.integer(key, 1)); };
  if (family == "path") return path_graph(size("vertices"));
  if (family == "cycle") return cycle_graph(size("vertices"));
  if (family == "complete") return complete_graph(size("vertices"));
  if (family == "grid") return grid_graph(size("rows"), size("cols"));
  if (family == "binary_tree") return binary_tree(static_cast<std::size_t>(head.integer("depth", 0)));
  if (family == "petersen") return petersen_graph();
  if (family == "random") {
    std::mt19937_64 rng(seed);
    const Json& p = head.at("p");
    if (!p.is_number() || p.get<double>() < 0 || p.get<double>() > 1) config_error(head.path("p"), "expected a number in [0, 1]");
    return random_connected_graph(size("vertices"), p.get<double>(), rng);
  }
  config_error(head.path("family"), "unknown graph family '" + family + "'");
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

const std::vector<std::string>& experiment_kinds() {
  static const std::vector<std::string> kinds{"build-horoball", "augment",     "delta",
                                              "convexity",      "shortcut",    "milnor-svarc",
                                              "convexify-experiment"};
  return kinds;
}

ExperimentConfig ExperimentConfig::from_json(const Json& doc, const std::filesystem::path& base_dir) {
  const Fields top(doc, "", {"version", "experiment", "instance", "params", "seed", "output"});
  if (top.integer("version", 1) != 1) config_error("/version", "unsupported version (expected 1)");
  ExperimentConfig cfg;
  cfg.experiment = top.string("experiment");
  const auto& kinds = experiment_kinds();
  if (std::find(kinds.begin(), kinds.end(), cfg.experiment) == kinds.end()) {
    config_error("/experiment", "unknown experiment '" + cfg.experiment + "'");
  }
  cfg.instance = top.at("instance");
  const Fields inst(cfg.instance, "/instance", {"graph", "graph_file", "group", "radius"});
  const int kinds_given = int(inst.has("graph")) + int(inst.has("graph_file")) + int(inst.has("group"));
  if (kinds_given != 1) config_error("/instance", "give exactly one of graph, graph_file, group");
  if (inst.has("group")) {
    at_path("/instance/group", [&] { return GroupSpec::from_json(cfg.instance.at("group")); });
    inst.integer("radius", 1);
  } else if (inst.has("radius")) {
    config_error("/instance/radius", "radius applies to group instances only");
  }
  if (inst.has("graph_file")) inst.string("graph_file");
  if (inst.has("graph")) {
    Fields(cfg.instance.at("graph"), "/instance/graph", {"family", "vertices", "rows", "cols", "depth", "p"}).string("family");
  }
  cfg.params = top.has("params") ? top.at("params") : Json::object();
  if (!cfg.params.is_object()) config_error("/params", "expected an object");
  if (top.has("seed")) {
    const Json& s = top.at("seed");
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<std::int64_t>() >= 0)) {
      config_error("/seed", "expected a nonnegative integer");
    }
    cfg.seed = s.get<std::uint64_t>();
  }
  if (top.has("output")) {
    const Fields out(top.at("output"), "/output", {"dir", "csv", "dot"});
    cfg.output_dir = out.string("dir", "horolab-out");
    cfg.write_csv = out.boolean("csv", true);
    cfg.export_dot = out.boolean("dot", false);
  }
  cfg.base_dir = base_dir;
  cfg.source = doc;
  return cfg;
}

ExperimentConfig ExperimentConfig::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file " + path.string());
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InputError("config file " + path.string() + " is not valid JSON: " + e.what());
  }
  return from_json(doc, path.parent_path());
}

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1) throw Error("SHA-256 failed");
  std::ostringstream out;
  for (unsigned int i = 0; i < length; ++i) out << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return out.str();
}

Json Report::result_json() const {
  Json checks_json = Json::array();
  for (const auto& c : checks) checks_json.push_back(Json{{"name", c.name}, {"ok", c.ok}, {"detail", c.detail}});
  Json doc{{"experiment", experiment}, {"config", config}, {"environment", environment}, {"rows", rows},
           {"checks", checks_json}};
  doc["status"] = status == RunStatus::ok ? "ok" : status == RunStatus::property_violation ? "property_violation" : "resource_error";
  if (!error.empty()) doc["error"] = error;
  return doc;
}

Json Report::to_json() const {
  Json doc = result_json();
  doc["timings"] = timings;
  return doc;
}

int exit_code(const Report& report) {
  switch (report.status) {
    case RunStatus::ok: return 0;
    case RunStatus::resource_error: return 3;
    case RunStatus::property_violation: return 4;
  }
  return 1;
}

namespace {

// The graph an experiment works on, with whatever was built on top of it.
struct Space {
  Graph base;
  std::optional<CayleyBall> ball;
  std::optional<RestrictedHoroball> horoball;
  std::optional<AugmentedSpace> augmented;

  const Graph& carrier() const {
    if (horoball) return horoball->carrier();
    if (augmented) return augmented->carrier();
    return base;
  }
  Graph annotated() const {
    if (horoball) return horoball->annotated_carrier();
    if (augmented) return augmented->annotated_carrier();
    return base;
  }
};

class Runner {
 public:
  Runner(const ExperimentConfig& cfg, const RunOptions& opts) : cfg_(cfg), opts_(opts) {}

  Report run() {
    const auto start = std::chrono::steady_clock::now();
    report_.experiment = cfg_.experiment;
    report_.config = Json{{"version", 1},
                          {"experiment", cfg_.experiment},
                          {"instance", cfg_.instance},
                          {"params", cfg_.params},
                          {"seed", cfg_.seed}};
    report_.environment = Json{{"horolab_version", kVersion}, {"instance_hashes", Json::object()}};
    try {
      dispatch();
    } catch (const ResourceError& e) {
      report_.status = RunStatus::resource_error;
      report_.error = e.what();
    }
    for (const auto& c : report_.checks) {
      if (!c.ok && report_.status == RunStatus::ok) report_.status = RunStatus::property_violation;
    }
    report_.timings["total_seconds"] = seconds_since(start);
    report_.timings["threads"] = opts_.threads;
    if (opts_.write_files) write_outputs();
    return std::move(report_);
  }

 private:
  void dispatch() {
    const std::string& kind = cfg_.experiment;
    if (kind == "build-horoball") return build_horoball();
    if (kind == "augment") return augment();
    if (kind == "delta") return delta();
    if (kind == "convexity") return convexity();
    if (kind == "shortcut") return shortcut();
    if (kind == "milnor-svarc") return milnor_svarc();
    if (kind == "convexify-experiment") return convexify();
  }

  void timed(const std::string& stage, double seconds) { report_.timings[stage] = seconds; }

  void hash(const std::string& name, const Graph& g) {
    report_.environment["instance_hashes"][name] = sha256_hex(graph_to_text(g));
  }

  CayleyBall load_ball() {
    const Fields inst(cfg_.instance, "/instance", {"graph", "graph_file", "group", "radius"});
    if (!inst.has("group")) config_error("/instance", cfg_.experiment + " needs a group instance");
    const auto spec = at_path("/instance/group", [&] { return GroupSpec::from_json(cfg_.instance.at("group")); });
    const auto start = std::chrono::steady_clock::now();
    CayleyBall ball = cayley_ball(spec, static_cast<Dist>(inst.integer("radius", 1)));
    timed("cayley_ball_seconds", seconds_since(start));
    hash("base", ball.graph);
    return ball;
  }

  Graph load_graph() {
    const Fields inst(cfg_.instance, "/instance", {"graph", "graph_file", "group", "radius"});
    Graph g;
    if (inst.has("graph")) {
      g = graph_from_family(cfg_.instance.at("graph"), cfg_.seed);
    } else if (inst.has("graph_file")) {
      std::filesystem::path file = inst.string("graph_file");
      if (file.is_relative()) file = cfg_.base_dir / file;
      if (!std::filesystem::exists(file)) config_error("/instance/graph_file", "file " + file.string() + " does not exist");
      g = at_path("/instance/graph_file", [&] { return read_graph_file(file); });
    } else {
      return load_ball().graph;
    }
    hash("base", g);
    return g;
  }

  // Base graph plus, when params carry a depth, the horoball over it (graph
  // instances), the augmentation along `family` (graph instances) or along
  // the parabolics (group instances).
  Space build_space(const Fields& params, bool require_depth) {
    Space s;
    const bool group = cfg_.instance.contains("group");
    if (group) {
      s.ball = load_ball();
      s.base = s.ball->graph;
    } else {
      s.base = load_graph();
    }
    if (!params.has("depth")) {
      if (require_depth) params.at("depth");
      return s;
    }
    const int depth = static_cast<int>(params.integer("depth", 1));
    const auto start = std::chrono::steady_clock::now();
    if (group) {
      const auto choice = params.has("parabolics")
                              ? at_path(params.path("parabolics"), [&] { return parse_parabolic_choice(params.string("parabolics")); })
                              : default_parabolics(s.ball->spec);
      auto family = at_path(params.path("parabolics"), [&] { return parabolic_family(*s.ball, choice); });
      s.augmented.emplace(s.base, std::move(family), depth);
    } else if (params.has("family")) {
      const Json& fam = params.at("family");
      if (!fam.is_array()) config_error(params.path("family"), "expected an array of vertex lists");
      std::vector<Subgraph> family;
      for (std::size_t i = 0; i < fam.size(); ++i) {
        const std::string p = params.path("family") + "/" + std::to_string(i);
        if (!fam[i].is_array()) config_error(p, "expected an array of vertex ids");
        std::vector<VertexId> ids;
        for (const auto& v : fam[i]) {
          if (!v.is_number_integer() || !s.base.has_vertex(v.get<VertexId>())) config_error(p, "unknown vertex id");
          ids.push_back(v.get<VertexId>());
        }
        family.push_back(Subgraph::induced(s.base, std::move(ids)));
      }
      at_path(params.path("family"), [&] { s.augmented.emplace(s.base, std::move(family), depth); return 0; });
    } else {
      at_path("/instance", [&] { s.horoball.emplace(s.base, depth, opts_.threads); return 0; });
    }
    timed("build_seconds", seconds_since(start));
    hash("carrier", s.carrier());
    return s;
  }

  void build_horoball() {
    const Fields params(cfg_.params, "/params", {"depth"});
    if (cfg_.instance.contains("group")) config_error("/instance", "build-horoball needs a graph instance");
    Space s = build_space(params, true);
    emit_space(s);
    const std::size_t expected = s.base.num_vertices() * static_cast<std::size_t>(s.horoball->depth() + 1);
    report_.checks.push_back({"carrier vertex count", s.carrier().num_vertices() == expected,
                              std::to_string(s.carrier().num_vertices()) + " vs " + std::to_string(expected)});
  }

  void augment() {
    const Fields params(cfg_.params, "/params", {"depth", "parabolics", "family"});
    if (!cfg_.instance.contains("group") && !params.has("family")) config_error("/params/family", "augment needs a family for graph instances");
    Space s = build_space(params, true);
    emit_space(s);
    if (s.ball) {
      const Dist radius = s.ball->radius;
      const auto gap = parabolic_level_gap(*s.ball, *s.augmented, radius);
      report_.rows[0]["level_gap"] = Json{{"max", gap.max_gap}, {"bound", 2 * s.augmented->depth()}, {"pairs", gap.pairs_checked}};
      report_.checks.push_back({"level gap within 2n", gap.max_gap <= 2 * s.augmented->depth(),
                                "max gap " + std::to_string(gap.max_gap)});
    }
  }

  void emit_space(const Space& s) {
    Json row{{"base_vertices", s.base.num_vertices()},
             {"base_edges", s.base.num_edges()},
             {"carrier_vertices", s.carrier().num_vertices()},
             {"carrier_edges", s.carrier().num_edges()}};
    if (s.horoball) row["depth"] = s.horoball->depth();
    if (s.augmented) {
      row["depth"] = s.augmented->depth();
      row["family_size"] = s.augmented->family_size();
    }
    report_.rows.push_back(std::move(row));
    graphs_.emplace_back("carrier", s.annotated());
    if (cfg_.export_dot) graphs_.emplace_back("base", s.base);
    write_carrier_ = true;
  }

  void delta() {
    const Fields params(cfg_.params, "/params", {"depth", "parabolics", "family", "sample"});
    Space s = build_space(params, false);
    DeltaSample sample = DeltaSample::all();
    if (params.has("sample")) {
      const Json& v = params.at("sample");
      if (v.is_string() && v.get<std::string>() == "all") {
        sample = DeltaSample::all();
      } else if (v.is_number_integer() && v.get<std::int64_t>() > 0) {
        sample = DeltaSample::random(v.get<std::size_t>(), cfg_.seed);
      } else {
        config_error(params.path("sample"), "expected \"all\" or a positive count");
      }
    }
    if (!is_connected(s.carrier())) config_error("/instance", "delta needs a connected graph");
    const auto start = std::chrono::steady_clock::now();
    const auto est = four_point_delta(s.carrier(), sample, opts_.threads);
    timed("delta_seconds", seconds_since(start));
    report_.rows.push_back(Json{{"vertices", s.carrier().num_vertices()},
                                {"delta", est.delta().to_string()},
                                {"twice_delta", est.twice_delta},
                                {"quadruples_checked", est.quadruples_checked},
                                {"exhaustive", est.exhaustive}});
    report_.csv = "vertices,delta,quadruples_checked,exhaustive\n" + std::to_string(s.carrier().num_vertices()) + "," +
                  est.delta().to_string() + "," + std::to_string(est.quadruples_checked) + "," +
                  (est.exhaustive ? "true" : "false") + "\n";
  }

  void convexity() {
    const Fields params(cfg_.params, "/params",
                        {"depth", "parabolics", "family", "set", "interior", "geodesic_cap", "max_witnesses", "expect_convex"});
    Space s = build_space(params, false);
    const Graph& g = s.carrier();
    const Fields set(params.at("set"), "/params/set", {"vertices", "levels_at_least"});
    std::vector<VertexId> members;
    if (set.has("vertices") == set.has("levels_at_least")) config_error("/params/set", "give exactly one of vertices, levels_at_least");
    if (set.has("vertices")) {
      for (auto v : set.integer_list("vertices", 0)) {
        if (!g.has_vertex(static_cast<VertexId>(v))) config_error("/params/set/vertices", "unknown vertex " + std::to_string(v));
        members.push_back(static_cast<VertexId>(v));
      }
    } else {
      if (!s.horoball) config_error("/params/set/levels_at_least", "needs a horoball (graph instance with depth)");
      const auto k = set.integer("levels_at_least", 0);
      if (k > s.horoball->depth()) config_error("/params/set/levels_at_least", "above the horoball depth");
      members = s.horoball->levels_at_least(static_cast<int>(k));
    }
    ConvexityOptions opts;
    opts.geodesic_cap = static_cast<std::size_t>(params.integer("geodesic_cap", 0, 0));
    opts.max_witnesses = static_cast<std::size_t>(params.integer("max_witnesses", 0, 64));
    if (params.has("interior")) {
      const Fields in(params.at("interior"), "/params/interior", {"radius", "origin"});
      const auto origin = in.integer("origin", 0, 0);
      if (!g.has_vertex(static_cast<VertexId>(origin))) config_error("/params/interior/origin", "unknown vertex");
      opts.filter = PairFilter::interior_of(static_cast<Dist>(in.integer("radius", 1)), static_cast<VertexId>(origin));
    }
    const auto start = std::chrono::steady_clock::now();
    const auto rep = at_path("/params/set", [&] { return convexity_defect(g, members, opts); });
    timed("convexity_seconds", seconds_since(start));
    Json witnesses = Json::array();
    for (const auto& w : rep.witnesses) witnesses.push_back(Json{w.u, w.v, w.w, w.distance_to_set});
    report_.rows.push_back(Json{{"set_size", members.size()},
                                {"defect", rep.defect},
                                {"witness_count", rep.witness_count},
                                {"quasiconvexity_constant", rep.quasiconvexity_constant},
                                {"pairs_checked", rep.pairs_checked},
                                {"geodesics_truncated", rep.geodesics_truncated},
                                {"witnesses", witnesses}});
    report_.csv = "set_size,defect,witness_count,quasiconvexity_constant,pairs_checked\n" + std::to_string(members.size()) +
                  "," + std::to_string(rep.defect) + "," + std::to_string(rep.witness_count) + "," +
                  std::to_string(rep.quasiconvexity_constant) + "," + std::to_string(rep.pairs_checked) + "\n";
    if (params.boolean("expect_convex", false)) {
      report_.checks.push_back({"set is convex", rep.convex(), std::to_string(rep.witness_count) + " witnesses"});
    }
  }

  void shortcut() {
    const Fields params(cfg_.params, "/params", {"depth", "parabolics", "family", "K", "n", "lambda", "node_cap"});
    Space s = build_space(params, false);
    const Graph& g = s.carrier();
    if (!is_connected(g)) config_error("/instance", "shortcut search needs a connected target");
    const Rational K = params.rational("K");
    if (K < Rational(1)) config_error("/params/K", "expected K >= 1");
    std::vector<std::size_t> ns;
    for (auto n : params.integer_list("n", 3)) ns.push_back(static_cast<std::size_t>(n));
    LambdaRange range;
    if (params.has("lambda")) {
      const Fields lam(params.at("lambda"), "/params/lambda", {"lo", "hi", "step"});
      range.lo = lam.rational("lo");
      range.hi = lam.rational("hi", range.lo);
      range.step = lam.rational("step", Rational(1, 4));
      if (range.step <= Rational(0)) config_error("/params/lambda/step", "expected a positive step");
      if (range.lo <= Rational(0)) config_error("/params/lambda/lo", "expected a positive lambda");
    }
    const auto cap = static_cast<std::uint64_t>(params.integer("node_cap", 1, 20'000'000));
    const auto start = std::chrono::steady_clock::now();
    const DistanceMatrix d(g, opts_.threads);
    const auto profile = shortcut_profile(g, d, K, ns, range, cap, opts_.threads);
    timed("search_seconds", seconds_since(start));
    report_.rows = profile_to_json(profile);
    report_.csv = profile_to_csv(profile);
    if (s.ball) report_.rows.push_back(Json{{"ball_radius", s.ball->radius}});
  }

  void milnor_svarc() {
    const Fields params(cfg_.params, "/params", {"depth", "t", "parabolics", "interior_radius"});
    CayleyBall ball = load_ball();
    const int depth = static_cast<int>(params.integer("depth", 1));
    std::vector<Dist> ts;
    for (auto t : params.integer_list("t", 1)) ts.push_back(static_cast<Dist>(t));
    const auto choice = params.has("parabolics")
                            ? at_path(params.path("parabolics"), [&] { return parse_parabolic_choice(params.string("parabolics")); })
                            : default_parabolics(ball.spec);
    const Dist radius = static_cast<Dist>(params.integer("interior_radius", 1, ball.radius));
    if (radius > ball.radius) config_error("/params/interior_radius", "exceeds the ball radius");
    const auto start = std::chrono::steady_clock::now();
    const auto result = at_path("/params/parabolics", [&] { return milnor_svarc_experiment(ball, depth, ts, radius, choice); });
    timed("experiment_seconds", seconds_since(start));

    std::ostringstream csv;
    csv << "t,generating_set_size,K,K_exact,pairs,flag\n";
    for (const auto& row : result.rows) {
      Json j{{"t", row.t}, {"generating_set_size", row.generating_set_size}, {"flagged", row.flagged}};
      if (row.flagged) j["flag"] = row.flag;
      if (row.fit) {
        j["K"] = row.fit->infinite ? Json("inf") : Json(row.fit->multiplicative.to_string());
        j["K_exact"] = row.fit->infinite ? Json("inf") : Json(row.fit->multiplicative_exact.to_string());
        j["additive_budget"] = row.fit->additive_budget.to_string();
        j["pairs_checked"] = row.fit->pairs_checked;
      }
      j["contains_factor_generators"] = row.contains_factor_generators;
      report_.rows.push_back(std::move(j));
      csv << row.t << ',' << row.generating_set_size << ','
          << (row.fit ? (row.fit->infinite ? "inf" : row.fit->multiplicative.to_string()) : "") << ','
          << (row.fit ? (row.fit->infinite ? "inf" : row.fit->multiplicative_exact.to_string()) : "") << ','
          << (row.fit ? row.fit->pairs_checked : 0) << ',' << (row.flagged ? row.flag : "") << '\n';
    }
    report_.csv = csv.str();
    report_.environment["depth"] = depth;
    report_.environment["parabolics"] = to_string(choice);
    report_.environment["min_displacement"] = result.min_displacement;

    // K_t trend over the fitted rows.
    std::vector<const MilnorSvarcRow*> fitted;
    for (const auto& row : result.rows) {
      if (row.fit && !row.fit->infinite) fitted.push_back(&row);
    }
    bool monotone = true;
    for (std::size_t i = 1; i < fitted.size(); ++i) monotone = monotone && !(fitted[i - 1]->fit->multiplicative < fitted[i]->fit->multiplicative);
    report_.checks.push_back({"K_t non-increasing in t", monotone, ""});
    if (fitted.size() >= 2) {
      const bool drops = fitted.back()->fit->multiplicative < fitted.front()->fit->multiplicative;
      report_.checks.push_back({"K_t decreases from first to last t", drops,
                                fitted.front()->fit->multiplicative.to_string() + " -> " + fitted.back()->fit->multiplicative.to_string()});
    }
    if (choice == ParabolicChoice::factors) {
      bool ok = true;
      for (const auto& row : result.rows) {
        if (row.t >= 2 * depth + 1) ok = ok && row.contains_factor_generators;
      }
      report_.checks.push_back({"factor generators in S_t for t >= 2n+1", ok, ""});
    }
  }

  void convexify() {
    const Fields params(cfg_.params, "/params", {"depths", "interior_radius", "max_witnesses"});
    CayleyBall ball = load_ball();
    std::vector<int> depths;
    for (auto n : params.integer_list("depths", 1)) depths.push_back(static_cast<int>(n));
    const Dist radius = static_cast<Dist>(params.integer("interior_radius", 1, ball.radius));
    if (radius > ball.radius) config_error("/params/interior_radius", "exceeds the ball radius");
    const auto max_witnesses = static_cast<std::size_t>(params.integer("max_witnesses", 0, 8));
    const auto start = std::chrono::steady_clock::now();
    const auto rows = at_path("/instance/group", [&] { return convexify_experiment(ball, depths, radius, max_witnesses); });
    timed("experiment_seconds", seconds_since(start));

    std::ostringstream csv;
    csv << "n,defect,witness_count,pairs_checked,members_scanned\n";
    for (const auto& row : rows) {
      Json witnesses = Json::array();
      for (const auto& w : row.witnesses) witnesses.push_back(Json{w.u, w.v, w.w, w.distance_to_set});
      report_.rows.push_back(Json{{"n", row.depth},
                                  {"defect", row.defect},
                                  {"witness_count", row.witness_count},
                                  {"pairs_checked", row.pairs_checked},
                                  {"members_scanned", row.members_scanned},
                                  {"carrier_vertices", row.carrier_vertices},
                                  {"witnesses", witnesses}});
      csv << row.depth << ',' << row.defect << ',' << row.witness_count << ',' << row.pairs_checked << ','
          << row.members_scanned << '\n';
    }
    report_.csv = csv.str();

    bool monotone = true;
    for (std::size_t i = 1; i < rows.size(); ++i) monotone = monotone && rows[i].defect <= rows[i - 1].defect;
    const auto zero = std::find_if(rows.begin(), rows.end(), [](const ConvexifyRow& r) { return r.defect == 0; });
    report_.checks.push_back({"defect non-increasing in n", monotone, ""});
    report_.checks.push_back({"defect reaches 0", zero != rows.end(),
                              zero != rows.end() ? "n0 = " + std::to_string(zero->depth) : "no depth with defect 0"});
  }

  void write_outputs() {
    const auto& dir = cfg_.output_dir;
    std::filesystem::create_directories(dir);
    auto write = [&](const std::filesystem::path& name, const std::string& text) {
      const auto path = dir / name;
      std::ofstream out(path, std::ios::binary);
      if (!out) throw InputError("cannot write " + path.string());
      out << text;
      report_.files.push_back(path);
    };
    if (write_carrier_) {
      for (const auto& [name, g] : graphs_) {
        if (name == "carrier") write(name + ".json", graph_to_text(g));
      }
    }
    if (cfg_.export_dot) {
      for (const auto& [name, g] : graphs_) write(name + ".dot", graph_to_dot(g, name));
    }
    if (cfg_.write_csv && !report_.csv.empty()) write(cfg_.experiment + ".csv", report_.csv);
    write("report.json", report_.to_json().dump(2) + "\n");
  }

  const ExperimentConfig& cfg_;
  const RunOptions& opts_;
  Report report_;
  std::vector<std::pair<std::string, Graph>> graphs_;
  bool write_carrier_ = false;
};

}  // namespace

Report run(const ExperimentConfig& config, const RunOptions& options) { return Runner(config, options).run(); }

}  // namespace horolab
