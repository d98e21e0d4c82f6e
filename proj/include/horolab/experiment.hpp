#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "horolab/analysis.hpp"
#include "horolab/cayley.hpp"
#include "horolab/graph.hpp"
#include "horolab/horoball.hpp"

namespace horolab {

inline constexpr const char* kVersion = "0.3.0";

// Which subgroups a Cayley ball is augmented along.
enum class ParabolicChoice {
  factors,      // cosets of every free factor
  whole_group,  // the ball itself
  none,
};
ParabolicChoice parse_parabolic_choice(const std::string& text);
std::string to_string(ParabolicChoice c);
// factors for free products, whole_group otherwise.
ParabolicChoice default_parabolics(const GroupSpec& spec);

std::vector<Subgraph> parabolic_family(const CayleyBall& ball, ParabolicChoice choice);

// --- Convexity of top-level parabolics as the depth grows -----------------

struct ConvexifyRow {
  int depth = 0;
  Dist defect = 0;
  std::uint64_t witness_count = 0;
  std::uint64_t pairs_checked = 0;
  std::size_t members_scanned = 0;   // family members with at least one interior pair
  std::size_t carrier_vertices = 0;
  std::vector<ConvexityWitness> witnesses;  // carrier ids, first few
};

// Augments the ball along its factor cosets at each depth and scans every
// top level over pairs interior to the radius-R ball about the identity.
std::vector<ConvexifyRow> convexify_experiment(const CayleyBall& ball, std::span<const int> depths, Dist interior_radius,
                                               std::size_t max_witnesses = 8);

// --- Level-0 versus level-n distances inside parabolics --------------------

struct LevelGap {
  Dist max_gap = 0;  // max |d((x,0),(y,0)) - d((x,n),(y,n))|
  std::uint64_t pairs_checked = 0;
  std::size_t alpha = 0;
  VertexId x = 0;
  VertexId y = 0;
};

// Over pairs x, y of each family member with min(|x|, |y|) + d_ball(x, y) <= R.
LevelGap parabolic_level_gap(const CayleyBall& ball, const AugmentedSpace& space, Dist interior_radius);

// --- Displacement generating sets and distortion ---------------------------

struct MilnorSvarcRow {
  Dist t = 0;
  std::size_t generating_set_size = 0;
  bool flagged = false;
  std::string flag;
  std::optional<QiFit> fit;
  bool contains_factor_generators = false;
};

struct MilnorSvarcResult {
  int depth = 0;
  Dist min_displacement = 0;
  std::uint64_t interior_pairs = 0;
  std::vector<MilnorSvarcRow> rows;
};

// Orbit of the identity vertex in the depth-n augmentation, S_t by
// displacement, and the fit of t * d_{S_t} against the augmented metric on
// interior pairs with additive budget t.
MilnorSvarcResult milnor_svarc_experiment(const CayleyBall& ball, int depth, std::span<const Dist> ts,
                                          Dist interior_radius, ParabolicChoice parabolics);

// --- Config and reports -----------------------------------------------------

// Versioned experiment config:
//
//   {"version":1, "experiment":"<kind>", "instance":{...}, "params":{...},
//    "seed":0, "output":{"dir":"out","csv":true,"dot":false}}
//
// instance is {"graph":{"family":..., ...}}, {"graph_file":"path"} or
// {"group":<group spec>, "radius":R}. Unknown fields are rejected.
struct ExperimentConfig {
  std::string experiment;
  Json instance;
  Json params;
  std::uint64_t seed = 0;
  std::filesystem::path output_dir = "horolab-out";
  bool write_csv = true;
  bool export_dot = false;
  std::filesystem::path base_dir;  // relative graph_file paths resolve here
  Json source;                     // the document as given

  static ExperimentConfig from_json(const Json& doc, const std::filesystem::path& base_dir = {});
  static ExperimentConfig from_file(const std::filesystem::path& path);
};

const std::vector<std::string>& experiment_kinds();

struct RunOptions {
  unsigned threads = 1;
  bool write_files = true;
};

enum class RunStatus { ok, property_violation, resource_error };

struct Check {
  std::string name;
  bool ok = true;
  std::string detail;
};

struct Report {
  std::string experiment;
  Json config;
  Json environment;
  Json rows = Json::array();
  std::vector<Check> checks;
  Json timings = Json::object();
  RunStatus status = RunStatus::ok;
  std::string error;
  std::string csv;
  std::vector<std::filesystem::path> files;

  // Everything but timings; identical configs give identical text.
  Json result_json() const;
  Json to_json() const;
};

// Input errors propagate; resource errors are recorded in the report.
Report run(const ExperimentConfig& config, const RunOptions& options = {});

// Exit status for a finished run: 0 ok, 3 resource cap, 4 property violation.
int exit_code(const Report& report);

std::string sha256_hex(const std::string& data);

}  // namespace horolab
