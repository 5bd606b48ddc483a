#pragma once

// Query workloads, oracle verification and latency measurement shared by
// the command-line tool, the acceptance suite and the Python module.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "orthoq/core.hpp"
#include "orthoq/gridded.hpp"

namespace orthoq {

enum class Structure { Rank1D, SlabTree, Quadrant, RangeTree, Main1, Main2, Oracle };

std::string_view to_string(Structure s) noexcept;
std::optional<Structure> parse_structure(std::string_view name) noexcept;

enum class AreaDistribution { LogUniform, Fixed };

struct WorkloadSpec {
  std::uint64_t query_count = 100000;
  AreaDistribution area_distribution = AreaDistribution::LogUniform;
  double area_min = 0.0;  // Fixed uses area_min
  double area_max = 0.0;
  double aspect_min = 0.125;  // width / height
  double aspect_max = 8.0;
  std::uint64_t seed = 1;
};

// Default area range for n points: log-uniform over [0.25/n, 4 w/N], which
// straddles the grid shortcut threshold w/N.
WorkloadSpec default_workload(std::uint64_t n, double c1, std::uint64_t query_count, std::uint64_t seed);

// Rectangles inside [0,1]^2. A side that would exceed 1 is cut to 1 and the
// other side stretched to keep the area when possible.
std::vector<Rect> generate_workload(const WorkloadSpec& spec);

struct RunOptions {
  Structure structure = Structure::Main2;
  double eps = 0.5;
  double c1 = 32.0;
  bool exhaustive = false;
  bool parallel_build = false;
  bool verify = true;
  bool time = true;
  std::size_t batch = 10000;
  // Grid structures only: build at most this many owned cells at a time
  // (0 builds the whole forest at once).
  std::size_t shard_cells = 0;
};

struct RunReport {
  Structure structure = Structure::Main2;
  std::uint64_t n = 0;
  double eps = 0.0;
  double c1 = 0.0;
  std::uint64_t build_ns = 0;
  std::uint64_t bytes = 0;
  std::uint64_t queries = 0;
  std::uint64_t nonempty = 0;
  double p50_ns = 0.0;
  double p99_ns = 0.0;
  std::uint64_t batches = 0;
  bool verified = false;
  std::uint64_t false_empty = 0;
  std::uint64_t false_nonempty = 0;
  std::uint64_t mismatch_one_sided = 0;  // false nonempty above the area threshold
  std::uint64_t mismatch_other = 0;
  std::uint64_t shortcut = 0;
  std::map<std::uint32_t, std::uint64_t> cell_histogram;   // cells visited per query
  std::map<std::uint32_t, std::uint64_t> probe_histogram;  // structure-specific probe count
  std::optional<GridParams> grid;
  std::optional<GridSpaceReport> space;
  std::uint64_t shards = 0;
  std::vector<std::string> violations;

  bool ok() const noexcept { return mismatch_other == 0 && false_empty == 0 && violations.empty(); }
  std::uint32_t max_cells() const noexcept { return cell_histogram.empty() ? 0 : cell_histogram.rbegin()->first; }
  std::uint32_t max_probes() const noexcept { return probe_histogram.empty() ? 0 : probe_histogram.rbegin()->first; }
};

RunReport run_structure(std::span<const UnitPoint> points, const WorkloadSpec& workload, const RunOptions& options);

nlohmann::json to_json(const RunReport& r);
nlohmann::json to_json(const GridParams& p);
nlohmann::json to_json(const GridSpaceReport& s);

double percentile(std::vector<double> values, double q);

}  // namespace orthoq
