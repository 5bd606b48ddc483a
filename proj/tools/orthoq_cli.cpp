// orthoq: generate point sets, verify structures against brute force, and
// benchmark query latency and space.
//
// Exit codes: 0 success, 1 invariant violation, 2 usage or I/O error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "orthoq/core.hpp"
#include "orthoq/gridded.hpp"
#include "orthoq/harness.hpp"
#include "orthoq/point_io.hpp"

namespace {

constexpr int kInvariant = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InputFlags {
  std::string points;
  std::uint64_t n = 0;
  std::uint64_t seed = 1;

  void add(CLI::App& app) {
    app.add_option("--points", points, "Point file (.csv or .bin)");
    app.add_option("--n", n, "Sample this many uniform points instead of reading a file");
    app.add_option("--seed", seed, "Sampling seed")->capture_default_str();
  }
  std::vector<orthoq::UnitPoint> load() const {
    if (!points.empty()) return orthoq::read_points(points);
    if (n == 0) throw UsageError("either --points or --n >= 1 is required");
    return orthoq::sample_points(n, seed);
  }
};

struct WorkloadFlags {
  std::uint64_t queries = 100000;
  double area_min = 0.0;
  double area_max = 0.0;
  double aspect_min = 0.125;
  double aspect_max = 8.0;
  bool fixed_area = false;
  std::optional<std::uint64_t> query_seed;

  void add(CLI::App& app) {
    app.add_option("--queries", queries, "Number of random queries")->capture_default_str();
    app.add_option("--area-min", area_min, "Smallest query area (default 0.25/n)");
    app.add_option("--area-max", area_max, "Largest query area (default 4 w/N)");
    app.add_option("--aspect-min", aspect_min, "Smallest width/height ratio")->capture_default_str();
    app.add_option("--aspect-max", aspect_max, "Largest width/height ratio")->capture_default_str();
    app.add_flag("--fixed-area", fixed_area, "Every query has area --area-min");
    app.add_option("--query-seed", query_seed, "Workload seed (default: point seed + 1)");
  }
  orthoq::WorkloadSpec spec(std::uint64_t n, double c1, std::uint64_t seed) const {
    orthoq::WorkloadSpec w = orthoq::default_workload(n, c1, queries, query_seed.value_or(seed + 1));
    if (area_min > 0.0) w.area_min = area_min;
    if (area_max > 0.0) w.area_max = area_max;
    if (fixed_area) w.area_distribution = orthoq::AreaDistribution::Fixed;
    if (w.area_max < w.area_min) w.area_max = w.area_min;
    w.aspect_min = aspect_min;
    w.aspect_max = aspect_max;
    return w;
  }
};

struct StructureFlags {
  std::string structure = "main2";
  double eps = 0.5;
  double c1 = 32.0;
  bool parallel_build = false;
  std::size_t shard_cells = 0;

  void add(CLI::App& app) {
    app.add_option("--structure", structure, "rank1d | slabtree | quadrant | rangetree | main1 | main2 | oracle")
        ->capture_default_str();
    app.add_option("--eps", eps, "Slab tree parameter in (0,1)")->capture_default_str();
    app.add_option("--c1", c1, "Grid constant, > 16")->capture_default_str();
    app.add_flag("--parallel-build", parallel_build, "Build grid cells on all cores");
    app.add_option("--shard-cells", shard_cells, "Build grid cells in blocks of this many (0: all at once)");
  }
  orthoq::RunOptions options() const {
    const auto s = orthoq::parse_structure(structure);
    if (!s) throw UsageError("unknown structure '" + structure + "'");
    if (!(eps > 0.0 && eps < 1.0)) throw UsageError("--eps must lie in (0,1)");
    if (!(c1 > 16.0)) throw UsageError("--c1 must exceed 16");
    orthoq::RunOptions o;
    o.structure = *s;
    o.eps = eps;
    o.c1 = c1;
    o.parallel_build = parallel_build;
    o.shard_cells = shard_cells;
    return o;
  }
};

void emit(const nlohmann::json& j, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream f(out);
  if (!f) throw std::runtime_error("cannot write " + out);
  f << j.dump(2) << '\n';
}

int cmd_gen(std::uint64_t n, std::uint64_t seed, const std::string& out) {
  if (n == 0) throw UsageError("--n must be at least 1");
  const auto pts = orthoq::sample_points(n, seed);
  if (out.empty() || out == "-") {
    std::cout << orthoq::format_points_csv(pts);
  } else {
    orthoq::write_points(out, pts);
  }
  return 0;
}

int cmd_verify(const InputFlags& in, const WorkloadFlags& wf, const StructureFlags& sf, bool exhaustive,
               const std::string& out) {
  orthoq::RunOptions opt = sf.options();
  opt.exhaustive = exhaustive;
  const auto pts = in.load();
  const auto report = orthoq::run_structure(pts, wf.spec(pts.size(), opt.c1, in.seed), opt);
  emit(orthoq::to_json(report), out);
  return report.ok() ? 0 : kInvariant;
}

int cmd_bench(const InputFlags& in, const WorkloadFlags& wf, const StructureFlags& sf,
              const std::vector<std::uint64_t>& sweep, bool verify, const std::string& format,
              const std::string& out) {
  if (sweep.empty()) throw UsageError("--sweep needs at least one n");
  if (format != "json" && format != "csv") throw UsageError("--format must be json or csv");
  orthoq::RunOptions opt = sf.options();
  opt.verify = verify;
  nlohmann::json rows = nlohmann::json::array();
  std::string csv = "structure,n,build_ns,bytes,bytes_per_point,p50_ns,p99_ns,queries,max_cells,max_probes,shards\n";
  bool ok = true;
  for (std::uint64_t n : sweep) {
    if (n == 0) throw UsageError("sweep sizes must be at least 1");
    const auto pts = orthoq::sample_points(n, in.seed);
    const auto r = orthoq::run_structure(pts, wf.spec(n, opt.c1, in.seed), opt);
    ok = ok && r.ok();
    rows.push_back(orthoq::to_json(r));
    csv += std::string(orthoq::to_string(r.structure)) + "," + std::to_string(r.n) + "," + std::to_string(r.build_ns) +
           "," + std::to_string(r.bytes) + "," + std::to_string(static_cast<double>(r.bytes) / static_cast<double>(n)) +
           "," + std::to_string(r.p50_ns) + "," + std::to_string(r.p99_ns) + "," + std::to_string(r.queries) + "," +
           std::to_string(r.max_cells()) + "," + std::to_string(r.max_probes()) + "," + std::to_string(r.shards) + "\n";
  }
  if (format == "csv") {
    if (out.empty() || out == "-") {
      std::cout << csv;
    } else {
      std::ofstream f(out);
      if (!f) throw std::runtime_error("cannot write " + out);
      f << csv;
    }
  } else {
    emit({{"rows", rows}}, out);
  }
  return ok ? 0 : kInvariant;
}

int cmd_net(const InputFlags& in, double c, std::uint64_t trials, std::uint64_t trial_seed, const std::string& out) {
  if (!(c > 16.0)) throw UsageError("--c must exceed 16");
  const auto pts = in.load();
  const auto r = orthoq::validate_net(pts, c, trials, trial_seed);
  emit({{"n", r.n},
        {"c", r.c},
        {"min_area", r.min_area},
        {"trials", r.trials},
        {"empty_rects", r.empty_rects},
        {"levels", r.levels},
        {"cells", r.cells},
        {"empty_cells", r.empty_cells}},
       out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constant-time range emptiness and rank structures for random points"};
  app.require_subcommand(1);

  std::uint64_t gen_n = 0, gen_seed = 1;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen", "Write uniform random points");
  gen->add_option("--n", gen_n, "Number of points")->required();
  gen->add_option("--seed", gen_seed, "Seed")->capture_default_str();
  gen->add_option("--out", gen_out, "Output path; .bin selects the binary format (default: CSV to stdout)");

  InputFlags vin;
  WorkloadFlags vwf;
  StructureFlags vsf;
  bool exhaustive = false;
  std::string vout;
  auto* verify = app.add_subcommand("verify", "Build a structure and compare every answer with brute force");
  vin.add(*verify);
  vwf.add(*verify);
  vsf.add(*verify);
  verify->add_flag("--exhaustive", exhaustive, "Every query of the rank space (slabtree, quadrant, rank1d)");
  verify->add_option("--out", vout, "Write the JSON report here instead of stdout");

  InputFlags bin;
  WorkloadFlags bwf;
  StructureFlags bsf;
  std::vector<std::uint64_t> sweep;
  bool bverify = false;
  std::string bformat = "json", bout;
  auto* bench = app.add_subcommand("bench", "Build time, bytes and query latency over a sweep of n");
  bench->add_option("--sweep", sweep, "Point counts, e.g. --sweep 16384 65536")->required()->expected(0, -1);
  bench->add_option("--seed", bin.seed, "Sampling seed")->capture_default_str();
  bwf.add(*bench);
  bsf.add(*bench);
  bench->add_flag("--verify", bverify, "Also compare answers with brute force");
  bench->add_option("--format", bformat, "json or csv")->capture_default_str();
  bench->add_option("--out", bout, "Write the report here instead of stdout");

  InputFlags nin;
  double net_c = 32.0;
  std::uint64_t net_trials = 10000, net_seed = 7;
  std::string nout;
  auto* net = app.add_subcommand("net", "Check that large rectangles and all grid cells hold points");
  nin.add(*net);
  net->add_option("--c", net_c, "Area constant, > 16")->capture_default_str();
  net->add_option("--trials", net_trials, "Random rectangles")->capture_default_str();
  net->add_option("--trial-seed", net_seed, "Seed for the rectangles")->capture_default_str();
  net->add_option("--out", nout, "Write the JSON report here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*gen) return cmd_gen(gen_n, gen_seed, gen_out);
    if (*verify) return cmd_verify(vin, vwf, vsf, exhaustive, vout);
    if (*bench) return cmd_bench(bin, bwf, bsf, sweep, bverify, bformat, bout);
    if (*net) return cmd_net(nin, net_c, net_trials, net_seed, nout);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const orthoq::PointFileError& e) {
    std::cerr << "error: " << e.what();
    if (e.line() != 0) std::cerr << " (line " << e.line() << ")";
    std::cerr << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::logic_error& e) {
    std::cerr << "invariant violated: " << e.what() << '\n';
    return kInvariant;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
