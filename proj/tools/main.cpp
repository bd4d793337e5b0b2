#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "chromaknn/dataset.hpp"
#include "chromaknn/oracle.hpp"
#include "chromaknn/pipeline.hpp"
#include "json.hpp"

using json = nlohmann::ordered_json;
using namespace chromaknn;

namespace {

struct Options {
  int dim = 1;
  std::string metric = "l2";
  long n = 1000;
  std::vector<long> n_sweep;
  int colors = 8;
  std::uint64_t seed = 1;
  long nqueries = 100;
  long k = 1;
  double epsilon = 0.0;
  long r = 0;
  std::string fanout = "binary";
  std::string points_file;
  std::string queries_file;
  std::string out_file;
  bool cross_check = false;
};

void add_data_flags(CLI::App* cmd, Options& o, bool n_list = false) {
  cmd->add_option("--dim", o.dim, "Dimension of the point set")
      ->check(CLI::IsMember({1, 2}));
  cmd->add_option("--metric", o.metric,
                  "Distance: l1, l2, linf or lm:<m> (lm only with --dim 1)");
  if (n_list) {
    cmd->add_option("--n", o.n_sweep, "Point counts to sweep (comma separated)")
        ->delimiter(',')
        ->check(CLI::PositiveNumber);
  } else {
    cmd->add_option("--n", o.n, "Number of generated points")
        ->check(CLI::PositiveNumber);
  }
  cmd->add_option("--colors", o.colors, "Number of generated colors")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", o.seed, "Random seed for generation and sampling");
  cmd->add_option("--points", o.points_file,
                  "CSV point file (x,color or x,y,color) instead of generation");
  cmd->add_option("--r", o.r, "Subdivision parameter (0 picks n^(1/3))");
  cmd->add_option("--fanout", o.fanout, "Range tree fanout: binary or delta:<d>");
  cmd->add_option("--epsilon", o.epsilon,
                  "Approximation parameter; > 0 builds 1D jump lists");
}

void add_query_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--queries", o.nqueries, "Number of generated queries")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--k", o.k, "k used for generated queries");
  cmd->add_option("--queries-file", o.queries_file,
                  "CSV query file (x,k or x,y,k) instead of generation");
}

Metric parse_metric(const std::string& s, int dim) {
  if (s == "l1") return Metric::l1();
  if (s == "l2") return Metric::l2();
  if (s == "linf") return Metric::linf();
  if (s.rfind("lm:", 0) == 0) {
    if (dim != 1)
      throw CLI::ValidationError("--metric", "lm:<m> needs --dim 1");
    return Metric::lm(std::stod(s.substr(3)));
  }
  throw CLI::ValidationError("--metric", "unknown metric '" + s + "'");
}

BuildOptions build_options(const Options& o) {
  BuildOptions b;
  b.r = o.r;
  b.seed = o.seed;
  b.epsilon = o.epsilon;
  if (o.fanout == "binary") {
    b.fanout = RangeTree2D::FanoutMode::Binary;
  } else if (o.fanout.rfind("delta:", 0) == 0) {
    b.fanout = RangeTree2D::FanoutMode::Delta;
    b.delta = std::stod(o.fanout.substr(6));
  } else {
    throw CLI::ValidationError("--fanout", "expected binary or delta:<d>");
  }
  return b;
}

class OutSink {
 public:
  explicit OutSink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw std::runtime_error("cannot open output file " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

struct Data1D {
  std::vector<ColoredPoint1> points;
  std::vector<std::string> color_names;
};

struct Data2D {
  std::vector<ColoredPoint2> points;
  std::vector<std::string> color_names;
};

Data1D get_points_1d(const Options& o) {
  if (!o.points_file.empty()) {
    std::ifstream in(o.points_file);
    if (!in) throw std::runtime_error("cannot open point file " + o.points_file);
    Dataset1D ds = load_points_1d(in);
    if (ds.points.empty()) throw std::runtime_error("point file holds no points");
    return {std::move(ds.points), std::move(ds.color_names)};
  }
  return {make_points_1d(o.n, o.colors, o.seed), {}};
}

Data2D get_points_2d(const Options& o) {
  if (!o.points_file.empty()) {
    std::ifstream in(o.points_file);
    if (!in) throw std::runtime_error("cannot open point file " + o.points_file);
    Dataset2D ds = load_points_2d(in);
    if (ds.points.empty()) throw std::runtime_error("point file holds no points");
    return {std::move(ds.points), std::move(ds.color_names)};
  }
  return {make_points_2d(o.n, o.colors, o.seed), {}};
}

std::vector<QueryRecord1> get_queries_1d(const Options& o) {
  if (!o.queries_file.empty()) {
    std::ifstream in(o.queries_file);
    if (!in) throw std::runtime_error("cannot open query file " + o.queries_file);
    return load_queries_1d(in);
  }
  std::vector<QueryRecord1> qs;
  for (double x : make_queries_1d(o.nqueries, mix_seed(o.seed, 0x91)))
    qs.push_back({x, o.k});
  return qs;
}

std::vector<QueryRecord2> get_queries_2d(const Options& o) {
  if (!o.queries_file.empty()) {
    std::ifstream in(o.queries_file);
    if (!in) throw std::runtime_error("cannot open query file " + o.queries_file);
    return load_queries_2d(in);
  }
  std::vector<QueryRecord2> qs;
  for (const Point2& q : make_queries_2d(o.nqueries, mix_seed(o.seed, 0x92)))
    qs.push_back({q, o.k});
  return qs;
}

json counters_json(int dim, const QueryCounters& c) {
  json j;
  if (dim == 1) {
    j["rank_comparisons"] = c.rank_comparisons;
    j["mode_scans"] = c.mode_scans;
  } else {
    j["counting_calls"] = c.counting_calls;
    j["annulus_reported"] = c.annulus_reported;
    j["candidate_colors"] = c.candidate_colors;
    j["oracle_fallback"] = c.oracle_fallback;
  }
  return j;
}

json answer_json(const ChromaticAnswer& a, const std::vector<std::string>& names) {
  json j;
  j["color"] = a.color;
  if (a.color >= 0 && a.color < static_cast<int>(names.size()))
    j["color_name"] = names[a.color];
  j["freq"] = a.freq;
  j["radius"] = a.radius;
  return j;
}

int run_build(const Options& o) {
  OutSink sink(o.out_file);
  json j;
  j["dim"] = o.dim;
  if (o.dim == 1) {
    Data1D data = get_points_1d(o);
    Pipeline1D pipe(std::move(data.points), build_options(o));
    j["n"] = pipe.size();
    j["colors"] = pipe.color_bound();
    j["tree_height"] = pipe.tree().height();
    j["mode_block_size"] = pipe.mode_table().block_size();
    j["mode_blocks"] = pipe.mode_table().block_count();
    j["jump_lists"] = pipe.has_jumps();
    if (pipe.has_jumps())
      j["jump_thresholds"] = pipe.jumps().thresholds().size();
  } else {
    Data2D data = get_points_2d(o);
    Pipeline2D pipe(std::move(data.points), parse_metric(o.metric, 2), build_options(o));
    const CuttingBuildStats& st = pipe.cutting().build_stats();
    j["n"] = pipe.size();
    j["colors"] = pipe.color_bound();
    j["metric"] = pipe.metric().name();
    j["r"] = pipe.r();
    j["tau"] = pipe.tau();
    j["cells"] = st.leaves;
    j["capped_cells"] = st.capped_leaves;
    j["max_depth"] = st.max_depth;
    j["max_cell_conflicts"] = st.conflict_max;
    j["coloring_work"] = pipe.coloring_work().traversal_touched;
  }
  sink.stream() << j.dump() << "\n";
  return 0;
}

template <typename RunQuery>
int query_loop(int dim, const Options& o, long nqueries, RunQuery&& run) {
  OutSink sink(o.out_file);
  std::ostream& os = sink.stream();
  long errors = 0;
  QueryCounters totals;
  for (long i = 0; i < nqueries; ++i) {
    json j;
    j["id"] = i;
    QueryCounters c;
    try {
      run(i, j, c);
      totals.rank_comparisons += c.rank_comparisons;
      totals.mode_scans += c.mode_scans;
      totals.counting_calls += c.counting_calls;
      totals.annulus_reported += c.annulus_reported;
      totals.candidate_colors += c.candidate_colors;
      j["counters"] = counters_json(dim, c);
    } catch (const std::out_of_range& e) {
      j["error"] = e.what();
      ++errors;
    }
    os << j.dump() << "\n";
  }
  json s;
  s["summary"] = true;
  s["queries"] = nqueries;
  s["errors"] = errors;
  const long ok = nqueries - errors;
  if (ok > 0) {
    json means = counters_json(dim, totals);
    for (auto& [key, val] : means.items())
      if (val.is_number()) val = val.template get<double>() / double(ok);
    s["mean_counters"] = means;
  }
  os << s.dump() << "\n";
  return errors == 0 ? 0 : 1;
}

int run_query(const Options& o) {
  if (o.dim == 1) {
    Data1D data = get_points_1d(o);
    const auto queries = get_queries_1d(o);
    Pipeline1D pipe(std::move(data.points), build_options(o));
    const bool approx = o.epsilon > 0.0;
    return query_loop(1, o, queries.size(), [&](long i, json& j, QueryCounters& c) {
      j["q"] = queries[i].x;
      j["k"] = queries[i].k;
      const ChromaticAnswer a = approx ? pipe.query_approx(queries[i].x, queries[i].k, &c)
                                       : pipe.query(queries[i].x, queries[i].k, &c);
      j.update(answer_json(a, data.color_names));
    });
  }
  Data2D data = get_points_2d(o);
  const auto queries = get_queries_2d(o);
  Pipeline2D pipe(data.points, parse_metric(o.metric, 2), build_options(o));
  return query_loop(2, o, queries.size(), [&](long i, json& j, QueryCounters& c) {
    j["q"] = {queries[i].q.x, queries[i].q.y};
    j["k"] = queries[i].k;
    const ChromaticAnswer a = pipe.query(queries[i].q, queries[i].k, &c);
    j.update(answer_json(a, data.color_names));
  });
}

int run_verify(const Options& o) {
  long mismatches = 0;
  int rc = 0;
  if (o.dim == 1) {
    Data1D data = get_points_1d(o);
    const auto queries = get_queries_1d(o);
    Pipeline1D pipe(data.points, build_options(o));
    const Metric metric = parse_metric(o.metric, 1);
    rc = query_loop(1, o, queries.size(), [&](long i, json& j, QueryCounters& c) {
      j["q"] = queries[i].x;
      j["k"] = queries[i].k;
      const ChromaticAnswer a = pipe.query(queries[i].x, queries[i].k, &c);
      const OracleAnswer ref = oracle_chromatic(data.points, queries[i].x, queries[i].k, metric);
      const bool ok = a.freq == ref.mode_frequency && a.radius == ref.kth_radius;
      j.update(answer_json(a, data.color_names));
      j["oracle_freq"] = ref.mode_frequency;
      j["oracle_radius"] = ref.kth_radius;
      j["match"] = ok;
      if (!ok) ++mismatches;
    });
  } else {
    Data2D data = get_points_2d(o);
    const auto queries = get_queries_2d(o);
    const Metric metric = parse_metric(o.metric, 2);
    Pipeline2D pipe(data.points, metric, build_options(o));
    rc = query_loop(2, o, queries.size(), [&](long i, json& j, QueryCounters& c) {
      j["q"] = {queries[i].q.x, queries[i].q.y};
      j["k"] = queries[i].k;
      const ChromaticAnswer a = pipe.query(queries[i].q, queries[i].k, &c);
      const OracleAnswer ref = oracle_chromatic(data.points, queries[i].q, queries[i].k, metric);
      const bool ok = a.freq == ref.mode_frequency && a.radius == ref.kth_radius;
      j.update(answer_json(a, data.color_names));
      j["oracle_freq"] = ref.mode_frequency;
      j["oracle_radius"] = ref.kth_radius;
      j["match"] = ok;
      if (!ok) ++mismatches;
    });
  }
  if (mismatches > 0) {
    std::cerr << mismatches << " mismatching queries\n";
    return 2;
  }
  return rc;
}

int run_bench(const Options& o) {
  using clock = std::chrono::steady_clock;
  OutSink sink(o.out_file);
  std::ostream& os = sink.stream();
  os << "dim,metric,n,queries,build_ms,mean_query_us,mean_probe_count,structure_nodes\n";
  std::vector<long> sweep = o.n_sweep;
  if (sweep.empty()) sweep.push_back(o.n);
  for (const long n : sweep) {
    Options run = o;
    run.n = n;
    const auto t0 = clock::now();
    double query_us = 0.0, probes = 0.0;
    long nq = 0, n_actual = 0, nodes = 0;
    double build_ms = 0.0;
    if (o.dim == 1) {
      Data1D data = get_points_1d(run);
      const auto queries = get_queries_1d(run);
      Pipeline1D pipe(std::move(data.points), build_options(run));
      n_actual = pipe.size();
      nodes = pipe.tree().node_count() + pipe.mode_table().block_count();
      build_ms = std::chrono::duration<double, std::milli>(clock::now() - t0).count();
      const auto q0 = clock::now();
      QueryCounters c;
      for (const auto& qr : queries) {
        pipe.query(qr.x, std::clamp(qr.k, 1L, pipe.size()), &c);
        ++nq;
      }
      query_us = std::chrono::duration<double, std::micro>(clock::now() - q0).count();
      probes = double(c.rank_comparisons + c.mode_scans);
    } else {
      Data2D data = get_points_2d(run);
      const auto queries = get_queries_2d(run);
      Pipeline2D pipe(std::move(data.points), parse_metric(o.metric, 2),
                      build_options(run));
      n_actual = pipe.size();
      nodes = pipe.cutting().leaf_count();
      build_ms = std::chrono::duration<double, std::milli>(clock::now() - t0).count();
      const auto q0 = clock::now();
      QueryCounters c;
      for (const auto& qr : queries) {
        pipe.query(qr.q, std::clamp(qr.k, 1L, pipe.size()), &c);
        ++nq;
      }
      query_us = std::chrono::duration<double, std::micro>(clock::now() - q0).count();
      probes = double(c.counting_calls + c.candidate_colors);
    }
    os << o.dim << ',' << o.metric << ',' << n_actual << ',' << nq << ',' << build_ms
       << ',' << (nq ? query_us / double(nq) : 0.0) << ','
       << (nq ? probes / double(nq) : 0.0) << ',' << nodes << "\n";
  }
  return 0;
}

int run_demo_reduction(const Options& o) {
  OutSink sink(o.out_file);
  std::ostream& os = sink.stream();
  const std::vector<Color> a = make_color_array(o.n, o.colors, o.seed);
  Pipeline1D pipe = pipeline_from_array(a, build_options(o));
  BlockModeTable direct(a);

  std::mt19937_64 rng(mix_seed(o.seed, 0xde));
  long mismatches = 0;
  long radius_calls = 0;
  for (long t = 0; t < o.nqueries; ++t) {
    long i = static_cast<long>(rng() % a.size());
    long j = static_cast<long>(rng() % a.size());
    if (i > j) std::swap(i, j);
    const ChromaticAnswer mode = array_mode_via_chromatic(pipe, i, j);
    const ModeAnswer want = direct.mode(i, j);
    const double q = (double(i) + double(j)) / 2.0;
    const double radius = (double(j) - double(i)) / 2.0;
    long calls = 0;
    const long count = pipe.count_in_ball(q, radius, &calls);
    radius_calls += calls;
    const bool ok = mode.freq == want.freq && count == j - i + 1;
    json rec;
    rec["i"] = i;
    rec["j"] = j;
    rec["mode_color"] = mode.color;
    rec["mode_freq"] = mode.freq;
    rec["range_count"] = count;
    rec["match"] = ok;
    os << rec.dump() << "\n";
    if (!ok) ++mismatches;
  }
  json s;
  s["summary"] = true;
  s["ranges"] = o.nqueries;
  s["mismatches"] = mismatches;
  s["mean_radius_calls"] = o.nqueries ? double(radius_calls) / double(o.nqueries) : 0.0;
  os << s.dump() << "\n";
  return mismatches == 0 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Chromatic k-nearest-neighbor queries: the most frequent color among the k "
      "points nearest a query, answered exactly through range finding plus range "
      "mode structures"};
  app.require_subcommand(1);
  Options o;

  CLI::App* build = app.add_subcommand("build", "Build the structures and print stats");
  add_data_flags(build, o);
  build->add_option("--out", o.out_file, "Write output to a file");

  CLI::App* query = app.add_subcommand("query", "Answer chromatic k-NN queries");
  add_data_flags(query, o);
  add_query_flags(query, o);
  query->add_flag("--verify", o.cross_check, "Cross-check answers against a full scan");
  query->add_option("--out", o.out_file, "Write output to a file");

  CLI::App* verify =
      app.add_subcommand("verify", "Answer queries and cross-check a brute-force scan");
  add_data_flags(verify, o);
  add_query_flags(verify, o);
  verify->add_option("--out", o.out_file, "Write output to a file");

  CLI::App* bench = app.add_subcommand("bench", "Measure build and query times");
  add_data_flags(bench, o, /*n_list=*/true);
  add_query_flags(bench, o);
  bench->add_option("--out", o.out_file, "Write output to a file");

  CLI::App* demo = app.add_subcommand(
      "demo-reduction",
      "Solve array range mode and range counting through chromatic queries");
  add_data_flags(demo, o);
  demo->add_option("--ranges", o.nqueries, "Number of random ranges")
      ->check(CLI::NonNegativeNumber);
  demo->add_option("--out", o.out_file, "Write output to a file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (build->parsed()) return run_build(o);
    if (query->parsed()) return o.cross_check ? run_verify(o) : run_query(o);
    if (verify->parsed()) return run_verify(o);
    if (bench->parsed()) return run_bench(o);
    if (demo->parsed()) return run_demo_reduction(o);
  } catch (const std::exception& e) {
    json err;
    err["error"] = e.what();
    std::cerr << err.dump() << "\n";
    return 1;
  }
  return 0;
}
