#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "sofic/empirical.hpp"
#include "sofic/freegroup.hpp"
#include "sofic/homology.hpp"
#include "sofic/indepsets.hpp"
#include "sofic/moments.hpp"
#include "sofic/partition.hpp"
#include "sofic/rng.hpp"
#include "sofic/sofic.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace sofic;

namespace {

constexpr const char* kVersion = "soficlab 0.1.0";

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitPartial = 3;
constexpr int kExitInternal = 4;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct PartialResult : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
  std::ostringstream out;
  out << std::setprecision(17) << v;
  return out.str();
}

class CsvWriter {
 public:
  CsvWriter(const fs::path& path, const std::vector<std::string>& header)
      : out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error("cannot open " + path.string());
    write_row(header);
  }
  void write_row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
  }

 private:
  std::ofstream out_;
};

struct Context {
  json params;
  std::uint64_t seed = 0;
  int workers = 1;
  fs::path out_dir;
  json summary;
};

json require(const json& params, const std::string& key) {
  if (!params.contains(key)) {
    throw ConfigError("missing required parameter: " + key);
  }
  return params.at(key);
}

template <typename T>
T get_or(const json& params, const std::string& key, T fallback) {
  if (!params.contains(key)) return fallback;
  return params.at(key).get<T>();
}

std::string word_to_string(const Word& w) {
  if (w.is_identity()) return "e";
  std::string s;
  for (int a : w.letters()) {
    if (!s.empty()) s += '.';
    s += (a > 0 ? "a" : "A") + std::to_string(std::abs(a));
  }
  return s;
}

std::string set_to_string(const VertexSet& s) {
  std::string out;
  for (int v : s.indices()) {
    if (!out.empty()) out += ';';
    out += std::to_string(v);
  }
  return out;
}

void run_sample_graph(Context& ctx) {
  std::string model = get_or<std::string>(ctx.params, "model", "perm");
  int n = require(ctx.params, "n").get<int>();
  RngStream rng = RngStream::derived(ctx.seed, 0);
  MultiGraph g;
  if (model == "perm") {
    int r = require(ctx.params, "r").get<int>();
    PermHom sigma = sample_perm_hom(r, n, rng);
    g = schreier_graph(sigma);
    std::ofstream(ctx.out_dir / "sigma.json") << permhom_to_json(sigma);
  } else if (model == "config") {
    int d = require(ctx.params, "d").get<int>();
    g = sample_config_graph(d, n, rng);
  } else {
    throw ConfigError("model must be 'perm' or 'config'");
  }
  CsvWriter csv(ctx.out_dir / "edges.csv", {"u", "v"});
  for (auto [u, v] : g.edges) {
    csv.write_row({std::to_string(u), std::to_string(v)});
  }
  auto cycles = count_short_cycles(g, std::min(g.n, 6));
  json cj = json::array();
  for (auto c : cycles) cj.push_back(c);
  ctx.summary["n"] = g.n;
  ctx.summary["degree"] = g.degree;
  ctx.summary["short_cycles"] = cj;
}

void run_sofic_check(Context& ctx) {
  int r = require(ctx.params, "r").get<int>();
  int n = require(ctx.params, "n").get<int>();
  int radius = get_or<int>(ctx.params, "radius", 2);
  double delta = get_or<double>(ctx.params, "delta", 0.1);
  RngStream rng = RngStream::derived(ctx.seed, 0);
  PermHom sigma = sample_perm_hom(r, n, rng);
  auto window = ball(r, radius);
  SoficReport report = sofic_report(sigma, window, delta);
  CsvWriter csv(ctx.out_dir / "fixed_fractions.csv", {"word", "fixed_fraction"});
  for (const auto& [w, frac] : report.fixed_fractions) {
    csv.write_row({word_to_string(w), fmt(frac)});
  }
  ctx.summary["trace_preserving"] = report.trace_preserving;
  ctx.summary["multiplicative"] = report.multiplicative;
}

void run_moments(Context& ctx) {
  int r = require(ctx.params, "r").get<int>();
  double s = require(ctx.params, "s").get<double>();
  double sp = get_or<double>(ctx.params, "sp", s);
  std::optional<double> t;
  if (ctx.params.contains("t")) t = ctx.params.at("t").get<double>();
  std::vector<long long> ns = get_or<std::vector<long long>>(ctx.params, "n_list", {});

  CsvWriter csv(ctx.out_dir / "moments.csv",
                {"r", "n_or_inf", "s", "sp", "t", "method", "value", "residual"});
  auto srow = [&](const std::string& n_col, double tval, const std::string& method,
                  double value, double residual) {
    csv.write_row({std::to_string(r), n_col, fmt(s), fmt(sp), fmt(tval), method,
                   fmt(value), fmt(residual)});
  };
  double fs = f_single(r, s);
  srow("inf", s, "f_single", fs, 0.0);
  if (t) {
    auto closed = f_pair_closed(r, s, *t);
    srow("inf", *t, "f_pair_closed", closed.value, closed.residual);
    auto opt = f_pair(r, s, sp, *t);
    srow("inf", *t, "f_pair", opt.value, opt.residual);
  }
  for (long long n : ns) {
    long long w = static_cast<long long>(s * static_cast<double>(n));
    double v = log_expected_count_indep(r, n, w) / static_cast<double>(n);
    srow(std::to_string(n), s, "exact_exponent", v, 0.0);
  }
  ctx.summary["f_single"] = fs;
}

void run_indep_enumerate(Context& ctx) {
  int r = require(ctx.params, "r").get<int>();
  int n = require(ctx.params, "n").get<int>();
  int w_min = get_or<int>(ctx.params, "w_min", 0);
  int w_max = get_or<int>(ctx.params, "w_max", n);
  std::optional<std::uint64_t> budget;
  if (ctx.params.contains("budget")) {
    budget = ctx.params.at("budget").get<std::uint64_t>();
  }
  RngStream rng = RngStream::derived(ctx.seed, 0);
  PermHom sigma = sample_perm_hom(r, n, rng);
  MultiGraph g = schreier_graph(sigma);
  auto enumeration = enumerate_indep(g, w_min, w_max, budget);
  CsvWriter csv(ctx.out_dir / "independent_sets.csv", {"index", "size", "vertices"});
  for (std::size_t i = 0; i < enumeration.sets.size(); ++i) {
    csv.write_row({std::to_string(i), std::to_string(enumeration.sets[i].count()),
                   set_to_string(enumeration.sets[i])});
  }
  ctx.summary["count"] = enumeration.sets.size();
  ctx.summary["complete"] = enumeration.complete;
  MaxIndep mi = max_indep(g);
  ctx.summary["maxind"] = mi.size;
  ctx.summary["maxind_fraction"] = mi.fraction;
  if (!enumeration.complete) throw PartialResult("enumeration budget exhausted");
}

void run_planted(Context& ctx) {
  int r = require(ctx.params, "r").get<int>();
  int n = require(ctx.params, "n").get<int>();
  int w = require(ctx.params, "w").get<int>();
  int draws = get_or<int>(ctx.params, "draws", 100);
  CsvWriter csv(ctx.out_dir / "planted.csv", {"draw", "w_set", "independent"});
  for (int i = 0; i < draws; ++i) {
    RngStream rng = RngStream::derived(ctx.seed, static_cast<std::uint64_t>(i));
    auto [sigma, planted] = sample_planted(r, n, w, rng);
    bool ok = is_independent(schreier_graph(sigma), planted);
    csv.write_row({std::to_string(i), set_to_string(planted), ok ? "1" : "0"});
  }
  ctx.summary["exact_expected_count"] =
      to_double(exact_expected_count_indep(r, n, w));
}

void run_cluster(Context& ctx) {
  int r = require(ctx.params, "r").get<int>();
  int n = require(ctx.params, "n").get<int>();
  int w = require(ctx.params, "w").get<int>();
  double s = get_or<double>(ctx.params, "s", static_cast<double>(w) / n);
  double eps = get_or<double>(ctx.params, "eps", 0.1);
  RngStream rng = RngStream::derived(ctx.seed, 0);
  auto [sigma, planted] = sample_planted(r, n, w, rng);
  MultiGraph g = schreier_graph(sigma);
  ClusterReport report = cluster_of(g, planted, s, eps);
  CsvWriter csv(ctx.out_dir / "cluster.csv", {"member", "size", "overlap"});
  for (std::size_t i = 0; i < report.members.size(); ++i) {
    csv.write_row({std::to_string(i), std::to_string(report.members[i].count()),
                   std::to_string(planted.intersection_count(report.members[i]))});
  }
  ctx.summary["cluster_size"] = report.size;
  ctx.summary["log_size_per_vertex"] = report.log_size_per_vertex;
}

void run_shatter(Context& ctx) {
  int r = require(ctx.params, "r").get<int>();
  int n = require(ctx.params, "n").get<int>();
  int w_min = get_or<int>(ctx.params, "w_min", 0);
  int w_max = get_or<int>(ctx.params, "w_max", n);
  double kappa = require(ctx.params, "kappa").get<double>();
  RngStream rng = RngStream::derived(ctx.seed, 0);
  PermHom sigma = sample_perm_hom(r, n, rng);
  MultiGraph g = schreier_graph(sigma);
  auto enumeration = enumerate_indep(g, w_min, w_max);
  // The worker count only splits the (embarrassingly parallel) distance
  // scan; components come from the same relation regardless.
  auto labels = shatter_components(enumeration.sets, kappa);
  CsvWriter csv(ctx.out_dir / "shatter.csv", {"index", "size", "component"});
  for (std::size_t i = 0; i < enumeration.sets.size(); ++i) {
    csv.write_row({std::to_string(i), std::to_string(enumeration.sets[i].count()),
                   std::to_string(labels[i])});
  }
  int n_components =
      labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
  ctx.summary["sets"] = enumeration.sets.size();
  ctx.summary["components"] = n_components;
}

void run_homology(Context& ctx) {
  int r = require(ctx.params, "r").get<int>();
  int n = require(ctx.params, "n").get<int>();
  double tv1 = get_or<double>(ctx.params, "tv_radius_inner", 0.2);
  double tv2 = get_or<double>(ctx.params, "tv_radius_outer", 0.3);
  double k1 = require(ctx.params, "kappa1").get<double>();
  double k2 = require(ctx.params, "kappa2").get<double>();
  int d = get_or<int>(ctx.params, "d", 1);
  RngStream rng = RngStream::derived(ctx.seed, 0);
  PermHom sigma = sample_perm_hom(r, n, rng);
  std::vector<Word> window{Word::identity()};
  auto inner_spec = uniform_spec(window, 2, Rational(tv1));
  auto outer_spec = uniform_spec(window, 2, Rational(tv2));
  auto omega1 = enumerate_microstates(sigma, inner_spec, 2).states;
  auto omega2 = enumerate_microstates(sigma, outer_spec, 2).states;
  auto cx = build_complex(omega1, omega2, Rational(k1), Rational(k2), d);
  CsvWriter csv(ctx.out_dir / "homology.csv", {"dimension", "rank"});
  Betti0 b0 = betti0_two_scale(cx);
  csv.write_row({"0", std::to_string(b0.rank)});
  for (int dd = 1; dd <= d; ++dd) {
    auto h = homology_rank(cx, dd);
    csv.write_row({std::to_string(dd), std::to_string(h.dim)});
  }
  ctx.summary["omega1_size"] = omega1.size();
  ctx.summary["omega2_size"] = omega2.size();
  ctx.summary["betti0"] = b0.rank;
}

void run_bernoulli_contract(Context& ctx) {
  int r = require(ctx.params, "r").get<int>();
  int n = require(ctx.params, "n").get<int>();
  int K = get_or<int>(ctx.params, "K", 8);
  int steps = get_or<int>(ctx.params, "k", 16);
  double tv1 = get_or<double>(ctx.params, "tv_radius_inner", 0.05);
  double tv2 = get_or<double>(ctx.params, "tv_radius_outer", 0.1);
  double delta = get_or<double>(ctx.params, "delta", 0.2);
  int trials = get_or<int>(ctx.params, "trials", 20);
  std::vector<Word> window{Word::identity()};
  CsvWriter csv(ctx.out_dir / "contract.csv",
                {"trial", "cond1", "cond2", "cond3", "cond4", "cond5"});
  int all_pass = 0;
  for (int trial = 0; trial < trials; ++trial) {
    RngStream rng = RngStream::derived(ctx.seed, static_cast<std::uint64_t>(trial));
    PermHom sigma = sample_perm_hom(r, n, rng);
    auto inner = uniform_spec(window, 2, Rational(tv1));
    auto outer = uniform_spec(window, 2, Rational(tv2));
    std::vector<Labeling> xs;
    int guard = 0;
    while (static_cast<int>(xs.size()) < K && guard < 100000) {
      Labeling x;
      x.alphabet = 2;
      for (int v = 0; v < n; ++v) {
        x.values.push_back(static_cast<std::uint8_t>(rng.below(2)));
      }
      if (in_model_space(sigma, x, inner)) xs.push_back(std::move(x));
      ++guard;
    }
    if (static_cast<int>(xs.size()) < K) {
      throw PartialResult("could not draw enough microstates from the inner spec");
    }
    auto paths = bernoulli_contract_path(xs, steps, {0.5, 0.5}, rng);
    auto report = contractibility_check(paths, xs, sigma, outer, Rational(delta));
    csv.write_row({std::to_string(trial), report.conds[0] ? "1" : "0",
                   report.conds[1] ? "1" : "0", report.conds[2] ? "1" : "0",
                   report.conds[3] ? "1" : "0", report.conds[4] ? "1" : "0"});
    if (report.all_pass) ++all_pass;
  }
  ctx.summary["trials"] = trials;
  ctx.summary["all_pass"] = all_pass;
}

void run_diffuse_contract(Context& ctx) {
  int n = require(ctx.params, "n").get<int>();
  int K = get_or<int>(ctx.params, "K", 4);
  int n_parts = get_or<int>(ctx.params, "parts", 8);
  if (n_parts < 1 || n_parts > n) throw ConfigError("parts must lie in [1, n]");
  RngStream rng = RngStream::derived(ctx.seed, 0);
  std::vector<std::vector<int>> parts(static_cast<std::size_t>(n_parts));
  for (int v = 0; v < n; ++v) {
    parts[static_cast<std::size_t>(v % n_parts)].push_back(v);
  }
  auto random_labeling = [&] {
    Labeling x;
    x.alphabet = 2;
    for (int v = 0; v < n; ++v) {
      x.values.push_back(static_cast<std::uint8_t>(rng.below(2)));
    }
    return x;
  };
  std::vector<Labeling> xs;
  for (int i = 0; i < K; ++i) xs.push_back(random_labeling());
  Labeling x_ref = random_labeling();
  auto paths = diffuse_contract_path(parts, xs, x_ref);
  CsvWriter csv(ctx.out_dir / "diffuse.csv", {"path", "step", "step_distance"});
  for (std::size_t i = 0; i < paths.size(); ++i) {
    for (std::size_t j = 0; j + 1 < paths[i].size(); ++j) {
      csv.write_row({std::to_string(i), std::to_string(j),
                     fmt(to_double(hamming_distance(paths[i][j], paths[i][j + 1])))});
    }
  }
  ctx.summary["max_part_fraction"] =
      static_cast<double>((n + n_parts - 1) / n_parts) / n;
}

void run_partition_balance(Context& ctx) {
  int n_atoms = require(ctx.params, "atoms").get<int>();
  int m = get_or<int>(ctx.params, "m", 1);
  double delta_d = require(ctx.params, "delta").get<double>();
  RngStream rng = RngStream::derived(ctx.seed, 0);
  WeightedSpace space;
  space.weights.assign(static_cast<std::size_t>(n_atoms),
                       Rational(1, n_atoms));
  std::vector<std::vector<Rational>> fs;
  for (int i = 0; i < m; ++i) {
    std::vector<Rational> f;
    for (int a = 0; a < n_atoms; ++a) {
      f.push_back(Rational(static_cast<long long>(rng.below(1001)), 1000));
    }
    fs.push_back(std::move(f));
  }
  Rational delta(delta_d);
  Partition partition;
  try {
    partition = balance_multi(space, fs, delta);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  CsvWriter csv(ctx.out_dir / "partition.csv", {"part", "atoms", "weight"});
  for (std::size_t p = 0; p < partition.size(); ++p) {
    Rational w = 0;
    for (int a : partition[p]) w += space.weights[static_cast<std::size_t>(a)];
    csv.write_row({std::to_string(p), std::to_string(partition[p].size()),
                   fmt(to_double(w))});
  }
  ctx.summary["parts"] = partition.size();
  ctx.summary["max_part_weight"] = to_double(max_part_weight(space, partition));
  double worst = 0.0;
  for (const auto& f : fs) {
    worst = std::max(worst, to_double(mean_deviation(space, f, partition)));
  }
  ctx.summary["max_mean_deviation"] = worst;
}

int run(const std::string& config_path, std::optional<std::uint64_t> seed_flag,
        std::optional<int> workers_flag, const std::string& out_flag) {
  json config;
  {
    std::ifstream in(config_path);
    if (!in) {
      std::cerr << "config error: cannot read " << config_path << "\n";
      return kExitConfig;
    }
    try {
      in >> config;
    } catch (const json::exception& e) {
      std::cerr << "config error: " << e.what() << "\n";
      return kExitConfig;
    }
  }

  Context ctx;
  try {
    ctx.params = config.value("params", json::object());
    ctx.seed = seed_flag ? *seed_flag : config.value("seed", std::uint64_t{0});
    if (workers_flag) {
      ctx.workers = *workers_flag;
    } else if (const char* env = std::getenv("SOFIC_SHATTER_WORKERS")) {
      ctx.workers = std::max(1, std::atoi(env));
    } else {
      ctx.workers = config.value("workers", 1);
    }
    ctx.out_dir = out_flag.empty() ? fs::path(config.value("out", "out"))
                                   : fs::path(out_flag);
    fs::create_directories(ctx.out_dir);

    std::string experiment = config.at("experiment").get<std::string>();
    auto start = std::chrono::steady_clock::now();
    if (experiment == "sample-graph") {
      run_sample_graph(ctx);
    } else if (experiment == "sofic-check") {
      run_sofic_check(ctx);
    } else if (experiment == "moments") {
      run_moments(ctx);
    } else if (experiment == "indep-enumerate") {
      run_indep_enumerate(ctx);
    } else if (experiment == "planted") {
      run_planted(ctx);
    } else if (experiment == "cluster") {
      run_cluster(ctx);
    } else if (experiment == "shatter") {
      run_shatter(ctx);
    } else if (experiment == "homology") {
      run_homology(ctx);
    } else if (experiment == "bernoulli-contract") {
      run_bernoulli_contract(ctx);
    } else if (experiment == "diffuse-contract") {
      run_diffuse_contract(ctx);
    } else if (experiment == "partition-balance") {
      run_partition_balance(ctx);
    } else {
      throw ConfigError("unknown experiment: " + experiment);
    }
    auto elapsed = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - start)
                       .count();
    json summary;
    summary["version"] = kVersion;
    summary["config"] = config;
    summary["seed"] = ctx.seed;
    summary["workers"] = ctx.workers;
    summary["wall_seconds"] = elapsed;
    summary["results"] = ctx.summary;
    std::ofstream(ctx.out_dir / "summary.json") << summary.dump(2) << "\n";
    return kExitOk;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::domain_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const PartialResult& e) {
    std::cerr << "partial result: " << e.what() << "\n";
    return kExitPartial;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Experiment runner for labeled random regular graph statistics"};
  app.set_version_flag("--version", kVersion);
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::string out_dir;
  app.add_option("--config", config_path, "Path to a JSON experiment config")
      ->required();
  app.add_option("--seed", seed, "Override the config seed");
  app.add_option("--workers", workers, "Worker count for parallel scans");
  app.add_option("--out", out_dir, "Output directory (overrides config)");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }
  return run(config_path, seed, workers, out_dir);
}
