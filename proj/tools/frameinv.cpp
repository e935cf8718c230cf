// Command line front end: bench, reconstruct, localization, bounds.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "frameinv/frameinv.hpp"

namespace fi = frameinv;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_runtime = 1;
constexpr int exit_config = 2;
constexpr int exit_partial = 3;

struct GlobalOptions {
  std::vector<std::uint64_t> seeds;
  std::optional<double> tol;
  std::string out;
  std::string format = "csv";
};

std::filesystem::path default_output(const std::string& name) {
  const char* dir = std::getenv("FRAMEINV_OUT_DIR");
  return std::filesystem::path(dir && *dir ? dir : "results") / name;
}

std::vector<fi::Method> parse_methods(const std::vector<std::string>& names) {
  std::vector<fi::Method> out;
  for (const auto& s : names) out.push_back(fi::parse_method(s));
  return out;
}

// Writes text to --out when given, else to stdout.
void deliver(const GlobalOptions& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
    return;
  }
  std::filesystem::path p(g.out);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out || !(out << text)) throw fi::Error("cannot write " + p.string());
}

struct BenchArgs {
  int example = 0;
  std::string config_path;
  std::string function;
  std::vector<int> n_list;
  std::vector<std::string> methods;
  std::optional<double> m_factor;
  std::optional<int> workers;
  bool no_pointwise = false;
};

int run_bench(const GlobalOptions& g, const BenchArgs& a) {
  fi::BenchConfig c = a.example ? fi::example_config(a.example) : fi::BenchConfig{};
  if (!a.config_path.empty()) {
    std::ifstream in(a.config_path);
    if (!in) throw fi::DomainError("cannot read config " + a.config_path);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw fi::DomainError("config " + a.config_path + ": " + e.what());
    }
    c = fi::config_from_json(j, c);
  }
  if (!a.function.empty()) c.function = a.function;
  if (!a.n_list.empty()) c.n_list = a.n_list;
  if (!a.methods.empty()) c.methods = parse_methods(a.methods);
  if (a.m_factor) {
    c.m_rule.kind = fi::MRuleConfig::Kind::factor;
    c.m_rule.factor = *a.m_factor;
  }
  if (a.workers) c.workers = *a.workers;
  if (a.no_pointwise) c.pointwise_dumps = false;
  if (!g.seeds.empty()) c.seeds = g.seeds;
  if (g.tol) c.tol = *g.tol;
  c.format = g.format;
  if (!g.out.empty()) c.output = g.out;
  fi::validate(c);

  std::filesystem::path out = c.output.empty()
                                  ? default_output((a.example ? "example" + std::to_string(a.example) : "bench") +
                                                   (c.format == "json" ? ".json" : ".csv"))
                                  : std::filesystem::path(c.output);
  const fi::BenchTable table = fi::run_benchmark(c);
  const auto files = fi::emit(table, fi::parse_output_format(c.format), out);

  std::cout << fi::aggregate_csv_header << '\n';
  for (const auto& row : table.aggregates) std::cout << fi::csv_row(row) << '\n';
  for (const auto& f : files) std::cerr << "wrote " << f.string() << '\n';
  std::size_t failures = 0;
  for (const auto& r : table.rows)
    if (r.failed) {
      ++failures;
      std::cerr << "row failed: " << fi::to_string(r.result.method) << " n=" << r.result.n << " seed=" << r.result.seed
                << ": " << r.failure << '\n';
    }
  return failures ? exit_partial : exit_ok;
}

struct ReconstructArgs {
  std::string method = "new";
  std::string function = "gaussian";
  int n = 16;
  std::optional<int> m;
  double m_factor = 1.4;
  double delta = fi::kadec_bound;
  int grid = 1024;
};

int run_reconstruct(const GlobalOptions& g, const ReconstructArgs& a) {
  const fi::Method method = fi::parse_method(a.method);
  const fi::TargetFunction f = fi::test_function(a.function);
  fi::detail::require(a.n > 0, "n must be positive");
  const int m = method == fi::Method::fourier ? a.n : a.m.value_or(static_cast<int>(std::ceil(a.m_factor * a.n - 1e-9)));
  fi::detail::require(m >= a.n, "m must be at least n");
  fi::ReconstructionOptions opt;
  if (g.tol) opt.tol = *g.tol;
  opt.grid_size = a.grid;
  const std::vector<std::uint64_t> seeds = g.seeds.empty() ? std::vector<std::uint64_t>{1} : g.seeds;

  std::vector<fi::BenchRow> rows;
  for (std::uint64_t seed : seeds) {
    fi::BenchRow row;
    row.result = fi::reconstruct(method, f, fi::make_frame(fi::FrameKind::jittered_fourier, m, a.delta, seed), a.n, m, opt);
    row.result.seed = seed;
    row.failed = !row.result.converged;
    rows.push_back(std::move(row));
  }

  std::ostringstream text;
  if (g.format == "json") {
    fi::BenchTable t;
    t.rows = rows;
    text << nlohmann::json(fi::to_json(t)["rows"]).dump(2) << '\n';
  } else {
    text << fi::csv_header << '\n';
    for (const auto& r : rows) text << fi::csv_row(r) << '\n';
  }
  deliver(g, text.str());
  for (const auto& r : rows)
    if (r.failed) return exit_partial;
  return exit_ok;
}

struct LocalizationArgs {
  int n = 128;
  std::optional<int> m;
  double delta = fi::kadec_bound;
  std::string against = "basis";
};

int run_localization(const GlobalOptions& g, const LocalizationArgs& a) {
  fi::detail::require(a.against == "basis" || a.against == "self", "--against must be 'basis' or 'self'");
  const int m = a.m.value_or(a.n);
  const std::vector<std::uint64_t> seeds = g.seeds.empty() ? std::vector<std::uint64_t>{1} : g.seeds;
  nlohmann::json arr = nlohmann::json::array();
  std::ostringstream csv;
  csv << "seed,c,s,residual,saturated\n";
  for (std::uint64_t seed : seeds) {
    const auto frame = fi::make_frame(fi::FrameKind::jittered_fourier, m, a.delta, seed);
    const auto other = a.against == "basis" ? fi::integer_basis(a.n) : frame;
    const auto fit = fi::estimate_localization(fi::gram(frame, other, m, a.n));
    arr.push_back({{"seed", seed}, {"c", fit.c}, {"s", fit.saturated ? nlohmann::json(nullptr) : nlohmann::json(fit.s)},
                   {"residual", fit.residual}, {"saturated", fit.saturated}});
    csv << seed << ',' << fi::detail::fmt_sci(fit.c) << ',' << fi::detail::fmt_sci(fit.s) << ','
        << fi::detail::fmt_sci(fit.residual) << ',' << (fit.saturated ? "true" : "false") << '\n';
  }
  deliver(g, g.format == "json" ? arr.dump(2) + "\n" : csv.str());
  return exit_ok;
}

struct BoundsArgs {
  int probe = 512;
  int n = 0;
  double delta = fi::kadec_bound;
};

int run_bounds(const GlobalOptions& g, const BoundsArgs& a) {
  const std::vector<std::uint64_t> seeds = g.seeds.empty() ? std::vector<std::uint64_t>{1} : g.seeds;
  nlohmann::json arr = nlohmann::json::array();
  std::ostringstream csv;
  csv << "seed,probe,A,B\n";
  for (std::uint64_t seed : seeds) {
    const auto b = fi::estimate_frame_bounds(fi::make_frame(fi::FrameKind::jittered_fourier, a.probe, a.delta, seed),
                                             a.probe, a.n);
    arr.push_back({{"seed", seed}, {"probe", a.probe}, {"A", b.A}, {"B", b.B}});
    csv << seed << ',' << a.probe << ',' << fi::detail::fmt_sci(b.A) << ',' << fi::detail::fmt_sci(b.B) << '\n';
  }
  deliver(g, g.format == "json" ? arr.dump(2) + "\n" : csv.str());
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Frame inversion benchmarks for jittered Fourier data", "frameinv"};
  app.set_version_flag("--version", std::string(fi::version));
  app.require_subcommand(1);

  GlobalOptions g;
  double tol = 0.0;
  app.add_option("--seed-list", g.seeds, "Comma-separated jitter seeds")->delimiter(',');
  auto* tol_opt = app.add_option("--tol", tol, "Relative residual tolerance")->check(CLI::PositiveNumber);
  app.add_option("--out", g.out, "Output path (bench defaults to $FRAMEINV_OUT_DIR or ./results)");
  app.add_option("--format", g.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Run a benchmark grid and write result tables");
  bench_cmd->add_option("--example", bench.example, "Preset 1, 2 or 3")->check(CLI::Range(1, 3));
  bench_cmd->add_option("--config", bench.config_path, "JSON configuration file");
  bench_cmd->add_option("--function", bench.function, "Target function");
  bench_cmd->add_option("--n", bench.n_list, "Comma-separated half widths")->delimiter(',');
  bench_cmd->add_option("--methods", bench.methods, "Comma-separated methods")->delimiter(',');
  bench_cmd->add_option("--m-factor", bench.m_factor, "Use m = ceil(factor n)");
  bench_cmd->add_option("--workers", bench.workers, "Worker threads (0 = hardware)");
  bench_cmd->add_flag("--no-pointwise", bench.no_pointwise, "Skip pointwise error dumps");

  ReconstructArgs rec;
  auto* rec_cmd = app.add_subcommand("reconstruct", "Reconstruct one target and print the result row");
  rec_cmd->add_option("--method", rec.method, "new, cc, finite-section or fourier");
  rec_cmd->add_option("--function", rec.function, "gaussian, cospoly or bump6");
  rec_cmd->add_option("--n", rec.n, "Reconstruction half width");
  rec_cmd->add_option("--m", rec.m, "Sample half width");
  rec_cmd->add_option("--m-factor", rec.m_factor, "Use m = ceil(factor n) when --m is absent");
  rec_cmd->add_option("--delta", rec.delta, "Jitter half width");
  rec_cmd->add_option("--grid", rec.grid, "Error grid size");

  LocalizationArgs loc;
  auto* loc_cmd = app.add_subcommand("localization", "Fit the off-diagonal decay of a cross Gram matrix");
  loc_cmd->add_option("--n", loc.n, "Column half width");
  loc_cmd->add_option("--m", loc.m, "Row (jittered frame) half width, default n");
  loc_cmd->add_option("--delta", loc.delta, "Jitter half width");
  loc_cmd->add_option("--against", loc.against, "basis or self");

  BoundsArgs bnd;
  auto* bnd_cmd = app.add_subcommand("bounds", "Estimate frame bounds of a jittered frame");
  bnd_cmd->add_option("--probe", bnd.probe, "Probe half width");
  bnd_cmd->add_option("--n", bnd.n, "Largest reconstruction half width of interest");
  bnd_cmd->add_option("--delta", bnd.delta, "Jitter half width");

  for (auto* sub : {bench_cmd, rec_cmd, loc_cmd, bnd_cmd}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_config;
  }
  if (*tol_opt) g.tol = tol;

  try {
    if (*bench_cmd) return run_bench(g, bench);
    if (*rec_cmd) return run_reconstruct(g, rec);
    if (*loc_cmd) return run_localization(g, loc);
    if (*bnd_cmd) return run_bounds(g, bnd);
  } catch (const fi::DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_config;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_runtime;
  }
  return exit_ok;
}
