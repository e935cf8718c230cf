#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "frameinv/frame.hpp"
#include "frameinv/gram.hpp"
#include "frameinv/reconstruct.hpp"
#include "frameinv/solvers.hpp"
#include "frameinv/theory.hpp"

namespace frameinv {

inline constexpr std::string_view version = "0.1.0";

/// How m follows from n: a fixed factor (m = ceil(factor n)) or one of the choose_m rules.
struct MRuleConfig {
  enum class Kind { factor, choose };
  Kind kind = Kind::factor;
  double factor = 1.4;
  MRule rule = MRule::reconstruction;
  /// Formula parameters; A is replaced by the numeric lower frame bound when numeric_A is set.
  ChooseMParams params;
  bool numeric_A = true;

  bool uses_frame_bounds() const { return kind == Kind::choose && numeric_A; }
};

struct BenchConfig {
  std::string function = "gaussian";
  std::vector<int> n_list{16, 32, 64, 128, 256};
  MRuleConfig m_rule;
  std::vector<Method> methods{Method::cc, Method::new_method, Method::fourier};
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  double delta = kadec_bound;
  int quadrature_min_panels = default_min_panels;
  int quadrature_order = default_quadrature_order;
  double tol = default_tolerance;
  int max_iter = default_max_iterations;
  int grid_size = 1024;
  // Not part of the semantic configuration:
  bool pointwise_dumps = true;
  int workers = 0;
  std::string output;
  std::string format = "csv";
};

inline void validate(const BenchConfig& c) {
  test_function(c.function);
  detail::require(!c.n_list.empty(), "config: n list must not be empty");
  for (int n : c.n_list) detail::require(n > 0, "config: every n must be positive");
  detail::require(!c.seeds.empty(), "config: seed list must not be empty");
  detail::require(c.tol > 0.0, "config: tolerance must be positive");
  detail::require(c.max_iter > 0, "config: max_iter must be positive");
  detail::require(c.delta >= 0.0 && c.delta <= kadec_bound, "config: delta must lie in [0, 1/4]");
  detail::require(c.grid_size >= 2, "config: grid size must be at least 2");
  detail::require(c.quadrature_min_panels >= 1 && c.quadrature_order >= 2, "config: invalid quadrature");
  detail::require(c.workers >= 0, "config: workers must be nonnegative");
  detail::require(c.format == "csv" || c.format == "json", "config: format must be csv or json");
  if (c.m_rule.kind == MRuleConfig::Kind::factor)
    detail::require(c.m_rule.factor >= 1.0, "config: m factor must be at least 1");
}

/// Presets reproducing the three experiments (gaussian m=1.4n, cospoly m=1.2n, bump6 m=1.4n).
/// The bump6 preset iterates to a 1e-9 relative residual; at 1e-5 the solver,
/// not the approximation, limits the error for that target.
inline BenchConfig example_config(int example) {
  BenchConfig c;
  switch (example) {
    case 1: c.function = "gaussian"; c.m_rule.factor = 1.4; break;
    case 2: c.function = "cospoly"; c.m_rule.factor = 1.2; break;
    case 3: c.function = "bump6"; c.m_rule.factor = 1.4; c.tol = 1e-9; break;
    default: throw DomainError("unknown example " + std::to_string(example) + " (valid: 1, 2, 3)");
  }
  return c;
}

// ---------------------------------------------------------------------------
// JSON configuration

inline nlohmann::json m_rule_to_json(const MRuleConfig& r) {
  if (r.kind == MRuleConfig::Kind::factor) return {{"kind", "factor"}, {"factor", r.factor}};
  nlohmann::json j{{"kind", "choose"},          {"rule", std::string(to_string(r.rule))},
                   {"c", r.params.c},           {"s", r.params.s},
                   {"alpha", r.params.alpha},   {"t", r.params.t},
                   {"numeric_A", r.numeric_A}};
  if (!r.numeric_A) j["A"] = r.params.A;
  return j;
}

/// Fields that determine the numbers; hashing this gives the config hash.
inline nlohmann::json semantic_json(const BenchConfig& c) {
  nlohmann::json methods = nlohmann::json::array();
  for (Method m : c.methods) methods.push_back(std::string(to_string(m)));
  return {{"function", c.function},
          {"n", c.n_list},
          {"m_rule", m_rule_to_json(c.m_rule)},
          {"methods", methods},
          {"seeds", c.seeds},
          {"delta", c.delta},
          {"quadrature", {{"min_panels", c.quadrature_min_panels}, {"order", c.quadrature_order}}},
          {"tol", c.tol},
          {"max_iter", c.max_iter},
          {"grid_size", c.grid_size}};
}

inline nlohmann::json to_json(const BenchConfig& c) {
  nlohmann::json j = semantic_json(c);
  j["pointwise_dumps"] = c.pointwise_dumps;
  j["workers"] = c.workers;
  j["output"] = c.output;
  j["format"] = c.format;
  return j;
}

/// Parses a configuration document; missing keys keep their defaults.
inline BenchConfig config_from_json(const nlohmann::json& j, BenchConfig c = {}) {
  static const std::vector<std::string> known{"function", "n",         "m_rule",    "methods",        "seeds",
                                              "delta",    "quadrature", "tol",      "max_iter",       "grid_size",
                                              "pointwise_dumps", "workers", "output", "format", "example"};
  detail::require(j.is_object(), "config: expected a JSON object");
  try {
    for (const auto& [key, _] : j.items())
      detail::require(std::find(known.begin(), known.end(), key) != known.end(), "config: unknown key '" + key + "'");
    if (j.contains("example")) c = example_config(j.at("example").get<int>());
    if (j.contains("function")) c.function = j.at("function").get<std::string>();
    if (j.contains("n")) c.n_list = j.at("n").get<std::vector<int>>();
    if (j.contains("m_rule")) {
      const auto& r = j.at("m_rule");
      const std::string kind = r.value("kind", "factor");
      if (kind == "factor") {
        c.m_rule.kind = MRuleConfig::Kind::factor;
        c.m_rule.factor = r.value("factor", c.m_rule.factor);
      } else if (kind == "choose") {
        c.m_rule.kind = MRuleConfig::Kind::choose;
        c.m_rule.rule = parse_m_rule(r.value("rule", std::string("reconstruction")));
        c.m_rule.params.c = r.value("c", c.m_rule.params.c);
        c.m_rule.params.s = r.value("s", c.m_rule.params.s);
        c.m_rule.params.alpha = r.value("alpha", c.m_rule.params.alpha);
        c.m_rule.params.t = r.value("t", c.m_rule.params.t);
        c.m_rule.numeric_A = !r.contains("A");
        if (r.contains("A")) c.m_rule.params.A = r.at("A").get<double>();
      } else {
        throw DomainError("config: m_rule kind must be 'factor' or 'choose'");
      }
    }
    if (j.contains("methods")) {
      c.methods.clear();
      for (const auto& m : j.at("methods")) c.methods.push_back(parse_method(m.get<std::string>()));
    }
    if (j.contains("seeds")) c.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    if (j.contains("delta")) c.delta = j.at("delta").get<double>();
    if (j.contains("quadrature")) {
      c.quadrature_min_panels = j.at("quadrature").value("min_panels", c.quadrature_min_panels);
      c.quadrature_order = j.at("quadrature").value("order", c.quadrature_order);
    }
    if (j.contains("tol")) c.tol = j.at("tol").get<double>();
    if (j.contains("max_iter")) c.max_iter = j.at("max_iter").get<int>();
    if (j.contains("grid_size")) c.grid_size = j.at("grid_size").get<int>();
    if (j.contains("pointwise_dumps")) c.pointwise_dumps = j.at("pointwise_dumps").get<bool>();
    if (j.contains("workers")) c.workers = j.at("workers").get<int>();
    if (j.contains("output")) c.output = j.at("output").get<std::string>();
    if (j.contains("format")) c.format = j.at("format").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("config: ") + e.what());
  }
  validate(c);
  return c;
}

/// 64-bit FNV-1a of the semantic configuration, as 16 hex digits.
inline std::string config_hash(const BenchConfig& c) {
  const std::string text = semantic_json(c).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// ---------------------------------------------------------------------------
// Running

struct BenchRow {
  ReconstructionResult result;
  bool failed = false;
  std::string failure;
};

struct AggregateRow {
  Method method = Method::new_method;
  int n = 0;
  int m = 0;
  std::size_t runs = 0;
  std::size_t failures = 0;
  double median_l2_error = 0.0;
  double min_l2_error = 0.0;
  double max_l2_error = 0.0;
  double median_max_pointwise_error = 0.0;
  double median_iterations = 0.0;
  double median_condition_number = 0.0;
  double median_wall_time_ms = 0.0;
};

struct Provenance {
  std::string config_hash;
  std::string library_version{version};
  std::string eigen_version;
  std::string rng{jitter_rng_name};
  std::string started_at;
  std::string finished_at;
};

struct BenchTable {
  BenchConfig config;
  std::vector<BenchRow> rows;
  std::vector<AggregateRow> aggregates;
  Provenance provenance;

  bool has_failures() const {
    return std::any_of(rows.begin(), rows.end(), [](const BenchRow& r) { return r.failed; });
  }
};

namespace detail {

inline std::string utc_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t k = v.size() / 2;
  return v.size() % 2 ? v[k] : 0.5 * (v[k - 1] + v[k]);
}

struct SeedContext {
  double A = 1.0;
};

}  // namespace detail

/// Sample half width m for size n under the configured rule.
inline int resolve_m(const BenchConfig& c, int n, std::uint64_t seed, double numeric_A) {
  if (c.m_rule.kind == MRuleConfig::Kind::factor)
    return static_cast<int>(std::ceil(c.m_rule.factor * n - 1e-9));
  ChooseMParams p = c.m_rule.params;
  if (c.m_rule.numeric_A) p.A = numeric_A;
  if (c.m_rule.rule == MRule::cc)
    p.lambda_min = gram_lambda_min(self_gram(make_frame(FrameKind::jittered_fourier, n, c.delta, seed), n));
  else
    p.lambda_min = gram_lambda_min(self_gram(integer_basis(n), n));
  return choose_m(c.m_rule.rule, n, p);
}

inline std::vector<AggregateRow> aggregate(const std::vector<BenchRow>& rows) {
  std::map<std::pair<Method, int>, std::vector<const BenchRow*>> groups;
  for (const auto& r : rows) groups[{r.result.method, r.result.n}].push_back(&r);
  std::vector<AggregateRow> out;
  for (const auto& [key, members] : groups) {
    AggregateRow a;
    a.method = key.first;
    a.n = key.second;
    a.runs = members.size();
    std::vector<double> l2, pw, it, cond, wall, ms;
    for (const BenchRow* r : members) {
      ms.push_back(r->result.m);
      if (r->failed) {
        ++a.failures;
        continue;
      }
      l2.push_back(r->result.l2_error);
      pw.push_back(r->result.max_pointwise_error);
      it.push_back(r->result.iterations);
      cond.push_back(r->result.condition_number);
      wall.push_back(r->result.wall_time.count());
    }
    a.m = static_cast<int>(std::lround(detail::median(ms)));
    a.median_l2_error = detail::median(l2);
    a.min_l2_error = l2.empty() ? NAN : *std::min_element(l2.begin(), l2.end());
    a.max_l2_error = l2.empty() ? NAN : *std::max_element(l2.begin(), l2.end());
    a.median_max_pointwise_error = detail::median(pw);
    a.median_iterations = detail::median(it);
    a.median_condition_number = detail::median(cond);
    a.median_wall_time_ms = detail::median(wall);
    out.push_back(a);
  }
  return out;
}

/// Runs method x n x seed, computing m per row, on a bounded worker pool.
/// Results do not depend on the worker count. Row failures are recorded in-row.
inline BenchTable run_benchmark(const BenchConfig& config) {
  validate(config);
  BenchTable table;
  table.config = config;
  table.provenance.config_hash = config_hash(config);
  table.provenance.eigen_version = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                                   "." + std::to_string(EIGEN_MINOR_VERSION);
  table.provenance.started_at = detail::utc_timestamp();

  const TargetFunction f = test_function(config.function);
  const int max_n = *std::max_element(config.n_list.begin(), config.n_list.end());

  struct Task {
    Method method;
    int n;
    std::uint64_t seed;
    bool keep_pointwise;
  };
  std::vector<Task> tasks;
  for (Method m : config.methods)
    for (int n : config.n_list)
      for (std::size_t s = 0; s < config.seeds.size(); ++s)
        tasks.push_back({m, n, config.seeds[s], config.pointwise_dumps && s == 0});

  // Numeric frame bounds per seed, only when the m rule needs them.
  std::map<std::uint64_t, double> seed_A;
  std::map<std::uint64_t, std::string> seed_failure;
  if (config.m_rule.uses_frame_bounds() && !config.methods.empty()) {
    for (std::uint64_t seed : config.seeds) {
      try {
        const int probe = 4 * max_n;
        seed_A[seed] =
            estimate_frame_bounds(make_frame(FrameKind::jittered_fourier, probe, config.delta, seed), probe, max_n).A;
      } catch (const std::exception& e) {
        seed_failure[seed] = e.what();
      }
    }
  }

  ReconstructionOptions opt;
  opt.tol = config.tol;
  opt.max_iter = config.max_iter;
  opt.quadrature_min_panels = config.quadrature_min_panels;
  opt.quadrature_order = config.quadrature_order;
  opt.grid_size = config.grid_size;

  table.rows.resize(tasks.size());
  auto run_task = [&](std::size_t i) {
    const Task& t = tasks[i];
    BenchRow& row = table.rows[i];
    row.result.method = t.method;
    row.result.n = t.n;
    row.result.seed = t.seed;
    row.result.l2_error = row.result.max_pointwise_error = row.result.condition_number =
        std::numeric_limits<double>::quiet_NaN();
    try {
      if (auto it = seed_failure.find(t.seed); it != seed_failure.end()) throw NumericalError(it->second);
      const int m = t.method == Method::fourier
                        ? t.n
                        : resolve_m(config, t.n, t.seed, config.m_rule.uses_frame_bounds() ? seed_A.at(t.seed) : 1.0);
      row.result.m = m;
      ReconstructionOptions o = opt;
      o.keep_pointwise = t.keep_pointwise;
      const FrameFamily frame = make_frame(FrameKind::jittered_fourier, m, config.delta, t.seed);
      row.result = reconstruct(t.method, f, frame, t.n, m, o);
      row.result.seed = t.seed;
      if (!row.result.converged) {
        row.failed = true;
        row.failure = "solver did not converge (relative residual " +
                      std::to_string(row.result.final_relative_residual) + ")";
      }
    } catch (const std::exception& e) {
      row.failed = true;
      row.failure = e.what();
    }
  };

  std::size_t workers = config.workers > 0 ? static_cast<std::size_t>(config.workers)
                                           : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, std::max<std::size_t>(1, tasks.size()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < tasks.size(); ++i) run_task(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) run_task(i);
      });
  }

  std::stable_sort(table.rows.begin(), table.rows.end(), [](const BenchRow& a, const BenchRow& b) {
    return std::tuple(a.result.method, a.result.n, a.result.seed) < std::tuple(b.result.method, b.result.n, b.result.seed);
  });
  table.aggregates = aggregate(table.rows);
  table.provenance.finished_at = detail::utc_timestamp();
  return table;
}

// ---------------------------------------------------------------------------
// Output

enum class OutputFormat { csv, json };

inline OutputFormat parse_output_format(std::string_view s) {
  if (s == "csv") return OutputFormat::csv;
  if (s == "json") return OutputFormat::json;
  throw DomainError("unknown output format '" + std::string(s) + "' (valid: csv, json)");
}

inline constexpr std::string_view csv_header =
    "method,n,m,seed,l2_error,max_pointwise_error,iterations,condition_number,wall_time_ms";
inline constexpr std::string_view aggregate_csv_header =
    "method,n,m,runs,failures,median_l2_error,min_l2_error,max_l2_error,median_max_pointwise_error,"
    "median_iterations,median_condition_number,median_wall_time_ms";

namespace detail {

inline std::string fmt_sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

inline std::string fmt_fixed(double v, int digits) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

inline nlohmann::json json_number(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

inline std::filesystem::path sibling(const std::filesystem::path& path, const std::string& suffix) {
  std::filesystem::path stem = path;
  if (stem.extension() == ".csv" || stem.extension() == ".json") stem.replace_extension();
  return stem.string() + suffix;
}

inline std::ofstream open_output(const std::filesystem::path& path) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw Error("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  return out;
}

inline void close_output(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw Error("write failed for " + path.string());
}

}  // namespace detail

inline std::string csv_row(const BenchRow& r) {
  const ReconstructionResult& x = r.result;
  return std::string(to_string(x.method)) + "," + std::to_string(x.n) + "," + std::to_string(x.m) + "," +
         std::to_string(x.seed) + "," + detail::fmt_sci(x.l2_error) + "," + detail::fmt_sci(x.max_pointwise_error) +
         "," + std::to_string(x.iterations) + "," + detail::fmt_sci(x.condition_number) + "," +
         detail::fmt_fixed(x.wall_time.count(), 3);
}

inline std::string csv_row(const AggregateRow& a) {
  return std::string(to_string(a.method)) + "," + std::to_string(a.n) + "," + std::to_string(a.m) + "," +
         std::to_string(a.runs) + "," + std::to_string(a.failures) + "," + detail::fmt_sci(a.median_l2_error) + "," +
         detail::fmt_sci(a.min_l2_error) + "," + detail::fmt_sci(a.max_l2_error) + "," +
         detail::fmt_sci(a.median_max_pointwise_error) + "," + detail::fmt_fixed(a.median_iterations, 1) + "," +
         detail::fmt_sci(a.median_condition_number) + "," + detail::fmt_fixed(a.median_wall_time_ms, 3);
}

inline nlohmann::json to_json(const BenchTable& t) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : t.rows) {
    const auto& x = r.result;
    rows.push_back({{"method", std::string(to_string(x.method))},
                    {"n", x.n},
                    {"m", x.m},
                    {"seed", x.seed},
                    {"l2_error", detail::json_number(x.l2_error)},
                    {"max_pointwise_error", detail::json_number(x.max_pointwise_error)},
                    {"iterations", x.iterations},
                    {"condition_number", detail::json_number(x.condition_number)},
                    {"final_relative_residual", detail::json_number(x.final_relative_residual)},
                    {"converged", x.converged},
                    {"wall_time_ms", x.wall_time.count()},
                    {"failed", r.failed},
                    {"failure", r.failure}});
  }
  nlohmann::json aggs = nlohmann::json::array();
  for (const auto& a : t.aggregates)
    aggs.push_back({{"method", std::string(to_string(a.method))},
                    {"n", a.n},
                    {"m", a.m},
                    {"runs", a.runs},
                    {"failures", a.failures},
                    {"median_l2_error", detail::json_number(a.median_l2_error)},
                    {"min_l2_error", detail::json_number(a.min_l2_error)},
                    {"max_l2_error", detail::json_number(a.max_l2_error)},
                    {"median_max_pointwise_error", detail::json_number(a.median_max_pointwise_error)},
                    {"median_iterations", detail::json_number(a.median_iterations)},
                    {"median_condition_number", detail::json_number(a.median_condition_number)},
                    {"median_wall_time_ms", detail::json_number(a.median_wall_time_ms)}});
  const auto& p = t.provenance;
  return {{"config", to_json(t.config)},
          {"provenance",
           {{"config_hash", p.config_hash},
            {"library_version", p.library_version},
            {"eigen_version", p.eigen_version},
            {"rng", p.rng},
            {"started_at", p.started_at},
            {"finished_at", p.finished_at}}},
          {"rows", rows},
          {"aggregates", aggs}};
}

/// Writes the table. CSV: raw rows at `path`, aggregates at `<stem>.agg.csv`.
/// JSON: one document at `path`. Either way, pointwise errors for the first
/// seed of each (method, n) go to `<stem>.pointwise.<method>.n<n>.csv`.
/// Returns every file written.
inline std::vector<std::filesystem::path> emit(const BenchTable& t, OutputFormat format,
                                               const std::filesystem::path& path) {
  std::vector<std::filesystem::path> written;
  if (format == OutputFormat::csv) {
    {
      auto out = detail::open_output(path);
      out << csv_header << '\n';
      for (const auto& r : t.rows) out << csv_row(r) << '\n';
      detail::close_output(out, path);
      written.push_back(path);
    }
    const auto agg_path = detail::sibling(path, ".agg.csv");
    auto out = detail::open_output(agg_path);
    out << aggregate_csv_header << '\n';
    for (const auto& a : t.aggregates) out << csv_row(a) << '\n';
    detail::close_output(out, agg_path);
    written.push_back(agg_path);
  } else {
    auto out = detail::open_output(path);
    out << to_json(t).dump(2) << '\n';
    detail::close_output(out, path);
    written.push_back(path);
  }
  for (const auto& r : t.rows) {
    if (r.result.pointwise.empty()) continue;
    const auto pw_path =
        detail::sibling(path, ".pointwise." + std::string(to_string(r.result.method)) + ".n" + std::to_string(r.result.n) + ".csv");
    auto out = detail::open_output(pw_path);
    out << "x,abs_error\n";
    for (std::size_t i = 0; i < r.result.pointwise.size(); ++i)
      out << detail::fmt_fixed(r.result.grid[i], 9) << ',' << detail::fmt_sci(r.result.pointwise[i]) << '\n';
    detail::close_output(out, pw_path);
    written.push_back(pw_path);
  }
  return written;
}

}  // namespace frameinv
