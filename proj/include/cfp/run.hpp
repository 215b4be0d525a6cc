#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>

#include <json.hpp>

#include "cfp/certifier.hpp"
#include "cfp/error.hpp"
#include "cfp/operators.hpp"
#include "cfp/problem.hpp"
#include "cfp/solver.hpp"

namespace cfp {

enum ExitCode : int {
  exit_ok = 0,
  exit_usage = 1,
  exit_preflight_failed = 2,
  exit_solver_error = 3,
  exit_not_converged = 4,
};

struct RunOptions {
  std::optional<std::filesystem::path> out_dir{};
  bool force = false;
  std::optional<std::uint64_t> seed{};
  std::optional<std::size_t> max_iter{};
  bool quiet = false;
  std::ostream* out = nullptr;
};

struct RunArtifacts {
  HypothesisReport report{};
  std::optional<IterationTrace> trace{};
  std::optional<CoupledFixedPoint> result{};
  int exit_code = exit_ok;
  double k = 0.0;
  bool k_estimated = false;
  std::string error{};
  /// Exactly the bytes written to trace.csv (empty when no trace exists).
  std::string trace_csv{};
  /// Exactly the bytes written to report.json.
  std::string report_json{};
};

inline constexpr const char* kSeedEnv = "COUPLED_FPI_SEED";
inline constexpr double kAutoMargin = 1.05;
inline constexpr double kAutoFloor = 1e-3;
inline constexpr double kAutoCap = 0.999999;

/// Seed precedence: explicit override, then the problem file's own seed, then the
/// COUPLED_FPI_SEED environment variable, then the built-in default.
inline std::uint64_t resolve_seed(const ProblemSpec& spec, const RunOptions& opts) {
  if (opts.seed) return *opts.seed;
  if (spec.sampler_seed_given) return spec.sampler.rng_seed;
  if (const char* env = std::getenv(kSeedEnv)) {
    std::uint64_t v = 0;
    const std::string_view s(env);
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec == std::errc{} && res.ptr == s.data() + s.size()) return v;
  }
  return spec.sampler.rng_seed;
}

namespace detail {

inline std::string format_point(const Point& p) {
  std::string out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) out += ';';
    out += format_double(p[i]);
  }
  return out;
}

inline std::string trace_to_csv(const IterationTrace& trace) {
  std::string out = "n,x,y,step_x,step_y,bound,diag,edge_ok_x,edge_ok_y\n";
  for (const auto& r : trace.steps) {
    out += std::to_string(r.n) + ',' + format_point(r.x) + ',' + format_point(r.y) + ',' + format_double(r.step_x) +
           ',' + format_double(r.step_y) + ',' + format_double(r.bound) + ',' + format_double(r.diag) + ',' +
           (r.edge_ok_x ? "true" : "false") + ',' + (r.edge_ok_y ? "true" : "false") + '\n';
  }
  return out;
}

inline nlohmann::ordered_json certificate_json(const Certificate& c) {
  using json = nlohmann::ordered_json;
  json j;
  j["property"] = to_string(c.property);
  j["passed"] = c.passed;
  j["inapplicable"] = c.inapplicable;
  j["samples_tested"] = c.samples_tested;
  j["estimated_constant"] = c.estimated_constant ? json(*c.estimated_constant) : json(nullptr);
  j["declared_k"] = c.declared_k ? json(*c.declared_k) : json(nullptr);
  j["rng_seed"] = c.rng_seed ? json(*c.rng_seed) : json(nullptr);
  j["violation_count"] = c.violation_count;
  json ws = json::array();
  for (const auto& w : c.violations) {
    ws.push_back({{"sample_index", w.sample_index}, {"points", w.points}, {"lhs", w.lhs}, {"rhs", w.rhs}, {"note", w.note}});
  }
  j["violations"] = ws;
  j["detail"] = c.detail;
  return j;
}

inline std::string report_to_json(const ProblemSpec& spec, const RunArtifacts& art, bool forced,
                                  std::optional<std::size_t> error_step, std::optional<ErrorCode> error_code) {
  using json = nlohmann::ordered_json;
  json doc;
  doc["instance_id"] = spec.id;
  doc["rng_seed"] = art.report.rng_seed;
  doc["k"] = art.k;
  doc["k_source"] = art.k_estimated ? "estimated" : "declared";
  json pre;
  pre["applicable"] = to_string(art.report.applicable);
  pre["passed"] = art.report.passed();
  json certs = json::array();
  for (const auto& c : art.report.certificates) certs.push_back(certificate_json(c));
  pre["certificates"] = certs;
  pre["notes"] = art.report.notes;
  doc["preflight"] = pre;
  doc["forced"] = forced;
  if (art.result && art.trace) {
    doc["result"] = {{"converged", art.trace->converged},
                     {"x", art.result->x},
                     {"y", art.result->y},
                     {"is_diagonal", art.result->is_diagonal},
                     {"residual", art.trace->residual},
                     {"iterations", art.trace->iterations},
                     {"D0", art.trace->D0}};
  } else {
    doc["result"] = nullptr;
  }
  if (error_code) {
    json err = {{"code", to_string(*error_code)}, {"message", art.error}};
    err["step"] = error_step ? json(*error_step) : json(nullptr);
    doc["error"] = err;
  } else {
    doc["error"] = nullptr;
  }
  doc["exit_code"] = art.exit_code;
  return doc.dump(2) + "\n";
}

/// Writes via a temporary sibling and renames it into place.
inline void write_atomic(const std::filesystem::path& path, const std::string& bytes) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorCode::invalid_input, "cannot write " + tmp.string());
    f << bytes;
    if (!f) throw Error(ErrorCode::invalid_input, "cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

inline void print_table(std::ostream& os, const ProblemSpec& spec, const RunArtifacts& art) {
  char line[256];
  os << "instance " << spec.id << "  k=" << format_double(art.k) << (art.k_estimated ? " (estimated)" : "")
     << "  preflight: " << to_string(art.report.applicable) << '\n';
  if (!art.trace) {
    os << (art.error.empty() ? "no trace" : art.error) << '\n';
    return;
  }
  std::snprintf(line, sizeof line, "%6s  %-24s %-24s %12s %12s %12s\n", "n", "x", "y", "step", "k^n*D0", "d(x,y)");
  os << line;
  for (const auto& r : art.trace->steps) {
    std::snprintf(line, sizeof line, "%6zu  %-24s %-24s %12.4e %12.4e %12.4e\n", r.n, format_point(r.x).c_str(),
                  format_point(r.y).c_str(), r.step_x + r.step_y, 2.0 * r.bound, r.diag);
    os << line;
  }
  os << (art.trace->converged ? "converged" : "NOT converged") << " after " << art.trace->iterations
     << " iterations, residual " << format_double(art.trace->residual) << '\n';
}

}  // namespace detail

/// Preflight, then the solver matching the map kind. Exit codes: 0 success,
/// 2 preflight failed (without force), 3 solver error, 4 no convergence.
inline RunArtifacts run(const ProblemSpec& spec, const RunOptions& opts = {}) {
  RunArtifacts art;
  SampleSpec sampler = spec.sampler;
  sampler.rng_seed = resolve_seed(spec, opts);

  auto space = make_space(spec.space);
  auto graph = make_graph(spec.graph);
  auto map = make_map(spec);

  if (spec.k) {
    art.k = *spec.k;
  } else {
    art.k_estimated = true;
    double est = 0.0;
    try {
      est = std::holds_alternative<CoupledMap>(map)
                ? estimate_k(std::get<CoupledMap>(map), space, graph, sampler)
                : estimate_k_multi(std::get<CoupledMultiMap>(map), space, graph, sampler);
    } catch (const Error&) {
      est = 0.0;
    }
    art.k = std::clamp(kAutoMargin * est, kAutoFloor, kAutoCap);
  }

  ProblemInstance inst = make_instance(spec, art.k);
  art.report = preflight(inst, sampler);
  if (art.k_estimated) {
    art.report.notes.push_back("k estimated from samples with margin 1.05 (k = " + detail::format_double(art.k) + ")");
  }

  std::optional<std::size_t> error_step;
  std::optional<ErrorCode> error_code;
  if (!art.report.passed() && !opts.force) {
    art.exit_code = exit_preflight_failed;
    art.error = "preflight failed; rerun with --force to solve anyway";
  } else {
    SolveConfig cfg = inst.solve;
    if (opts.max_iter) cfg.max_iter = *opts.max_iter;
    try {
      SolveResult res = inst.is_multi()
                            ? solve_coupled_multi(std::get<CoupledMultiMap>(inst.map), space, graph, spec.x0, spec.y0,
                                                  *spec.x1, *spec.y1, cfg)
                            : solve_coupled(std::get<CoupledMap>(inst.map), space, graph, spec.x0, spec.y0, cfg);
      art.trace = std::move(res.trace);
      art.result = std::move(res.point);
      art.exit_code = art.trace->converged ? exit_ok : exit_not_converged;
      art.trace_csv = detail::trace_to_csv(*art.trace);
    } catch (const HypothesisViolation& e) {
      art.exit_code = exit_solver_error;
      art.error = e.what();
      error_code = e.code();
      error_step = e.step();
    } catch (const Error& e) {
      art.exit_code = exit_solver_error;
      art.error = e.what();
      error_code = e.code();
    }
  }
  art.report_json = detail::report_to_json(spec, art, opts.force, error_step, error_code);

  if (opts.out_dir) {
    std::filesystem::create_directories(*opts.out_dir);
    const auto trace_path = *opts.out_dir / "trace.csv";
    if (!art.trace_csv.empty()) {
      detail::write_atomic(trace_path, art.trace_csv);
    } else {
      std::filesystem::remove(trace_path);
    }
    detail::write_atomic(*opts.out_dir / "report.json", art.report_json);
  }
  if (opts.out && !opts.quiet) detail::print_table(*opts.out, spec, art);
  return art;
}

}  // namespace cfp
