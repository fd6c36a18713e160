// varlex-cli: rearrange, norm, diagnose, construct, scan and gen over the C API.

#include "varlex/varlex.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

namespace {

enum ExitCode { kOk = 0, kInputError = 2, kInvariantFailure = 3, kNotWitnessed = 4 };

struct CliError {
  int code;
  std::string message;
};

int exit_code_for(varlex_status s) {
  switch (s) {
    case VARLEX_OK: return kOk;
    case VARLEX_ERROR_NOT_WITNESSED: return kNotWitnessed;
    case VARLEX_ERROR_INVARIANT:
    case VARLEX_ERROR_INTERNAL: return kInvariantFailure;
    default: return kInputError;
  }
}

void check(varlex_status s, const std::string& what) {
  if (s != VARLEX_OK)
    throw CliError{exit_code_for(s), what + ": " + varlex_last_error()};
}

struct StepDeleter {
  void operator()(varlex_stepfn* f) const { varlex_stepfn_destroy(f); }
};
struct TraceDeleter {
  void operator()(varlex_trace* t) const { varlex_trace_destroy(t); }
};
struct ScanDeleter {
  void operator()(varlex_scan_report* r) const { varlex_scan_report_destroy(r); }
};
struct StringDeleter {
  void operator()(char* s) const { varlex_string_free(s); }
};

using StepPtr = std::unique_ptr<varlex_stepfn, StepDeleter>;
using TracePtr = std::unique_ptr<varlex_trace, TraceDeleter>;
using ScanPtr = std::unique_ptr<varlex_scan_report, ScanDeleter>;
using CString = std::unique_ptr<char, StringDeleter>;

std::string take(char* s) {
  CString owned(s);
  return std::string(owned.get());
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError{kInputError, "cannot open " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Writes to a sibling temp file, then renames over the target.
void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw CliError{kInputError, "cannot write " + path};
    out << content;
    out.flush();
    if (!out) throw CliError{kInputError, "failed writing " + path};
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw CliError{kInputError, "cannot move output into place at " + path};
  }
}

void emit(const std::optional<std::string>& path, const std::string& content) {
  if (path)
    write_atomic(*path, content);
  else
    std::cout << content << '\n';
}

struct ProfileSource {
  std::string path;
  std::string gen;
  int depth = 40;
  int octave_cells = 16;

  void add_to(CLI::App* app, bool positional = true) {
    if (positional)
      app->add_option("profile", path, "step-function JSON file");
    app->add_option("--gen", gen, "built-in profile: log | sqrtlog | const:<p>");
    app->add_option("--depth", depth, "dyadic grid depth")->check(CLI::Range(1, 1000));
    app->add_option("--octave-cells", octave_cells, "cells per dyadic octave")
        ->check(CLI::Range(1, 1 << 20));
  }

  StepPtr load() const {
    varlex_stepfn* f = nullptr;
    if (!gen.empty() && !path.empty())
      throw CliError{kInputError, "give either a profile file or --gen, not both"};
    if (!gen.empty()) {
      check(varlex_generate(gen.c_str(), depth, octave_cells, &f), "generating " + gen);
    } else if (!path.empty()) {
      check(varlex_stepfn_from_json(read_file(path).c_str(), &f), "reading " + path);
    } else {
      throw CliError{kInputError, "no profile given (file or --gen)"};
    }
    return StepPtr(f);
  }
};

std::string fmt(double v, int prec = 10) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", prec, v);
  return buf;
}

// Non-finite values travel through JSON as null.
std::string fmt_json(const nlohmann::json& v, int prec = 10) {
  return v.is_number() ? fmt(v.get<double>(), prec) : std::string("inf");
}

// ---- gen

struct GenArgs {
  ProfileSource src;
  std::optional<std::string> out;
};

int run_gen(const GenArgs& a) {
  if (a.src.gen.empty()) throw CliError{kInputError, "gen requires --gen"};
  auto f = a.src.load();
  char* s = nullptr;
  check(varlex_stepfn_to_json(f.get(), &s), "serializing");
  emit(a.out, take(s));
  return kOk;
}

// ---- rearrange

struct RearrangeArgs {
  ProfileSource src;
  std::optional<std::string> out;
};

int run_rearrange(const RearrangeArgs& a) {
  auto f = a.src.load();
  varlex_stepfn* r = nullptr;
  check(varlex_rearrange(f.get(), &r), "rearranging");
  StepPtr fs(r);
  int eq = 0;
  check(varlex_equimeasurable(f.get(), fs.get(), 0.0, &eq), "equimeasurability check");
  std::cerr << "equimeasurable with input: " << (eq ? "yes" : "NO") << '\n';
  if (!eq) throw CliError{kInvariantFailure, "rearrangement is not equimeasurable with input"};
  char* s = nullptr;
  check(varlex_stepfn_to_json(fs.get(), &s), "serializing");
  emit(a.out, take(s));
  return kOk;
}

// ---- norm

struct NormArgs {
  ProfileSource src;
  std::string kind = "all";
  std::string exponent_path;
  std::string exponent_gen;
  double tol = 1e-10;
  std::optional<std::string> out;
};

int run_norm(const NormArgs& a) {
  auto f = a.src.load();
  nlohmann::json result = nlohmann::json::object();
  auto norm_json = [](const varlex_norm_result& r) {
    char* s = nullptr;
    check(varlex_norm_result_to_json(&r, &s), "serializing");
    return nlohmann::json::parse(take(s));
  };
  bool all = a.kind == "all";
  if (a.kind == "luxemburg" || (all && (!a.exponent_path.empty() || !a.exponent_gen.empty()))) {
    ProfileSource ps;
    ps.path = a.exponent_path;
    ps.gen = a.exponent_gen;
    ps.depth = a.src.depth;
    ps.octave_cells = a.src.octave_cells;
    auto p = ps.load();
    varlex_norm_result r{};
    check(varlex_luxemburg_norm(f.get(), p.get(), a.tol, &r), "luxemburg norm");
    std::cout << "luxemburg      " << fmt(r.value) << '\n';
    result["luxemburg"] = norm_json(r);
  }
  if (all || a.kind == "orlicz") {
    varlex_norm_result r{};
    check(varlex_orlicz_exp_norm(f.get(), a.tol, &r), "orlicz norm");
    std::cout << "orlicz_exp     " << fmt(r.value) << '\n';
    result["orlicz_exp"] = norm_json(r);
  }
  if (all || a.kind == "marcinkiewicz") {
    double v = 0.0;
    check(varlex_marcinkiewicz_ln_norm(f.get(), &v), "marcinkiewicz norm");
    std::cout << "marcinkiewicz  " << fmt(v) << '\n';
    result["marcinkiewicz_ln"] = v;
  }
  if (all || a.kind == "suplog") {
    double v = 0.0;
    check(varlex_sup_log_ratio_norm(f.get(), &v), "sup-log ratio norm");
    std::cout << "sup_log_ratio  " << fmt(v) << '\n';
    result["sup_log_ratio"] = v;
  }
  if (a.out) write_atomic(*a.out, result.dump(2) + "\n");
  return kOk;
}

// ---- diagnose

struct DiagnoseArgs {
  ProfileSource src;
  double delta = 0.05;
  std::vector<double> bases;
  std::optional<std::string> out;
};

int run_diagnose(const DiagnoseArgs& a) {
  auto f = a.src.load();
  char* s = nullptr;
  check(varlex_diagnose_json(f.get(), a.src.depth, a.delta, a.bases.data(), a.bases.size(), &s),
        "diagnosing");
  std::string text = take(s);
  auto j = nlohmann::json::parse(text);
  const auto& prof = j["ratio_profile"];
  std::cout << "depth  ratio          tail max\n";
  for (std::size_t i = 0; i < prof["depths"].size(); ++i) {
    int depth = prof["depths"][i].get<int>();
    if (depth % 5 != 0 && depth != a.src.depth) continue;
    char line[96];
    std::snprintf(line, sizeof line, "%5d  %-13.6g  %.6g\n", depth,
                  prof["ratios"][i].get<double>(), prof["running_max_tail"][i].get<double>());
    std::cout << line;
  }
  double tail = j["deepest_tail"].get<double>();
  bool witnessed = j["finite_depth_verdict"].get<std::string>() == "witnessed";
  std::cout << "finite-depth verdict: "
            << (witnessed ? "limsup condition witnessed" : "not witnessed") << " (tail max "
            << fmt(tail, 6) << ", threshold " << fmt(a.delta, 6) << ")\n";
  for (const auto& t : j["exp_integral"]) {
    const auto& partials = t["partials"];
    std::cout << "exp-integral c=" << fmt(t["c"].get<double>(), 8) << ": "
              << t["verdict"].get<std::string>() << " (I at depth " << a.src.depth << " = "
              << fmt_json(partials.back(), 8) << ")\n";
  }
  const auto& mln = j["mln_defect"];
  if (!mln.empty())
    std::cout << "M_ln defect at depth " << a.src.depth << ": " << fmt_json(mln.back(), 8)
              << '\n';
  if (a.out) write_atomic(*a.out, text + "\n");
  return kOk;
}

// ---- construct

struct ConstructArgs {
  ProfileSource src;
  int n = 2;
  double d = 0.0;
  double c = 0.0;
  int bits = 0;
  int max_stages = 64;
  int max_anchors = 64;
  int samples = 10000;
  std::uint64_t seed = 0;
  double delta = 0.05;
  bool seed_set = false;
  bool keep_stages = false;
  bool force = false;
  bool quiet_audit = false;
  std::string out;
  std::optional<std::string> phat;
};

int run_construct(const ConstructArgs& a) {
  auto f = a.src.load();
  varlex_stepfn* rs = nullptr;
  check(varlex_rearrange(f.get(), &rs), "rearranging");
  StepPtr pstar(rs);

  // Same finite-depth test as diagnose.
  std::vector<double> ratios(static_cast<std::size_t>(a.src.depth) + 1);
  std::vector<double> tail(ratios.size());
  check(varlex_ratio_profile(pstar.get(), a.src.depth, ratios.data(), tail.data(), ratios.size()),
        "ratio profile");
  if (tail.back() < a.delta && !a.force) {
    throw CliError{kNotWitnessed, "condition not witnessed: tail max " + fmt(tail.back(), 6) +
                                      " < " + fmt(a.delta, 6) + " at depth " +
                                      std::to_string(a.src.depth) + " (use --force to try anyway)"};
  }

  varlex_construct_config cfg;
  varlex_construct_config_default(&cfg);
  cfg.grid_depth = a.src.depth;
  cfg.octave_cells = a.src.octave_cells;
  cfg.d = a.d;
  cfg.c = a.c;
  cfg.dimension = a.n;
  cfg.bits = a.bits;
  cfg.max_stages = a.max_stages;
  cfg.max_anchors = a.max_anchors;
  cfg.sample_points = a.samples;
  if (a.seed_set) cfg.seed = a.seed;
  cfg.keep_stages = a.keep_stages ? 1 : 0;

  varlex_trace* t = nullptr;
  varlex_status st = varlex_construct(pstar.get(), &cfg, &t);
  if (st == VARLEX_ERROR_NOT_WITNESSED)
    throw CliError{kNotWitnessed, std::string("condition not witnessed: ") + varlex_last_error()};
  check(st, "construction");
  TracePtr trace(t);

  std::cout << "d = " << fmt(varlex_trace_d(trace.get())) << ", c = "
            << fmt(varlex_trace_c(trace.get())) << ", stages = "
            << varlex_trace_stage_count(trace.get()) << ", n = " << a.n
            << ", window coverage level = " << varlex_trace_coverage_level(trace.get()) << '\n';
  std::size_t count = varlex_trace_audit_count(trace.get());
  for (std::size_t i = 0; i < count; ++i) {
    const char* name = nullptr;
    const char* detail = nullptr;
    int passed = 0;
    check(varlex_trace_audit_item(trace.get(), i, &name, &passed, &detail), "audit");
    if (a.quiet_audit && passed) continue;
    char line[512];
    std::snprintf(line, sizeof line, "[%s] %-26s %s\n", passed ? "PASS" : "FAIL", name, detail);
    std::cout << line;
  }

  char* s = nullptr;
  check(varlex_trace_to_json(trace.get(), &s), "serializing trace");
  write_atomic(a.out, take(s) + "\n");
  if (a.phat) {
    varlex_stepfn* ph = nullptr;
    check(varlex_trace_p_hat(trace.get(), &ph), "extracting p_hat");
    StepPtr phat(ph);
    check(varlex_stepfn_to_json(phat.get(), &s), "serializing p_hat");
    write_atomic(*a.phat, take(s) + "\n");
  }
  if (!varlex_trace_passed(trace.get()))
    throw CliError{kInvariantFailure, "construction audit failed"};
  return kOk;
}

// ---- scan

struct ScanArgs {
  std::string trace_path;
  ProfileSource src;
  int n = 2;
  int bits = 0;
  int max_level = 8;
  double tol = 1e-10;
  std::optional<std::string> out;
  std::optional<std::string> csv;
};

int run_scan(const ScanArgs& a) {
  varlex_scan_report* r = nullptr;
  double floor_c = 0.0;
  if (!a.trace_path.empty()) {
    if (!a.src.path.empty() || !a.src.gen.empty())
      throw CliError{kInputError, "give either a trace or a profile, not both"};
    varlex_trace* t = nullptr;
    check(varlex_trace_from_json(read_file(a.trace_path).c_str(), &t),
          "reading " + a.trace_path);
    TracePtr trace(t);
    floor_c = varlex_trace_c(trace.get());
    check(varlex_scan_trace(trace.get(), a.max_level, a.tol, &r), "scanning");
  } else {
    auto p = a.src.load();
    check(varlex_scan(p.get(), a.n, a.bits, a.max_level, a.tol, -1, &r), "scanning");
  }
  ScanPtr report(r);
  if (varlex_scan_clamped(report.get())) {
    std::size_t levels = varlex_scan_level_count(report.get());
    std::cerr << "warning: max level " << a.max_level << " exceeds the bit budget; clamped to "
              << (levels == 0 ? 0 : levels - 1) << '\n';
  }
  std::cout << "level  min_norm";
  if (floor_c > 0.0) std::cout << "          1/c = " << fmt(1.0 / floor_c);
  std::cout << '\n';
  for (std::size_t i = 0; i < varlex_scan_level_count(report.get()); ++i) {
    int level = 0;
    int covered = 0;
    double v = 0.0;
    check(varlex_scan_level(report.get(), i, &level, &v, nullptr, &covered), "scan level");
    char line[128];
    std::snprintf(line, sizeof line, "%5d  %-16.10g%s\n", level, v,
                  floor_c > 0.0 ? (covered ? "  within coverage" : "  beyond coverage") : "");
    std::cout << line;
  }
  char* s = nullptr;
  if (a.out) {
    check(varlex_scan_to_json(report.get(), &s), "serializing");
    write_atomic(*a.out, take(s) + "\n");
  }
  if (a.csv) {
    check(varlex_scan_to_csv(report.get(), &s), "serializing");
    write_atomic(*a.csv, take(s));
  }
  return kOk;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"varlex: rearranged variable exponents and closedness diagnostics"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "write a built-in profile as JSON");
  gen.src.add_to(gen_cmd, false);
  gen_cmd->add_option("-o,--out", gen.out, "output path (default stdout)");

  RearrangeArgs re;
  auto* re_cmd = app.add_subcommand("rearrange", "decreasing rearrangement of a profile");
  re.src.add_to(re_cmd);
  re_cmd->add_option("-o,--out", re.out, "output path (default stdout)");

  NormArgs nm;
  auto* nm_cmd = app.add_subcommand("norm", "norms of a step function");
  nm.src.add_to(nm_cmd);
  nm_cmd->add_option("--kind", nm.kind, "luxemburg | orlicz | marcinkiewicz | suplog | all")
      ->check(CLI::IsMember({"luxemburg", "orlicz", "marcinkiewicz", "suplog", "all"}));
  nm_cmd->add_option("--exponent", nm.exponent_path, "exponent JSON for the Luxemburg norm");
  nm_cmd->add_option("--exponent-gen", nm.exponent_gen, "built-in exponent profile");
  nm_cmd->add_option("--tol", nm.tol, "bisection tolerance")->check(CLI::PositiveNumber);
  nm_cmd->add_option("-o,--out", nm.out, "JSON output path");

  DiagnoseArgs dg;
  auto* dg_cmd = app.add_subcommand("diagnose", "limsup ratio, exp-integral and M_ln diagnostics");
  dg.src.add_to(dg_cmd);
  dg_cmd->add_option("--delta", dg.delta, "witness threshold on the tail max")
      ->check(CLI::PositiveNumber);
  dg_cmd->add_option("--base", dg.bases, "extra exp-integral base c (repeatable)");
  dg_cmd->add_option("-o,--out", dg.out, "JSON output path");

  ConstructArgs cs;
  auto* cs_cmd = app.add_subcommand("construct", "build the rearranged exponent p_hat");
  cs.src.add_to(cs_cmd);
  cs_cmd->add_option("--n", cs.n, "dimension")->check(CLI::Range(1, 52));
  cs_cmd->add_option("--d", cs.d, "anchor ratio d (default from the profile)");
  cs_cmd->add_option("--c", cs.c, "base c (default e^{2/d})");
  cs_cmd->add_option("--bits", cs.bits, "digits per coordinate (default 52/n)");
  cs_cmd->add_option("--max-stages", cs.max_stages, "stage cap")->check(CLI::Range(1, 4096));
  cs_cmd->add_option("--max-anchors", cs.max_anchors, "anchor cap")->check(CLI::Range(1, 4096));
  cs_cmd->add_option("--samples", cs.samples, "audit sample points")->check(CLI::Range(1, 10000000));
  auto* seed_opt = cs_cmd->add_option("--seed", cs.seed, "audit sampling seed");
  cs_cmd->add_option("--delta", cs.delta, "witness threshold on the tail max")
      ->check(CLI::PositiveNumber);
  cs_cmd->add_flag("--stages", cs.keep_stages, "keep intermediate stages in the trace");
  cs_cmd->add_flag("--force", cs.force, "construct even if the condition is not witnessed");
  cs_cmd->add_flag("--failures-only", cs.quiet_audit, "print only failing audit items");
  cs_cmd->add_option("-o,--out", cs.out, "trace JSON output path")->required();
  cs_cmd->add_option("--phat", cs.phat, "also write p_hat as step-function JSON");

  ScanArgs sc;
  auto* sc_cmd = app.add_subcommand("scan", "minimum cube norms per dyadic level");
  sc_cmd->add_option("trace", sc.trace_path, "construction trace JSON");
  sc_cmd->add_option("--profile", sc.src.path, "p_hat step-function JSON instead of a trace");
  sc.src.add_to(sc_cmd, false);
  sc_cmd->add_option("--n", sc.n, "dimension when scanning a profile")->check(CLI::Range(1, 52));
  sc_cmd->add_option("--bits", sc.bits, "digits per coordinate (default 52/n)");
  sc_cmd->add_option("--max-level", sc.max_level, "deepest cube level")->check(CLI::Range(0, 64));
  sc_cmd->add_option("--tol", sc.tol, "bisection tolerance")->check(CLI::PositiveNumber);
  sc_cmd->add_option("-o,--out", sc.out, "ScanReport JSON output path");
  sc_cmd->add_option("--csv", sc.csv, "CSV output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kInputError;
  }

  try {
    if (*gen_cmd) return run_gen(gen);
    if (*re_cmd) return run_rearrange(re);
    if (*nm_cmd) return run_norm(nm);
    if (*dg_cmd) return run_diagnose(dg);
    if (*cs_cmd) {
      cs.seed_set = seed_opt->count() > 0;
      return run_construct(cs);
    }
    if (*sc_cmd) return run_scan(sc);
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << '\n';
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kOk;
}
