#include "varlex/varlex.h"

#include "varlex/construction.hpp"
#include "varlex/diagnostics.hpp"
#include "varlex/error.hpp"
#include "varlex/interleave.hpp"
#include "varlex/json_io.hpp"
#include "varlex/norms.hpp"
#include "varlex/profiles.hpp"
#include "varlex/rearrangement.hpp"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>
#include <vector>

struct varlex_stepfn {
  varlex::StepFn fn;
};

struct varlex_transport {
  varlex::TransportMap omega;
};

struct varlex_trace {
  varlex::ConstructionTrace trace;
};

struct varlex_scan_report {
  varlex::ScanReport report;
};

namespace {

thread_local std::string g_last_error;

varlex_status fail(varlex_status s, const char* what) {
  g_last_error = what;
  return s;
}

template <class F>
varlex_status guarded(F&& body) {
  try {
    body();
    return VARLEX_OK;
  } catch (const varlex::DomainError& e) {
    return fail(VARLEX_ERROR_DOMAIN, e.what());
  } catch (const varlex::ValidationError& e) {
    return fail(VARLEX_ERROR_VALIDATION, e.what());
  } catch (const varlex::ParseError& e) {
    return fail(VARLEX_ERROR_PARSE, e.what());
  } catch (const varlex::NotWitnessedError& e) {
    return fail(VARLEX_ERROR_NOT_WITNESSED, e.what());
  } catch (const varlex::GridTooShallowError& e) {
    return fail(VARLEX_ERROR_GRID_TOO_SHALLOW, e.what());
  } catch (const varlex::InvariantError& e) {
    return fail(VARLEX_ERROR_INVARIANT, e.what());
  } catch (const varlex::BudgetError& e) {
    return fail(VARLEX_ERROR_BUDGET, e.what());
  } catch (const std::bad_alloc&) {
    return fail(VARLEX_ERROR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(VARLEX_ERROR_INTERNAL, e.what());
  } catch (...) {
    return fail(VARLEX_ERROR_INTERNAL, "unknown error");
  }
}

#define VARLEX_REQUIRE(ptr)                                                        \
  do {                                                                             \
    if ((ptr) == nullptr) return fail(VARLEX_ERROR_NULL_ARGUMENT, #ptr " is null"); \
  } while (0)

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void copy_norm(const varlex::NormResult& r, varlex_norm_result* out) {
  out->value = r.value;
  out->lo = r.lo;
  out->hi = r.hi;
  out->modular = r.modular;
  out->iterations = r.iterations;
}

varlex_verdict to_c(varlex::Verdict v) {
  switch (v) {
    case varlex::Verdict::Divergent: return VARLEX_VERDICT_DIVERGENT;
    case varlex::Verdict::Convergent: return VARLEX_VERDICT_CONVERGENT;
    default: return VARLEX_VERDICT_INCONCLUSIVE;
  }
}

} // namespace

extern "C" {

const char* varlex_last_error(void) { return g_last_error.c_str(); }

const char* varlex_status_string(varlex_status status) {
  switch (status) {
    case VARLEX_OK: return "ok";
    case VARLEX_ERROR_NULL_ARGUMENT: return "null argument";
    case VARLEX_ERROR_DOMAIN: return "domain error";
    case VARLEX_ERROR_VALIDATION: return "validation error";
    case VARLEX_ERROR_PARSE: return "parse error";
    case VARLEX_ERROR_NOT_WITNESSED: return "not witnessed";
    case VARLEX_ERROR_GRID_TOO_SHALLOW: return "grid too shallow";
    case VARLEX_ERROR_INVARIANT: return "invariant violated";
    case VARLEX_ERROR_BUDGET: return "bit budget exceeded";
    case VARLEX_ERROR_CAPACITY: return "output buffer too small";
    case VARLEX_ERROR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void varlex_string_free(char* s) { std::free(s); }

// ---- step functions

varlex_status varlex_stepfn_create(const double* breakpoints, size_t n_breakpoints,
                                   const double* values, size_t n_values,
                                   varlex_stepfn** out) {
  VARLEX_REQUIRE(breakpoints);
  VARLEX_REQUIRE(values);
  VARLEX_REQUIRE(out);
  return guarded([&] {
    std::vector<double> bp(breakpoints, breakpoints + n_breakpoints);
    std::vector<double> v(values, values + n_values);
    *out = new varlex_stepfn{varlex::StepFn(std::move(bp), std::move(v))};
  });
}

varlex_status varlex_stepfn_from_json(const char* json, varlex_stepfn** out) {
  VARLEX_REQUIRE(json);
  VARLEX_REQUIRE(out);
  return guarded([&] {
    *out = new varlex_stepfn{varlex::stepfn_from_json(varlex::parse_json(json))};
  });
}

varlex_status varlex_stepfn_to_json(const varlex_stepfn* f, char** out) {
  VARLEX_REQUIRE(f);
  VARLEX_REQUIRE(out);
  return guarded([&] { *out = dup_string(varlex::to_json(f->fn).dump()); });
}

void varlex_stepfn_destroy(varlex_stepfn* f) { delete f; }

size_t varlex_stepfn_cells(const varlex_stepfn* f) { return f ? f->fn.cells() : 0; }

varlex_status varlex_stepfn_breakpoints(const varlex_stepfn* f, double* out, size_t capacity) {
  VARLEX_REQUIRE(f);
  VARLEX_REQUIRE(out);
  auto bp = f->fn.breakpoints();
  if (capacity < bp.size()) return fail(VARLEX_ERROR_CAPACITY, "breakpoint buffer too small");
  std::copy(bp.begin(), bp.end(), out);
  return VARLEX_OK;
}

varlex_status varlex_stepfn_values(const varlex_stepfn* f, double* out, size_t capacity) {
  VARLEX_REQUIRE(f);
  VARLEX_REQUIRE(out);
  auto v = f->fn.values();
  if (capacity < v.size()) return fail(VARLEX_ERROR_CAPACITY, "value buffer too small");
  std::copy(v.begin(), v.end(), out);
  return VARLEX_OK;
}

varlex_status varlex_stepfn_evaluate(const varlex_stepfn* f, double t, double* out) {
  VARLEX_REQUIRE(f);
  VARLEX_REQUIRE(out);
  return guarded([&] { *out = varlex::evaluate(f->fn, t); });
}

varlex_status varlex_stepfn_integrate(const varlex_stepfn* f, double* out) {
  VARLEX_REQUIRE(f);
  VARLEX_REQUIRE(out);
  return guarded([&] { *out = varlex::integrate(f->fn); });
}

varlex_status varlex_indicator(double a, double b, varlex_stepfn** out) {
  VARLEX_REQUIRE(out);
  return guarded([&] { *out = new varlex_stepfn{varlex::indicator(a, b)}; });
}

varlex_status varlex_generate(const char* spec, int depth, int octave_cells,
                              varlex_stepfn** out) {
  VARLEX_REQUIRE(spec);
  VARLEX_REQUIRE(out);
  return guarded([&] {
    auto p = varlex::generate_profile(spec, varlex::GeometricGrid{depth, octave_cells});
    *out = new varlex_stepfn{p.fn()};
  });
}

// ---- rearrangement

varlex_status varlex_distribution_function(const varlex_stepfn* f, double level, double* out) {
  VARLEX_REQUIRE(f);
  VARLEX_REQUIRE(out);
  return guarded([&] { *out = varlex::distribution_function(f->fn, level); });
}

varlex_status varlex_rearrange(const varlex_stepfn* f, varlex_stepfn** out) {
  VARLEX_REQUIRE(f);
  VARLEX_REQUIRE(out);
  return guarded([&] { *out = new varlex_stepfn{varlex::decreasing_rearrangement(f->fn)}; });
}

varlex_status varlex_equimeasurable(const varlex_stepfn* f, const varlex_stepfn* g,
                                    double tolerance, int* out) {
  VARLEX_REQUIRE(f);
  VARLEX_REQUIRE(g);
  VARLEX_REQUIRE(out);
  return guarded([&] { *out = varlex::equimeasurable(f->fn, g->fn, tolerance) ? 1 : 0; });
}

varlex_status varlex_sorting_transport(const varlex_stepfn* f, varlex_transport** out) {
  VARLEX_REQUIRE(f);
  VARLEX_REQUIRE(out);
  return guarded([&] { *out = new varlex_transport{varlex::sorting_transport(f->fn)}; });
}

varlex_status varlex_transport_from_json(const char* json, varlex_transport** out) {
  VARLEX_REQUIRE(json);
  VARLEX_REQUIRE(out);
  return guarded([&] {
    *out = new varlex_transport{varlex::transport_from_json(varlex::parse_json(json))};
  });
}

varlex_status varlex_transport_to_json(const varlex_transport* omega, char** out) {
  VARLEX_REQUIRE(omega);
  VARLEX_REQUIRE(out);
  return guarded([&] { *out = dup_string(varlex::to_json(omega->omega).dump()); });
}

varlex_status varlex_transport_apply(const varlex_transport* omega, double t, double* out) {
  VARLEX_REQUIRE(omega);
  VARLEX_REQUIRE(out);
  return guarded([&] { *out = omega->omega(t); });
}

void varlex_transport_destroy(varlex_transport* omega) { delete omega; }

varlex_status varlex_pull_back(const varlex_stepfn* p_star, const varlex_transport* omega,
                               varlex_stepfn** out) {
  VARLEX_REQUIRE(p_star);
  VARLEX_REQUIRE(omega);
  VARLEX_REQUIRE(out);
  return guarded(
      [&] { *out = new varlex_stepfn{varlex::pull_back(p_star->fn, omega->omega)}; });
}

// ---- norms

varlex_status varlex_modular(const varlex_stepfn* f, const varlex_stepfn* p, double lambda,
                             double* out) {
  VARLEX_REQUIRE(f);
  VARLEX_REQUIRE(p);
  VARLEX_REQUIRE(out);
  return guarded(
      [&] { *out = varlex::modular(f->fn, varlex::ExponentProfile(p->fn), lambda); });
}

varlex_status varlex_luxemburg_norm(const varlex_stepfn* f, const varlex_stepfn* p, double tol,
                                    varlex_norm_result* out) {
  VARLEX_REQUIRE(f);
  VARLEX_REQUIRE(p);
  VARLEX_REQUIRE(out);
  return guarded([&] {
    copy_norm(varlex::luxemburg_norm(f->fn, varlex::ExponentProfile(p->fn), tol), out);
  });
}

varlex_status varlex_orlicz_exp_norm(const varlex_stepfn* f, double tol,
                                     varlex_norm_result* out) {
  VARLEX_REQUIRE(f);
  VARLEX_REQUIRE(out);
  return guarded([&] { copy_norm(varlex::orlicz_exp_norm(f->fn, tol), out); });
}

varlex_status varlex_marcinkiewicz_ln_norm(const varlex_stepfn* f, double* out) {
  VARLEX_REQUIRE(f);
  VARLEX_REQUIRE(out);
  return guarded([&] { *out = varlex::marcinkiewicz_ln_norm(f->fn); });
}

varlex_status varlex_sup_log_ratio_norm(const varlex_stepfn* f, double* out) {
  VARLEX_REQUIRE(f);
  VARLEX_REQUIRE(out);
  return guarded([&] { *out = varlex::sup_log_ratio_norm(f->fn); });
}

varlex_status varlex_norm_result_to_json(const varlex_norm_result* r, char** out) {
  VARLEX_REQUIRE(r);
  VARLEX_REQUIRE(out);
  return guarded([&] {
    varlex::NormResult n{r->value, r->lo, r->hi, r->modular, r->iterations};
    *out = dup_string(varlex::to_json(n).dump());
  });
}

// ---- diagnostics

varlex_status varlex_ratio_profile(const varlex_stepfn* p_star, int max_depth, double* ratios,
                                   double* tail, size_t capacity) {
  VARLEX_REQUIRE(p_star);
  VARLEX_REQUIRE(ratios);
  VARLEX_REQUIRE(tail);
  return guarded([&] {
    auto prof = varlex::limsup_ratio_profile(varlex::ExponentProfile(p_star->fn), max_depth);
    if (capacity < prof.ratios.size())
      throw varlex::DomainError("ratio buffer needs " + std::to_string(prof.ratios.size()) +
                                " entries");
    std::copy(prof.ratios.begin(), prof.ratios.end(), ratios);
    std::copy(prof.running_max_tail.begin(), prof.running_max_tail.end(), tail);
  });
}

varlex_status varlex_exp_integral(const varlex_stepfn* p_star, double c, const int* depths,
                                  size_t n_depths, double* partials, varlex_verdict* verdict) {
  VARLEX_REQUIRE(p_star);
  VARLEX_REQUIRE(depths);
  VARLEX_REQUIRE(partials);
  return guarded([&] {
    auto out = varlex::exp_integral_test(varlex::ExponentProfile(p_star->fn), c,
                                         std::span<const int>(depths, n_depths));
    std::copy(out.begin(), out.end(), partials);
    if (verdict != nullptr) *verdict = to_c(varlex::classify_exp_integral(out).verdict);
  });
}

varlex_status varlex_mln_defect(const varlex_stepfn* f, const int* depths, size_t n_depths,
                                double* out) {
  VARLEX_REQUIRE(f);
  VARLEX_REQUIRE(depths);
  VARLEX_REQUIRE(out);
  return guarded([&] {
    auto v = varlex::mln_defect(f->fn, std::span<const int>(depths, n_depths));
    std::copy(v.begin(), v.end(), out);
  });
}

varlex_status varlex_diagnose_json(const varlex_stepfn* profile, int depth, double delta,
                                   const double* extra_bases, size_t n_extra, char** out) {
  VARLEX_REQUIRE(profile);
  VARLEX_REQUIRE(out);
  if (extra_bases == nullptr && n_extra > 0)
    return fail(VARLEX_ERROR_NULL_ARGUMENT, "extra_bases is null");
  return guarded([&] {
    varlex::ExponentProfile p(varlex::decreasing_rearrangement(profile->fn));
    auto report = varlex::diagnose(p, depth, delta,
                                   std::span<const double>(extra_bases, n_extra));
    *out = dup_string(varlex::to_json(report).dump(2));
  });
}

// ---- construction

void varlex_construct_config_default(varlex_construct_config* cfg) {
  if (cfg == nullptr) return;
  varlex::ConstructionConfig d;
  cfg->grid_depth = d.grid.depth;
  cfg->octave_cells = d.grid.octave_cells;
  cfg->d = 0.0;
  cfg->c = 0.0;
  cfg->max_anchors = d.max_anchors;
  cfg->max_stages = d.max_stages;
  cfg->dimension = d.dimension;
  cfg->bits = d.bits;
  cfg->sample_points = d.sample_points;
  cfg->seed = d.seed;
  cfg->keep_stages = d.keep_stages ? 1 : 0;
}

varlex_status varlex_construct(const varlex_stepfn* profile, const varlex_construct_config* cfg,
                               varlex_trace** out) {
  VARLEX_REQUIRE(profile);
  VARLEX_REQUIRE(out);
  return guarded([&] {
    varlex_construct_config c;
    if (cfg != nullptr)
      c = *cfg;
    else
      varlex_construct_config_default(&c);
    varlex::ConstructionConfig conf;
    conf.grid = varlex::GeometricGrid{c.grid_depth, c.octave_cells};
    if (c.d > 0.0) conf.d = c.d;
    if (c.c > 0.0) conf.c = c.c;
    conf.max_anchors = c.max_anchors;
    conf.max_stages = c.max_stages;
    conf.dimension = c.dimension;
    conf.bits = c.bits;
    conf.sample_points = c.sample_points;
    conf.seed = c.seed;
    conf.keep_stages = c.keep_stages != 0;
    varlex::ExponentProfile p(varlex::decreasing_rearrangement(profile->fn));
    *out = new varlex_trace{varlex::construct(p, conf)};
  });
}

varlex_status varlex_trace_from_json(const char* json, varlex_trace** out) {
  VARLEX_REQUIRE(json);
  VARLEX_REQUIRE(out);
  return guarded([&] {
    *out = new varlex_trace{varlex::trace_from_json(varlex::parse_json(json))};
  });
}

varlex_status varlex_trace_to_json(const varlex_trace* t, char** out) {
  VARLEX_REQUIRE(t);
  VARLEX_REQUIRE(out);
  return guarded([&] { *out = dup_string(varlex::to_json(t->trace).dump()); });
}

void varlex_trace_destroy(varlex_trace* t) { delete t; }

int varlex_trace_passed(const varlex_trace* t) { return t && t->trace.passed() ? 1 : 0; }
double varlex_trace_d(const varlex_trace* t) { return t ? t->trace.d : 0.0; }
double varlex_trace_c(const varlex_trace* t) { return t ? t->trace.c : 0.0; }
int varlex_trace_dimension(const varlex_trace* t) { return t ? t->trace.dimension : 0; }
int varlex_trace_stage_count(const varlex_trace* t) { return t ? t->trace.stage_count : 0; }
int varlex_trace_coverage_level(const varlex_trace* t) {
  return t ? t->trace.coverage_level : -1;
}
size_t varlex_trace_audit_count(const varlex_trace* t) {
  return t ? t->trace.audit.size() : 0;
}

varlex_status varlex_trace_audit_item(const varlex_trace* t, size_t i, const char** name,
                                      int* passed, const char** detail) {
  VARLEX_REQUIRE(t);
  if (i >= t->trace.audit.size()) return fail(VARLEX_ERROR_DOMAIN, "audit index out of range");
  const auto& item = t->trace.audit[i];
  if (name) *name = item.name.c_str();
  if (passed) *passed = item.passed ? 1 : 0;
  if (detail) *detail = item.detail.c_str();
  return VARLEX_OK;
}

varlex_status varlex_trace_p_hat(const varlex_trace* t, varlex_stepfn** out) {
  VARLEX_REQUIRE(t);
  VARLEX_REQUIRE(out);
  return guarded([&] { *out = new varlex_stepfn{t->trace.p_hat.fn()}; });
}

varlex_status varlex_trace_q(const varlex_trace* t, varlex_stepfn** out) {
  VARLEX_REQUIRE(t);
  VARLEX_REQUIRE(out);
  return guarded([&] { *out = new varlex_stepfn{t->trace.q.fn()}; });
}

// ---- interleaving

varlex_status varlex_interleave_point(const double* x, int n, int bits, double* out) {
  VARLEX_REQUIRE(x);
  VARLEX_REQUIRE(out);
  return guarded([&] {
    if (n < 1) throw varlex::DomainError("dimension must be >= 1");
    int b = bits == 0 ? varlex::default_bits(n) : bits;
    *out = varlex::interleave_point(std::span<const double>(x, static_cast<size_t>(n)), b);
  });
}

varlex_status varlex_cube_image(int n, int level, const uint64_t* indices, int* image_level,
                                uint64_t* image_index) {
  VARLEX_REQUIRE(indices);
  VARLEX_REQUIRE(image_level);
  VARLEX_REQUIRE(image_index);
  return guarded([&] {
    if (n < 1) throw varlex::DomainError("dimension must be >= 1");
    auto cube = varlex::DyadicRect::cube(
        n, level, std::span<const std::uint64_t>(indices, static_cast<size_t>(n)));
    auto img = varlex::cube_image(cube);
    *image_level = img.level;
    *image_index = img.index;
  });
}

varlex_status varlex_rect_norm(const varlex_stepfn* p_hat, int n, int bits, const int* levels,
                               const uint64_t* indices, double tol, varlex_norm_result* out) {
  VARLEX_REQUIRE(p_hat);
  VARLEX_REQUIRE(levels);
  VARLEX_REQUIRE(indices);
  VARLEX_REQUIRE(out);
  return guarded([&] {
    if (n < 1) throw varlex::DomainError("dimension must be >= 1");
    varlex::GridExponentND pbar(varlex::ExponentProfile(p_hat->fn), n, bits);
    varlex::DyadicRect rect{std::vector<int>(levels, levels + n),
                            std::vector<std::uint64_t>(indices, indices + n)};
    copy_norm(varlex::rect_norm(pbar, rect, tol), out);
  });
}

varlex_status varlex_rect_norm_json(const varlex_stepfn* p_hat, int n, int bits,
                                    const char* rect_json, double tol, varlex_norm_result* out) {
  VARLEX_REQUIRE(p_hat);
  VARLEX_REQUIRE(rect_json);
  VARLEX_REQUIRE(out);
  return guarded([&] {
    auto rect = varlex::rect_from_json(varlex::parse_json(rect_json));
    if (rect.dimension() != n)
      throw varlex::ValidationError("rectangle dimension does not match n");
    varlex::GridExponentND pbar(varlex::ExponentProfile(p_hat->fn), n, bits);
    copy_norm(varlex::rect_norm(pbar, rect, tol), out);
  });
}

// ---- scan

varlex_status varlex_scan(const varlex_stepfn* p_hat, int n, int bits, int max_level, double tol,
                          int coverage_level, varlex_scan_report** out) {
  VARLEX_REQUIRE(p_hat);
  VARLEX_REQUIRE(out);
  return guarded([&] {
    varlex::GridExponentND pbar(varlex::ExponentProfile(p_hat->fn), n, bits);
    *out = new varlex_scan_report{varlex::closedness_scan(pbar, max_level, tol, coverage_level)};
  });
}

varlex_status varlex_scan_trace(const varlex_trace* t, int max_level, double tol,
                                varlex_scan_report** out) {
  VARLEX_REQUIRE(t);
  VARLEX_REQUIRE(out);
  return guarded([&] {
    varlex::GridExponentND pbar(t->trace.p_hat, t->trace.dimension, t->trace.bits);
    *out = new varlex_scan_report{
        varlex::closedness_scan(pbar, max_level, tol, t->trace.coverage_level)};
  });
}

void varlex_scan_report_destroy(varlex_scan_report* r) { delete r; }

size_t varlex_scan_level_count(const varlex_scan_report* r) {
  return r ? r->report.levels.size() : 0;
}

int varlex_scan_clamped(const varlex_scan_report* r) {
  return r && r->report.max_level < r->report.requested_max_level ? 1 : 0;
}

varlex_status varlex_scan_level(const varlex_scan_report* r, size_t i, int* level,
                                double* min_norm, uint64_t* argmin_image, int* within_coverage) {
  VARLEX_REQUIRE(r);
  if (i >= r->report.levels.size()) return fail(VARLEX_ERROR_DOMAIN, "level index out of range");
  const auto& l = r->report.levels[i];
  if (level) *level = l.level;
  if (min_norm) *min_norm = l.min_norm;
  if (argmin_image) *argmin_image = l.argmin_image;
  if (within_coverage) *within_coverage = l.within_coverage ? 1 : 0;
  return VARLEX_OK;
}

varlex_status varlex_scan_to_json(const varlex_scan_report* r, char** out) {
  VARLEX_REQUIRE(r);
  VARLEX_REQUIRE(out);
  return guarded([&] { *out = dup_string(varlex::to_json(r->report).dump(2)); });
}

varlex_status varlex_scan_to_csv(const varlex_scan_report* r, char** out) {
  VARLEX_REQUIRE(r);
  VARLEX_REQUIRE(out);
  return guarded([&] { *out = dup_string(varlex::scan_to_csv(r->report)); });
}

} // extern "C"
