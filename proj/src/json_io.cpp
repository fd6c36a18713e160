#include "varlex/json_io.hpp"

#include "varlex/error.hpp"

#include <sstream>

namespace varlex {

namespace {

// Runs a reader and turns nlohmann type/key errors into ParseError.
template <class F>
auto guarded(const char* what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed ") + what + " JSON: " + e.what());
  }
}

Json windows_json(const std::vector<Window>& ws) {
  Json out = Json::array();
  for (const auto& w : ws)
    out.push_back({{"lo", w.lo}, {"hi", w.hi}, {"clipped", w.clipped}});
  return out;
}

} // namespace

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

Json to_json(const StepFn& f) {
  return {{"breakpoints", std::vector<double>(f.breakpoints().begin(), f.breakpoints().end())},
          {"values", std::vector<double>(f.values().begin(), f.values().end())}};
}

StepFn stepfn_from_json(const Json& j) {
  return guarded("step function", [&] {
    return StepFn(j.at("breakpoints").get<std::vector<double>>(),
                  j.at("values").get<std::vector<double>>());
  });
}

Json to_json(const TransportMap& omega) {
  Json out = Json::array();
  for (const auto& p : omega.pieces())
    out.push_back({{"src", {p.src_lo, p.src_hi}}, {"dst", p.dst}});
  return out;
}

TransportMap transport_from_json(const Json& j) {
  auto pieces = guarded("transport map", [&] {
    if (!j.is_array())
      throw ParseError("transport map JSON must be an array");
    std::vector<TransportPiece> out;
    for (const auto& e : j) {
      auto src = e.at("src").get<std::vector<double>>();
      if (src.size() != 2)
        throw ParseError("transport piece \"src\" must have two entries");
      out.push_back({src[0], src[1], e.at("dst").get<double>()});
    }
    return out;
  });
  return TransportMap(std::move(pieces));
}

Json to_json(const NormResult& r) {
  return {{"value", r.value}, {"lo", r.lo}, {"hi", r.hi}, {"modular", r.modular},
          {"iters", r.iterations}};
}

Json to_json(const DyadicRect& r) { return {{"levels", r.levels}, {"indices", r.indices}}; }

DyadicRect rect_from_json(const Json& j) {
  DyadicRect r = guarded("dyadic rectangle", [&] {
    return DyadicRect{j.at("levels").get<std::vector<int>>(),
                      j.at("indices").get<std::vector<std::uint64_t>>()};
  });
  r.validate();
  return r;
}

Json to_json(const RatioProfile& p) {
  return {{"depths", p.depths}, {"ratios", p.ratios}, {"running_max_tail", p.running_max_tail}};
}

Json to_json(const DiagnoseReport& r) {
  Json tests = Json::array();
  for (const auto& t : r.exp_tests) {
    tests.push_back({{"c", t.c},
                     {"partials", t.partials},
                     {"verdict", to_string(t.verdict.verdict)},
                     {"last_increment", t.verdict.last_increment},
                     {"prior_increment", t.verdict.prior_increment},
                     {"tail_share", t.verdict.tail_share}});
  }
  return {{"depth", r.depth},
          {"delta", r.delta},
          {"ratio_profile", to_json(r.profile)},
          {"deepest_tail", r.profile.deepest_tail()},
          {"finite_depth_verdict", r.witnessed ? "witnessed" : "not witnessed"},
          {"depths", r.depths},
          {"exp_integral", tests},
          {"mln_defect", r.mln}};
}

Json to_json(const ScanReport& r) {
  Json levels = Json::array();
  for (const auto& lv : r.levels) {
    levels.push_back({{"level", lv.level},
                      {"min_norm", lv.min_norm},
                      {"argmin_cube", lv.argmin_cube},
                      {"argmin_image", lv.argmin_image},
                      {"within_coverage", lv.within_coverage}});
  }
  return {{"dimension", r.dimension},
          {"bits", r.bits},
          {"requested_max_level", r.requested_max_level},
          {"max_level", r.max_level},
          {"coverage_level", r.coverage_level},
          {"levels", levels}};
}

std::string scan_to_csv(const ScanReport& r) {
  std::ostringstream os;
  os.precision(17);
  os << "level,min_norm,argmin_index\n";
  for (const auto& lv : r.levels)
    os << lv.level << ',' << lv.min_norm << ',' << lv.argmin_image << '\n';
  return os.str();
}

Json to_json(const ConstructionTrace& t) {
  Json anchors = Json::array();
  for (const auto& a : t.anchors)
    anchors.push_back({{"t", a.t}, {"h", a.h}, {"ratio", a.ratio}});
  Json audit = Json::array();
  for (const auto& a : t.audit)
    audit.push_back({{"name", a.name}, {"passed", a.passed}, {"detail", a.detail}});
  Json j = {{"d", t.d},
            {"c", t.c},
            {"dimension", t.dimension},
            {"bits", t.bits},
            {"grid", {{"depth", t.grid.depth}, {"octave_cells", t.grid.octave_cells}}},
            {"anchors", anchors},
            {"minorant", to_json(t.minorant)},
            {"divergence",
             {{"lower_bounds", t.divergence.lower_bounds},
              {"band_integrals", t.divergence.band_integrals},
              {"monotone_growth", t.divergence.monotone_growth}}},
            {"partition_a", t.partition_a},
            {"placements", t.placements},
            {"windows", windows_json(t.windows)},
            {"stage_count", t.stage_count},
            {"h", to_json(t.h.fn())},
            {"q", to_json(t.q.fn())},
            {"omega", to_json(t.omega)},
            {"p_hat", to_json(t.p_hat.fn())},
            {"q_integral", t.q_integral},
            {"uncovered_measure", t.uncovered_measure},
            {"coverage_level", t.coverage_level},
            {"cube_coverage_level", t.cube_coverage_level()},
            {"audit", audit},
            {"passed", t.passed()}};
  if (!t.stages.empty()) {
    Json stages = Json::array();
    for (const auto& s : t.stages)
      stages.push_back(to_json(s));
    j["stages"] = stages;
  }
  return j;
}

ConstructionTrace trace_from_json(const Json& j) {
  return guarded("construction trace", [&] {
    ConstructionTrace t;
    t.d = j.at("d").get<double>();
    t.c = j.at("c").get<double>();
    t.dimension = j.at("dimension").get<int>();
    t.bits = j.at("bits").get<int>();
    t.grid.depth = j.at("grid").at("depth").get<int>();
    t.grid.octave_cells = j.at("grid").at("octave_cells").get<int>();
    for (const auto& a : j.at("anchors"))
      t.anchors.push_back({a.at("t").get<double>(), a.at("h").get<double>(),
                           a.at("ratio").get<double>()});
    t.minorant = stepfn_from_json(j.at("minorant"));
    const auto& dv = j.at("divergence");
    t.divergence.lower_bounds = dv.at("lower_bounds").get<std::vector<double>>();
    t.divergence.band_integrals = dv.at("band_integrals").get<std::vector<double>>();
    t.divergence.monotone_growth = dv.at("monotone_growth").get<bool>();
    t.partition_a = j.at("partition_a").get<std::vector<double>>();
    t.placements = j.at("placements").get<std::vector<double>>();
    for (const auto& w : j.at("windows"))
      t.windows.push_back({w.at("lo").get<double>(), w.at("hi").get<double>(),
                           w.at("clipped").get<bool>()});
    t.stage_count = j.at("stage_count").get<int>();
    t.h = ExponentProfile(stepfn_from_json(j.at("h")));
    t.q = ExponentProfile(stepfn_from_json(j.at("q")));
    t.omega = transport_from_json(j.at("omega"));
    t.p_hat = ExponentProfile(stepfn_from_json(j.at("p_hat")));
    t.q_integral = j.at("q_integral").get<double>();
    t.uncovered_measure = j.at("uncovered_measure").get<double>();
    t.coverage_level = j.at("coverage_level").get<int>();
    for (const auto& a : j.at("audit"))
      t.audit.push_back({a.at("name").get<std::string>(), a.at("passed").get<bool>(),
                         a.at("detail").get<std::string>()});
    if (j.contains("stages")) {
      for (const auto& s : j.at("stages"))
        t.stages.push_back(stepfn_from_json(s));
    }
    return t;
  });
}

} // namespace varlex
