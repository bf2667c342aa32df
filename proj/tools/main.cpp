#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "mixcex/errors.hpp"
#include "mixcex/scanner.hpp"
#include "mixcex/serialize.hpp"
#include "mixcex/variation.hpp"
#include "mixcex/verify.hpp"

namespace {

using namespace mixcex;
using nlohmann::json;

struct GlobalFlags {
  bool error_json = false;
  int threads = 1;
};

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open for write: " + path);
  out << content;
  if (!out) throw io_error("write failed: " + path);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Rect parse_rect(const std::string& text) {
  Rect r;
  if (std::sscanf(text.c_str(), "%lf,%lf,%lf,%lf", &r.x0, &r.x1, &r.y0, &r.y1) != 4 ||
      !(r.x0 < r.x1) || !(r.y0 < r.y1))
    throw domain_error("rect must be 'x0,x1,y0,y1' with x0<x1, y0<y1");
  return r;
}

// y0 may be a rational or an endpoint name like "a1" / "b3".
Rat resolve_y0(const Instance& inst, const std::string& text) {
  if (!text.empty() && (text[0] == 'a' || text[0] == 'b')) {
    int n = 0;
    try {
      std::size_t used = 0;
      n = std::stoi(text.substr(1), &used);
      if (used + 1 != text.size()) throw std::invalid_argument(text);
    } catch (const std::exception&) {
      throw domain_error("y0 must be a rational or an endpoint name like a1: '" + text + "'");
    }
    const Interval& iv = inst.set.interval(n);
    return text[0] == 'a' ? iv.a : iv.b;
  }
  return parse_rational(text);
}

int run_protected(const GlobalFlags& g, const std::function<int()>& body) {
  try {
    return body();
  } catch (const error& ex) {
    if (g.error_json) {
      json j;
      j["error"] = {{"code", static_cast<int>(ex.code())}, {"message", ex.what()}};
      std::cout << j.dump(2) << "\n";
    } else {
      std::cerr << "error: " << ex.what() << "\n";
    }
    return static_cast<int>(ex.code());
  } catch (const std::exception& ex) {
    if (g.error_json) {
      json j;
      j["error"] = {{"code", 1}, {"message", ex.what()}};
      std::cout << j.dump(2) << "\n";
    } else {
      std::cerr << "error: " << ex.what() << "\n";
    }
    return 1;
  }
}

void emit_scan_csv(const ExistenceMap& map, const std::string& path) {
  std::ostringstream out;
  out << "x,y,inA,inB,inE\n";
  for (int iy = 0; iy < map.ny(); ++iy)
    for (int ix = 0; ix < map.nx(); ++ix) {
      const std::size_t at =
          static_cast<std::size_t>(iy) * map.xs.size() + static_cast<std::size_t>(ix);
      out << fmt(map.xs[static_cast<std::size_t>(ix)]) << ','
          << fmt(map.ys[static_cast<std::size_t>(iy)]) << ',' << int(map.in_A[at]) << ','
          << int(map.in_B[at]) << ',' << int(map.in_E[at]) << '\n';
    }
  write_text(path, out.str());
}

json scan_summary(const ExistenceMap& map) {
  json j;
  j["grid"] = {map.nx(), map.ny()};
  j["m_max"] = map.cfg.m_max;
  j["n_max"] = map.cfg.n_max;
  j["subsample"] = map.cfg.subsample;
  j["count_in_e"] = map.count_in_E();
  j["excluded_columns"] = map.fully_excluded_columns();
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mixcex: builds a separately twice differentiable function on the unit square "
               "whose x-derivative is discontinuous in y on a fat Cantor set, evaluates its "
               "closed forms, and verifies the construction's certificates"};
  app.require_subcommand(1);
  GlobalFlags g;
  app.add_flag("--error-json", g.error_json, "on failure, print a machine-readable error JSON");
  app.add_option("--threads", g.threads, "worker cap for parallel stages")->capture_default_str();

  // ---- build ----
  auto* build = app.add_subcommand("build", "construct an instance and write its JSON document");
  int b_depth = 5;
  std::string b_ratio = "1", b_eps = "cube", b_delta = "triangular", b_profile = "poly33", b_out;
  build->add_option("--depth", b_depth, "construction depth K (2^K - 1 intervals)")->required();
  build->add_option("--ratio", b_ratio, "removal ratio in (0,1]")->capture_default_str();
  build->add_option("--eps-rule", b_eps, "eps rule (cube)")->capture_default_str();
  build->add_option("--delta-rule", b_delta, "delta rule (triangular)")->capture_default_str();
  build->add_option("--profile", b_profile, "bump profile: poly33 | expbump")
      ->capture_default_str();
  build->add_option("--out", b_out, "output instance file")->required();

  // ---- eval ----
  auto* evalc = app.add_subcommand("eval", "closed-form values of f and its partials at a point");
  std::string e_inst, e_x, e_y;
  evalc->add_option("--instance", e_inst, "instance file")->required();
  evalc->add_option("--x", e_x, "x as a rational p/q")->required();
  evalc->add_option("--y", e_y, "y as a rational p/q")->required();

  // ---- witness ----
  auto* wit = app.add_subcommand("witness", "discontinuity witnesses at shrinking scales");
  std::string w_inst, w_y0, w_delta = "1/2", w_out;
  int w_m = 3, w_scales = 1, w_budget = 4096;
  wit->add_option("--instance", w_inst, "instance file")->required();
  wit->add_option("--y0", w_y0, "base point in B: rational, or an endpoint name like a1")
      ->required();
  wit->add_option("--m", w_m, "tail start index")->capture_default_str();
  wit->add_option("--delta", w_delta, "initial scale")->capture_default_str();
  wit->add_option("--scales", w_scales, "number of shrinking scales")->capture_default_str();
  wit->add_option("--budget", w_budget, "dyadic search budget for x0")->capture_default_str();
  wit->add_option("--out", w_out, "output JSON (stdout if omitted)");

  // ---- scan ----
  auto* sc = app.add_subcommand("scan", "grid classification of derivative existence");
  std::string s_inst, s_fn, s_rect, s_out, s_summary;
  int s_grid = 64, s_gx = 0, s_gy = 0, s_m = 8, s_n = 64, s_sub = 4;
  sc->add_option("--instance", s_inst, "instance file");
  sc->add_option("--function", s_fn, "control: smooth | abs-x | bilinear | constant");
  sc->add_option("--grid", s_grid, "grid points per axis")->capture_default_str();
  sc->add_option("--grid-x", s_gx, "override x grid");
  sc->add_option("--grid-y", s_gy, "override y grid");
  sc->add_option("--m-max", s_m, "oscillation quantifier cap")->capture_default_str();
  sc->add_option("--n-max", s_n, "window quantifier cap")->capture_default_str();
  sc->add_option("--subsample", s_sub, "samples per window side")->capture_default_str();
  sc->add_option("--rect", s_rect, "scan rectangle 'x0,x1,y0,y1'");
  sc->add_option("--out", s_out, "bitmap CSV path")->required();
  sc->add_option("--summary", s_summary, "summary JSON path");

  // ---- variation ----
  auto* var = app.add_subcommand("variation", "variation profiles and the integrability ledger");
  std::string v_inst, v_prefix;
  int v_nx = 129, v_ny = 129, v_sup = 200;
  var->add_option("--instance", v_inst, "instance file")->required();
  var->add_option("--out-prefix", v_prefix, "prefix for emitted files")->required();
  var->add_option("--grid-nx", v_nx, "x grid for the Tonelli profiles")->capture_default_str();
  var->add_option("--grid-ny", v_ny, "y grid for the Tonelli profiles")->capture_default_str();
  var->add_option("--sup-grid", v_sup, "grid for the |f_yy| sup sample")->capture_default_str();

  // ---- verify ----
  auto* ver = app.add_subcommand("verify", "run the acceptance suite");
  int r_depth = 5;
  std::string r_ratio = "1", r_out;
  long r_samples = 100000;
  std::uint64_t r_seed = 20260809;
  bool r_timings = false;
  ver->add_option("--depth", r_depth, "depth of the default instance")->capture_default_str();
  ver->add_option("--ratio", r_ratio, "removal ratio")->capture_default_str();
  ver->add_option("--samples", r_samples, "Monte Carlo samples per index")->capture_default_str();
  ver->add_option("--seed", r_seed, "Monte Carlo seed")->capture_default_str();
  ver->add_option("--out", r_out, "write the report JSON here");
  ver->add_flag("--timings", r_timings, "include runtimes in the report (not byte-stable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (build->parsed())
    return run_protected(g, [&] {
      if (b_eps != "cube" || b_delta != "triangular")
        throw domain_error("only the default rules are available from the CLI; "
                           "supply tables through the library interface");
      CantorSet set = build_cantor(b_depth, parse_rational(b_ratio));
      KernelSchedule sched = make_schedule(set);
      Instance inst =
          assemble(std::move(set), BumpProfile::by_name(b_profile), std::move(sched));
      save_instance(inst, b_out);
      std::cout << "instance: depth " << inst.depth() << ", ratio "
                << rational_string(inst.set.ratio) << ", " << inst.term_count()
                << " terms, removed measure " << rational_string(inst.set.removed_measure)
                << "\n";
      std::cout << "tail certificate: sup|d/dy| <= " << fmt(to_double(inst.tail.sup_d1))
                << ", sup|d2/dy2| <= " << fmt(to_double(inst.tail.sup_d2))
                << ", nonincreasing: " << (inst.tail.d1_nonincreasing ? "yes" : "no") << "/"
                << (inst.tail.d2_nonincreasing ? "yes" : "no") << "\n";
      std::cout << "wrote " << b_out << "\n";
      return 0;
    });

  if (evalc->parsed())
    return run_protected(g, [&] {
      const Instance inst = load_instance(e_inst);
      const Eval ev = eval_all(inst, parse_rational(e_x), parse_rational(e_y));
      std::cout << canonical_dump(eval_to_json(ev));
      return 0;
    });

  if (wit->parsed())
    return run_protected(g, [&] {
      const Instance inst = load_instance(w_inst);
      const Rat y0 = resolve_y0(inst, w_y0);
      const auto ladder =
          witness_ladder(inst, y0, w_m, parse_rational(w_delta), w_scales, w_budget);
      json doc;
      json arr = json::array();
      for (const Witness& w : ladder) arr.push_back(witness_to_json(w));
      doc["witnesses"] = std::move(arr);
      doc["probe"] = probe_to_json(mixed_quotient_probe(inst, ladder));
      const std::string text = canonical_dump(doc);
      if (w_out.empty())
        std::cout << text;
      else
        write_text(w_out, text);
      return 0;
    });

  if (sc->parsed())
    return run_protected(g, [&] {
      if (s_inst.empty() == s_fn.empty())
        throw domain_error("scan needs exactly one of --instance or --function");
      ScanConfig cfg;
      cfg.grid_nx = s_gx > 0 ? s_gx : s_grid;
      cfg.grid_ny = s_gy > 0 ? s_gy : s_grid;
      cfg.m_max = s_m;
      cfg.n_max = s_n;
      cfg.subsample = s_sub;

      Instance inst;  // keep alive for the handle
      FunctionHandle handle;
      if (!s_inst.empty()) {
        inst = load_instance(s_inst);
        handle = make_instance_handle(inst);
        cfg.rect = Rect{0, 1, 0, 1};
      } else {
        handle = make_control(s_fn);
        cfg.rect = s_fn == "abs-x" ? Rect{-0.5, 0.5, -0.5, 0.5} : Rect{0, 1, 0, 1};
      }
      if (!s_rect.empty()) cfg.rect = parse_rect(s_rect);
      const ExistenceMap map = scan(handle, cfg, g.threads);
      emit_scan_csv(map, s_out);
      const json summary = scan_summary(map);
      if (!s_summary.empty()) write_text(s_summary, canonical_dump(summary));
      std::cout << canonical_dump(summary);
      return 0;
    });

  if (var->parsed())
    return run_protected(g, [&] {
      const Instance inst = load_instance(v_inst);

      const auto sections = default_cor23_sections(inst);
      const Cor23Report rep = check_cor23_hypothesis(inst, sections);
      std::ostringstream secs;
      secs << "y,interval,exact,value\n";
      for (const SectionVariation& sv : rep.sections)
        secs << rational_string(sv.y) << ',' << (sv.interval_index ? *sv.interval_index : 0) << ','
             << rational_string(sv.exact_value) << ',' << fmt(sv.value) << '\n';
      write_text(v_prefix + ".sections.csv", secs.str());

      const IntegrabilityReport ir = integrability_report(inst, v_sup);
      const FunctionHandle handle = make_instance_handle(inst);
      const auto [v1, v2] = tonelli_profile(handle, Rect{0, 1, 0, 1}, v_nx, v_ny);
      std::ostringstream prof;
      prof << "axis,coord,value\n";
      for (std::size_t i = 0; i < v1.coords.size(); ++i)
        prof << 1 << ',' << fmt(v1.coords[i]) << ',' << fmt(v1.values[i]) << '\n';
      for (std::size_t i = 0; i < v2.coords.size(); ++i)
        prof << 2 << ',' << fmt(v2.coords[i]) << ',' << fmt(v2.values[i]) << '\n';
      write_text(v_prefix + ".profiles.csv", prof.str());

      json doc;
      doc["generations"] = ir.generations;
      json cores = json::array(), incs = json::array();
      for (const Rat& r : ir.fxx_partial_core) cores.push_back(rational_string(r));
      for (const Rat& r : ir.fxx_increment_core) incs.push_back(rational_string(r));
      doc["fxx_partial_core"] = std::move(cores);
      doc["fxx_increment_core"] = std::move(incs);
      doc["fxx_partial"] = ir.fxx_partial;
      doc["partials_strictly_increasing"] = ir.partials_strictly_increasing;
      doc["increments_strictly_increasing"] = ir.increments_strictly_increasing;
      doc["fyy_sup_bound"] = rational_string(ir.fyy_sup_bound);
      doc["fyy_sup_observed"] = ir.fyy_sup_observed;
      doc["sup_grid"] = ir.sup_grid;
      doc["growth_across_generations"] = rep.growing_across_generations;
      doc["tonelli_v1_integral"] = v1.integral;
      doc["tonelli_v2_integral"] = v2.integral;
      write_text(v_prefix + ".integrability.json", canonical_dump(doc));
      std::cout << "wrote " << v_prefix << ".sections.csv, .profiles.csv, .integrability.json\n";
      return 0;
    });

  if (ver->parsed())
    return run_protected(g, [&] {
      VerifyOptions opt;
      opt.depth = r_depth;
      opt.ratio = parse_rational(r_ratio);
      opt.mc_samples = r_samples;
      opt.mc_seed = r_seed;
      opt.threads = g.threads;
      const auto results = run_acceptance(opt);
      for (const auto& r : results)
        std::printf("%s %-26s %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(), r.detail.c_str());
      if (!r_out.empty()) write_text(r_out, canonical_dump(verify_report(results, r_timings)));
      return all_pass(results) ? 0 : 9;
    });

  return 0;
}
