#include "hyperdyn/builtins.hpp"
#include "hyperdyn/errors.hpp"
#include "hyperdyn/io.hpp"
#include "hyperdyn/scenario.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

using namespace hyperdyn;

namespace {

struct SystemArgs {
  std::string graph;
  std::string map;
  std::string builtin;
  std::uint64_t seed = 1;
  bool seed_given = false;
  std::string report;
  std::string csv_dir;
  bool json = false;
};

void add_system_options(CLI::App* app, SystemArgs& a) {
  app->add_option("--graph", a.graph, "Graph file");
  app->add_option("--map", a.map, "Map file, or builtin:<name>");
  app->add_option("--builtin", a.builtin, "Builtin system, e.g. truncated-tent(3)");
  app->add_option("--seed", a.seed, "Seed")->each([&](const std::string&) { a.seed_given = true; });
  app->add_option("--report", a.report, "Write the JSON report here");
  app->add_option("--csv-dir", a.csv_dir, "Write CSV tables here");
  app->add_flag("--json", a.json, "Print the full report");
}

std::optional<std::uint64_t> env_seed() {
  const char* s = std::getenv("HYPERDYN_SEED");
  if (!s || !*s) return std::nullopt;
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    throw ValidationError("HYPERDYN_SEED is not an integer");
  }
}

Scenario scenario_for(const SystemArgs& a, const std::string& name) {
  Scenario s;
  s.name = name;
  if (!a.builtin.empty()) {
    if (!a.map.empty() || !a.graph.empty()) throw ValidationError("give either --builtin or --graph/--map");
    s.map = "builtin:" + a.builtin;
  } else {
    if (a.map.empty()) throw ValidationError("a system is needed: --builtin or --graph with --map");
    s.map = a.map;
    s.graph = a.graph;
  }
  s.seed = a.seed;
  s.report = a.report;
  s.csv_dir = a.csv_dir;
  return s;
}

std::string tally_text(const Json& tally) {
  const std::size_t pass = tally.value("pass", std::size_t{0});
  const std::size_t fail = tally.value("fail", std::size_t{0});
  const std::size_t unmet = tally.value("precondition-unmet", std::size_t{0});
  return std::to_string(pass + fail + unmet) + " checks: " + std::to_string(pass) + " pass, " + std::to_string(fail) + " fail, " +
         std::to_string(unmet) + " precondition-unmet";
}

void print_summary(const Json& report) {
  for (const auto& a : report["analyses"]) {
    std::cout << "[" << a["index"].get<std::size_t>() << "] " << a["kind"].get<std::string>() << ": " << a["status"].get<std::string>();
    if (a.contains("result")) {
      const Json& r = a["result"];
      if (r.contains("verdict")) std::cout << " " << r["verdict"].get<std::string>();
      if (r.contains("found") && !r["found"].get<bool>()) std::cout << " not found";
      if (r.contains("preperiod")) std::cout << " preperiod=" << r["preperiod"];
      if (r.contains("period")) std::cout << " period=" << r["period"];
      if (r.contains("limit_cycle") && r["limit_cycle"].size() <= 4)
        for (const auto& k : r["limit_cycle"]) std::cout << " " << k.get<std::string>();
      if (r.contains("periodic")) std::cout << " " << r["periodic"].size() << " periodic subtrees";
      if (r.contains("points")) std::cout << " " << r["points"].size() << " omega-limit points";
    }
    if (a.contains("checks")) {
      std::cout << " (" << tally_text(a["tally"]) << ")";
      for (const auto& c : a["checks"])
        if (c["status"] == "fail") {
          std::cout << "\n    fail: " << c["message"].get<std::string>();
          break;
        }
    }
    std::cout << "\n";
  }
  std::cout << "failures: " << report["failures"] << "\n";
}

int finish(const Scenario& s, const RunResult& r, bool json) {
  write_outputs(s, r, ".");
  if (json) {
    std::cout << r.report.dump(2) << "\n";
  } else {
    print_summary(r.report);
  }
  return r.failures ? 1 : 0;
}

int run_single(const SystemArgs& a, Analysis analysis) {
  Scenario s = scenario_for(a, analysis.kind);
  s.analyses.push_back(std::move(analysis));
  RunOptions o;
  o.seed_override = a.seed_given ? std::optional<std::uint64_t>(a.seed) : env_seed();
  return finish(s, run_scenario(s, o), a.json);
}

void set_if(Analysis& a, const std::string& key, const std::string& value) {
  if (!value.empty()) a.params[key] = value;
}

std::string join(const std::vector<std::string>& items) {
  std::string out = "[";
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? ", " : "") + items[i];
  return out + "]";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact dynamics of induced maps on continua of graphs"};
  app.require_subcommand(1);
  int status = 0;

  // run
  auto* run = app.add_subcommand("run", "Run a scenario file");
  std::string scenario_path;
  std::uint64_t run_seed = 0;
  unsigned jobs = 1;
  bool run_json = false;
  std::string run_report, run_csv;
  run->add_option("scenario", scenario_path, "Scenario file")->required();
  auto* run_seed_opt = run->add_option("--seed", run_seed, "Override the scenario seed");
  run->add_option("--jobs", jobs, "Worker threads")->check(CLI::Range(1u, 256u));
  run->add_option("--report", run_report, "Override the report path");
  run->add_option("--csv-dir", run_csv, "Override the CSV directory");
  run->add_flag("--json", run_json, "Print the full report");
  run->callback([&] {
    const std::filesystem::path path(scenario_path);
    Scenario s = parse_scenario(read_text_file(path));
    const std::filesystem::path base = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
    RunOptions o;
    o.base_dir = base;
    o.jobs = jobs;
    o.seed_override = *run_seed_opt ? std::optional<std::uint64_t>(run_seed) : env_seed();
    RunResult r = run_scenario(s, o);
    if (!run_report.empty()) s.report = std::filesystem::absolute(run_report).string();
    if (!run_csv.empty()) s.csv_dir = std::filesystem::absolute(run_csv).string();
    write_outputs(s, r, base);
    if (run_json) {
      std::cout << r.report.dump(2) << "\n";
    } else {
      print_summary(r.report);
    }
    status = r.failures ? 1 : 0;
  });

  // classify
  SystemArgs cls_args;
  std::string cls_continuum, cls_tol;
  std::size_t cls_horizon = 2000, cls_cap = 64;
  auto* cls = app.add_subcommand("classify", "Classify the orbit of a continuum");
  add_system_options(cls, cls_args);
  cls->add_option("--continuum", cls_continuum, "Continuum literal or @name")->required();
  cls->add_option("--horizon", cls_horizon, "Iteration horizon");
  cls->add_option("--tol", cls_tol, "Tolerance p/q");
  cls->add_option("--period-cap", cls_cap, "Largest asymptotic period tried");
  cls->callback([&] {
    Analysis a{"classify", {{"continuum", cls_continuum}, {"horizon", std::to_string(cls_horizon)}, {"period_cap", std::to_string(cls_cap)}}};
    set_if(a, "tol", cls_tol);
    status = run_single(cls_args, a);
  });

  // check <suite>
  auto* check = app.add_subcommand("check", "Theorem checkers");
  check->require_subcommand(1);
  struct CheckArgs {
    SystemArgs sys;
    std::string continuum, continuum2, tol;
    std::size_t horizon = 5000;
    std::size_t random = 0;
    unsigned depth = 4;
  };
  CheckArgs pb, ne, re, ce;
  auto random_suite = [&](const std::string& suite, CheckArgs& c) {
    std::uint64_t seed = c.sys.seed_given ? c.sys.seed : env_seed().value_or(c.sys.seed);
    RunResult r = run_random_suite(suite, c.random, seed, c.horizon);
    if (!c.sys.report.empty()) write_file_atomic(c.sys.report, r.report.dump(2) + "\n");
    if (c.sys.json) {
      std::cout << r.report.dump(2) << "\n";
    } else {
      std::cout << suite << " over " << c.random << " random maps: " << r.report["tally"].dump() << "\n";
    }
    return r.failures ? 1 : 0;
  };
  auto* cpb = check->add_subcommand("period-bound", "Periods of subtrees containing a fixed point divide lcm{1..|End|}");
  add_system_options(cpb, pb.sys);
  cpb->add_option("--continuum", pb.continuum, "Continuum; all periodic aligned subtrees when omitted");
  cpb->add_option("--horizon", pb.horizon, "Period search horizon");
  cpb->add_option("--random", pb.random, "Run over this many random Markov tree maps instead");
  cpb->callback([&] {
    if (pb.random) {
      status = random_suite("period-bound", pb);
      return;
    }
    Analysis a{"check-period-bound", {{"horizon", std::to_string(pb.horizon)}}};
    set_if(a, "continuum", pb.continuum);
    status = run_single(pb.sys, a);
  });
  auto* cne = check->add_subcommand("nesting", "Intersecting periodic subtrees with p1 > m p2 are nested");
  add_system_options(cne, ne.sys);
  cne->add_option("--continuum", ne.continuum, "P1");
  cne->add_option("--continuum2", ne.continuum2, "P2");
  cne->add_option("--horizon", ne.horizon, "Period search horizon");
  cne->add_option("--random", ne.random, "Run over this many random Markov tree maps instead");
  cne->callback([&] {
    if (ne.random) {
      status = random_suite("nesting", ne);
      return;
    }
    Analysis a{"check-nesting", {{"horizon", std::to_string(ne.horizon)}}};
    set_if(a, "continuum", ne.continuum);
    set_if(a, "continuum2", ne.continuum2);
    status = run_single(ne.sys, a);
  });
  auto* cre = check->add_subcommand("recurrence", "Recurrent aligned continua are periodic");
  add_system_options(cre, re.sys);
  cre->add_option("--horizon", re.horizon, "Horizon");
  cre->add_option("--tol", re.tol, "Recurrence threshold p/q");
  cre->add_option("--random", re.random, "Run over this many random Markov tree maps instead");
  cre->callback([&] {
    if (re.random) {
      status = random_suite("recurrence", re);
      return;
    }
    Analysis a{"check-recurrence", {{"horizon", std::to_string(re.horizon)}}};
    set_if(a, "tol", re.tol);
    status = run_single(re.sys, a);
  });
  auto* cce = check->add_subcommand("center", "Generating chains and their residual continua");
  add_system_options(cce, ce.sys);
  cce->add_option("--horizon", ce.horizon, "Classification horizon for residuals");
  cce->add_option("--tol", ce.tol, "Degeneracy tolerance p/q");
  cce->add_option("--depth", ce.depth, "Chain depth")->check(CLI::Range(2u, 16u));
  cce->callback([&] {
    Analysis a{"check-center", {{"horizon", std::to_string(ce.horizon)}, {"depth", std::to_string(ce.depth)}}};
    set_if(a, "tol", ce.tol);
    status = run_single(ce.sys, a);
  });

  // probe equicontinuity
  auto* probe = app.add_subcommand("probe", "Numerical probes");
  probe->require_subcommand(1);
  SystemArgs pr_args;
  std::string pr_continuum;
  std::vector<std::string> pr_eps{"1/10"}, pr_gamma;
  std::size_t pr_horizon = 500, pr_samples = 200;
  auto* peq = probe->add_subcommand("equicontinuity", "Search delta for neighbourhoods B of U under the induced map");
  add_system_options(peq, pr_args);
  peq->add_option("--continuum", pr_continuum, "U")->required();
  peq->add_option("--eps", pr_eps, "Target eps values p/q");
  peq->add_option("--gamma", pr_gamma, "Neighbourhood radii p/q");
  peq->add_option("--horizon", pr_horizon, "Horizon");
  peq->add_option("--samples", pr_samples, "Perturbations per delta");
  peq->callback([&] {
    Analysis a{"probe-equicontinuity",
               {{"continuum", pr_continuum}, {"eps", join(pr_eps)}, {"horizon", std::to_string(pr_horizon)}, {"samples", std::to_string(pr_samples)}}};
    if (!pr_gamma.empty()) a.params["gamma"] = join(pr_gamma);
    status = run_single(pr_args, a);
  });

  // enumerate periodic
  auto* en = app.add_subcommand("enumerate", "Enumerations");
  en->require_subcommand(1);
  SystemArgs en_args;
  std::size_t en_cap = 64;
  auto* enp = en->add_subcommand("periodic", "Periodic partition-aligned subtrees");
  add_system_options(enp, en_args);
  enp->add_option("--period-cap", en_cap, "Largest period listed");
  enp->callback([&] { status = run_single(en_args, Analysis{"enumerate-periodic", {{"period_cap", std::to_string(en_cap)}}}); });

  // export
  std::string ex_report, ex_dir;
  auto* ex = app.add_subcommand("export", "CSV tables from a report");
  ex->add_option("--report", ex_report, "Report JSON")->required();
  ex->add_option("--csv-dir", ex_dir, "Output directory")->required();
  ex->callback([&] {
    Json report;
    try {
      report = Json::parse(read_text_file(ex_report));
    } catch (const Json::parse_error& e) {
      throw ParseError(std::string("report is not JSON: ") + e.what());
    }
    export_plot_data(report, ex_dir);
    std::cout << "wrote " << ex_dir << "\n";
  });

  // builtins
  auto* bl = app.add_subcommand("builtins", "List builtin systems");
  bl->callback([&] {
    for (const auto& name : builtin_names()) std::cout << name << "\n";
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return status;
}
