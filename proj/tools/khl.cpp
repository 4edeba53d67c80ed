#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "khl/error.hpp"
#include "khl/hfk11.hpp"
#include "khl/invar.hpp"

namespace {

using nlohmann::json;

struct Globals {
  int jobs = 1;
  std::string cache_dir;
  std::size_t max_generators = khl::kDefaultMaxGenerators;
  bool json = false;
};

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw khl::InvalidInput("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// An argument naming an existing file is replaced by its contents, minus comment lines.
std::string expression_argument(const std::string& arg) {
  if (!std::filesystem::is_regular_file(arg)) return arg;
  std::stringstream in(slurp(arg)), out;
  for (std::string line; std::getline(in, line);)
    if (line.empty() || line[0] != '#') out << line << ' ';
  return out.str();
}

khl::ReportOptions options_from(const Globals& g) {
  khl::ReportOptions opt;
  opt.jobs = g.jobs;
  opt.max_generators = g.max_generators;
  if (!g.cache_dir.empty())
    opt.cache_dir = g.cache_dir;
  else if (const char* env = std::getenv("KHL_CACHE_DIR"); env && *env)
    opt.cache_dir = env;
  return opt;
}

void print_ranks(const json& ranks, int scale) {
  for (const auto& r : ranks) {
    std::cout << "  A=" << r["A"].get<int>() << " M=";
    const int m = r["M"];
    if (scale == 2 && m % 2 != 0)
      std::cout << m << "/2";
    else
      std::cout << m / scale;
    std::cout << "  rank " << r["rank"].get<long long>() << '\n';
  }
}

json hfk_json(const khl::CfkComplex& c) {
  json ranks = json::array();
  const auto groups = khl::hfk_hat_groups(c);
  for (auto it = groups.ranks.rbegin(); it != groups.ranks.rend(); ++it)
    ranks.push_back({{"A", it->first.first}, {"M", it->first.second}, {"rank", it->second}});
  return {{"generators", c.generators.size()},
          {"arrows", c.arrows.size()},
          {"grading_scale", 1},
          {"ranks", ranks},
          {"tau", khl::tau_from_cfk(c)}};
}

void print_skein(const json& s) {
  const int n = s["n"];
  std::cout << "T(2," << 2 * n + 1 << "): chain D(" << s["t_start"] << ") -> D(0), e(" << s["t_start"]
            << ") = " << s["e_start"] << ", e(0) = " << s["e_end"] << '\n';
  std::cout << "nontrivial at t =";
  for (int t : s["nontrivial"]) std::cout << ' ' << t;
  std::cout << '\n';
  for (const auto& [t, v] : s["tau"].items())
    std::cout << "  tau(D+(T(2," << 2 * n + 1 << ")," << t << ")) = " << v << '\n';
  std::cout << "tau = 1 for t <= " << s["t_tau"] << ", 0 for t > " << s["t_tau"] << '\n';
  std::cout << "t_tau = " << s["t_tau"] << '\n';
}

int run(int argc, char** argv) {
  CLI::App app{"Khovanov and knot Floer invariants of small knots"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--jobs", g.jobs, "Worker threads for independent tasks")->check(CLI::PositiveNumber);
  app.add_option("--cache-dir", g.cache_dir, "Report cache directory (default $KHL_CACHE_DIR)");
  app.add_option("--max-generators", g.max_generators, "Abort scans whose complexes grow past this");
  app.add_flag("--json", g.json, "Print the JSON report");

  std::string input, field = "q", tasks = "all";
  int n = 1;

  auto* kh = app.add_subcommand("kh", "Khovanov homology Poincare polynomial");
  kh->add_option("input", input, "Builder expression or file")->required();
  kh->add_option("--field", field, "f2 or q")->check(CLI::IsMember({"f2", "q", "F2", "Q"}));
  auto* s = app.add_subcommand("s", "Rasmussen s-invariant");
  s->add_option("input", input, "Builder expression or file")->required();
  auto* hfk = app.add_subcommand("hfk", "Knot Floer homology of a (1,1) diagram");
  hfk->add_option("diagram", input, "Diagram file")->required()->check(CLI::ExistingFile);
  auto* tau = app.add_subcommand("tau", "tau of a (1,1) diagram or CFK fixture");
  tau->add_option("input", input, "Diagram file or fixture id")->required();
  auto* skein = app.add_subcommand("skein", "Skein deduction for doubles of T(2,2n+1)");
  skein->add_option("--n", n, "Torus knot T(2,2n+1)")->required()->check(CLI::PositiveNumber);
  auto* report = app.add_subcommand("report", "Combined report");
  report->add_option("input", input, "Builder expression, file or fixture id")->required();
  report->add_option("--tasks", tasks, "Comma separated: kh,s,hfk,tau,skein or all");
  report->add_option("--field", field, "f2 or q")->check(CLI::IsMember({"f2", "q", "F2", "Q"}));

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();
  CLI11_PARSE(app, argc, argv);

  auto emit_report = [&](const std::string& arg, std::vector<khl::Task> list) {
    khl::ReportOptions opt = options_from(g);
    opt.tasks = std::move(list);
    opt.field = khl::parse_field(field);
    const std::string what = khl::is_fixture_id(arg) ? arg : expression_argument(arg);
    return khl::run_report(what, opt);
  };

  if (kh->parsed()) {
    const auto r = emit_report(input, {khl::Task::Kh});
    if (g.json)
      std::cout << r.document().dump(2) << '\n';
    else
      std::cout << r.body["results"]["kh"]["poincare"].get<std::string>() << '\n';
  } else if (s->parsed()) {
    const auto r = emit_report(input, {khl::Task::S});
    if (g.json)
      std::cout << r.document().dump(2) << '\n';
    else
      std::cout << "s = " << r.body["results"]["s"]["s"] << '\n';
  } else if (hfk->parsed() || (tau->parsed() && !khl::is_fixture_id(input))) {
    const khl::CfkComplex c = khl::build_cfk(khl::parse_diagram(slurp(input)));
    const json out = hfk_json(c);
    if (g.json) {
      std::cout << out.dump(2) << '\n';
    } else if (hfk->parsed()) {
      std::cout << out["generators"] << " generators, " << out["arrows"] << " arrows\n";
      print_ranks(out["ranks"], 1);
      std::cout << "tau = " << out["tau"] << '\n';
    } else {
      std::cout << "tau = " << out["tau"] << '\n';
    }
  } else if (tau->parsed()) {
    const auto r = emit_report(input, {khl::Task::Tau});
    if (g.json)
      std::cout << r.document().dump(2) << '\n';
    else
      std::cout << "tau = " << r.body["results"]["tau"]["tau"] << '\n';
  } else if (skein->parsed()) {
    const auto r = emit_report("double(torus(2," + std::to_string(2 * n + 1) + "),t=" +
                                   std::to_string(4 * n + 2) + ",clasp=+)",
                               {khl::Task::Skein});
    if (g.json)
      std::cout << r.body["results"]["skein"].dump(2) << '\n';
    else
      print_skein(r.body["results"]["skein"]);
  } else if (report->parsed()) {
    const auto r = emit_report(input, khl::parse_task_list(tasks));
    if (g.json) {
      std::cout << r.document().dump(2) << '\n';
    } else {
      const json& res = r.body["results"];
      std::cout << r.body["input"]["canonical"].get<std::string>() << (r.from_cache ? " (cached)" : "")
                << '\n';
      if (res.contains("kh")) std::cout << "Kh: " << res["kh"]["poincare"].get<std::string>() << '\n';
      if (res.contains("s")) std::cout << "s = " << res["s"]["s"] << '\n';
      if (res.contains("hfk")) {
        std::cout << "HFK (" << res["hfk"]["source"].get<std::string>() << "):\n";
        print_ranks(res["hfk"]["ranks"], res["hfk"]["grading_scale"]);
      }
      if (res.contains("tau"))
        std::cout << "tau = " << res["tau"]["tau"] << " (" << res["tau"]["method"].get<std::string>() << ")\n";
      if (res.contains("skein")) std::cout << "t_tau = " << res["skein"]["t_tau"] << '\n';
      if (res.contains("headline"))
        std::cout << (res["headline"]["s_equals_2tau"].get<bool>() ? "s = 2 tau\n" : "s != 2 tau\n");
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const khl::ResourceLimit& e) {
    std::cerr << "resource limit: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
