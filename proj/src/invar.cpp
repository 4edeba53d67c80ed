#include "khl/invar.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <sstream>
#include <thread>

#include "khl/error.hpp"
#include "khl/hfk11.hpp"
#include "khl/linkdiag.hpp"

#ifndef KHL_DEFAULT_DATA_DIR
#define KHL_DEFAULT_DATA_DIR "data"
#endif

namespace khl {

using nlohmann::json;

// ---- parity bookkeeping ----------------------------------------------------

long long e_rank(const BigradedGroups& groups) {
  if (groups.ranks.empty()) throw InvalidInput("e_rank of an empty group");
  const int top = groups.max_filtration();
  long long even = 0;
  for (const auto& [key, r] : groups.ranks)
    if (key.first == top && key.second % 2 == 0) even += r;
  return even;
}

BigradedGroups kstart_top_group(int n) {
  if (n < 1) throw InvalidInput("kstart_top_group needs n >= 1");
  BigradedGroups g;
  g.add(1, 1, 2 * n + 2);
  for (int m = -1; m >= -2 * n + 1; m -= 2) g.add(1, m, 2);
  return g;
}

BigradedGroups untwisted_top_group(int n, int m) {
  if (n < 1) throw InvalidInput("untwisted_top_group needs n >= 1");
  BigradedGroups g;
  g.add(1, m, 2 * n);
  for (int k = 1; k <= 2 * n - 1; k += 2) g.add(1, m - k, 2);
  return g;
}

// ---- skein deduction -------------------------------------------------------

std::vector<int> SkeinDeduction::nontrivial_set() const {
  std::vector<int> out;
  for (auto it = nontrivial.rbegin(); it != nontrivial.rend(); ++it)
    if (it->second) out.push_back(it->first);
  return out;
}

SkeinDeduction skein_propagate(const SkeinInput& in) {
  if (in.t_start < 0) throw InvalidInput("skein chain needs t_start >= 0");
  if (in.e_start < 0 || in.e_end < 0) throw InvalidInput("e values must be nonnegative");
  if (in.tau_start != 0 && in.tau_start != 1) throw InvalidInput("tau_start must be 0 or 1");
  const long long delta = in.e_end - in.e_start;
  if (delta < 0 || delta > in.t_start)
    throw InvalidInput("e(0) - e(t_start) = " + std::to_string(delta) + " is outside [0, " +
                       std::to_string(in.t_start) + "]");

  // Each step changes e by one exactly when the map is nonzero, so delta steps are nonzero.
  // A nonzero step at t makes tau(D(t-1)) = 1 and a zero step at t - k makes
  // tau(D(t-k-1)) = 0; tau(D(t-k-1)) >= tau(D(t-1)) forbids that, so nonzero steps form a
  // down-set {1, ..., k}, and the count pins k = delta.
  SkeinDeduction out;
  for (int t = 1; t <= in.t_start; ++t) out.nontrivial[t] = t <= delta;

  out.e[in.t_start] = in.e_start;
  for (int t = in.t_start; t >= 1; --t) out.e[t - 1] = out.e[t] + (out.nontrivial[t] ? 1 : 0);
  if (out.e[0] != in.e_end) throw AlgebraError("skein propagation lost track of e");

  out.tau[in.t_start] = in.tau_start;
  for (int t = 1; t <= in.t_start; ++t) out.tau[t - 1] = out.nontrivial[t] ? 1 : 0;
  // tau(D(t)) <= tau(D(t-k)) <= tau(D(t)) + k on the whole chain.
  for (const auto& [t, tau_t] : out.tau)
    for (const auto& [u, tau_u] : out.tau)
      if (u < t && !(tau_u - (t - u) <= tau_t && tau_t <= tau_u))
        throw InvalidInput("skein inputs contradict the crossing-change inequality at t = " +
                           std::to_string(t));

  out.t_tau = -1;
  for (const auto& [t, tau_t] : out.tau)
    if (tau_t == 1) out.t_tau = std::max(out.t_tau, t);
  return out;
}

SkeinInput torus_double_skein_input(int n) {
  SkeinInput in;
  in.t_start = 4 * n + 2;
  in.e_start = e_rank(kstart_top_group(n));
  const long long even_m = e_rank(untwisted_top_group(n, 0));
  const long long odd_m = e_rank(untwisted_top_group(n, 1));
  if (even_m != odd_m) throw AlgebraError("e(0) depends on the unknown absolute grading");
  in.e_end = even_m;
  // The starting double has hat survivor in the middle Alexander grading.
  in.tau_start = 0;
  return in;
}

int torus_double_tau(int n, int twists) {
  if (n < 1) throw InvalidInput("torus_double_tau needs n >= 1");
  const SkeinDeduction d = skein_propagate(torus_double_skein_input(n));
  if (twists < 0) return 1;
  if (twists > 4 * n + 2) return 0;
  return d.tau.at(twists);
}

// ---- s from homological degree zero -----------------------------------------

std::set<int> h0_support(const PoincarePoly& kh) {
  std::set<int> out;
  for (const auto& [key, c] : kh.terms())
    if (key.second == 0 && c != 0) out.insert(key.first);
  return out;
}

std::set<int> s_candidates(const std::set<int>& support, int genus4_bound) {
  if (support.empty()) throw InvalidInput("s_candidates needs a nonempty support");
  if (genus4_bound < 0) throw InvalidInput("genus bound must be nonnegative");
  std::set<int> out;
  for (int a : support)
    if (support.count(a + 2) && std::abs(a + 1) <= 2 * genus4_bound) out.insert(a + 1);
  if (out.empty())
    throw AlgebraError("no s candidate survives; check the quantum grading convention");
  return out;
}

// ---- tasks and fixtures ----------------------------------------------------

std::string task_name(Task t) {
  switch (t) {
    case Task::Kh: return "kh";
    case Task::S: return "s";
    case Task::Hfk: return "hfk";
    case Task::Tau: return "tau";
    case Task::Skein: return "skein";
  }
  return {};
}

Task parse_task(const std::string& name) {
  for (Task t : {Task::Kh, Task::S, Task::Hfk, Task::Tau, Task::Skein})
    if (task_name(t) == name) return t;
  throw ParseError("unknown task '" + name + "'");
}

std::vector<Task> parse_task_list(const std::string& text) {
  std::vector<Task> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    if (item == "all") return {};
    const Task t = parse_task(item);
    if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
  }
  if (out.empty()) throw ParseError("empty task list");
  std::sort(out.begin(), out.end());
  return out;
}

std::filesystem::path data_dir() {
  if (const char* env = std::getenv("KHL_DATA_DIR"); env && *env) return env;
  return KHL_DEFAULT_DATA_DIR;
}

bool is_fixture_id(const std::string& input) {
  if (input == "d6-cfk" || input == "hopf-hfk") return true;
  return input.size() == 8 && input.rfind("kstart-", 0) == 0 && input[7] >= '1' && input[7] <= '4';
}

std::string read_fixture(const std::string& id) {
  if (!is_fixture_id(id)) throw InvalidInput("unknown fixture '" + id + "'");
  std::ifstream in(data_dir() / "fixtures" / id);
  if (!in) throw InvalidInput("cannot read fixture '" + id + "' under " + data_dir().string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

// A builder expression reduced to the shapes the knot Floer routes understand.
struct InputShape {
  enum class Kind { Other, TorusKnot, TorusDouble } kind = Kind::Other;
  int n = 0;              // T(2, 2n+1)
  bool mirrored = false;  // torus knots only
  int twists = 0;         // doubles only
};

InputShape classify(const BuilderExpr& e) {
  InputShape s;
  if (e.kind == BuilderExpr::Kind::Torus && e.torus_m % 2 != 0) {
    s.kind = InputShape::Kind::TorusKnot;
    s.n = (e.torus_m - 1) / 2;
  } else if (e.kind == BuilderExpr::Kind::Mirror) {
    s = classify(*e.child);
    if (s.kind == InputShape::Kind::TorusKnot)
      s.mirrored = !s.mirrored;
    else
      s.kind = InputShape::Kind::Other;
  } else if (e.kind == BuilderExpr::Kind::Double && e.clasp > 0) {
    const InputShape c = classify(*e.child);
    if (c.kind == InputShape::Kind::TorusKnot && !c.mirrored && c.n >= 1) {
      s.kind = InputShape::Kind::TorusDouble;
      s.n = c.n;
      s.twists = e.twists;
    }
  }
  return s;
}

json ranks_json(const BigradedGroups& g) {
  json out = json::array();
  for (auto it = g.ranks.rbegin(); it != g.ranks.rend(); ++it)
    out.push_back({{"A", it->first.first}, {"M", it->first.second}, {"rank", it->second}});
  return out;
}

json skein_json(int n) {
  const SkeinInput in = torus_double_skein_input(n);
  const SkeinDeduction d = skein_propagate(in);
  json tau = json::object();
  for (const auto& [t, v] : d.tau) tau[std::to_string(t)] = v;
  json e = json::object();
  for (const auto& [t, v] : d.e) e[std::to_string(t)] = v;
  return {{"n", n},
          {"t_start", in.t_start},
          {"e_start", in.e_start},
          {"e_end", in.e_end},
          {"nontrivial", d.nontrivial_set()},
          {"e", e},
          {"tau", tau},
          {"t_tau", d.t_tau}};
}

OneOneDiagram torus_diagram(const InputShape& s) {
  const OneOneDiagram d = torus_knot_diagram(s.n);
  return s.mirrored ? reflected(d) : d;
}

// Everything one report needs, resolved once before tasks run.
struct Subject {
  std::string canonical;
  bool fixture = false;
  std::string fixture_id;
  std::optional<BuilderExpr> expr;
  std::optional<LinkDiagram> diagram;
  InputShape shape;

  bool has(Task t) const {
    if (fixture) {
      if (t == Task::Hfk) return true;
      if (t == Task::Tau) return fixture_id == "d6-cfk";
      if (t == Task::Skein) return fixture_id != "hopf-hfk";
      return false;
    }
    switch (t) {
      case Task::Kh: return true;
      case Task::S: return diagram->is_knot();
      case Task::Hfk:
        return shape.kind == InputShape::Kind::TorusKnot ||
               (shape.kind == InputShape::Kind::TorusDouble && shape.n <= 4 &&
                shape.twists == 4 * shape.n + 2);
      case Task::Tau: return shape.kind != InputShape::Kind::Other;
      case Task::Skein: return shape.kind == InputShape::Kind::TorusDouble;
    }
    return false;
  }
};

Subject resolve(const std::string& input) {
  Subject s;
  if (is_fixture_id(input)) {
    s.fixture = true;
    s.fixture_id = input;
    s.canonical = "fixture:" + input;
    return s;
  }
  s.expr = parse_builder(input);
  s.canonical = s.expr->canonical();
  s.diagram = s.expr->build();
  s.shape = classify(*s.expr);
  return s;
}

json hfk_from_fixture(const std::string& id) {
  if (id == "d6-cfk") {
    const CfkComplex c = parse_cfk(read_fixture(id));
    return {{"source", "cfk:" + id},
            {"grading_scale", 1},
            {"ranks", ranks_json(hfk_hat_groups(c))},
            {"tau", tau_from_cfk(c)}};
  }
  const RankTable t = parse_rank_table(read_fixture(id));
  return {{"source", "table:" + id}, {"grading_scale", t.grading_scale}, {"ranks", ranks_json(t.groups)}};
}

json run_task(const Subject& s, Task task, const ReportOptions& opt) {
  if (s.fixture) {
    switch (task) {
      case Task::Hfk: return hfk_from_fixture(s.fixture_id);
      case Task::Tau: return {{"tau", tau_from_cfk(parse_cfk(read_fixture(s.fixture_id)))}, {"method", "cfk"}};
      case Task::Skein:
        return skein_json(s.fixture_id == "d6-cfk" ? 1 : s.fixture_id[7] - '0');
      default: break;
    }
    throw InvalidInput("task not applicable");
  }
  const LinkDiagram& d = *s.diagram;
  switch (task) {
    case Task::Kh: {
      const PoincarePoly p = opt.field == FieldKind::F2 ? khovanov_poincare<F2>(d, opt.max_generators)
                                                      : khovanov_poincare<Rational>(d, opt.max_generators);
      return {{"field", field_name(opt.field)}, {"poincare", p.to_string()}, {"terms", p.term_count()}};
    }
    case Task::S: {
      json out = {{"s", rasmussen_s(d, opt.max_generators)}, {"method", "lee"}};
      std::optional<int> genus;
      if (s.shape.kind == InputShape::Kind::TorusDouble) genus = 1;
      if (s.shape.kind == InputShape::Kind::TorusKnot) genus = s.shape.n;
      if (genus) {
        const std::set<int> support = h0_support(khovanov_poincare<Rational>(d, opt.max_generators));
        out["h0_support"] = support;
        out["genus_bound"] = *genus;
        out["candidates"] = s_candidates(support, *genus);
      }
      return out;
    }
    case Task::Hfk: {
      if (s.shape.kind == InputShape::Kind::TorusKnot) {
        const CfkComplex c = build_cfk(torus_diagram(s.shape));
        return {{"source", "hfk11"},
                {"grading_scale", 1},
                {"ranks", ranks_json(hfk_hat_groups(c))},
                {"tau", tau_from_cfk(c)}};
      }
      return hfk_from_fixture(s.shape.n == 1 ? "d6-cfk" : "kstart-" + std::to_string(s.shape.n));
    }
    case Task::Tau: {
      if (s.shape.kind == InputShape::Kind::TorusKnot)
        return {{"tau", tau_from_cfk(build_cfk(torus_diagram(s.shape)))}, {"method", "hfk11"}};
      return {{"tau", torus_double_tau(s.shape.n, s.shape.twists)}, {"method", "skein"}};
    }
    case Task::Skein:
      return skein_json(s.shape.n);
  }
  throw InvalidInput("task not applicable");
}

json conventions() {
  return {{"pd", "X(a,b,c,d): a is the incoming under-strand, labels counterclockwise"},
          {"khovanov", "cohomological; unknot q^-1 + q; shifts h - n_-, q + n_+ - 2n_-"},
          {"lee", "X^2 = 1; s from the two survivors' quantum filtration"},
          {"maslov", "hat homology survivor at M = 0"},
          {"alexander", "symmetric about 0"},
          {"hopf_parity", "top Alexander group of the positive Hopf link is odd"},
          {"doubled_gradings", "grading_scale 2 stores twice the Maslov grading"}};
}

void write_atomically(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp." + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()));
  {
    std::ofstream out(tmp, std::ios::binary);
    out << text;
    if (!out) throw Error("cannot write cache file " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace

std::vector<Task> applicable_tasks(const std::string& input) {
  const Subject s = resolve(input);
  std::vector<Task> out;
  for (Task t : {Task::Kh, Task::S, Task::Hfk, Task::Tau, Task::Skein})
    if (s.has(t)) out.push_back(t);
  return out;
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string cache_key(const std::string& canonical_input, const ReportOptions& options) {
  std::string text = std::string(kReportFormat) + "|" + kEngineVersion + "|" + canonical_input + "|" +
                     field_name(options.field) + "|" + std::to_string(options.max_generators) + "|";
  for (Task t : options.tasks) text += task_name(t) + ",";
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(text)));
  return buf;
}

json Report::document() const {
  json doc = body;
  doc["timings"] = timings;
  return doc;
}

Report run_report(const std::string& input, const ReportOptions& options) {
  using Clock = std::chrono::steady_clock;
  const auto begin = Clock::now();
  const Subject subject = resolve(input);

  ReportOptions opt = options;
  if (opt.tasks.empty()) {
    for (Task t : {Task::Kh, Task::S, Task::Hfk, Task::Tau, Task::Skein})
      if (subject.has(t)) opt.tasks.push_back(t);
  } else {
    for (Task t : opt.tasks)
      if (!subject.has(t))
        throw InvalidInput("task '" + task_name(t) + "' is not applicable to " + subject.canonical);
  }
  std::sort(opt.tasks.begin(), opt.tasks.end());

  Report report;
  report.cache_key = cache_key(subject.canonical, opt);
  std::optional<std::filesystem::path> cache_file;
  if (opt.cache_dir) {
    cache_file = *opt.cache_dir / (report.cache_key + ".json");
    std::ifstream in(*cache_file);
    if (in) {
      try {
        json cached = json::parse(in);
        if (cached.value("cache_key", "") == report.cache_key) {
          report.body = std::move(cached);
          report.from_cache = true;
          report.timings["total_ms"] =
              std::chrono::duration<double, std::milli>(Clock::now() - begin).count();
          return report;
        }
      } catch (const json::exception&) {
        // A damaged entry is recomputed and overwritten.
      }
    }
  }

  const std::size_t count = opt.tasks.size();
  std::vector<json> results(count);
  std::vector<double> elapsed(count, 0.0);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < count;) {
      const auto start = Clock::now();
      try {
        results[i] = run_task(subject, opt.tasks[i], opt);
      } catch (...) {
        errors[i] = std::current_exception();
      }
      elapsed[i] = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    }
  };
  const int jobs = std::max(1, std::min<int>(opt.jobs, static_cast<int>(count)));
  std::vector<std::thread> pool;
  for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  // The first failing task's error propagates with its original type.
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  json res = json::object();
  for (std::size_t i = 0; i < count; ++i) {
    res[task_name(opt.tasks[i])] = results[i];
    report.timings[task_name(opt.tasks[i]) + "_ms"] = elapsed[i];
  }
  if (res.contains("s") && res.contains("tau")) {
    const int s = res["s"]["s"], tau = res["tau"]["tau"];
    res["headline"] = {{"s", s}, {"tau", tau}, {"s_equals_2tau", s == 2 * tau}};
  }
  json tasks = json::array();
  for (Task t : opt.tasks) tasks.push_back(task_name(t));
  report.body = {{"format", kReportFormat},
                 {"engine_version", kEngineVersion},
                 {"input", {{"canonical", subject.canonical}, {"kind", subject.fixture ? "fixture" : "builder"}}},
                 {"tasks", tasks},
                 {"field", field_name(opt.field)},
                 {"max_generators", opt.max_generators},
                 {"conventions", conventions()},
                 {"results", res},
                 {"cache_key", report.cache_key}};
  report.timings["total_ms"] = std::chrono::duration<double, std::milli>(Clock::now() - begin).count();
  if (cache_file) write_atomically(*cache_file, report.body.dump(2) + "\n");
  return report;
}

}  // namespace khl
