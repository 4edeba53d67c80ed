#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "khl/field.hpp"
#include "khl/homalg.hpp"
#include "khl/laurent.hpp"
#include "khl/scan.hpp"

namespace khl {

// ---- parity bookkeeping ----------------------------------------------------

/// Total rank at even Maslov grading in the top Alexander grading.
long long e_rank(const BigradedGroups& groups);

/// Top Alexander group of D+(T(2,2n+1), 4n+2): rank 2n+2 at M = 1 and 2 at M = -1, ..., -2n+1.
BigradedGroups kstart_top_group(int n);
/// Top group of D+(T(2,2n+1), 0) with the unknown absolute grading set to m:
/// rank 2n at M = m and 2 at M = m-1, m-3, ..., m-2n+1.
BigradedGroups untwisted_top_group(int n, int m);

// ---- skein deduction -------------------------------------------------------

/// Inputs to the crossing-change chain D(t_start) -> D(t_start-1) -> ... -> D(0). Each step's
/// third term is the positive Hopf link, whose top group has odd parity.
struct SkeinInput {
  int t_start = 0;
  long long e_start = 0;  // e(t_start)
  long long e_end = 0;    // e(0)
  int tau_start = 0;      // tau(D(t_start)), known from its complex
};

struct SkeinDeduction {
  std::map<int, bool> nontrivial;  // t = 1 .. t_start: is the Hopf-to-D(t-1) map nonzero
  std::map<int, long long> e;      // t = 0 .. t_start
  std::map<int, int> tau;          // t = 0 .. t_start
  int t_tau = 0;                   // greatest t with tau(D(t)) = 1, or -1 if none in range

  std::vector<int> nontrivial_set() const;  // descending
};

SkeinDeduction skein_propagate(const SkeinInput& in);

/// The chain for doubles of T(2,2n+1): t_start = 4n+2, e values from the two top groups.
/// The untwisted group is evaluated for both parities of its unknown grading; they must agree.
SkeinInput torus_double_skein_input(int n);

/// tau(D+(T(2,2n+1), t)) for any integer t. Outside [0, 4n+2] the crossing-change inequality and
/// |tau| <= genus = 1 fix the value below the range; above it the value is 0 by the same
/// inequality together with tau(D(t)) in {0, 1}.
int torus_double_tau(int n, int twists);

// ---- s from homological degree zero -----------------------------------------

/// Quantum degrees carrying Khovanov homology in homological degree 0.
std::set<int> h0_support(const PoincarePoly& kh);

/// {a+1 : a, a+2 in support} within [-2g, 2g]. Throws AlgebraError when empty.
std::set<int> s_candidates(const std::set<int>& support, int genus4_bound);

// ---- reports ---------------------------------------------------------------

inline constexpr const char* kReportFormat = "khl-report/1";
inline constexpr const char* kEngineVersion = "1.0.0";

enum class Task { Kh, S, Hfk, Tau, Skein };
std::string task_name(Task t);
Task parse_task(const std::string& name);
/// Comma separated names; "all" selects every task applicable to the input.
std::vector<Task> parse_task_list(const std::string& text);

struct ReportOptions {
  std::vector<Task> tasks;  // empty: every applicable task
  FieldKind field = FieldKind::Q;
  int jobs = 1;
  std::optional<std::filesystem::path> cache_dir;
  std::size_t max_generators = kDefaultMaxGenerators;
};

/// Directory holding the bundled fixtures; env KHL_DATA_DIR overrides the build-time default.
std::filesystem::path data_dir();
std::string read_fixture(const std::string& id);
bool is_fixture_id(const std::string& input);

struct Report {
  nlohmann::json body;  // everything except timings; this is what the cache stores
  std::map<std::string, double> timings;
  std::string cache_key;
  bool from_cache = false;

  /// Body plus a "timings" object.
  nlohmann::json document() const;
};

/// Applicable tasks for a builder expression or fixture id.
std::vector<Task> applicable_tasks(const std::string& input);

/// Runs the engines for `input` (builder expression or fixture id). With a cache directory the
/// body is looked up by key first and written atomically afterwards.
Report run_report(const std::string& input, const ReportOptions& options);

std::string cache_key(const std::string& canonical_input, const ReportOptions& options);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(const std::string& bytes);

}  // namespace khl
