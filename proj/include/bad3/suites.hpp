#pragma once

// Verification suites: property checks over generated instances, fanned out
// over a thread pool with per-index seeding (results are deterministic).
// Hard failures break the suite; desk-mode empirical checks that sit outside
// the guaranteed constant regime report findings instead.

#include <string>
#include <vector>

#include "bad3/config.hpp"
#include "bad3/dynamics.hpp"

namespace bad3 {

struct SuiteResult {
  std::string name;
  long checked = 0;
  long failures = 0;
  long findings = 0;
  std::vector<std::string> notes;
  bool pass() const { return failures == 0; }
};

// height      q <= H_B(v) <= q^(1+lambda) on sampled pairs
// witness     integral witness exists, validates, and agrees with a full scan
// partition   the vector family equals the union of its q-classes
// separation  both inner-product separation bounds on generated instances
// budget      every emitted family within the gamma-budget + symbolic chain
// avoidance   safe balls provably avoid every low-q danger zone (empirical)
// cover       danger zones below a safe ball stay inside the emitted slab
//             (empirical)
// dani        truncated correspondence implications with exact conversions
// slice       integer-z slice equality of badness constants
// systole     reduction-based systole against the plain box reference
// endtoend    full games: final center certified safe or trapped in a slab
std::vector<std::string> suite_names();

SuiteResult run_suite(const std::string& name, const RunConfig& cfg);

SuiteResult suite_height(const RunConfig& cfg, long pairs);
SuiteResult suite_witness(const RunConfig& cfg, long instances);
SuiteResult suite_partition(const RunConfig& cfg, long instances);
SuiteResult suite_separation(const RunConfig& cfg, long target);
SuiteResult suite_budget(const RunConfig& cfg, long games);
SuiteResult suite_avoidance(const RunConfig& cfg, long games);
SuiteResult suite_cover(const RunConfig& cfg, long instances);
SuiteResult suite_dani(const RunConfig& cfg, long points);
SuiteResult suite_slice(const RunConfig& cfg, long points);
SuiteResult suite_systole(const RunConfig& cfg, long bases);
SuiteResult suite_endtoend(const RunConfig& cfg, long games);

// Plain inverse-box enumeration without basis reduction: the second route
// the reduction-based systole is checked against. Throws when the box
// exceeds the cap.
SystoleResult systole_box_reference(const Mat3& basis, long cap = 4000000);

// One machine-readable line: "PASS name checked=.. findings=.." or "FAIL ..".
std::string suite_report_line(const SuiteResult& r);

}  // namespace bad3
