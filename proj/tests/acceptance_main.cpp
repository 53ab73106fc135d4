// Runs the full check suite at the pinned seed and prints one verdict per
// acceptance criterion, plus the determinism checks that need repeat runs.
#include <chrono>
#include <cstdint>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "sojourn/csv.hpp"
#include "sojourn/validation.hpp"

namespace {

constexpr std::uint64_t kSeed = 20260823ULL;
constexpr double kSuiteBudgetSeconds = 300.0;

int criterion_of(const std::string& id) {
  if (id.rfind("timing-c1", 0) == 0) return 1;
  if (id.rfind("cv-", 0) == 0) return 0;  // cross-cutting invariants
  if (id.size() > 2 && id[0] == 'c' && id[2] == '-') return id[1] - '0';
  return -1;
}

}  // namespace

int main() {
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();

  const auto first = sojourn::run_validation(kSeed, 1, 1.0);
  const auto repeat = sojourn::run_validation(kSeed, 1, 1.0);
  const auto wide = sojourn::run_validation(kSeed, 8, 1.0);
  const double elapsed = std::chrono::duration<double>(clock::now() - t0).count();

  std::map<int, std::vector<const sojourn::CheckResult*>> groups;
  for (const auto& c : first.checks) groups[criterion_of(c.id)].push_back(&c);

  bool all_ok = true;
  auto emit = [&](const std::string& label, bool ok, const std::string& detail) {
    all_ok = all_ok && ok;
    std::cout << label << ": " << (ok ? "PASS" : "FAIL") << " (" << detail << ")\n";
  };

  for (int k = 1; k <= 9; ++k) {
    const auto& checks = groups[k];
    std::size_t passed = 0;
    for (const auto* c : checks) passed += c->pass;
    std::string detail = std::to_string(passed) + "/" + std::to_string(checks.size()) + " checks";
    for (const auto* c : checks)
      if (!c->pass)
        detail += "; " + c->id + " observed " + sojourn::format_double(c->observed) + " target " +
                  sojourn::format_double(c->target) + " tol " +
                  sojourn::format_double(c->tolerance);
    emit("criterion " + std::to_string(k), passed == checks.size() && !checks.empty(), detail);
  }

  const std::string b1 = sojourn::validation_csv_body(first);
  const bool same_seed = b1 == sojourn::validation_csv_body(repeat);
  const bool same_workers = b1 == sojourn::validation_csv_body(wide);
  const bool in_budget = elapsed < kSuiteBudgetSeconds;
  emit("criterion 10", same_seed && same_workers && in_budget,
       std::string("seed rerun ") + (same_seed ? "identical" : "differs") + ", workers 1 vs 8 " +
           (same_workers ? "identical" : "differs") + ", " + sojourn::format_double(elapsed) +
           " s of " + sojourn::format_double(kSuiteBudgetSeconds) + " budget");

  const auto& extras = groups[0];
  std::size_t extras_passed = 0;
  for (const auto* c : extras) extras_passed += c->pass;
  emit("suite invariants",
       extras_passed == extras.size() && !extras.empty(),
       std::to_string(extras_passed) + "/" + std::to_string(extras.size()) +
           " cross-cutting checks");

  std::cout << (all_ok ? "acceptance: PASS" : "acceptance: FAIL") << "\n";
  return all_ok ? 0 : 1;
}
