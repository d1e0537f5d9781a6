// Acceptance suite: prints one pass/fail line per criterion, then timings.
// Exit status is 0 only when every criterion passes.

#include <cstdio>
#include <iostream>

#include "pstrident/verify.hpp"

int main() {
  using namespace pstrident::verify;
  auto results = run_suite(pstrident::Exec{1}, [](const CriterionResult& r) {
    std::cout << render_line(r) << std::flush;
  });
  const auto det = run_one(
      [&](const pstrident::Exec&) { return c12_determinism(render(results, false)); },
      pstrident::Exec{1});
  std::cout << render_line(det);
  results.push_back(det);

  std::size_t passed = 0;
  for (const auto& r : results) passed += r.ok() ? 1 : 0;
  std::cout << "\n" << passed << "/" << results.size() << " criteria pass\n\ntimings\n"
            << render_timings(results);
  return passed == results.size() ? 0 : 1;
}
