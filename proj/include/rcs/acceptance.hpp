// acceptance.hpp: the acceptance battery shared by the test binary and
// `rcs_cli check --suite`.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace rcs {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;  // measured values against their thresholds
};

inline constexpr std::uint64_t kAcceptanceSeed = 0x5eed2024ULL;

std::vector<CriterionResult> run_acceptance(std::uint64_t seed = kAcceptanceSeed);

// "PASS <id> <name>: <detail>" or "FAIL ..."
std::string format_result(const CriterionResult& r);

}  // namespace rcs
