#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace ebp {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;   // deterministic summary of the measured quantities
  double seconds = 0.0;
  double time_limit = 0.0;  // 0 when unlimited
};

struct Criterion {
  int id = 0;
  std::string name;
  double time_limit = 0.0;
  std::function<void(std::uint64_t seed, CriterionResult& result)> check;  // sets pass and detail
};

// The ten acceptance checks, in order.
std::vector<Criterion> acceptance_suite();
CriterionResult run_criterion(const Criterion& c, std::uint64_t seed);

}  // namespace ebp
