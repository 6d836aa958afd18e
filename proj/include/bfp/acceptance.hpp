#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "bfp/harness.hpp"

namespace bfp {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string detail;
};

// Scenario cache shared across criteria; the bound checks reuse the runs the
// earlier criteria produced instead of recomputing them.
class AcceptanceContext {
public:
  const ScenarioRun& run(const Scenario& s);
  const ScenarioRun& run_custom(const std::string& name,
                                const std::function<ScenarioRun()>& make);
  double elapsed(const std::string& name) const; // seconds, 0 if unknown

private:
  std::map<std::string, ScenarioRun> cache_;
  std::map<std::string, double> elapsed_;
};

std::vector<int> criterion_ids();
CriterionResult run_criterion(int id, AcceptanceContext& ctx);
std::vector<CriterionResult> run_criteria(const std::vector<int>& ids);

} // namespace bfp
