#include <cstdio>
#include <exception>

#include "bfp/acceptance.hpp"

int main() {
  int failed = 0;
  bfp::AcceptanceContext ctx;
  for (int id : bfp::criterion_ids()) {
    bfp::CriterionResult r;
    try {
      r = bfp::run_criterion(id, ctx);
    } catch (const std::exception& e) {
      r.id = id;
      r.title = "criterion crashed";
      r.detail = e.what();
      r.pass = false;
    }
    std::printf("[%s] %2d %s: %s\n", r.pass ? "pass" : "FAIL", r.id,
                r.title.c_str(), r.detail.c_str());
    std::fflush(stdout);
    if (!r.pass) ++failed;
  }
  if (failed) std::printf("%d of 10 criteria failed\n", failed);
  else std::printf("all 10 criteria passed\n");
  return failed == 0 ? 0 : 1;
}
