// Runs every acceptance check on the reference scenario at full scale.
#include <cstdlib>
#include <iostream>

#include "hetsleep/validate.hpp"

int main(int argc, char** argv) {
  hetsleep::ValidateOptions opt;
  if (argc > 1) opt.mc_trials = std::atol(argv[1]);
  const auto rep = hetsleep::run_validation(hetsleep::table2_scenario(), opt, [](const auto& r) {
    std::cout << hetsleep::format_result(r) << std::endl;
  });
  std::cout << (rep.all_pass() ? "ALL PASS" : "NOT ALL PASS") << " (" << rep.seconds << " s)" << std::endl;
  return rep.all_pass() ? 0 : 1;
}
