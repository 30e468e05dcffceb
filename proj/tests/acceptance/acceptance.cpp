// Acceptance runner: one PASS/FAIL line per criterion, exit 1 if any fails.
#include <iostream>

#include <CLI11.hpp>

#include "hna/acceptance.hpp"

int main(int argc, char** argv) {
  CLI::App app{"hna acceptance criteria"};
  int only = 0;
  hna::AcceptanceConfig cfg;
  app.add_option("--only", only, "Run a single criterion (1-12)")->check(CLI::Range(1, hna::kAcceptanceCriteria));
  app.add_option("--k", cfg.k, "Center dimension of the default algebra")->check(CLI::IsMember({1, 2, 3, 7}));
  app.add_option("--b", cfg.b, "Multiplicity of the default algebra")->check(CLI::PositiveNumber);
  app.add_option("--seed", cfg.spec.seed, "Seed for random samples and sphere rules");
  CLI11_PARSE(app, argc, argv);

  std::vector<hna::CriterionResult> results;
  if (only > 0) results.push_back(hna::run_criterion(only, cfg));
  else
    for (int id = 1; id <= hna::kAcceptanceCriteria; ++id) {
      results.push_back(hna::run_criterion(id, cfg));
      std::cout << hna::format_line(results.back()) << std::endl;
    }
  if (only > 0) std::cout << hna::format_line(results.back()) << std::endl;
  bool ok = true;
  for (const auto& r : results) ok = ok && r.pass;
  return ok ? 0 : 1;
}
