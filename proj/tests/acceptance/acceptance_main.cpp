// Runs the numbered acceptance criteria and prints one line per criterion.
// Usage: acceptance [criterion ...]

#include "pathsum/checks.hpp"

#include <cstdio>
#include <cstdlib>
#include <vector>

int main(int argc, char** argv) {
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) ids.push_back(std::atoi(argv[i]));
  if (ids.empty())
    for (int k = 1; k <= pathsum::acceptance_count(); ++k) ids.push_back(k);
  bool ok = true;
  for (int id : ids) {
    const pathsum::CheckResult r = pathsum::run_criterion(id);
    std::printf("[%s] %2d %-24s %7.2fs  %s\n", pathsum::to_string(r.status), r.criterion,
                r.name.c_str(), r.seconds, r.detail.c_str());
    std::fflush(stdout);
    ok = ok && r.status != pathsum::CheckStatus::Fail;
  }
  return ok ? 0 : 1;
}
