#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace pathsum {

enum class CheckStatus { Pass, Fail, Skipped };

const char* to_string(CheckStatus status);

struct CheckResult {
  int criterion = 0;  // 0 for checks outside the numbered suite
  std::string name;
  CheckStatus status = CheckStatus::Fail;
  std::string detail;
  double seconds = 0.0;
  double time_limit = 0.0;  // seconds; 0 means none
};

struct AcceptanceOptions {
  int oracle_cells = 8000;
  std::uint64_t seed = 0x5eed2024;
  int workers = 0;  // 0 reads PATHSUM_WORKERS
};

/// Numbered acceptance criteria 1..10.
int acceptance_count();

/// Runs one criterion. Library errors become a failed result that names the
/// error code; a result slower than its time limit fails too.
CheckResult run_criterion(int criterion, const AcceptanceOptions& options = {});

/// Runs the listed criteria (all when empty) in ascending order.
std::vector<CheckResult> run_acceptance(const std::vector<int>& criteria = {},
                                        const AcceptanceOptions& options = {});

}  // namespace pathsum
