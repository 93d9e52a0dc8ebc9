#pragma once

#include <string>
#include <vector>

namespace twochoice::cli {

// Experiment runner entry point. Returns 0 on success, 1 on runtime failure,
// 2 on usage errors (unknown flags or inconsistent parameters).
int run_cli(const std::vector<std::string>& args);

} // namespace twochoice::cli
