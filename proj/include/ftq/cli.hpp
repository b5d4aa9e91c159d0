#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ftq/threshold.hpp"

namespace ftq::cli {

inline constexpr const char* kToolName = "ftq";
inline constexpr const char* kToolVersion = "0.1.0";

// Runs the command line; returns 0 on success, 2 on validation errors and 3
// on numerical or output errors. Diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int main(int argc, char** argv);

// Header `param,ic_bits,prop1_bound,vacuous`, one row per grid point, numbers
// with 12 significant digits.
std::string sweep_csv(const SweepResult& result);
// Throws std::runtime_error when the file cannot be written.
void emit_sweep_csv(const SweepResult& result, const std::string& path);

}  // namespace ftq::cli
