#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "renyi_reach/report_io.hpp"

namespace renyi_reach::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kViolation = 2 };

/// Runs one subcommand. args excludes the program name. The report goes to
/// `out` unless --output names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct SpectrumPair {
  std::vector<double> lambda_s;
  std::vector<double> lambda_e;
};

/// One row per (alpha, pair) with the bound columns
/// alpha, d_s, d_e, lambda_s, lambda_e, div_bound, bures_bound, tur_bound,
/// est_bound_r1..est_bound_r<r_max>. Spectra cells are ';'-joined.
io::Table sweep_table(const std::vector<double>& alphas, const std::vector<SpectrumPair>& pairs,
                      int r_max);

}  // namespace renyi_reach::cli
