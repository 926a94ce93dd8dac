#pragma once

#include <vector>

namespace qnn {

double mean(const std::vector<double>& xs);
double variance(const std::vector<double>& xs);  // unbiased, 0 for n < 2

// Naive standard error of the mean (assumes independent samples).
double std_error(const std::vector<double>& xs);

// Standard error from block means; robust against autocorrelation. Block
// count shrinks to sqrt(n) capped at 64 so each block spans many
// correlation times at typical sample counts.
double blocked_std_error(const std::vector<double>& xs);

// Integrated autocorrelation time with the standard windowing rule
// (sum rho(t) until the first non-positive estimate). >= 0.5.
double integrated_autocorrelation_time(const std::vector<double>& xs);

}  // namespace qnn
