#pragma once

#include <span>
#include <vector>

namespace lexbias::stats {

double mean(std::span<const double> xs);
/// Two-pass sample standard deviation (n - 1 denominator); 0 when n < 2.
double sample_stdev(std::span<const double> xs);
/// Spearman rank correlation with average ranks for ties.
double spearman(std::span<const double> xs, std::span<const double> ys);
/// Average ranks (1-based) with ties sharing their mean rank.
std::vector<double> ranks(std::span<const double> xs);

}  // namespace lexbias::stats
