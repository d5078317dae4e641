#pragma once

#include <vector>

namespace vbcent {

// Pearson correlation coefficient. Throws ValidationError on length mismatch,
// fewer than two points, or zero variance in either input.
double pearson(const std::vector<double>& x, const std::vector<double>& y);

// Spearman rank correlation: Pearson on average ranks (ties share the mean rank).
double spearman(const std::vector<double>& x, const std::vector<double>& y);

// Kendall tau-b. O(n log n) merge-sort inversion counting; ties handled by the
// tau-b denominator. Throws ValidationError if either input is constant.
double kendall_tau(const std::vector<double>& x, const std::vector<double>& y);

// Indices of the k largest scores, ties broken towards the lower index.
std::vector<int> topk_indices(const std::vector<double>& scores, int k);

// |top-k(x) intersect top-k(y)| / k. Ties broken towards the lower index so the
// top-k set is unique. k = 0 returns 1.0; k > n throws ValidationError.
double topk_overlap(const std::vector<double>& x, const std::vector<double>& y, int k);

double mean(const std::vector<double>& x);
double sample_variance(const std::vector<double>& x);  // n-1 denominator

} // namespace vbcent
