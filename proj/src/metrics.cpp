#include "vbcent/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "vbcent/errors.hpp"

namespace vbcent {

namespace {

void check_pair(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw ValidationError("score vectors differ in length");
    if (x.size() < 2) throw ValidationError("need at least two scores");
    for (std::size_t i = 0; i < x.size(); ++i)
        if (!std::isfinite(x[i]) || !std::isfinite(y[i]))
            throw ValidationError("scores must be finite");
}

// Stable merge sort counting strict inversions (pairs i < j with v[i] > v[j]).
long long sort_and_count(std::vector<double>& v, std::vector<double>& tmp, std::size_t lo,
                         std::size_t hi) {
    if (hi - lo < 2) return 0;
    std::size_t mid = lo + (hi - lo) / 2;
    long long count = sort_and_count(v, tmp, lo, mid) + sort_and_count(v, tmp, mid, hi);
    std::size_t a = lo, b = mid, out = lo;
    while (a < mid && b < hi) {
        if (v[b] < v[a]) {
            count += static_cast<long long>(mid - a);
            tmp[out++] = v[b++];
        } else {
            tmp[out++] = v[a++];
        }
    }
    while (a < mid) tmp[out++] = v[a++];
    while (b < hi) tmp[out++] = v[b++];
    std::copy(tmp.begin() + lo, tmp.begin() + hi, v.begin() + lo);
    return count;
}

long long tie_pairs(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    long long total = 0, run = 1;
    for (std::size_t i = 1; i <= v.size(); ++i) {
        if (i < v.size() && v[i] == v[i - 1]) {
            ++run;
        } else {
            total += run * (run - 1) / 2;
            run = 1;
        }
    }
    return total;
}

std::vector<double> average_ranks(const std::vector<double>& x) {
    std::size_t n = x.size();
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return x[a] < x[b]; });
    std::vector<double> rank(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && x[order[j + 1]] == x[order[i]]) ++j;
        double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) rank[order[k]] = avg;
        i = j + 1;
    }
    return rank;
}

} // namespace

double mean(const std::vector<double>& x) {
    if (x.empty()) throw ValidationError("mean of empty vector");
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double sample_variance(const std::vector<double>& x) {
    if (x.size() < 2) throw ValidationError("variance needs at least two values");
    double m = mean(x), s = 0.0;
    for (double v : x) s += (v - m) * (v - m);
    return s / static_cast<double>(x.size() - 1);
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    check_pair(x, y);
    double mx = mean(x), my = mean(y);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0 || syy == 0) throw ValidationError("Pearson undefined for constant input");
    return sxy / std::sqrt(sxx * syy);
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
    check_pair(x, y);
    return pearson(average_ranks(x), average_ranks(y));
}

double kendall_tau(const std::vector<double>& x, const std::vector<double>& y) {
    check_pair(x, y);
    long long n = static_cast<long long>(x.size());
    long long n0 = n * (n - 1) / 2;
    long long n1 = tie_pairs(x);
    long long n2 = tie_pairs(y);
    if (n1 == n0 || n2 == n0) throw ValidationError("Kendall tau undefined for constant input");

    // Sort by (x, y); x-tied pairs then contribute no y-inversions, so the
    // merge-sort count equals the number of discordant pairs exactly.
    std::vector<int> order(x.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (x[a] != x[b]) return x[a] < x[b];
        return y[a] < y[b];
    });
    long long n3 = 0, run = 1;
    for (std::size_t i = 1; i <= order.size(); ++i) {
        if (i < order.size() && x[order[i]] == x[order[i - 1]] && y[order[i]] == y[order[i - 1]]) {
            ++run;
        } else {
            n3 += run * (run - 1) / 2;
            run = 1;
        }
    }
    std::vector<double> ys(x.size()), tmp(x.size());
    for (std::size_t i = 0; i < order.size(); ++i) ys[i] = y[order[i]];
    long long discordant = sort_and_count(ys, tmp, 0, ys.size());

    long long num = n0 - n1 - n2 + n3 - 2 * discordant;
    return static_cast<double>(num) /
           std::sqrt(static_cast<double>(n0 - n1) * static_cast<double>(n0 - n2));
}

std::vector<int> topk_indices(const std::vector<double>& scores, int k) {
    if (k < 0 || k > static_cast<int>(scores.size()))
        throw ValidationError("top-k count out of range");
    std::vector<int> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return a < b;
    });
    order.resize(k);
    return order;
}

double topk_overlap(const std::vector<double>& x, const std::vector<double>& y, int k) {
    check_pair(x, y);
    if (k == 0) return 1.0;
    auto tx = topk_indices(x, k);
    auto ty = topk_indices(y, k);
    std::sort(tx.begin(), tx.end());
    std::sort(ty.begin(), ty.end());
    std::vector<int> common;
    std::set_intersection(tx.begin(), tx.end(), ty.begin(), ty.end(), std::back_inserter(common));
    return static_cast<double>(common.size()) / static_cast<double>(k);
}

} // namespace vbcent
