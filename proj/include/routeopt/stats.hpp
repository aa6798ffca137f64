#pragma once

// Statistical machinery for the benchmark harness: paired Wilcoxon
// signed-rank tests, percentile-bootstrap confidence intervals, Cohen's d,
// win rates, and ECDFs.  Everything here is deterministic given its inputs;
// the bootstrap takes an explicit seed.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include <routeopt/errors.hpp>
#include <routeopt/rng.hpp>

namespace routeopt {

namespace detail {

/// Midranks of |deltas| in doubled units so ties stay integral: values at
/// sorted positions i..j-1 (0-based, ranks i+1..j) share doubled rank i+j+1.
/// Returns {doubled rank, positive?} per observation plus the tie group sizes.
struct SignedRanks {
    std::vector<std::pair<long, bool>> ranks;
    std::vector<long> tie_sizes;
    long doubled_w_plus = 0;
};

inline SignedRanks signed_ranks(const std::vector<double>& deltas) {
    std::vector<std::pair<double, bool>> mag;  // (|d|, d > 0), zeros dropped
    for (double d : deltas)
        if (d != 0.0) mag.emplace_back(std::fabs(d), d > 0.0);
    std::sort(mag.begin(), mag.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    SignedRanks out;
    out.ranks.reserve(mag.size());
    for (std::size_t i = 0; i < mag.size();) {
        std::size_t j = i;
        while (j < mag.size() && mag[j].first == mag[i].first) ++j;
        const long doubled = static_cast<long>(i + j + 1);
        for (std::size_t k = i; k < j; ++k) {
            out.ranks.emplace_back(doubled, mag[k].second);
            if (mag[k].second) out.doubled_w_plus += doubled;
        }
        out.tie_sizes.push_back(static_cast<long>(j - i));
        i = j;
    }
    return out;
}

}  // namespace detail

/// Two-sided paired Wilcoxon signed-rank p-value.  Zero deltas are dropped;
/// fewer than five remaining pairs is an error.  Small samples (n <= 50) use
/// the exact permutation distribution (a subset-sum count over the doubled
/// midranks, so ties are handled exactly); larger samples fall back to the
/// normal approximation with tie correction and a continuity correction.
inline double wilcoxon_signed_rank(const std::vector<double>& deltas) {
    const auto sr = detail::signed_ranks(deltas);
    const auto n = sr.ranks.size();
    if (n < 5)
        throw Error(Errc::too_few_samples,
                    "wilcoxon_signed_rank needs at least 5 nonzero deltas, got " +
                        std::to_string(n));

    const long total_d = static_cast<long>(n * (n + 1));  // doubled rank sum
    const long w_min_d = std::min(sr.doubled_w_plus, total_d - sr.doubled_w_plus);

    if (n <= 50) {
        // ways[s] = number of sign assignments whose doubled rank sum is s.
        // Counts stay below 2^50, exactly representable in a double.
        std::vector<double> ways(static_cast<std::size_t>(total_d) + 1, 0.0);
        ways[0] = 1.0;
        long reach = 0;
        for (const auto& [r, positive] : sr.ranks) {
            reach += r;
            for (long s = reach; s >= r; --s)
                ways[static_cast<std::size_t>(s)] += ways[static_cast<std::size_t>(s - r)];
        }
        double tail = 0.0;
        for (long s = 0; s <= w_min_d; ++s) tail += ways[static_cast<std::size_t>(s)];
        const double p = 2.0 * tail / std::ldexp(1.0, static_cast<int>(n));
        return std::min(1.0, p);
    }

    const double nd = static_cast<double>(n);
    const double mu = nd * (nd + 1.0) / 4.0;
    double var = nd * (nd + 1.0) * (2.0 * nd + 1.0) / 24.0;
    for (long t : sr.tie_sizes) {
        const double td = static_cast<double>(t);
        var -= (td * td * td - td) / 48.0;
    }
    if (var <= 0.0) return 1.0;
    const double w = static_cast<double>(w_min_d) / 2.0;
    // |w - mu| shrunk by 0.5 (continuity), never past zero
    const double num = std::min(0.0, w - mu + 0.5);
    const double z = num / std::sqrt(var);
    return std::min(1.0, std::erfc(-z / std::sqrt(2.0)));
}

/// Percentile bootstrap CI for the mean of `deltas` at the given level.
inline std::pair<double, double> bootstrap_ci(const std::vector<double>& deltas,
                                              double level = 0.95, int resamples = 10000,
                                              std::uint64_t seed = 0) {
    if (deltas.size() < 2)
        throw Error(Errc::too_few_samples, "bootstrap_ci needs at least 2 deltas");
    if (!(level > 0.0 && level < 1.0) || resamples < 2)
        throw Error(Errc::invalid_input, "bootstrap_ci: bad level or resample count");

    const auto n = deltas.size();
    Rng rng(seed);
    std::vector<double> means(static_cast<std::size_t>(resamples));
    for (auto& m : means) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) acc += deltas[rng.index(n)];
        m = acc / static_cast<double>(n);
    }
    std::sort(means.begin(), means.end());

    const auto quantile = [&](double q) {
        const double pos = q * static_cast<double>(means.size() - 1);
        const auto lo = static_cast<std::size_t>(pos);
        const double frac = pos - static_cast<double>(lo);
        if (lo + 1 >= means.size()) return means.back();
        return means[lo] + frac * (means[lo + 1] - means[lo]);
    };
    return {quantile((1.0 - level) / 2.0), quantile((1.0 + level) / 2.0)};
}

/// Paired Cohen's d: mean / sample standard deviation.  Degenerate spread
/// collapses to a signed infinity sentinel (or 0 for all-zero deltas).
inline double cohens_d(const std::vector<double>& deltas) {
    if (deltas.size() < 2)
        throw Error(Errc::too_few_samples, "cohens_d needs at least 2 deltas");
    const auto n = static_cast<double>(deltas.size());
    double mean = 0.0;
    for (double d : deltas) mean += d;
    mean /= n;
    double ss = 0.0;
    for (double d : deltas) ss += (d - mean) * (d - mean);
    const double sd = std::sqrt(ss / (n - 1.0));
    if (sd < 1e-12) {
        if (mean > 0.0) return std::numeric_limits<double>::infinity();
        if (mean < 0.0) return -std::numeric_limits<double>::infinity();
        return 0.0;
    }
    return mean / sd;
}

/// Fraction of strict wins.  An absent delta (the method did not produce a
/// route) counts as a loss; ties count as losses.
inline double win_rate(const std::vector<std::optional<double>>& deltas) {
    if (deltas.empty()) return 0.0;
    std::size_t wins = 0;
    for (const auto& d : deltas)
        if (d && *d > 0.0) ++wins;
    return static_cast<double>(wins) / static_cast<double>(deltas.size());
}

/// Right-continuous empirical CDF: sorted unique x with F(x) in (0, 1].
inline std::vector<std::pair<double, double>> ecdf(const std::vector<double>& values) {
    if (values.empty()) throw Error(Errc::too_few_samples, "ecdf of an empty sample");
    std::vector<double> xs = values;
    std::sort(xs.begin(), xs.end());
    std::vector<std::pair<double, double>> out;
    const auto n = static_cast<double>(xs.size());
    for (std::size_t i = 0; i < xs.size();) {
        std::size_t j = i;
        while (j < xs.size() && xs[j] == xs[i]) ++j;
        out.emplace_back(xs[i], static_cast<double>(j) / n);
        i = j;
    }
    return out;
}

}  // namespace routeopt
