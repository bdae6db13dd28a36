#ifndef CROSSWALK_STATS_HPP
#define CROSSWALK_STATS_HPP

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace crosswalk {

/// Default confidence width: acceptance checks are phrased as 3-sigma bands.
inline constexpr double kDefaultZ = 3.0;

/// Fixed-width binned counts. Bin edges are strictly increasing; a value on
/// a shared edge goes to the upper bin, values at or beyond the outer edges
/// clamp into the end bins.
struct Histogram {
    std::vector<double> bin_edges;        // size = bins + 1
    std::vector<std::uint64_t> counts;    // size = bins
    std::uint64_t total = 0;

    static Histogram uniform_bins(double lo, double hi, std::size_t bins) {
        if (!(bins >= 1) || !(hi > lo))
            throw std::invalid_argument("Histogram: need bins >= 1 and hi > lo");
        Histogram h;
        h.bin_edges.resize(bins + 1);
        for (std::size_t i = 0; i <= bins; ++i)
            h.bin_edges[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(bins);
        h.bin_edges.front() = lo;
        h.bin_edges.back() = hi;
        h.counts.assign(bins, 0);
        return h;
    }

    std::size_t bins() const { return counts.size(); }

    void add(double value) {
        const double lo = bin_edges.front();
        const double hi = bin_edges.back();
        const auto k = static_cast<double>(bins());
        auto idx = static_cast<std::int64_t>(std::floor((value - lo) / (hi - lo) * k));
        if (idx < 0) idx = 0;
        if (idx >= static_cast<std::int64_t>(bins())) idx = static_cast<std::int64_t>(bins()) - 1;
        ++counts[static_cast<std::size_t>(idx)];
        ++total;
    }

    /// Add another histogram over identical edges.
    void merge(const Histogram& other) {
        if (other.bin_edges != bin_edges)
            throw std::invalid_argument("Histogram::merge: bin edges differ");
        for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += other.counts[i];
        total += other.total;
    }

    bool operator==(const Histogram&) const = default;
};

/// Point estimate with confidence bounds and the analytic reference value,
/// when one exists for the configuration.
struct EstimateRecord {
    double point = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::uint64_t n = 0;
    std::optional<double> analytic{};

    bool operator==(const EstimateRecord&) const = default;
};

/// Associative sufficient statistics (n, sum, sum of squares) for sample
/// means. Shards accumulated independently and merged give bit-identical
/// results to a single pass as long as additions happen in the same order,
/// and exactly identical whenever the samples are integer-valued.
struct SampleStats {
    std::uint64_t n = 0;
    double sum = 0.0;
    double sum_sq = 0.0;

    void add(double x) {
        ++n;
        sum += x;
        sum_sq += x * x;
    }

    void merge(const SampleStats& other) {
        n += other.n;
        sum += other.sum;
        sum_sq += other.sum_sq;
    }

    double mean() const { return sum / static_cast<double>(n); }
};

/// Wilson score interval for a binomial proportion, clamped to [0, 1].
inline std::pair<double, double> wilson_interval(std::uint64_t successes,
                                                 std::uint64_t trials,
                                                 double z) {
    if (trials < 1) throw std::invalid_argument("wilson_interval: trials must be >= 1");
    if (successes > trials) throw std::invalid_argument("wilson_interval: successes > trials");
    if (!(z > 0)) throw std::invalid_argument("wilson_interval: z must be > 0");

    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    // the closed form yields exactly 0 (resp. 1) at the boundary counts,
    // but the rounded num/denom quotient can land one ulp inside
    double lo = successes == 0 ? 0.0 : center - half;
    double hi = successes == trials ? 1.0 : center + half;
    if (lo < 0.0) lo = 0.0;
    if (hi > 1.0) hi = 1.0;
    return {lo, hi};
}

/// Normal-theory interval for a sample mean: mean +- z * s / sqrt(n),
/// from sufficient statistics.
inline std::pair<double, double> mean_interval(double sum, double sum_sq,
                                               std::uint64_t n, double z) {
    if (n < 2) throw std::invalid_argument("mean_interval: n must be >= 2");
    const double nn = static_cast<double>(n);
    const double mean = sum / nn;
    double var = (sum_sq - sum * sum / nn) / (nn - 1.0);
    if (var < 0.0) var = 0.0; // cancellation guard; exact-zero variance rounds negative
    const double half = z * std::sqrt(var / nn);
    return {mean - half, mean + half};
}

inline std::pair<double, double> mean_interval(const SampleStats& s, double z) {
    return mean_interval(s.sum, s.sum_sq, s.n, z);
}

/// Total-variation distance between the empirical distribution of an
/// equal-width histogram and the uniform distribution over its bins.
/// Ranges over [0, 1 - 1/k]; zero exactly when counts are uniform.
inline double tv_distance_to_uniform(const Histogram& hist) {
    if (hist.total < 1) throw std::invalid_argument("tv_distance_to_uniform: empty histogram");
    const std::size_t k = hist.bins();
    const double w0 = hist.bin_edges[1] - hist.bin_edges[0];
    for (std::size_t i = 1; i < k; ++i) {
        const double w = hist.bin_edges[i + 1] - hist.bin_edges[i];
        if (std::abs(w - w0) > 1e-9 * std::abs(w0))
            throw std::invalid_argument("tv_distance_to_uniform: bins must have equal width");
    }
    const double uniform = 1.0 / static_cast<double>(k);
    const double total = static_cast<double>(hist.total);
    double acc = 0.0;
    for (std::uint64_t c : hist.counts)
        acc += std::abs(static_cast<double>(c) / total - uniform);
    return 0.5 * acc;
}

} // namespace crosswalk

#endif // CROSSWALK_STATS_HPP
