#pragma once

#include <cmath>
#include <cstdint>

namespace rwsolv {

/// Upper-tail standard normal quantile: smallest q with 0.5*erfc(q/sqrt(2)) <= p.
/// Bisection; accurate to ~1e-12, which dwarfs the statistics it gates.
double inverse_complementary_normal_cdf(double p);

/// Running mean/variance accumulator (Welford).
struct RunningStats {
    std::int64_t count = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        ++count;
        const double d = x - mean;
        mean += d / static_cast<double>(count);
        m2 += d * (x - mean);
    }
    double variance() const { return count > 1 ? m2 / static_cast<double>(count - 1) : 0.0; }
    double stddev() const { return std::sqrt(variance()); }
};

/// Walk-count control for preconditioner builds: sampling at node k stops
/// once delta * mean_len * sqrt(M) / sigma_len exceeds the normal quantile
/// for confidence alpha, with a minimum-walk floor. delta is the relative
/// half-width granted to the walk-length mean.
struct StoppingCriterion {
    double delta = 0.05;
    double alpha = 0.99;
    int min_walks = 20;

    double quantile() const { return inverse_complementary_normal_cdf((1.0 - alpha) / 2.0); }

    bool satisfied(const RunningStats& lengths, double q) const {
        if (lengths.count < min_walks) return false;
        const double sigma = lengths.stddev();
        if (sigma == 0.0) return true;
        return delta * lengths.mean * std::sqrt(static_cast<double>(lengths.count)) / sigma > q;
    }
};

/// Stand-alone solver control: stops when the absolute half-width of the
/// gain mean at confidence alpha drops below delta.
struct GainStopping {
    double delta = 0.05;
    double alpha = 0.99;
    int min_walks = 20;

    double quantile() const { return inverse_complementary_normal_cdf((1.0 - alpha) / 2.0); }

    bool satisfied(const RunningStats& gains, double q) const {
        if (gains.count < min_walks) return false;
        const double sigma = gains.stddev();
        if (sigma == 0.0) return true;
        return delta * std::sqrt(static_cast<double>(gains.count)) / sigma > q;
    }
};

}  // namespace rwsolv
