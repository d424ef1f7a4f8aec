#include "rwsolv/stopping.hpp"

#include <stdexcept>

namespace rwsolv {

double inverse_complementary_normal_cdf(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("inverse_complementary_normal_cdf: p must be in (0,1)");
    auto upper_tail = [](double q) { return 0.5 * std::erfc(q / std::sqrt(2.0)); };
    double lo = -40.0, hi = 40.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (upper_tail(mid) > p)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace rwsolv
