#include "fracmus/summation.hpp"

namespace fracmus {

void ExactSum::add(double x) {
    if (!std::isfinite(x)) {
        // Fall back to naive propagation of inf/nan through the partials.
        partials_.assign(1, (partials_.empty() ? 0.0 : value()) + x);
        return;
    }
    std::size_t i = 0;
    for (double y : partials_) {
        if (std::fabs(x) < std::fabs(y)) std::swap(x, y);
        double hi = x + y;
        double lo = y - (hi - x);
        if (lo != 0.0) partials_[i++] = lo;
        x = hi;
    }
    partials_.resize(i);
    partials_.push_back(x);
}

double ExactSum::value() const {
    std::size_t n = partials_.size();
    if (n == 0) return 0.0;
    double hi = partials_[--n];
    double lo = 0.0;
    while (n > 0) {
        double x = hi;
        double y = partials_[--n];
        hi = x + y;
        double yr = hi - x;
        lo = y - yr;
        if (lo != 0.0) break;
    }
    // Round half-even across the remaining partials.
    if (n > 0 && ((lo < 0.0 && partials_[n - 1] < 0.0) ||
                  (lo > 0.0 && partials_[n - 1] > 0.0))) {
        double y = lo * 2.0;
        double x = hi + y;
        double yr = x - hi;
        if (y == yr) hi = x;
    }
    return hi;
}

bool ExactSum::exactly_zero() const {
    for (double p : partials_)
        if (p != 0.0) return false;
    return true;
}

double exact_sum(std::span<const double> xs) {
    ExactSum s;
    for (double x : xs) s.add(x);
    return s.value();
}

}  // namespace fracmus
