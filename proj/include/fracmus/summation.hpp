#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace fracmus {

// Neumaier compensated accumulator.
class CompensatedSum {
public:
    void add(double x) {
        double t = sum_ + x;
        if (std::fabs(sum_) >= std::fabs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    void add(const CompensatedSum& other) {
        add(other.sum_);
        add(other.comp_);
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// Exactly rounded sum of a sequence (Shewchuk partials). The result does not
// depend on the order of the terms.
class ExactSum {
public:
    void add(double x);
    double value() const;
    // True when the exact real sum of everything added is zero.
    bool exactly_zero() const;

private:
    std::vector<double> partials_;
};

double exact_sum(std::span<const double> xs);

}  // namespace fracmus
