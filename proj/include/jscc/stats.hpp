#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace jscc {

/// Neumaier-compensated running sum. Merging two partial sums gives the same
/// result as one pass up to the compensation residual.
class CompensatedSum {
public:
    void add(double x) noexcept
    {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }

    void merge(const CompensatedSum& other) noexcept
    {
        add(other.sum_);
        add(other.comp_);
    }

    [[nodiscard]] double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// First and second moments of a scalar stream.
class MomentAccumulator {
public:
    void add(double x) noexcept
    {
        ++count_;
        sum_.add(x);
        sum_sq_.add(x * x);
    }

    void merge(const MomentAccumulator& other) noexcept
    {
        count_ += other.count_;
        sum_.merge(other.sum_);
        sum_sq_.merge(other.sum_sq_);
    }

    [[nodiscard]] std::size_t count() const noexcept { return count_; }
    [[nodiscard]] double sum() const noexcept { return sum_.value(); }
    [[nodiscard]] double mean() const noexcept
    {
        return count_ == 0 ? 0.0 : sum_.value() / static_cast<double>(count_);
    }

    /// Unbiased sample variance; zero for fewer than two samples.
    [[nodiscard]] double variance() const noexcept
    {
        if (count_ < 2)
            return 0.0;
        const double n = static_cast<double>(count_);
        const double m = mean();
        const double v = (sum_sq_.value() - n * m * m) / (n - 1.0);
        return v > 0.0 ? v : 0.0;
    }

    [[nodiscard]] double standard_error() const noexcept
    {
        return count_ == 0 ? 0.0 : std::sqrt(variance() / static_cast<double>(count_));
    }

private:
    std::size_t count_ = 0;
    CompensatedSum sum_;
    CompensatedSum sum_sq_;
};

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

/// Ordinary least squares y = slope * x + intercept. Requires at least two
/// distinct abscissae; throws std::invalid_argument otherwise.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

} // namespace jscc
