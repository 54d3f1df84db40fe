#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace dyadkit {

// Neumaier compensated summation.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x))
      carry_ += (sum_ - t) + x;
    else
      carry_ += (x - t) + sum_;
    sum_ = t;
  }
  CompensatedSum& operator+=(double x) noexcept {
    add(x);
    return *this;
  }
  double value() const noexcept { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

inline double compensated_sum(std::span<const double> xs) noexcept {
  CompensatedSum s;
  for (double x : xs) s.add(x);
  return s.value();
}

// Sample mean and its standard error from running moments.
struct MeanEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
};

class RunningMoments {
 public:
  void add(double x) noexcept {
    ++n_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(n_);
    m2_ += delta * (x - mean_);
  }
  std::size_t count() const noexcept { return n_; }
  double mean() const noexcept { return mean_; }
  double variance() const noexcept {
    return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0;
  }
  double stddev() const noexcept { return std::sqrt(variance()); }
  MeanEstimate estimate() const noexcept {
    return {mean_, n_ > 0 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0,
            n_};
  }

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

// Distance from x to the nearest integer.
inline double dist_to_integer(double x) noexcept {
  const double f = x - std::floor(x);
  return f < 0.5 ? f : 1.0 - f;
}

inline double frac(double x) noexcept {
  const double f = x - std::floor(x);
  return f >= 1.0 ? 0.0 : f;
}

// Distance on R/Z between two reals.
inline double torus_dist(double a, double b) noexcept {
  return dist_to_integer(a - b);
}

}  // namespace dyadkit
