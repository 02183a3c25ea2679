#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace spdc {

/// Compensated (Kahan) accumulator; keeps grid reductions independent of
/// summation order to ~1e-16 relative.
class KahanSum {
 public:
  void add(double x) {
    double y = x - comp_;
    double t = sum_ + y;
    comp_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline double sinc(double x) {
  if (std::abs(x) < 1e-8) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

inline double sinc_sq(double x) {
  double s = sinc(x);
  return s * s;
}

/// exp(-x) * I0(x) for x >= 0 (modified Bessel, exponentially scaled).
/// Abramowitz & Stegun 9.8.1 / 9.8.2; relative error < 2e-7.
inline double i0e(double x) {
  double ax = std::abs(x);
  if (ax < 3.75) {
    double t = x / 3.75;
    t *= t;
    double i0 = 1.0 + t * (3.5156229 + t * (3.0899424 + t * (1.2067492 +
                t * (0.2659732 + t * (0.0360768 + t * 0.0045813)))));
    return i0 * std::exp(-ax);
  }
  double t = 3.75 / ax;
  double p = 0.39894228 + t * (0.01328592 + t * (0.00225319 + t * (-0.00157565 +
             t * (0.00916281 + t * (-0.02057706 + t * (0.02635537 +
             t * (-0.01647633 + t * 0.00392377)))))));
  return p / std::sqrt(ax);
}

inline std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> v(n);
  if (n == 1) {
    v[0] = a;
    return v;
  }
  double h = (b - a) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) v[i] = a + h * static_cast<double>(i);
  v[n - 1] = b;
  return v;
}

/// Midpoint sampling of a full circle, mirror-symmetric about 0.
inline std::vector<double> circle_midpoints(std::size_t n) {
  std::vector<double> v(n);
  double h = 2.0 * 3.14159265358979323846 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i)
    v[i] = -3.14159265358979323846 + (static_cast<double>(i) + 0.5) * h;
  return v;
}

/// Trapezoid weight for index i on an (n>=2)-point closed grid.
inline double trapezoid_weight(std::size_t i, std::size_t n) {
  return (i == 0 || i + 1 == n) ? 0.5 : 1.0;
}

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Ordinary least squares y = a*x + b with coefficient of determination.
inline LinearFit fit_linear(std::span<const double> x, std::span<const double> y) {
  std::size_t n = x.size();
  KahanSum sx, sy;
  for (std::size_t i = 0; i < n; ++i) {
    sx.add(x[i]);
    sy.add(y[i]);
  }
  double mx = sx.value() / static_cast<double>(n);
  double my = sy.value() / static_cast<double>(n);
  KahanSum sxx, sxy, syy;
  for (std::size_t i = 0; i < n; ++i) {
    sxx.add((x[i] - mx) * (x[i] - mx));
    sxy.add((x[i] - mx) * (y[i] - my));
    syy.add((y[i] - my) * (y[i] - my));
  }
  LinearFit fit;
  fit.slope = sxy.value() / sxx.value();
  fit.intercept = my - fit.slope * mx;
  double ss_res = syy.value() - fit.slope * sxy.value();
  fit.r_squared = (syy.value() > 0.0) ? 1.0 - ss_res / syy.value() : 1.0;
  return fit;
}

}  // namespace spdc
