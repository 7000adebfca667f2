// Independent numerical oracles shared by the test binaries.
#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <utility>
#include <vector>

namespace oracle {

// Gauss-Legendre rule on [0,1] by Newton iteration on P_n.
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
  std::vector<double> x(n), w(n);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x[i] = 0.5 * (1.0 - z);
    w[i] = 1.0 / ((1.0 - z * z) * dp * dp);
  }
  return {x, w};
}

inline double integrate(const std::function<double(double)>& f, double lo,
                        double hi, int panels = 64, int order = 16) {
  static thread_local std::pair<std::vector<double>, std::vector<double>> rule;
  if (static_cast<int>(rule.first.size()) != order) rule = gauss_legendre(order);
  const double step = (hi - lo) / panels;
  double acc = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double l = lo + p * step;
    for (int k = 0; k < order; ++k) acc += step * rule.second[k] * f(l + step * rule.first[k]);
  }
  return acc;
}

// (-Delta)^sigma exp(-x^2) at 0 from the Fourier side: (1/pi) int_0^inf xi^(2s) e^(-xi^2/4) sqrt(pi) dxi.
// Substitution xi = w^2 keeps the integrand smooth at 0.
inline double gaussian_fourier_at_zero(double sigma) {
  auto f = [&](double w) {
    const double xi = w * w;
    return 2.0 * w * std::pow(xi, 2.0 * sigma) * std::exp(-xi * xi / 4.0);
  };
  return integrate(f, 0.0, 4.0, 256, 16) / std::sqrt(std::numbers::pi);
}

// 2 int_0^inf (1 - e^(-y^2)) y^(-1-2s) dy, split at 1 with y = w^2 and y = 1/w^2.
inline double gaussian_real_space_kernel_integral(double sigma) {
  auto inner = [&](double w) {
    const double y = w * w;
    return 2.0 * w * (-std::expm1(-y * y)) * std::pow(y, -1.0 - 2.0 * sigma);
  };
  auto outer = [&](double w) {
    if (w == 0.0) return 0.0;
    const double t = w * w;
    return 2.0 * w * (-std::expm1(-1.0 / (t * t))) * std::pow(t, 2.0 * sigma - 1.0);
  };
  return 2.0 * (integrate(inner, 0.0, 1.0, 256, 16) + integrate(outer, 0.0, 1.0, 256, 16));
}

// int_{edge}^inf y^sigma (y - x)^(-1-2 sigma) dy via y = x + rho/t, t = w^(1/sigma).
inline double power_tail_beyond(double x, double edge, double sigma) {
  const double rho = edge - x;
  auto f = [&](double w) { return std::pow(x * std::pow(w, 1.0 / sigma) + rho, sigma); };
  return std::pow(rho, -2.0 * sigma) / sigma * integrate(f, 0.0, 1.0, 16, 16);
}

// (-Delta)^sigma exp(-x^2) = 4^s Gamma(1/2+s)/Gamma(1/2) 1F1(1/2+s; 1/2; -x^2), evaluated after
// Kummer's transformation as e^(-x^2) 1F1(-s; 1/2; x^2), whose terms share one sign past k = 0.
inline double gaussian_fraclap_kummer(double x, double sigma) {
  const double z = x * x;
  double term = 1.0, sum = 1.0;
  for (int k = 0; k < 2000; ++k) {
    term *= (k - sigma) / (0.5 + k) * z / (k + 1.0);
    sum += term;
    if (k > z && std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  const double c = std::pow(4.0, sigma) * std::tgamma(0.5 + sigma) / std::sqrt(std::numbers::pi);
  return c * std::exp(-z) * sum;
}

}  // namespace oracle
