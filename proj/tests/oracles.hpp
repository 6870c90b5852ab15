// Independent reference implementations used only by tests. Each one is
// written from the definitions, not by calling the library, so agreement
// is evidence rather than tautology.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <vector>

namespace oracle {

// ---------------------------------------------------------------------------
// Naive O(n^2) DFT via std::complex.
inline std::vector<double> dft_magnitudes(const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<double> mags;
  for (std::size_t k = 0; k <= n / 2; ++k) {
    std::complex<double> acc(0.0, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      const double angle = -2.0 * M_PI * static_cast<double>(j * k) /
                           static_cast<double>(n);
      acc += x[j] * std::polar(1.0, angle);
    }
    mags.push_back(std::abs(acc));
  }
  return mags;
}

// Full two-sided spectrum power, for Parseval checks.
inline double two_sided_power(const std::vector<double>& x) {
  const std::size_t n = x.size();
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> acc(0.0, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      const double angle = -2.0 * M_PI * static_cast<double>(j * k) /
                           static_cast<double>(n);
      acc += x[j] * std::polar(1.0, angle);
    }
    sum += std::norm(acc);
  }
  return sum;
}

// ---------------------------------------------------------------------------
// The 31 window statistics, by name, computed directly from definitions.
inline double percentile_linear(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double h = (static_cast<double>(v.size()) - 1.0) * q;
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = static_cast<std::size_t>(std::ceil(h));
  if (lo == hi) {
    return v[lo];
  }
  return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

inline std::map<std::string, double> window_features(
    const std::vector<double>& x) {
  const double n = static_cast<double>(x.size());
  std::map<std::string, double> f;

  const double mu = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : x) {
    ss += (v - mu) * (v - mu);
  }
  const double sigma = std::sqrt(ss / (n - 1.0));
  f["mu"] = mu;
  f["sigma"] = sigma;
  f["var"] = sigma * sigma;
  f["cov"] = mu == 0.0 ? 0.0 : sigma / std::fabs(mu);

  const double maxv = *std::max_element(x.begin(), x.end());
  const double minv = *std::min_element(x.begin(), x.end());
  f["max"] = maxv;
  f["min"] = minv;
  f["ran"] = maxv - minv;
  f["coran"] = (maxv + minv) == 0.0 ? 0.0 : (maxv - minv) / (maxv + minv);

  const double p25 = percentile_linear(x, 0.25);
  const double p50 = percentile_linear(x, 0.50);
  const double p75 = percentile_linear(x, 0.75);
  f["p25"] = p25;
  f["p50"] = p50;
  f["p75"] = p75;
  f["p95"] = percentile_linear(x, 0.95);
  f["iqr"] = p75 - p25;
  f["coi"] = (p75 + p25) == 0.0 ? 0.0 : (p75 - p25) / (p75 + p25);

  double mad = 0.0;
  std::vector<double> dev_from_median;
  for (double v : x) {
    mad += std::fabs(v - mu);
    dev_from_median.push_back(std::fabs(v - p50));
  }
  f["mad_mu"] = mad / n;
  f["mad_mdn"] = percentile_linear(dev_from_median, 0.50);

  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : x) {
    const double d = v - mu;
    m2 += d * d / n;
    m3 += d * d * d / n;
    m4 += d * d * d * d / n;
  }
  f["skew"] = m2 == 0.0 ? 0.0 : m3 / std::pow(m2, 1.5);
  f["kurt"] = m2 == 0.0 ? 0.0 : m4 / (m2 * m2);

  int peaks = 0;
  for (std::size_t i = 1; i + 1 < x.size(); ++i) {
    if (x[i] > x[i - 1] && x[i] > x[i + 1]) {
      ++peaks;
    }
  }
  f["np"] = peaks;

  double energy = 0.0;
  double peak = 0.0;
  for (double v : x) {
    energy += v * v;
    peak = std::max(peak, std::fabs(v));
  }
  const double rms = std::sqrt(energy / n);
  f["E"] = energy;
  f["rms"] = rms;
  f["p2rms"] = rms == 0.0 ? 0.0 : peak / rms;
  f["rss"] = std::sqrt(energy);
  f["snr"] = sigma == 0.0 ? 0.0 : mu / sigma;

  const std::vector<double> mags = dft_magnitudes(x);
  const double pw1 = mags[1] * mags[1];
  const double pw2 = mags[2] * mags[2];
  const double total = pw1 + pw2;
  const double freq1 = 1.0 / n;
  const double freq2 = 2.0 / n;
  f["P"] = total / (n * n);
  f["f_mu"] = total == 0.0 ? 0.0 : (freq1 * pw1 + freq2 * pw2) / total;
  f["f_mdn"] = total == 0.0 ? 0.0 : (pw1 >= total / 2.0 ? freq1 : freq2);
  const double amp1 = 2.0 * mags[1] / n;
  const double amp2 = 2.0 * mags[2] / n;
  if (amp1 >= amp2) {
    f["a_main"] = amp1;
    f["f_main"] = freq1;
    f["a_sec"] = amp2;
    f["f_sec"] = freq2;
  } else {
    f["a_main"] = amp2;
    f["f_main"] = freq2;
    f["a_sec"] = amp1;
    f["f_sec"] = freq1;
  }
  return f;
}

// ---------------------------------------------------------------------------
// Brute-force sup |F_a - F_b| evaluated at every sample point.
inline double ks_statistic(const std::vector<double>& a,
                           const std::vector<double>& b) {
  std::vector<double> points = a;
  points.insert(points.end(), b.begin(), b.end());
  double d = 0.0;
  for (double x : points) {
    const auto count_le = [x](const std::vector<double>& v) {
      return static_cast<double>(
          std::count_if(v.begin(), v.end(), [x](double s) { return s <= x; }));
    };
    const double fa = count_le(a) / static_cast<double>(a.size());
    const double fb = count_le(b) / static_cast<double>(b.size());
    d = std::max(d, std::fabs(fa - fb));
  }
  return d;
}

// Pooled permutation p-value: fraction of resampled splits whose D reaches
// the observed one.
inline double ks_permutation_p(const std::vector<double>& a,
                               const std::vector<double>& b,
                               std::size_t resamples, std::uint64_t seed) {
  const double observed = ks_statistic(a, b);
  std::vector<double> pool = a;
  pool.insert(pool.end(), b.begin(), b.end());
  std::mt19937_64 rng(seed);
  std::size_t hits = 0;
  for (std::size_t r = 0; r < resamples; ++r) {
    std::shuffle(pool.begin(), pool.end(), rng);
    const std::vector<double> ra(pool.begin(),
                                 pool.begin() + static_cast<std::ptrdiff_t>(
                                                    a.size()));
    const std::vector<double> rb(
        pool.begin() + static_cast<std::ptrdiff_t>(a.size()), pool.end());
    if (ks_statistic(ra, rb) >= observed - 1e-12) {
      ++hits;
    }
  }
  return static_cast<double>(hits) / static_cast<double>(resamples);
}

// ---------------------------------------------------------------------------
// Dense projected-gradient solver for the SVM dual:
//   max W(alpha) = sum(alpha) - 1/2 alpha' Q alpha,  Q_ij = y_i y_j K_ij
//   s.t. 0 <= alpha <= C, y'alpha = 0.
// Projection onto the box intersected with the hyperplane is done exactly
// by bisection on the shift nu in alpha_i = clip(g_i - nu*y_i).
struct QpSolution {
  std::vector<double> alpha;
  double objective = 0.0;
};

inline double qp_objective(const std::vector<std::vector<double>>& q,
                           const std::vector<double>& alpha) {
  const std::size_t n = alpha.size();
  double linear = 0.0;
  double quad = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    linear += alpha[i];
    for (std::size_t j = 0; j < n; ++j) {
      quad += alpha[i] * q[i][j] * alpha[j];
    }
  }
  return linear - 0.5 * quad;
}

inline std::vector<double> project_box_hyperplane(
    const std::vector<double>& g, const std::vector<int>& y, double c) {
  const std::size_t n = g.size();
  auto eval = [&](double nu) {
    double residual = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double a =
          std::clamp(g[i] - nu * static_cast<double>(y[i]), 0.0, c);
      residual += static_cast<double>(y[i]) * a;
    }
    return residual;
  };
  // residual(nu) is non-increasing; bracket a root then bisect.
  double lo = -1.0, hi = 1.0;
  for (int i = 0; i < 200 && eval(lo) < 0.0; ++i) {
    lo *= 2.0;
  }
  for (int i = 0; i < 200 && eval(hi) > 0.0; ++i) {
    hi *= 2.0;
  }
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (eval(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double nu = 0.5 * (lo + hi);
  std::vector<double> alpha(n);
  for (std::size_t i = 0; i < n; ++i) {
    alpha[i] = std::clamp(g[i] - nu * static_cast<double>(y[i]), 0.0, c);
  }
  return alpha;
}

inline QpSolution qp_projected_gradient(
    const std::vector<std::vector<double>>& kernel, const std::vector<int>& y,
    double c, std::size_t iterations = 20000) {
  const std::size_t n = y.size();
  std::vector<std::vector<double>> q(n, std::vector<double>(n));
  double trace = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      q[i][j] = static_cast<double>(y[i]) * static_cast<double>(y[j]) *
                kernel[i][j];
    }
    trace += q[i][i];
  }
  const double step = 1.0 / std::max(trace, 1e-9);

  std::vector<double> alpha(n, 0.0);
  alpha = project_box_hyperplane(alpha, y, c);
  std::vector<double> grad(n);
  for (std::size_t it = 0; it < iterations; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      double qa = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        qa += q[i][j] * alpha[j];
      }
      grad[i] = 1.0 - qa;
    }
    std::vector<double> moved(n);
    for (std::size_t i = 0; i < n; ++i) {
      moved[i] = alpha[i] + step * grad[i];
    }
    alpha = project_box_hyperplane(moved, y, c);
  }
  return QpSolution{alpha, qp_objective(q, alpha)};
}

}  // namespace oracle
