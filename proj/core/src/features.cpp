#include "wearauth/features.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "wearauth/csv.hpp"
#include "wearauth/error.hpp"

namespace wearauth {

namespace {

constexpr std::array<std::string_view, kFeatureCount> kFeatureNames = {
    "mu",     "sigma",  "var",   "cov",   "max",   "min",    "ran",
    "coran",  "p25",    "p50",   "p75",   "p95",   "iqr",    "coi",
    "mad_mu", "mad_mdn", "f_mu", "f_mdn", "P",     "np",     "E",
    "rms",    "p2rms",  "rss",   "snr",   "skew",  "kurt",   "a_main",
    "a_sec",  "f_main", "f_sec"};

constexpr double kN = static_cast<double>(kWindowMinutes);

// Inclusive linear interpolation on sorted data, rank h = (n-1)q + 1.
double percentile(std::span<const double> sorted, double q) {
  const double h = (static_cast<double>(sorted.size()) - 1.0) * q + 1.0;
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  const double frac = h - static_cast<double>(lo);
  if (lo >= sorted.size()) {
    return sorted.back();
  }
  if (frac == 0.0) {
    return sorted[lo - 1];
  }
  return sorted[lo - 1] + frac * (sorted[lo] - sorted[lo - 1]);
}

double ratio_or_zero(double num, double den) {
  return den == 0.0 ? 0.0 : num / den;
}

}  // namespace

std::string_view feature_name_str(FeatureName name) {
  return kFeatureNames[static_cast<std::size_t>(name)];
}

FeatureName feature_name_parse(std::string_view text) {
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    if (kFeatureNames[i] == text) {
      return static_cast<FeatureName>(i);
    }
  }
  throw DomainError("unknown feature name '" + std::string(text) + "'");
}

std::string FeatureId::str() const {
  if (is_level) {
    return "LEVEL:activity";
  }
  return std::string(1, initial(biometric)) + ":" +
         std::string(feature_name_str(name));
}

FeatureId FeatureId::parse(std::string_view text) {
  if (text == "LEVEL:activity") {
    return level();
  }
  const std::size_t colon = text.find(':');
  if (colon != 1) {
    throw DomainError("bad feature id '" + std::string(text) + "'");
  }
  BiometricCombo combo = BiometricCombo::parse(text.substr(0, 1));
  return of(combo.members().front(), feature_name_parse(text.substr(2)));
}

std::vector<FeatureId> candidate_features(BiometricCombo combo,
                                          PeriodKind period) {
  std::vector<FeatureId> out;
  for (BiometricKind kind : combo.members()) {
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
      out.push_back(FeatureId::of(kind, static_cast<FeatureName>(i)));
    }
  }
  if (period == PeriodKind::kNonSedentary) {
    out.push_back(FeatureId::level());
  }
  return out;
}

Spectrum dft_onesided(std::span<const double> samples) {
  if (samples.size() != kWindowMinutes) {
    throw DomainError("dft_onesided requires exactly 5 samples");
  }
  for (double x : samples) {
    if (!std::isfinite(x)) {
      throw DomainError("dft_onesided requires finite samples");
    }
  }
  Spectrum spectrum;
  for (std::size_t k = 0; k < spectrum.magnitude.size(); ++k) {
    double re = 0.0;
    double im = 0.0;
    for (std::size_t j = 0; j < kWindowMinutes; ++j) {
      const double angle = -2.0 * std::numbers::pi *
                           static_cast<double>(j * k) / kN;
      re += samples[j] * std::cos(angle);
      im += samples[j] * std::sin(angle);
    }
    spectrum.magnitude[k] = std::hypot(re, im);
    spectrum.frequency[k] = static_cast<double>(k) / kN;
  }
  return spectrum;
}

std::array<double, kFeatureCount> compute_biometric_features(
    std::span<const double> samples) {
  if (samples.size() != kWindowMinutes) {
    throw DomainError("compute_biometric_features requires exactly 5 samples");
  }
  std::array<double, kFeatureCount> f{};
  auto set = [&](FeatureName name, double value) {
    f[static_cast<std::size_t>(name)] = value;
  };

  double sum = 0.0;
  for (double x : samples) {
    sum += x;
  }
  const double mu = sum / kN;

  double ss = 0.0;  // sum of squared deviations
  double abs_dev_sum = 0.0;
  double m3 = 0.0;
  double m4 = 0.0;
  for (double x : samples) {
    const double d = x - mu;
    ss += d * d;
    abs_dev_sum += std::abs(d);
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  const double var = ss / (kN - 1.0);  // sample variance
  const double sigma = std::sqrt(var);
  const double m2 = ss / kN;  // population central moments for skew/kurt
  m3 /= kN;
  m4 /= kN;

  std::array<double, kWindowMinutes> sorted;
  std::copy(samples.begin(), samples.end(), sorted.begin());
  std::sort(sorted.begin(), sorted.end());
  const double maxv = sorted.back();
  const double minv = sorted.front();
  const double ran = maxv - minv;
  const double p25 = percentile(sorted, 0.25);
  const double p50 = percentile(sorted, 0.50);
  const double p75 = percentile(sorted, 0.75);
  const double p95 = percentile(sorted, 0.95);
  const double iqr = p75 - p25;

  std::array<double, kWindowMinutes> abs_from_median;
  for (std::size_t i = 0; i < kWindowMinutes; ++i) {
    abs_from_median[i] = std::abs(samples[i] - p50);
  }
  std::sort(abs_from_median.begin(), abs_from_median.end());

  int peaks = 0;
  for (std::size_t i = 1; i + 1 < kWindowMinutes; ++i) {
    if (samples[i - 1] < samples[i] && samples[i] > samples[i + 1]) {
      ++peaks;
    }
  }

  double energy = 0.0;
  double max_abs = 0.0;
  for (double x : samples) {
    energy += x * x;
    max_abs = std::max(max_abs, std::abs(x));
  }
  const double rms = std::sqrt(energy / kN);

  const Spectrum spectrum = dft_onesided(samples);
  const double p1 = spectrum.magnitude[1] * spectrum.magnitude[1];
  const double p2 = spectrum.magnitude[2] * spectrum.magnitude[2];
  const double spectral_power = p1 + p2;
  const double f1 = spectrum.frequency[1];
  const double f2 = spectrum.frequency[2];
  const double a1 = spectrum.amplitude(1);
  const double a2 = spectrum.amplitude(2);

  set(FeatureName::kMu, mu);
  set(FeatureName::kSigma, sigma);
  set(FeatureName::kVar, var);
  set(FeatureName::kCov, ratio_or_zero(sigma, std::abs(mu)));
  set(FeatureName::kMax, maxv);
  set(FeatureName::kMin, minv);
  set(FeatureName::kRan, ran);
  set(FeatureName::kCoran, ratio_or_zero(ran, maxv + minv));
  set(FeatureName::kP25, p25);
  set(FeatureName::kP50, p50);
  set(FeatureName::kP75, p75);
  set(FeatureName::kP95, p95);
  set(FeatureName::kIqr, iqr);
  set(FeatureName::kCoi, ratio_or_zero(iqr, p75 + p25));
  set(FeatureName::kMadMu, abs_dev_sum / kN);
  set(FeatureName::kMadMdn, percentile(abs_from_median, 0.50));
  set(FeatureName::kFMu,
      ratio_or_zero(f1 * p1 + f2 * p2, spectral_power));
  set(FeatureName::kFMdn,
      spectral_power == 0.0 ? 0.0 : (p1 >= spectral_power / 2.0 ? f1 : f2));
  set(FeatureName::kPower, spectral_power / (kN * kN));
  set(FeatureName::kNp, static_cast<double>(peaks));
  set(FeatureName::kEnergy, energy);
  set(FeatureName::kRms, rms);
  set(FeatureName::kP2Rms, ratio_or_zero(max_abs, rms));
  set(FeatureName::kRss, std::sqrt(energy));
  set(FeatureName::kSnr, ratio_or_zero(mu, sigma));
  set(FeatureName::kSkew, m2 == 0.0 ? 0.0 : m3 / std::pow(m2, 1.5));
  set(FeatureName::kKurt, m2 == 0.0 ? 0.0 : m4 / (m2 * m2));
  // Amplitude ties break toward the lower frequency. Bins of a constant
  // signal are zero only up to rounding, so the comparison is slack at the
  // signal's own scale.
  double signal_scale = 0.0;
  for (double x : samples) {
    signal_scale += std::abs(x);
  }
  if (a1 >= a2 || a2 - a1 <= 1e-12 * signal_scale) {
    set(FeatureName::kAMain, a1);
    set(FeatureName::kFMain, f1);
    set(FeatureName::kASec, a2);
    set(FeatureName::kFSec, f2);
  } else {
    set(FeatureName::kAMain, a2);
    set(FeatureName::kFMain, f2);
    set(FeatureName::kASec, a1);
    set(FeatureName::kFSec, f1);
  }
  return f;
}

WindowFeatures featurize_window(const Window& window) {
  WindowFeatures out;
  out.subject = window.subject;
  out.start = window.start;
  out.level = window.level;
  out.period = window.period;
  for (BiometricKind kind : kAllBiometrics) {
    std::array<double, kWindowMinutes> samples;
    for (std::size_t i = 0; i < kWindowMinutes; ++i) {
      samples[i] = window.sample(kind, i);
    }
    out.per_biometric[static_cast<std::size_t>(kind)] =
        compute_biometric_features(samples);
  }
  return out;
}

std::vector<WindowFeatures> featurize_windows(
    const std::vector<Window>& windows) {
  std::vector<WindowFeatures> out;
  out.reserve(windows.size());
  for (const Window& window : windows) {
    out.push_back(featurize_window(window));
  }
  return out;
}

FeatureVector slice_vector(const WindowFeatures& features,
                           BiometricCombo combo) {
  FeatureVector vector;
  vector.subject = features.subject;
  vector.start = features.start;
  vector.combo = combo;
  vector.period = features.period;
  vector.level = features.level;
  vector.values.reserve(kFeatureCount * combo.size() + 1);
  for (BiometricKind kind : combo.members()) {
    const auto& block = features.per_biometric[static_cast<std::size_t>(kind)];
    vector.values.insert(vector.values.end(), block.begin(), block.end());
  }
  if (features.period == PeriodKind::kNonSedentary) {
    vector.values.push_back(static_cast<double>(code(features.level)));
  }
  return vector;
}

FeatureVector assemble_vector(const Window& window, BiometricCombo combo) {
  FeatureVector vector;
  vector.subject = window.subject;
  vector.start = window.start;
  vector.combo = combo;
  vector.period = window.period;
  vector.level = window.level;
  vector.values.reserve(kFeatureCount * combo.size() + 1);
  for (BiometricKind kind : combo.members()) {
    std::array<double, kWindowMinutes> samples;
    for (std::size_t i = 0; i < kWindowMinutes; ++i) {
      samples[i] = window.sample(kind, i);
    }
    const auto block = compute_biometric_features(samples);
    vector.values.insert(vector.values.end(), block.begin(), block.end());
  }
  if (window.period == PeriodKind::kNonSedentary) {
    vector.values.push_back(static_cast<double>(code(window.level)));
  }
  for (double v : vector.values) {
    if (!std::isfinite(v)) {
      throw DomainError("non-finite feature value");
    }
  }
  return vector;
}

void write_feature_matrix_csv(const std::vector<FeatureVector>& vectors,
                              std::ostream& out) {
  if (vectors.empty()) {
    out << "subject,start,level\n";
    return;
  }
  const auto ids =
      candidate_features(vectors.front().combo, vectors.front().period);
  out << "subject,start,level";
  for (const FeatureId& id : ids) {
    out << ',' << id.str();
  }
  out << '\n';
  for (const FeatureVector& vector : vectors) {
    if (vector.combo != vectors.front().combo ||
        vector.period != vectors.front().period) {
      throw DomainError("feature matrix rows must share combo and period");
    }
    out << vector.subject << ',' << format_minute(vector.start) << ','
        << code(vector.level);
    for (double value : vector.values) {
      out << ',' << format_double(value);
    }
    out << '\n';
  }
}

}  // namespace wearauth
