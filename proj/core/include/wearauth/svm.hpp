#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wearauth/features.hpp"
#include "wearauth/selection.hpp"
#include "wearauth/types.hpp"

namespace wearauth {

/// Per-feature standardization fitted on training data. Constant columns
/// get std 1 so they pass through centered.
struct Scaler {
  std::vector<double> mean;
  std::vector<double> std_dev;

  static Scaler fit(const std::vector<std::vector<double>>& train);
  static Scaler identity(std::size_t dim);
  std::vector<double> apply(std::span<const double> v) const;
};

struct TrainConfig {
  double c = 1.0;           // box constraint
  double kkt_tol = 1e-3;    // KKT tolerance
  int max_passes = 10;      // scales the safety cap on solver iterations
  std::uint64_t seed = 0;   // reserved; pair selection is deterministic
};

/// Trained per-subject authenticator. Decision values are computed on
/// standardized inputs: f(v) = sum_i dual_coefs[i]*K(sv_i, scale(v)) + bias.
struct SvmModel {
  std::string subject;
  Scaler scaler;
  std::vector<std::vector<double>> support_vectors;  // standardized
  std::vector<double> dual_coefs;                    // alpha_i * y_i
  double bias = 0.0;
  std::vector<FeatureId> feature_ids;
  // Provenance of the experiment that produced the model.
  BiometricCombo combo;
  PeriodKind period = PeriodKind::kSedentary;
  Approach approach = Approach::kKs;
  std::optional<int> x_sigma_t;
};

/// K(u, v) = (1 + u.v)^2. Throws DomainError on dimension mismatch.
double quadratic_kernel(std::span<const double> u, std::span<const double> v);

/// Solves the dual soft-margin problem
///   max sum(alpha) - 1/2 sum_ij alpha_i alpha_j y_i y_j K(x_i, x_j)
///   s.t. 0 <= alpha_i <= C, sum(alpha_i y_i) = 0
/// by sequential minimal optimization, stepping the maximal violating pair
/// over a cached Gram matrix until the KKT gap closes within kkt_tol.
/// Training runs on the vectors exactly as given (the returned model
/// carries an identity scaler); labels must be +1/-1 with both classes
/// present. Training is deterministic, pair selection included.
SvmModel smo_train(const std::vector<std::vector<double>>& x,
                   const std::vector<int>& y, const TrainConfig& cfg);

/// Fits a scaler on the raw vectors, trains on the standardized copies, and
/// installs the scaler so decision() accepts raw inputs.
SvmModel train_standardized(const std::vector<std::vector<double>>& x_raw,
                            const std::vector<int>& y, const TrainConfig& cfg);

double decision(const SvmModel& model, std::span<const double> raw);
/// Genuine iff the decision value is non-negative.
bool predict_genuine(const SvmModel& model, std::span<const double> raw);

/// Versioned model file; round-trips every double bit-exactly.
void save_model(const SvmModel& model, std::ostream& out,
                const std::string& manifest_digest = {});
SvmModel load_model(std::istream& in);

}  // namespace wearauth
