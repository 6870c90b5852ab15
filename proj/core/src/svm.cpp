#include "wearauth/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "wearauth/error.hpp"

namespace wearauth {

Scaler Scaler::fit(const std::vector<std::vector<double>>& train) {
  if (train.size() < 2) {
    throw DomainError("fit_scaler requires >= 2 training vectors");
  }
  const std::size_t dim = train.front().size();
  Scaler scaler;
  scaler.mean.assign(dim, 0.0);
  scaler.std_dev.assign(dim, 1.0);
  const double n = static_cast<double>(train.size());
  for (const auto& v : train) {
    if (v.size() != dim) {
      throw DomainError("inconsistent vector dimensions");
    }
    for (std::size_t j = 0; j < dim; ++j) {
      scaler.mean[j] += v[j];
    }
  }
  for (double& m : scaler.mean) {
    m /= n;
  }
  for (std::size_t j = 0; j < dim; ++j) {
    double ss = 0.0;
    for (const auto& v : train) {
      const double d = v[j] - scaler.mean[j];
      ss += d * d;
    }
    const double sd = std::sqrt(ss / (n - 1.0));
    scaler.std_dev[j] = sd == 0.0 ? 1.0 : sd;
  }
  return scaler;
}

Scaler Scaler::identity(std::size_t dim) {
  Scaler scaler;
  scaler.mean.assign(dim, 0.0);
  scaler.std_dev.assign(dim, 1.0);
  return scaler;
}

std::vector<double> Scaler::apply(std::span<const double> v) const {
  if (v.size() != mean.size()) {
    throw DomainError("scaler dimension mismatch");
  }
  std::vector<double> out(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) {
    out[j] = (v[j] - mean[j]) / std_dev[j];
  }
  return out;
}

double quadratic_kernel(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) {
    throw DomainError("kernel dimension mismatch");
  }
  double dot = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dot += u[i] * v[i];
  }
  const double k = 1.0 + dot;
  return k * k;
}

namespace {

// SMO with maximal-violating-pair selection over a precomputed Gram
// matrix. Works on the signed variables beta_i = y_i * alpha_i, each boxed
// to [min(0, y_i C), max(0, y_i C)], with F_i = y_i - sum_j beta_j K_ij.
// Optimality holds when max_{I_up} F - min_{I_low} F <= kkt_tol. Selection
// is by first-maximum index, so training is fully deterministic.
class SmoSolver {
 public:
  SmoSolver(const std::vector<std::vector<double>>& x,
            const std::vector<int>& y, const TrainConfig& cfg)
      : y_(y), cfg_(cfg), n_(x.size()) {
    gram_.assign(n_ * n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = i; j < n_; ++j) {
        const double k = quadratic_kernel(x[i], x[j]);
        gram_[i * n_ + j] = k;
        gram_[j * n_ + i] = k;
      }
    }
    beta_.assign(n_, 0.0);
    f_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      f_[i] = static_cast<double>(y_[i]);
    }
  }

  void solve() {
    std::size_t up = n_;
    std::size_t low = n_;
    double f_up = 0.0;
    double f_low = 0.0;
    auto scan = [&] {
      up = n_;
      low = n_;
      f_up = -std::numeric_limits<double>::infinity();
      f_low = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < n_; ++k) {
        if (in_up_set(k) && f_[k] > f_up) {
          f_up = f_[k];
          up = k;
        }
        if (in_low_set(k) && f_[k] < f_low) {
          f_low = f_[k];
          low = k;
        }
      }
    };
    scan();

    // Every accepted step strictly increases the dual objective, so the
    // iteration cap is a safety net, not an expected exit.
    const std::size_t max_iterations =
        static_cast<std::size_t>(cfg_.max_passes) * 50 *
        std::max<std::size_t>(n_, 1);
    for (std::size_t iter = 0; iter < max_iterations; ++iter) {
      if (up == n_ || low == n_ || f_up - f_low <= cfg_.kkt_tol) {
        break;
      }
      const double eta = gram(up, up) + gram(low, low) - 2.0 * gram(up, low);
      double step = std::min(upper_bound(up) - beta_[up],
                             beta_[low] - lower_bound(low));
      if (eta > 0.0) {
        step = std::min(step, (f_up - f_low) / eta);
      }
      if (step <= 1e-14) {
        break;
      }
      beta_[up] += step;
      beta_[low] -= step;
      snap_to_bounds(up);
      snap_to_bounds(low);

      // Fold the next pair selection into the gradient update pass.
      const double* row_up = gram_.data() + up * n_;
      const double* row_low = gram_.data() + low * n_;
      up = n_;
      low = n_;
      f_up = -std::numeric_limits<double>::infinity();
      f_low = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < n_; ++k) {
        f_[k] += step * (row_low[k] - row_up[k]);
        if (in_up_set(k) && f_[k] > f_up) {
          f_up = f_[k];
          up = k;
        }
        if (in_low_set(k) && f_[k] < f_low) {
          f_low = f_[k];
          low = k;
        }
      }
    }
  }

  double alpha(std::size_t i) const {
    return beta_[i] * static_cast<double>(y_[i]);
  }
  double gram(std::size_t i, std::size_t j) const {
    return gram_[i * n_ + j];
  }

  // Bias averaged over unbounded support vectors; falls back to the
  // midpoint of the feasible KKT interval when every alpha sits on a
  // bound. F_i equals the bias that would put point i exactly on margin.
  double final_bias() const {
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < n_; ++i) {
      if (is_unbounded(i)) {
        sum += f_[i];
        ++count;
      }
    }
    if (count > 0) {
      return sum / static_cast<double>(count);
    }
    double lower = -std::numeric_limits<double>::infinity();
    double upper = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n_; ++i) {
      if (in_up_set(i)) {
        lower = std::max(lower, f_[i]);
      }
      if (in_low_set(i)) {
        upper = std::min(upper, f_[i]);
      }
    }
    if (!std::isfinite(lower)) {
      return upper;
    }
    if (!std::isfinite(upper)) {
      return lower;
    }
    return (lower + upper) / 2.0;
  }

 private:
  double upper_bound(std::size_t i) const {
    return y_[i] > 0 ? cfg_.c : 0.0;
  }
  double lower_bound(std::size_t i) const {
    return y_[i] > 0 ? 0.0 : -cfg_.c;
  }
  // beta_i may still grow / shrink without leaving the box.
  bool in_up_set(std::size_t i) const {
    return beta_[i] < upper_bound(i);
  }
  bool in_low_set(std::size_t i) const {
    return beta_[i] > lower_bound(i);
  }
  bool is_unbounded(std::size_t i) const {
    const double a = alpha(i);
    return a > 0.0 && a < cfg_.c;
  }
  void snap_to_bounds(std::size_t i) {
    if (std::abs(beta_[i] - upper_bound(i)) < 1e-12) {
      beta_[i] = upper_bound(i);
    } else if (std::abs(beta_[i] - lower_bound(i)) < 1e-12) {
      beta_[i] = lower_bound(i);
    }
  }

  const std::vector<int>& y_;
  TrainConfig cfg_;
  std::size_t n_;
  std::vector<double> gram_;
  std::vector<double> beta_;  // y_i * alpha_i
  std::vector<double> f_;     // y_i - sum_j beta_j K_ij
};

}  // namespace

SvmModel smo_train(const std::vector<std::vector<double>>& x,
                   const std::vector<int>& y, const TrainConfig& cfg) {
  if (x.size() != y.size() || x.size() < 2) {
    throw DomainError("smo_train requires >= 2 labeled vectors");
  }
  bool has_pos = false;
  bool has_neg = false;
  for (int label : y) {
    if (label == 1) {
      has_pos = true;
    } else if (label == -1) {
      has_neg = true;
    } else {
      throw DomainError("labels must be +1 or -1");
    }
  }
  if (!has_pos || !has_neg) {
    throw DomainError("smo_train requires both classes");
  }
  const std::size_t dim = x.front().size();
  for (const auto& v : x) {
    if (v.size() != dim) {
      throw DomainError("inconsistent vector dimensions");
    }
    for (double value : v) {
      if (!std::isfinite(value)) {
        throw DomainError("non-finite feature value");
      }
    }
  }

  SmoSolver solver(x, y, cfg);
  solver.solve();

  SvmModel model;
  model.scaler = Scaler::identity(dim);
  model.bias = solver.final_bias();
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (solver.alpha(i) > 0.0) {
      model.support_vectors.push_back(x[i]);
      model.dual_coefs.push_back(solver.alpha(i) * static_cast<double>(y[i]));
    }
  }
  return model;
}

SvmModel train_standardized(const std::vector<std::vector<double>>& x_raw,
                            const std::vector<int>& y,
                            const TrainConfig& cfg) {
  Scaler scaler = Scaler::fit(x_raw);
  std::vector<std::vector<double>> x;
  x.reserve(x_raw.size());
  for (const auto& v : x_raw) {
    x.push_back(scaler.apply(v));
  }
  SvmModel model = smo_train(x, y, cfg);
  model.scaler = std::move(scaler);
  return model;
}

double decision(const SvmModel& model, std::span<const double> raw) {
  const std::vector<double> v = model.scaler.apply(raw);
  double f = model.bias;
  for (std::size_t i = 0; i < model.support_vectors.size(); ++i) {
    f += model.dual_coefs[i] * quadratic_kernel(model.support_vectors[i], v);
  }
  return f;
}

bool predict_genuine(const SvmModel& model, std::span<const double> raw) {
  return decision(model, raw) >= 0.0;
}

void save_model(const SvmModel& model, std::ostream& out,
                const std::string& manifest_digest) {
  nlohmann::json doc;
  doc["format"] = "wearauth-svm";
  doc["version"] = 1;
  doc["subject"] = model.subject;
  doc["combo"] = model.combo.str();
  doc["period"] = code(model.period);
  doc["approach"] = approach_str(model.approach);
  if (model.x_sigma_t) {
    doc["x_sigma_t"] = *model.x_sigma_t;
  }
  if (!manifest_digest.empty()) {
    doc["manifest"] = manifest_digest;
  }
  nlohmann::json ids = nlohmann::json::array();
  for (const FeatureId& id : model.feature_ids) {
    ids.push_back(id.str());
  }
  doc["feature_ids"] = ids;
  doc["scaler"] = {{"mean", model.scaler.mean},
                   {"std", model.scaler.std_dev}};
  doc["support_vectors"] = model.support_vectors;
  doc["dual_coefs"] = model.dual_coefs;
  doc["bias"] = model.bias;
  out << doc.dump(2) << '\n';
}

SvmModel load_model(std::istream& in) {
  nlohmann::json doc = nlohmann::json::parse(in);
  if (doc.value("format", "") != "wearauth-svm" || doc.value("version", 0) != 1) {
    throw ParseError(1, "unrecognized model file format");
  }
  SvmModel model;
  model.subject = doc.at("subject").get<std::string>();
  model.combo = BiometricCombo::parse(doc.at("combo").get<std::string>());
  model.period = period_kind_from_code(doc.at("period").get<int>());
  model.approach = approach_parse(doc.at("approach").get<std::string>());
  if (doc.contains("x_sigma_t")) {
    model.x_sigma_t = doc.at("x_sigma_t").get<int>();
  }
  for (const auto& entry : doc.at("feature_ids")) {
    model.feature_ids.push_back(FeatureId::parse(entry.get<std::string>()));
  }
  model.scaler.mean = doc.at("scaler").at("mean").get<std::vector<double>>();
  model.scaler.std_dev =
      doc.at("scaler").at("std").get<std::vector<double>>();
  model.support_vectors =
      doc.at("support_vectors").get<std::vector<std::vector<double>>>();
  model.dual_coefs = doc.at("dual_coefs").get<std::vector<double>>();
  model.bias = doc.at("bias").get<double>();
  return model;
}

}  // namespace wearauth
