#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "wearauth/error.hpp"
#include "wearauth/svm.hpp"

using namespace wearauth;

namespace {

struct Instance {
  std::vector<std::vector<double>> x;
  std::vector<int> y;
};

Instance random_instance(std::mt19937_64& rng, std::size_t n,
                         std::size_t dim, double spread) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Instance instance;
  for (std::size_t i = 0; i < n; ++i) {
    const int label = i < n / 2 ? 1 : -1;
    std::vector<double> v(dim);
    for (double& value : v) {
      value = gauss(rng) + spread * label;
    }
    instance.x.push_back(std::move(v));
    instance.y.push_back(label);
  }
  // Both classes are always present by construction.
  return instance;
}

double dual_objective(const SvmModel& model,
                      const std::vector<std::vector<double>>& x,
                      const std::vector<int>& y, double c) {
  // Recover alphas by matching support vectors against training points.
  std::vector<double> alpha(x.size(), 0.0);
  for (std::size_t s = 0; s < model.support_vectors.size(); ++s) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (model.support_vectors[s] == x[i] &&
          model.dual_coefs[s] * y[i] > 0 && alpha[i] == 0.0) {
        alpha[i] = model.dual_coefs[s] * y[i];
        break;
      }
    }
  }
  double linear = 0.0;
  double quad = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    linear += alpha[i];
    for (std::size_t j = 0; j < x.size(); ++j) {
      quad += alpha[i] * alpha[j] * y[i] * y[j] *
              quadratic_kernel(x[i], x[j]);
    }
  }
  (void)c;
  return linear - 0.5 * quad;
}

}  // namespace

TEST_SUITE("svm") {

TEST_CASE("quadratic kernel arithmetic") {
  CHECK(quadratic_kernel(std::vector<double>{0.0},
                         std::vector<double>{0.0}) == 1.0);
  CHECK(quadratic_kernel(std::vector<double>{1.0},
                         std::vector<double>{-1.0}) == 0.0);
  CHECK(quadratic_kernel(std::vector<double>{1.0, 2.0},
                         std::vector<double>{3.0, 4.0}) == 144.0);
  CHECK_THROWS_AS(quadratic_kernel(std::vector<double>{1.0},
                                   std::vector<double>{1.0, 2.0}),
                  DomainError);
}

TEST_CASE("scaler uses training statistics with sample std") {
  const std::vector<std::vector<double>> train = {{2.0}, {4.0}, {6.0}};
  const Scaler scaler = Scaler::fit(train);
  CHECK(scaler.mean[0] == 4.0);
  CHECK(scaler.std_dev[0] == 2.0);
  CHECK(scaler.apply(std::vector<double>{2.0})[0] == -1.0);
  CHECK(scaler.apply(std::vector<double>{4.0})[0] == 0.0);
  CHECK(scaler.apply(std::vector<double>{6.0})[0] == 1.0);
}

TEST_CASE("constant columns pass through centered") {
  const std::vector<std::vector<double>> train = {{5.0, 1.0}, {5.0, 3.0}};
  const Scaler scaler = Scaler::fit(train);
  CHECK(scaler.apply(std::vector<double>{5.0, 2.0})[0] == 0.0);
}

TEST_CASE("scaled training set has per-column mean 0") {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> gauss(5.0, 3.0);
  std::vector<std::vector<double>> train;
  for (int i = 0; i < 40; ++i) {
    train.push_back({gauss(rng), gauss(rng), gauss(rng)});
  }
  const Scaler scaler = Scaler::fit(train);
  std::vector<double> sums(3, 0.0);
  for (const auto& v : train) {
    const auto z = scaler.apply(v);
    for (std::size_t j = 0; j < z.size(); ++j) {
      sums[j] += z[j];
    }
  }
  for (double s : sums) {
    CHECK(std::fabs(s / 40.0) < 1e-12);
  }
}

TEST_CASE("the two-point problem has the known closed-form solution") {
  const std::vector<std::vector<double>> x = {{1.0}, {-1.0}};
  const std::vector<int> y = {1, -1};
  const SvmModel model = smo_train(x, y, TrainConfig{});

  REQUIRE(model.support_vectors.size() == 2);
  for (double coef : model.dual_coefs) {
    CHECK(std::fabs(std::fabs(coef) - 0.25) < 1e-6);
  }
  CHECK(std::fabs(model.bias) < 1e-6);
  CHECK(decision(model, std::vector<double>{0.5}) == doctest::Approx(0.5));
  CHECK(decision(model, std::vector<double>{-0.5}) == doctest::Approx(-0.5));
  CHECK(predict_genuine(model, std::vector<double>{0.5}));
  CHECK(!predict_genuine(model, std::vector<double>{-0.5}));
}

TEST_CASE("single-class input is a domain error") {
  const std::vector<std::vector<double>> x = {{1.0}, {2.0}};
  CHECK_THROWS_AS(smo_train(x, {1, 1}, TrainConfig{}), DomainError);
  CHECK_THROWS_AS(smo_train(x, {1, 0}, TrainConfig{}), DomainError);
}

TEST_CASE("non-finite features are rejected") {
  const std::vector<std::vector<double>> x = {
      {1.0}, {std::numeric_limits<double>::quiet_NaN()}};
  CHECK_THROWS_AS(smo_train(x, {1, -1}, TrainConfig{}), DomainError);
}

TEST_CASE("dual objective reaches the projected-gradient oracle") {
  std::mt19937_64 rng(1207);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 6 + rng() % 15;
    const Instance instance = random_instance(rng, n, 3, 0.8);
    TrainConfig cfg;
    cfg.kkt_tol = 1e-5;
    const SvmModel model = smo_train(instance.x, instance.y, cfg);

    std::vector<std::vector<double>> kernel(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        kernel[i][j] = quadratic_kernel(instance.x[i], instance.x[j]);
      }
    }
    const auto reference =
        oracle::qp_projected_gradient(kernel, instance.y, cfg.c);
    const double achieved =
        dual_objective(model, instance.x, instance.y, cfg.c);
    CHECK(achieved >= reference.objective - 1e-4);
  }
}

TEST_CASE("KKT conditions hold at the configured tolerance") {
  std::mt19937_64 rng(1307);
  const Instance instance = random_instance(rng, 30, 4, 1.0);
  TrainConfig cfg;
  const SvmModel model = smo_train(instance.x, instance.y, cfg);

  double alpha_dot_y = 0.0;
  for (std::size_t s = 0; s < model.support_vectors.size(); ++s) {
    alpha_dot_y += model.dual_coefs[s];
    const double alpha = std::fabs(model.dual_coefs[s]);
    CHECK(alpha > 0.0);
    CHECK(alpha <= cfg.c + 1e-12);
  }
  CHECK(std::fabs(alpha_dot_y) < 1e-6);

  // Margin side of KKT: points off the support set obey y*f >= 1 - tol.
  for (std::size_t i = 0; i < instance.x.size(); ++i) {
    const double f = decision(model, instance.x[i]);
    const bool is_sv =
        std::find(model.support_vectors.begin(), model.support_vectors.end(),
                  instance.x[i]) != model.support_vectors.end();
    if (!is_sv) {
      CHECK(instance.y[i] * f >= 1.0 - cfg.kkt_tol - 1e-9);
    }
  }
}

TEST_CASE("separable kernel-space toys train to 100%") {
  // XOR-style labels are quadratic-separable via the product feature.
  const std::vector<std::vector<double>> x = {
      {1.0, 1.0}, {-1.0, -1.0}, {1.0, -1.0}, {-1.0, 1.0},
      {2.0, 2.0}, {-2.0, -2.0}, {2.0, -2.0}, {-2.0, 2.0}};
  const std::vector<int> y = {1, 1, -1, -1, 1, 1, -1, -1};
  TrainConfig cfg;
  cfg.c = 10.0;
  const SvmModel model = smo_train(x, y, cfg);
  for (std::size_t i = 0; i < x.size(); ++i) {
    CHECK(predict_genuine(model, x[i]) == (y[i] > 0));
  }
}

TEST_CASE("training is deterministic given the seed") {
  std::mt19937_64 rng(1407);
  const Instance instance = random_instance(rng, 40, 5, 0.5);
  TrainConfig cfg;
  cfg.seed = 99;
  const SvmModel a = smo_train(instance.x, instance.y, cfg);
  const SvmModel b = smo_train(instance.x, instance.y, cfg);
  CHECK(a.bias == b.bias);
  REQUIRE(a.dual_coefs.size() == b.dual_coefs.size());
  for (std::size_t i = 0; i < a.dual_coefs.size(); ++i) {
    CHECK(a.dual_coefs[i] == b.dual_coefs[i]);
  }
  CHECK(a.support_vectors == b.support_vectors);
}

TEST_CASE("decision rejects mismatched dimensions") {
  const std::vector<std::vector<double>> x = {{1.0, 0.0}, {-1.0, 0.0}};
  const SvmModel model = smo_train(x, {1, -1}, TrainConfig{});
  CHECK_THROWS_AS(decision(model, std::vector<double>{1.0}), DomainError);
  CHECK_THROWS_AS(decision(model, std::vector<double>{1.0, 2.0, 3.0}),
                  DomainError);
}

TEST_CASE("decision is continuous in the input") {
  std::mt19937_64 rng(1507);
  const Instance instance = random_instance(rng, 20, 3, 1.0);
  const SvmModel model = train_standardized(instance.x, instance.y,
                                            TrainConfig{});
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int probe = 0; probe < 20; ++probe) {
    std::vector<double> v = {gauss(rng), gauss(rng), gauss(rng)};
    const double f0 = decision(model, v);
    std::vector<double> nudged = v;
    nudged[probe % 3] += 1e-7;
    CHECK(std::fabs(decision(model, nudged) - f0) < 1e-3);
  }
}

TEST_CASE("train_standardized centers the training data") {
  std::mt19937_64 rng(1607);
  Instance instance = random_instance(rng, 30, 4, 1.2);
  for (auto& v : instance.x) {
    for (double& value : v) {
      value = value * 40.0 + 300.0;  // far from zero, unscaled
    }
  }
  const SvmModel model =
      train_standardized(instance.x, instance.y, TrainConfig{});
  // Raw-space decisions still separate most of the training set.
  std::size_t correct = 0;
  for (std::size_t i = 0; i < instance.x.size(); ++i) {
    if (predict_genuine(model, instance.x[i]) == (instance.y[i] > 0)) {
      ++correct;
    }
  }
  CHECK(correct >= instance.x.size() * 3 / 4);
}

TEST_CASE("model files round-trip decisions bit-exactly") {
  std::mt19937_64 rng(1707);
  const Instance instance = random_instance(rng, 24, 3, 0.9);
  SvmModel model = train_standardized(instance.x, instance.y, TrainConfig{});
  model.subject = "s007";
  model.combo = BiometricCombo::parse("CM");
  model.period = PeriodKind::kNonSedentary;
  model.approach = Approach::kKsCov;
  model.x_sigma_t = 30;
  model.feature_ids = {FeatureId::of(BiometricKind::kCalories, FeatureName::kMu),
                       FeatureId::of(BiometricKind::kCalories, FeatureName::kMax),
                       FeatureId::of(BiometricKind::kMet, FeatureName::kRms)};

  std::stringstream buffer;
  save_model(model, buffer, "digest123");
  const SvmModel loaded = load_model(buffer);

  CHECK(loaded.subject == model.subject);
  CHECK(loaded.combo == model.combo);
  CHECK(loaded.period == model.period);
  CHECK(loaded.approach == model.approach);
  CHECK(loaded.x_sigma_t == model.x_sigma_t);
  CHECK(loaded.feature_ids == model.feature_ids);
  CHECK(loaded.bias == model.bias);
  CHECK(loaded.support_vectors == model.support_vectors);
  CHECK(loaded.dual_coefs == model.dual_coefs);
  CHECK(loaded.scaler.mean == model.scaler.mean);
  CHECK(loaded.scaler.std_dev == model.scaler.std_dev);

  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int probe = 0; probe < 50; ++probe) {
    const std::vector<double> v = {gauss(rng), gauss(rng), gauss(rng)};
    CHECK(decision(model, v) == decision(loaded, v));
  }
}

}  // TEST_SUITE
