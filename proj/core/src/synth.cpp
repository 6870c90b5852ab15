#include "wearauth/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <json.hpp>

#include "wearauth/csv.hpp"
#include "wearauth/error.hpp"

namespace wearauth {

namespace {

std::uint64_t splitmix64(std::uint64_t state) {
  state += 0x9e3779b97f4a7c15ULL;
  state = (state ^ (state >> 30)) * 0xbf58476d1ce4e5b9ULL;
  state = (state ^ (state >> 27)) * 0x94d049bb133111ebULL;
  return state ^ (state >> 31);
}

// Independent per-subject stream: subject k's draws never move subject j's.
std::mt19937_64 subject_rng(std::uint64_t seed, std::size_t index) {
  return std::mt19937_64(splitmix64(seed ^ (0xabcdef12345678ULL +
                                            static_cast<std::uint64_t>(index) *
                                                0x9e3779b97f4a7c15ULL)));
}

double spread(std::mt19937_64& rng, double center, double half_range,
              double separation) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  return center + separation * half_range * unit(rng);
}

// Geometric dwell on {1,2,...} with the requested mean.
int draw_dwell(std::mt19937_64& rng, double mean_minutes) {
  const double p = 1.0 / std::max(1.0, mean_minutes);
  std::geometric_distribution<int> tail(p);  // counts failures, support {0,..}
  return 1 + tail(rng);
}

void validate(const CohortConfig& cfg) {
  if (cfg.n_subjects == 0 || cfg.days <= 0) {
    throw DomainError("cohort needs at least one subject and one day");
  }
  for (const auto& row : cfg.level_transition) {
    double sum = 0.0;
    for (double p : row) {
      if (p < 0.0) {
        throw DomainError("transition probabilities must be >= 0");
      }
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      throw DomainError("transition matrix rows must sum to 1");
    }
  }
  if (std::none_of(cfg.mean_dwell_minutes.begin(),
                   cfg.mean_dwell_minutes.end(),
                   [](double d) { return d >= 5.0; })) {
    throw DomainError("at least one level needs mean dwell >= 5 minutes");
  }
  if (cfg.wear_gap_rate < 0.0 || cfg.wear_gap_rate >= 1.0) {
    throw DomainError("wear_gap_rate must be in [0,1)");
  }
  if (cfg.subject_separation < 0.0 || cfg.subject_separation > 1.0) {
    throw DomainError("subject_separation must be in [0,1]");
  }
}

}  // namespace

CohortConfig default_cohort_config() { return CohortConfig{}; }

SubjectProfile draw_profile(std::uint64_t seed, std::size_t index,
                            double separation) {
  std::mt19937_64 rng = subject_rng(seed, index);
  SubjectProfile base;
  SubjectProfile profile;
  profile.resting_hr = spread(rng, base.resting_hr, 27.5, separation);
  profile.hr_gain = spread(rng, base.hr_gain, 9.0, separation);
  profile.cadence_mean[0] = 0.0;  // sedentary cadence is always zero
  profile.cadence_mean[1] = spread(rng, base.cadence_mean[1], 22.0, separation);
  profile.cadence_mean[2] = spread(rng, base.cadence_mean[2], 30.0, separation);
  profile.cadence_mean[3] = spread(rng, base.cadence_mean[3], 35.0, separation);
  profile.bmr_per_min = spread(rng, base.bmr_per_min, 0.45, separation);
  profile.met_gain = spread(rng, base.met_gain, 0.55, separation);
  profile.noise_ar1 = spread(rng, base.noise_ar1, 0.25, separation);
  profile.hr_noise_sd = spread(rng, base.hr_noise_sd, 1.4, separation);
  profile.steps_noise_sd = spread(rng, base.steps_noise_sd, 3.0, separation);
  profile.met_noise_sd = spread(rng, base.met_noise_sd, 0.05, separation);
  profile.cal_noise_sd = spread(rng, base.cal_noise_sd, 0.07, separation);
  return profile;
}

std::vector<SubjectStream> generate_cohort(const CohortConfig& cfg) {
  validate(cfg);
  const std::size_t minutes =
      static_cast<std::size_t>(cfg.days) * 24 * 60;

  std::vector<SubjectStream> streams;
  streams.reserve(cfg.n_subjects);
  for (std::size_t k = 0; k < cfg.n_subjects; ++k) {
    const SubjectProfile profile =
        draw_profile(cfg.seed, k, cfg.subject_separation);
    std::mt19937_64 rng = subject_rng(cfg.seed ^ 0x5eedcafef00dULL, k);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);

    SubjectStream stream;
    char name[16];
    std::snprintf(name, sizeof(name), "s%03zu", k + 1);
    stream.subject = name;
    stream.records.reserve(minutes);

    int level = 0;
    int dwell_left = draw_dwell(rng, cfg.mean_dwell_minutes[0]);
    double ar_hr = 0.0;
    double ar_steps = 0.0;
    double ar_met = 0.0;
    double ar_cal = 0.0;
    const double phi = std::clamp(profile.noise_ar1, 0.0, 0.99);

    for (std::size_t m = 0; m < minutes; ++m) {
      if (dwell_left == 0) {
        const double u = uniform(rng);
        double cumulative = 0.0;
        int next = 3;
        for (int j = 0; j < 4; ++j) {
          cumulative += cfg.level_transition[level][j];
          if (u < cumulative) {
            next = j;
            break;
          }
        }
        level = next;
        dwell_left = draw_dwell(rng, cfg.mean_dwell_minutes[level]);
      }
      --dwell_left;

      ar_hr = phi * ar_hr + gauss(rng) * profile.hr_noise_sd;
      ar_steps = phi * ar_steps + gauss(rng) * profile.steps_noise_sd;
      ar_met = phi * ar_met + gauss(rng) * profile.met_noise_sd;
      ar_cal = phi * ar_cal + gauss(rng) * profile.cal_noise_sd;
      const bool wear_gap = uniform(rng) < cfg.wear_gap_rate;

      MinuteRecord record;
      record.subject = stream.subject;
      record.timestamp = cfg.start + static_cast<Minute>(m);
      record.level = activity_level_from_code(level);
      if (!wear_gap) {
        const double hr = profile.resting_hr + profile.hr_gain * level + ar_hr;
        record.heart_rate = std::clamp(hr, 30.0, 220.0);
      }
      if (level == 0) {
        record.steps = 0;  // no cadence, no step noise while sedentary
      } else {
        const double steps = profile.cadence_mean[level] + ar_steps;
        record.steps = static_cast<int>(std::lround(std::max(0.0, steps)));
      }
      record.met = std::max(1.0, 1.0 + profile.met_gain * level + ar_met);
      record.calories =
          std::max(0.0, profile.bmr_per_min * record.met + ar_cal);
      stream.records.push_back(std::move(record));
    }
    streams.push_back(std::move(stream));
  }
  return streams;
}

void export_csv(const std::vector<SubjectStream>& streams, std::ostream& out) {
  write_cohort_csv(streams, out);
}

CohortConfig read_cohort_config(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad cohort config: ") + e.what());
  }
  CohortConfig cfg;
  try {
    cfg.n_subjects = doc.value("n_subjects", cfg.n_subjects);
    cfg.days = doc.value("days", cfg.days);
    cfg.seed = doc.value("seed", cfg.seed);
    cfg.wear_gap_rate = doc.value("wear_gap_rate", cfg.wear_gap_rate);
    cfg.subject_separation =
        doc.value("subject_separation", cfg.subject_separation);
    if (doc.contains("level_transition")) {
      const auto rows = doc.at("level_transition");
      for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
          cfg.level_transition[i][j] = rows.at(i).at(j).get<double>();
        }
      }
    }
    if (doc.contains("mean_dwell_minutes")) {
      const auto dwell = doc.at("mean_dwell_minutes");
      for (std::size_t i = 0; i < 4; ++i) {
        cfg.mean_dwell_minutes[i] = dwell.at(i).get<double>();
      }
    }
    if (doc.contains("start")) {
      cfg.start = parse_minute(doc.at("start").get<std::string>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad cohort config: ") + e.what());
  }
  return cfg;
}

void write_cohort_config(const CohortConfig& cfg, std::ostream& out) {
  nlohmann::json doc;
  doc["n_subjects"] = cfg.n_subjects;
  doc["days"] = cfg.days;
  doc["seed"] = cfg.seed;
  doc["wear_gap_rate"] = cfg.wear_gap_rate;
  doc["subject_separation"] = cfg.subject_separation;
  doc["level_transition"] = cfg.level_transition;
  doc["mean_dwell_minutes"] = cfg.mean_dwell_minutes;
  doc["start"] = format_minute(cfg.start);
  out << doc.dump(2) << '\n';
}

}  // namespace wearauth
