#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace wearauth {

/// Minute-level physical activity intensity reported by the tracker.
enum class ActivityLevel : int {
  kSedentary = 0,
  kLight = 1,
  kFair = 2,
  kHigh = 3,
};

constexpr int code(ActivityLevel level) { return static_cast<int>(level); }
ActivityLevel activity_level_from_code(int code);
constexpr std::array<ActivityLevel, 4> kAllActivityLevels = {
    ActivityLevel::kSedentary, ActivityLevel::kLight, ActivityLevel::kFair,
    ActivityLevel::kHigh};

/// Sedentary (level 0) vs non-sedentary (levels 1-3) analysis period.
enum class PeriodKind : int {
  kSedentary = 0,
  kNonSedentary = 1,
};

constexpr int code(PeriodKind period) { return static_cast<int>(period); }
PeriodKind period_kind_from_code(int code);
constexpr PeriodKind period_of(ActivityLevel level) {
  return level == ActivityLevel::kSedentary ? PeriodKind::kSedentary
                                            : PeriodKind::kNonSedentary;
}
/// Activity levels making up a period: {0} or {1,2,3}.
std::vector<ActivityLevel> levels_of(PeriodKind period);

/// The four minute-level biometric streams, in canonical C,S,M,H order.
enum class BiometricKind : int {
  kCalories = 0,
  kSteps = 1,
  kMet = 2,
  kHeartRate = 3,
};

constexpr std::array<BiometricKind, 4> kAllBiometrics = {
    BiometricKind::kCalories, BiometricKind::kSteps, BiometricKind::kMet,
    BiometricKind::kHeartRate};
char initial(BiometricKind kind);

/// Non-empty subset of the four biometrics, held in canonical C,S,M,H order.
/// There are exactly 15 distinct values.
class BiometricCombo {
 public:
  BiometricCombo() = default;
  explicit BiometricCombo(std::initializer_list<BiometricKind> kinds);

  /// Parses a tag like "CM" or "CSMH" (any order, no duplicates).
  static BiometricCombo parse(std::string_view tag);
  /// All 15 combos, enumerated in a fixed canonical order.
  static const std::vector<BiometricCombo>& all();

  std::vector<BiometricKind> members() const;
  bool contains(BiometricKind kind) const { return mask_ & bit(kind); }
  std::size_t size() const;
  bool empty() const { return mask_ == 0; }
  std::string str() const;

  auto operator<=>(const BiometricCombo&) const = default;

 private:
  static unsigned bit(BiometricKind kind) {
    return 1u << static_cast<int>(kind);
  }
  unsigned mask_ = 0;
};

/// Minutes since the Unix epoch, UTC. The pipeline's only clock.
using Minute = std::int64_t;

/// Parses an ISO-8601 instant ("2016-01-04T10:00Z", optional seconds and
/// numeric offsets). Seconds are truncated; when non-zero and `truncated`
/// is given, the counter is incremented.
Minute parse_minute(std::string_view text, std::size_t* truncated = nullptr);
/// Renders minute precision UTC: "YYYY-MM-DDTHH:MMZ".
std::string format_minute(Minute minute);

/// One minute of subject biometrics. Absent heart rate marks the minute as
/// an invalid-wear candidate: the tracker records activity even when off
/// the wrist, but heart rate only while worn.
struct MinuteRecord {
  std::string subject;
  Minute timestamp = 0;
  std::optional<double> heart_rate;  // beats/minute, > 0 when present
  double calories = 0.0;             // kcal/minute
  int steps = 0;                     // count/minute
  double met = 0.0;                  // metabolic equivalent, 1.0 = resting
  ActivityLevel level = ActivityLevel::kSedentary;
};

/// All of one subject's records, strictly increasing in timestamp.
struct SubjectStream {
  std::string subject;
  std::vector<MinuteRecord> records;
};

inline constexpr std::size_t kWindowMinutes = 5;

/// Five consecutive valid minutes at one activity level; the unit of
/// classification.
struct Window {
  std::string subject;
  Minute start = 0;
  std::array<MinuteRecord, kWindowMinutes> samples;
  ActivityLevel level = ActivityLevel::kSedentary;
  PeriodKind period = PeriodKind::kSedentary;

  double sample(BiometricKind kind, std::size_t i) const;
};

}  // namespace wearauth
