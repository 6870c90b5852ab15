#include "wearauth/types.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>

#include "wearauth/error.hpp"

namespace wearauth {

ActivityLevel activity_level_from_code(int code) {
  if (code < 0 || code > 3) {
    throw DomainError("unknown activity code " + std::to_string(code));
  }
  return static_cast<ActivityLevel>(code);
}

PeriodKind period_kind_from_code(int code) {
  if (code != 0 && code != 1) {
    throw DomainError("unknown period code " + std::to_string(code));
  }
  return static_cast<PeriodKind>(code);
}

std::vector<ActivityLevel> levels_of(PeriodKind period) {
  if (period == PeriodKind::kSedentary) {
    return {ActivityLevel::kSedentary};
  }
  return {ActivityLevel::kLight, ActivityLevel::kFair, ActivityLevel::kHigh};
}

char initial(BiometricKind kind) {
  switch (kind) {
    case BiometricKind::kCalories:
      return 'C';
    case BiometricKind::kSteps:
      return 'S';
    case BiometricKind::kMet:
      return 'M';
    case BiometricKind::kHeartRate:
      return 'H';
  }
  throw DomainError("invalid biometric kind");
}

BiometricCombo::BiometricCombo(std::initializer_list<BiometricKind> kinds) {
  for (BiometricKind kind : kinds) {
    mask_ |= bit(kind);
  }
  if (mask_ == 0) {
    throw DomainError("biometric combination must be non-empty");
  }
}

BiometricCombo BiometricCombo::parse(std::string_view tag) {
  BiometricCombo combo;
  for (char c : tag) {
    BiometricKind kind;
    switch (std::toupper(static_cast<unsigned char>(c))) {
      case 'C':
        kind = BiometricKind::kCalories;
        break;
      case 'S':
        kind = BiometricKind::kSteps;
        break;
      case 'M':
        kind = BiometricKind::kMet;
        break;
      case 'H':
        kind = BiometricKind::kHeartRate;
        break;
      default:
        throw DomainError("unknown biometric initial '" + std::string(1, c) +
                          "'");
    }
    if (combo.mask_ & bit(kind)) {
      throw DomainError("duplicate biometric '" + std::string(1, c) +
                        "' in combination");
    }
    combo.mask_ |= bit(kind);
  }
  if (combo.mask_ == 0) {
    throw DomainError("biometric combination must be non-empty");
  }
  return combo;
}

const std::vector<BiometricCombo>& BiometricCombo::all() {
  static const std::vector<BiometricCombo> combos = [] {
    // Matches the canonical listing: C, S, M, H, CS, CM, CH, SM, SH, MH,
    // CSM, CSH, CMH, SMH, CSMH.
    std::vector<BiometricCombo> out;
    for (const char* tag :
         {"C", "S", "M", "H", "CS", "CM", "CH", "SM", "SH", "MH", "CSM",
          "CSH", "CMH", "SMH", "CSMH"}) {
      out.push_back(parse(tag));
    }
    return out;
  }();
  return combos;
}

std::vector<BiometricKind> BiometricCombo::members() const {
  std::vector<BiometricKind> out;
  for (BiometricKind kind : kAllBiometrics) {
    if (contains(kind)) {
      out.push_back(kind);
    }
  }
  return out;
}

std::size_t BiometricCombo::size() const {
  std::size_t n = 0;
  for (BiometricKind kind : kAllBiometrics) {
    if (contains(kind)) {
      ++n;
    }
  }
  return n;
}

std::string BiometricCombo::str() const {
  std::string out;
  for (BiometricKind kind : members()) {
    out.push_back(initial(kind));
  }
  return out;
}

namespace {

// Civil-date conversions on the proleptic Gregorian calendar.
std::int64_t days_from_civil(int y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, unsigned& m, unsigned& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = doy - (153 * mp + 2) / 5 + 1;
  m = mp + (mp < 10 ? 3 : -9);
  y = static_cast<int>(yy + (m <= 2));
}

bool is_leap(int y) { return y % 4 == 0 && (y % 100 != 0 || y % 400 == 0); }

unsigned days_in_month(int y, unsigned m) {
  static constexpr unsigned kDays[] = {31, 28, 31, 30, 31, 30,
                                       31, 31, 30, 31, 30, 31};
  if (m == 2 && is_leap(y)) {
    return 29;
  }
  return kDays[m - 1];
}

int parse_int(std::string_view text, std::size_t pos, std::size_t len) {
  int value = 0;
  if (pos + len > text.size()) {
    throw DomainError("timestamp too short: '" + std::string(text) + "'");
  }
  auto [ptr, ec] =
      std::from_chars(text.data() + pos, text.data() + pos + len, value);
  if (ec != std::errc() || ptr != text.data() + pos + len) {
    throw DomainError("bad number in timestamp: '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

Minute parse_minute(std::string_view text, std::size_t* truncated) {
  // YYYY-MM-DDTHH:MM[:SS[.frac]][Z|±HH[:]MM]
  auto fail = [&]() -> DomainError {
    return DomainError("bad timestamp: '" + std::string(text) + "'");
  };
  if (text.size() < 16 || text[4] != '-' || text[7] != '-' ||
      (text[10] != 'T' && text[10] != 't' && text[10] != ' ') ||
      text[13] != ':') {
    throw fail();
  }
  const int year = parse_int(text, 0, 4);
  const unsigned month = static_cast<unsigned>(parse_int(text, 5, 2));
  const unsigned day = static_cast<unsigned>(parse_int(text, 8, 2));
  const int hour = parse_int(text, 11, 2);
  const int min = parse_int(text, 14, 2);
  if (month < 1 || month > 12 || day < 1 || day > days_in_month(year, month) ||
      hour > 23 || min > 59) {
    throw fail();
  }

  std::size_t pos = 16;
  bool dropped_seconds = false;
  if (pos + 2 <= text.size() && text[pos] == ':') {
    const int sec = parse_int(text, pos + 1, 2);
    if (sec > 59) {
      throw fail();
    }
    dropped_seconds = sec != 0;
    pos += 3;
    if (pos < text.size() && text[pos] == '.') {
      ++pos;
      std::size_t digits = 0;
      while (pos < text.size() &&
             std::isdigit(static_cast<unsigned char>(text[pos]))) {
        if (text[pos] != '0') {
          dropped_seconds = true;
        }
        ++pos;
        ++digits;
      }
      if (digits == 0) {
        throw fail();
      }
    }
  }

  std::int64_t offset_minutes = 0;
  if (pos < text.size()) {
    const char c = text[pos];
    if (c == 'Z' || c == 'z') {
      ++pos;
    } else if (c == '+' || c == '-') {
      const int sign = c == '+' ? 1 : -1;
      const int oh = parse_int(text, pos + 1, 2);
      std::size_t mpos = pos + 3;
      if (mpos < text.size() && text[mpos] == ':') {
        ++mpos;
      }
      const int om = parse_int(text, mpos, 2);
      if (oh > 23 || om > 59) {
        throw fail();
      }
      offset_minutes = sign * (oh * 60 + om);
      pos = mpos + 2;
    }
  }
  if (pos != text.size()) {
    throw fail();
  }
  if (dropped_seconds && truncated != nullptr) {
    ++*truncated;
  }
  return days_from_civil(year, month, day) * 1440 + hour * 60 + min -
         offset_minutes;
}

std::string format_minute(Minute minute) {
  std::int64_t days = minute / 1440;
  std::int64_t rem = minute % 1440;
  if (rem < 0) {
    rem += 1440;
    --days;
  }
  int y;
  unsigned m, d;
  civil_from_days(days, y, m, d);
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02lld:%02lldZ", y, m, d,
                static_cast<long long>(rem / 60),
                static_cast<long long>(rem % 60));
  return buf;
}

double Window::sample(BiometricKind kind, std::size_t i) const {
  const MinuteRecord& r = samples.at(i);
  switch (kind) {
    case BiometricKind::kCalories:
      return r.calories;
    case BiometricKind::kSteps:
      return static_cast<double>(r.steps);
    case BiometricKind::kMet:
      return r.met;
    case BiometricKind::kHeartRate:
      return r.heart_rate.value();
  }
  throw DomainError("invalid biometric kind");
}

}  // namespace wearauth
