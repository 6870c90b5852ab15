#include "wearauth/windows.hpp"

#include <algorithm>

#include "wearauth/error.hpp"

namespace wearauth {

SubjectStream filter_invalid_wear(const SubjectStream& stream) {
  SubjectStream out;
  out.subject = stream.subject;
  out.records.reserve(stream.records.size());
  std::copy_if(stream.records.begin(), stream.records.end(),
               std::back_inserter(out.records),
               [](const MinuteRecord& r) { return r.heart_rate.has_value(); });
  return out;
}

std::vector<Window> segment_windows(const SubjectStream& stream) {
  const auto& records = stream.records;
  std::vector<Window> windows;

  std::size_t run_begin = 0;
  auto emit_run = [&](std::size_t begin, std::size_t end) {
    for (std::size_t w = begin; w + kWindowMinutes <= end;
         w += kWindowMinutes) {
      Window window;
      window.subject = stream.subject;
      window.start = records[w].timestamp;
      window.level = records[w].level;
      window.period = period_of(window.level);
      for (std::size_t i = 0; i < kWindowMinutes; ++i) {
        window.samples[i] = records[w + i];
      }
      windows.push_back(std::move(window));
    }
  };

  for (std::size_t i = 0; i < records.size(); ++i) {
    if (!records[i].heart_rate.has_value()) {
      throw DomainError("segment_windows requires a wear-filtered stream");
    }
    if (i == run_begin) {
      continue;
    }
    const bool consecutive =
        records[i].timestamp == records[i - 1].timestamp + 1;
    const bool same_level = records[i].level == records[run_begin].level;
    if (!consecutive || !same_level) {
      emit_run(run_begin, i);
      run_begin = i;
    }
  }
  emit_run(run_begin, records.size());
  return windows;
}

std::pair<std::vector<Window>, std::vector<Window>> partition_by_period(
    const std::vector<Window>& windows) {
  std::pair<std::vector<Window>, std::vector<Window>> out;
  for (const Window& window : windows) {
    if (window.period == PeriodKind::kSedentary) {
      out.first.push_back(window);
    } else {
      out.second.push_back(window);
    }
  }
  return out;
}

}  // namespace wearauth
