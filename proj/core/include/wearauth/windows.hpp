#pragma once

#include <utility>
#include <vector>

#include "wearauth/types.hpp"

namespace wearauth {

/// Drops every record without a heart-rate reading: the tracker keeps
/// logging activity while off the wrist, so heart-rate presence is the
/// wear-validity signal. Order preserved, records untouched, idempotent.
SubjectStream filter_invalid_wear(const SubjectStream& stream);

/// Tiles five-minute non-overlapping windows over each maximal run of
/// consecutive-minute records sharing one activity level, anchored at the
/// run's first minute. A timestamp gap or level change ends the run; a
/// trailing remainder shorter than five minutes is discarded.
///
/// Requires a wear-filtered stream; throws DomainError if any record lacks
/// a heart rate.
std::vector<Window> segment_windows(const SubjectStream& stream);

/// Splits windows into (sedentary, non-sedentary) buckets by activity level.
std::pair<std::vector<Window>, std::vector<Window>> partition_by_period(
    const std::vector<Window>& windows);

}  // namespace wearauth
