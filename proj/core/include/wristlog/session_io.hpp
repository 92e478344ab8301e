#pragma once

#include <filesystem>
#include <vector>

#include "wristlog/types.hpp"

namespace wristlog {

/// Stable ascending sort by timestamp. Events arriving over the network are
/// not guaranteed to be ordered.
std::vector<SensorEvent> sort_events(std::vector<SensorEvent> events);
std::vector<LabelEvent> sort_events(std::vector<LabelEvent> events);

/// Sort all three buffers of a session in place.
void sort_events(RecordingSession& session);

/// Persist a session as <directory>/{gyroscope,accelerometer,labels}.csv.
/// Sensor rows are `t,x,y,z` (header line first), label rows `t,label`,
/// both sorted by timestamp. Reals carry 9 significant digits.
void write_session(const RecordingSession& session, const std::filesystem::path& directory);

/// Inverse of write_session. Out-of-order rows are re-sorted; a malformed
/// row raises with the file name and line number.
RecordingSession read_session(const std::filesystem::path& directory);

/// Build a strictly-increasing TriaxialSeries from (possibly unsorted)
/// events of one sensor. Duplicate timestamps keep the last event.
TriaxialSeries series_from_events(std::vector<SensorEvent> events, SensorKind kind);

}  // namespace wristlog
