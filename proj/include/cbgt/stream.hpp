// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>

#include "cbgt/instance.hpp"
#include "cbgt/sets.hpp"

namespace cbgt {

/// Online schedule: produces one cut set per call. Streams own mutable
/// state and are single-owner.
class ScheduleStream {
 public:
  virtual ~ScheduleStream() = default;
  virtual ElementSet next() = 0;
};

/// The next `days` cuts as a finite schedule.
inline Schedule take(ScheduleStream& stream, std::size_t days) {
  Schedule s;
  s.core.reserve(days);
  for (std::size_t i = 0; i < days; ++i) s.core.push_back(stream.next());
  return s;
}

/// Replays a stored schedule as a stream.
class ScheduleReplay final : public ScheduleStream {
 public:
  explicit ScheduleReplay(Schedule s) : s_(std::move(s)) {}
  ElementSet next() override { return s_.at(++day_); }

 private:
  Schedule s_;
  std::size_t day_ = 0;
};

}  // namespace cbgt
