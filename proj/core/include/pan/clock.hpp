// Copyright 2026 The pan-gate Authors
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

#include <atomic>
#include <chrono>
#include <cstdint>

namespace pan {

using Timestamp = std::chrono::system_clock::time_point;
using Seconds = std::chrono::seconds;

class Clock
{
  public:
    virtual ~Clock() = default;
    virtual Timestamp now() const = 0;
};

class SystemClock final : public Clock
{
  public:
    Timestamp now() const override { return std::chrono::system_clock::now(); }
};

/// Deterministic clock for tests. Starts at the Unix epoch unless told otherwise.
class ManualClock final : public Clock
{
  public:
    explicit ManualClock(Timestamp start = Timestamp{}) : now_(start.time_since_epoch().count()) {}

    Timestamp now() const override { return Timestamp{Timestamp::duration{now_.load()}}; }

    void set(Timestamp t) { now_.store(t.time_since_epoch().count()); }
    void set_seconds(std::int64_t s) { set(Timestamp{std::chrono::seconds{s}}); }

    template <class Rep, class Period>
    void advance(std::chrono::duration<Rep, Period> d)
    {
        now_.fetch_add(std::chrono::duration_cast<Timestamp::duration>(d).count());
    }

  private:
    std::atomic<Timestamp::rep> now_;
};

inline std::int64_t to_unix_seconds(Timestamp t)
{
    return std::chrono::duration_cast<std::chrono::seconds>(t.time_since_epoch()).count();
}

inline Timestamp from_unix_seconds(std::int64_t s) { return Timestamp{std::chrono::seconds{s}}; }

} // namespace pan
