// Copyright 2026 The pdstore Authors.
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

namespace pds {

enum class ClockMode { kWall, kLogical };

class Clock {
 public:
  virtual ~Clock() = default;
  // Milliseconds; never decreases.
  virtual int64_t now_ms() const = 0;
  virtual ClockMode mode() const = 0;
};

// Epoch milliseconds anchored once at construction and advanced by the
// steady clock, so readings are monotonic even if system time jumps.
class WallClock final : public Clock {
 public:
  WallClock()
      : anchor_ms_(std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::system_clock::now().time_since_epoch())
                       .count()),
        anchor_(std::chrono::steady_clock::now()) {}

  int64_t now_ms() const override {
    return anchor_ms_ + std::chrono::duration_cast<std::chrono::milliseconds>(
                            std::chrono::steady_clock::now() - anchor_)
                            .count();
  }
  ClockMode mode() const override { return ClockMode::kWall; }

 private:
  int64_t anchor_ms_;
  std::chrono::steady_clock::time_point anchor_;
};

class LogicalClock final : public Clock {
 public:
  explicit LogicalClock(int64_t start_ms = 0) : now_(start_ms) {}

  int64_t now_ms() const override { return now_.load(std::memory_order_acquire); }
  ClockMode mode() const override { return ClockMode::kLogical; }

  // Returns the new reading. Negative deltas are ignored.
  int64_t advance(int64_t delta_ms) {
    if (delta_ms <= 0) return now_ms();
    return now_.fetch_add(delta_ms, std::memory_order_acq_rel) + delta_ms;
  }

 private:
  std::atomic<int64_t> now_;
};

}  // namespace pds
