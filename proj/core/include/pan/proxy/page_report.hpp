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

#include "pan/proxy/request_plan.hpp"

#include <cstdint>
#include <map>
#include <mutex>
#include <string>
#include <string_view>

namespace pan::proxy {

enum class Indicator { all, some, none };
std::string_view to_string(Indicator indicator);

struct PageReport {
    std::string page_id;
    std::uint64_t total = 0;
    std::uint64_t via_pan = 0;
    std::uint64_t via_legacy = 0;
    std::uint64_t blocked = 0;
    std::uint64_t non_compliant = 0;
    Indicator indicator = Indicator::none;

    friend bool operator==(const PageReport&, const PageReport&) = default;
};

Indicator classify(std::uint64_t via_pan, std::uint64_t total);

/// Per-page completion counters behind the all/some/none indicator.
class PageAggregator
{
  public:
    void record(const RequestPlan& plan);
    /// Unknown pages yield an empty report with indicator none.
    PageReport classify_page(const std::string& page_id) const;
    void clear();

  private:
    mutable std::mutex mutex_;
    std::map<std::string, PageReport> pages_;
};

std::string to_json(const PageReport& report);

} // namespace pan::proxy
