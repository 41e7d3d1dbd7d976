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

#include "pan/proxy/page_report.hpp"

#include <json.hpp>

namespace pan::proxy {

std::string_view to_string(Indicator indicator)
{
    switch (indicator) {
    case Indicator::all:
        return "all";
    case Indicator::some:
        return "some";
    case Indicator::none:
        return "none";
    }
    return "none";
}

Indicator classify(std::uint64_t via_pan, std::uint64_t total)
{
    if (via_pan == 0) {
        return Indicator::none;
    }
    return via_pan == total ? Indicator::all : Indicator::some;
}

void PageAggregator::record(const RequestPlan& plan)
{
    std::lock_guard lock(mutex_);
    auto& r = pages_[plan.page_id];
    r.page_id = plan.page_id;
    ++r.total;
    if (plan.via_pan()) {
        ++r.via_pan;
    } else if (plan.via_legacy()) {
        ++r.via_legacy;
    } else {
        ++r.blocked;
    }
    if (!plan.policy_compliant) {
        ++r.non_compliant;
    }
    r.indicator = classify(r.via_pan, r.total);
}

PageReport PageAggregator::classify_page(const std::string& page_id) const
{
    std::lock_guard lock(mutex_);
    auto it = pages_.find(page_id);
    if (it == pages_.end()) {
        PageReport empty;
        empty.page_id = page_id;
        return empty;
    }
    return it->second;
}

void PageAggregator::clear()
{
    std::lock_guard lock(mutex_);
    pages_.clear();
}

std::string to_json(const PageReport& r)
{
    nlohmann::json doc{{"page_id", r.page_id},   {"total", r.total},       {"via_pan", r.via_pan},
                       {"via_legacy", r.via_legacy}, {"blocked", r.blocked}, {"non_compliant", r.non_compliant},
                       {"indicator", std::string(to_string(r.indicator))}};
    return doc.dump();
}

} // namespace pan::proxy
