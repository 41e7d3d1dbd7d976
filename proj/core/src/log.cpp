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

#include "pan/log.hpp"

#include <cstdlib>

namespace pan::log {

void init_from_env()
{
    const char* env = std::getenv("PAN_GATE_LOG");
    auto level = env ? spdlog::level::from_str(env) : spdlog::level::info;
    // from_str maps unknown names to off; keep info for those.
    if (env && level == spdlog::level::off && std::string_view(env) != "off") {
        level = spdlog::level::info;
    }
    spdlog::set_level(level);
}

} // namespace pan::log
