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

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

namespace pan::resolver {

/// Append-only log of strict-mode obligations, one `<host> <expires_unix_s>`
/// line per update. An expiry of 0 records a removal. The last line for a
/// host wins; `compact` rewrites the file with only live entries.
class StrictStore
{
  public:
    explicit StrictStore(std::filesystem::path file);

    /// Replays the log, dropping entries that expire at or before `now_unix_s`.
    std::map<std::string, std::int64_t> load(std::int64_t now_unix_s) const;

    void append(const std::string& host, std::int64_t expires_unix_s);
    void compact(const std::map<std::string, std::int64_t>& live);

    std::size_t appended_since_compact() const noexcept { return appended_; }
    const std::filesystem::path& file() const noexcept { return file_; }

  private:
    std::filesystem::path file_;
    std::size_t appended_ = 0;
};

} // namespace pan::resolver
