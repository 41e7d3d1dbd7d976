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
#include <vector>

namespace pan::resolver {

struct TxtAnswer {
    enum class Status { ok, no_data, failure };

    Status status = Status::no_data;
    std::vector<std::string> records;
    std::int64_t ttl_s = 0;
    std::string error;
};

/// Source of DNS TXT records for an exact hostname.
class TxtSource
{
  public:
    virtual ~TxtSource() = default;
    virtual TxtAnswer lookup(const std::string& host) = 0;
};

/// Queries the system resolver configuration (resolv.conf) via libresolv.
class SystemTxtSource final : public TxtSource
{
  public:
    TxtAnswer lookup(const std::string& host) override;
};

/// Test stub backed by a JSON fixtures file:
///
///     { "a.example": ["scion=2-5,192.0.2.7"],
///       "b.example": {"ttl": 120, "records": ["v=spf1 -all"]},
///       "broken.example": {"error": "SERVFAIL"} }
class FixtureTxtSource final : public TxtSource
{
  public:
    static constexpr std::int64_t kDefaultTtl = 300;

    FixtureTxtSource() = default;
    explicit FixtureTxtSource(std::map<std::string, TxtAnswer> answers) : answers_(std::move(answers)) {}

    static FixtureTxtSource from_file(const std::filesystem::path& file);
    static FixtureTxtSource from_json(const std::string& text);

    TxtAnswer lookup(const std::string& host) override;

  private:
    std::map<std::string, TxtAnswer> answers_;
};

} // namespace pan::resolver
