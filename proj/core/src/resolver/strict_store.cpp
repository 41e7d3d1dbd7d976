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

#include "pan/resolver/strict_store.hpp"

#include "pan/errors.hpp"
#include "pan/log.hpp"

#include <fstream>
#include <sstream>

namespace pan::resolver {

StrictStore::StrictStore(std::filesystem::path file) : file_(std::move(file)) {}

std::map<std::string, std::int64_t> StrictStore::load(std::int64_t now_unix_s) const
{
    std::map<std::string, std::int64_t> entries;
    std::ifstream in(file_);
    if (!in) {
        return entries;
    }
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        std::istringstream fields(line);
        std::string host;
        std::int64_t expires = 0;
        if (!(fields >> host >> expires)) {
            log::warn("strict store {}:{}: skipping malformed line", file_.string(), line_no);
            continue;
        }
        entries[host] = expires;
    }
    std::erase_if(entries, [&](const auto& kv) { return kv.second <= now_unix_s; });
    return entries;
}

void StrictStore::append(const std::string& host, std::int64_t expires_unix_s)
{
    std::ofstream out(file_, std::ios::app);
    if (!out) {
        throw DomainError("cannot append to strict store " + file_.string());
    }
    out << host << ' ' << expires_unix_s << '\n';
    ++appended_;
}

void StrictStore::compact(const std::map<std::string, std::int64_t>& live)
{
    auto tmp = file_;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) {
            throw DomainError("cannot write strict store " + tmp.string());
        }
        for (const auto& [host, expires] : live) {
            out << host << ' ' << expires << '\n';
        }
    }
    std::filesystem::rename(tmp, file_);
    appended_ = 0;
}

} // namespace pan::resolver
