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

#include "pan/clock.hpp"
#include "pan/resolver/scion_address.hpp"
#include "pan/resolver/strict_store.hpp"
#include "pan/resolver/txt_source.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace pan::resolver {

enum class Source { static_list, dns_txt, header };
std::string_view to_string(Source source);

struct Resolution {
    std::string host;
    std::optional<ScionAddress> address; // set iff SCION-capable
    Source source = Source::dns_txt;
    Timestamp resolved_at;
    std::int64_t ttl_s = 1;
    std::optional<std::string> error; // set when the TXT lookup itself failed

    bool scion_capable() const noexcept { return address.has_value(); }
    bool fresh_at(Timestamp now) const { return now < resolved_at + std::chrono::seconds(ttl_s); }
};

struct StrictEntry {
    std::string host;
    Timestamp expires_at;
};

/// Outcome of feeding a `Strict-SCION` header value.
struct StrictUpdate {
    enum class Kind { upserted, removed, ignored };
    Kind kind = Kind::ignored;
    std::optional<StrictEntry> entry;
};

/// Parses `max-age=<seconds>` (optionally quoted, case-insensitive name);
/// further `;`-separated directives are ignored. Returns nullopt if no valid
/// max-age is present.
std::optional<std::int64_t> parse_strict_max_age(std::string_view header_value);

/// JSON map hostname -> `"<isd>-<as>,<host>[:<port>]"`.
std::map<std::string, ScionAddress> load_static_hosts(const std::filesystem::path& file);
std::map<std::string, ScionAddress> parse_static_hosts(const std::string& json_text);

struct ResolverOptions {
    std::int64_t static_ttl_s = 3600;
    std::int64_t txt_min_ttl_s = 10;
    std::int64_t txt_max_ttl_s = 3600;
    std::int64_t failure_ttl_s = 30;
    std::int64_t negative_ttl_s = 300;
    std::optional<std::filesystem::path> strict_store;
};

/// Per-host SCION availability plus the strict-mode obligation cache.
/// Safe for concurrent use; every operation is atomic per host.
class Resolver
{
  public:
    Resolver(std::map<std::string, ScionAddress> static_hosts, std::shared_ptr<TxtSource> txt,
             ResolverOptions options = {}, Timestamp now = Timestamp{});

    /// Fresh cache entry, then static list, then DNS TXT, else IP-only.
    Resolution resolve(const std::string& host, Timestamp now);

    /// The caller guarantees the header arrived over a PAN channel.
    StrictUpdate record_strict_header(const std::string& host, std::string_view header_value, Timestamp now);

    bool is_strict(const std::string& host, Timestamp now) const;
    std::optional<StrictEntry> strict_entry(const std::string& host, Timestamp now) const;
    std::vector<StrictEntry> strict_entries(Timestamp now) const;

    /// A `Strict-SCION` header seen over legacy IP advertises PAN reachability
    /// without creating an obligation: a cached IP-only answer is dropped so
    /// the next resolve re-queries, and a hit is attributed to the header.
    void note_advertisement(const std::string& host);

    void clear_cache();

  private:
    Resolution lookup_uncached(const std::string& host, Timestamp now, bool advertised);
    void persist(const std::string& host, std::int64_t expires_unix_s);

    std::map<std::string, ScionAddress> static_hosts_;
    std::shared_ptr<TxtSource> txt_;
    ResolverOptions options_;
    std::unique_ptr<StrictStore> store_;

    mutable std::mutex mutex_;
    std::map<std::string, Resolution> cache_;
    std::map<std::string, Timestamp> strict_;
    std::set<std::string> advertised_;
};

} // namespace pan::resolver
