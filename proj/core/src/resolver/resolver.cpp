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

#include "pan/resolver/resolver.hpp"

#include "pan/errors.hpp"
#include "pan/log.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace pan::resolver {

std::string_view to_string(Source source)
{
    switch (source) {
    case Source::static_list:
        return "static";
    case Source::dns_txt:
        return "dns-txt";
    case Source::header:
        return "header";
    }
    return "unknown";
}

namespace {

constexpr std::int64_t kMaxAgeCap = 0x7fffffff;

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    return s;
}

bool iequals(std::string_view a, std::string_view b)
{
    return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
               return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
           });
}

} // namespace

std::optional<std::int64_t> parse_strict_max_age(std::string_view header_value)
{
    std::optional<std::int64_t> result;
    std::size_t pos = 0;
    while (pos <= header_value.size()) {
        auto semi = header_value.find(';', pos);
        auto directive = trim(header_value.substr(pos, semi == std::string_view::npos ? std::string_view::npos : semi - pos));
        pos = semi == std::string_view::npos ? header_value.size() + 1 : semi + 1;

        auto eq = directive.find('=');
        if (eq == std::string_view::npos || !iequals(trim(directive.substr(0, eq)), "max-age")) {
            continue;
        }
        auto value = trim(directive.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
            value = value.substr(1, value.size() - 2);
        }
        if (value.empty() || !std::all_of(value.begin(), value.end(), [](char c) { return c >= '0' && c <= '9'; })) {
            return std::nullopt;
        }
        std::int64_t seconds = 0;
        auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), seconds);
        if (ec == std::errc::result_out_of_range) {
            seconds = kMaxAgeCap;
        } else if (ec != std::errc{}) {
            return std::nullopt;
        }
        if (result) {
            return std::nullopt; // duplicate max-age
        }
        result = std::min(seconds, kMaxAgeCap);
    }
    return result;
}

std::map<std::string, ScionAddress> parse_static_hosts(const std::string& json_text)
{
    using nlohmann::json;
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("static hosts: ") + e.what());
    }
    if (!doc.is_object()) {
        throw DomainError("static hosts file must be a JSON object");
    }
    std::map<std::string, ScionAddress> out;
    for (const auto& [host, value] : doc.items()) {
        if (!value.is_string()) {
            throw DomainError("static host '" + host + "' must map to an address string");
        }
        out.emplace(host, parse_scion_address(value.get<std::string>()));
    }
    return out;
}

std::map<std::string, ScionAddress> load_static_hosts(const std::filesystem::path& file)
{
    std::ifstream in(file);
    if (!in) {
        throw DomainError("cannot open static hosts file " + file.string());
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_static_hosts(ss.str());
}

Resolver::Resolver(std::map<std::string, ScionAddress> static_hosts, std::shared_ptr<TxtSource> txt,
                   ResolverOptions options, Timestamp now)
  : static_hosts_(std::move(static_hosts))
  , txt_(std::move(txt))
  , options_(std::move(options))
{
    if (options_.strict_store) {
        store_ = std::make_unique<StrictStore>(*options_.strict_store);
        auto live = store_->load(to_unix_seconds(now));
        for (const auto& [host, expires] : live) {
            strict_[host] = from_unix_seconds(expires);
        }
        store_->compact(live);
    }
}

Resolution Resolver::lookup_uncached(const std::string& host, Timestamp now, bool advertised)
{
    Resolution r;
    r.host = host;
    r.resolved_at = now;

    if (auto it = static_hosts_.find(host); it != static_hosts_.end()) {
        r.address = it->second;
        r.source = Source::static_list;
        r.ttl_s = options_.static_ttl_s;
        return r;
    }

    r.source = Source::dns_txt;
    r.ttl_s = options_.negative_ttl_s;
    if (!txt_) {
        return r;
    }
    TxtAnswer answer;
    try {
        answer = txt_->lookup(host);
    } catch (const std::exception& e) {
        answer.status = TxtAnswer::Status::failure;
        answer.error = e.what();
    }
    switch (answer.status) {
    case TxtAnswer::Status::failure:
        r.ttl_s = options_.failure_ttl_s;
        r.error = answer.error.empty() ? "lookup failure" : answer.error;
        return r;
    case TxtAnswer::Status::no_data:
        return r;
    case TxtAnswer::Status::ok:
        break;
    }
    r.ttl_s = std::clamp(answer.ttl_s, options_.txt_min_ttl_s, options_.txt_max_ttl_s);
    for (const auto& record : answer.records) {
        if (!record.starts_with("scion=")) {
            continue;
        }
        try {
            r.address = parse_txt(record);
            if (advertised) {
                r.source = Source::header;
            }
            break;
        } catch (const ParseError& e) {
            log::warn("ignoring malformed SCION TXT record for {}: {}", host, e.what());
        }
    }
    return r;
}

Resolution Resolver::resolve(const std::string& host, Timestamp now)
{
    if (host.empty()) {
        throw DomainError("resolve: empty host");
    }
    bool advertised = false;
    {
        std::lock_guard lock(mutex_);
        if (auto it = cache_.find(host); it != cache_.end()) {
            if (it->second.fresh_at(now)) {
                return it->second;
            }
            cache_.erase(it);
        }
        advertised = advertised_.contains(host);
    }
    auto r = lookup_uncached(host, now, advertised);
    std::lock_guard lock(mutex_);
    if (advertised && r.scion_capable()) {
        advertised_.erase(host);
    }
    cache_.insert_or_assign(host, r);
    return r;
}

void Resolver::persist(const std::string& host, std::int64_t expires_unix_s)
{
    if (!store_) {
        return;
    }
    try {
        store_->append(host, expires_unix_s);
        if (store_->appended_since_compact() > 2 * strict_.size() + 64) {
            std::map<std::string, std::int64_t> live;
            for (const auto& [h, t] : strict_) {
                live[h] = to_unix_seconds(t);
            }
            store_->compact(live);
        }
    } catch (const std::exception& e) {
        log::error("strict store: {}", e.what());
    }
}

StrictUpdate Resolver::record_strict_header(const std::string& host, std::string_view header_value, Timestamp now)
{
    auto max_age = parse_strict_max_age(header_value);
    if (!max_age) {
        log::warn("ignoring malformed Strict-SCION value '{}' from {}", header_value, host);
        return {};
    }
    std::lock_guard lock(mutex_);
    if (*max_age == 0) {
        strict_.erase(host);
        persist(host, 0);
        return {StrictUpdate::Kind::removed, std::nullopt};
    }
    auto expires = now + std::chrono::seconds(*max_age);
    strict_[host] = expires;
    persist(host, to_unix_seconds(expires));
    return {StrictUpdate::Kind::upserted, StrictEntry{host, expires}};
}

bool Resolver::is_strict(const std::string& host, Timestamp now) const
{
    return strict_entry(host, now).has_value();
}

std::optional<StrictEntry> Resolver::strict_entry(const std::string& host, Timestamp now) const
{
    std::lock_guard lock(mutex_);
    auto it = strict_.find(host);
    if (it == strict_.end() || it->second <= now) {
        return std::nullopt;
    }
    return StrictEntry{host, it->second};
}

std::vector<StrictEntry> Resolver::strict_entries(Timestamp now) const
{
    std::lock_guard lock(mutex_);
    std::vector<StrictEntry> out;
    for (const auto& [host, expires] : strict_) {
        if (expires > now) {
            out.push_back({host, expires});
        }
    }
    return out;
}

void Resolver::note_advertisement(const std::string& host)
{
    std::lock_guard lock(mutex_);
    if (auto it = cache_.find(host); it != cache_.end()) {
        if (it->second.scion_capable()) {
            return;
        }
        cache_.erase(it);
    }
    if (!static_hosts_.contains(host)) {
        advertised_.insert(host);
    }
}

void Resolver::clear_cache()
{
    std::lock_guard lock(mutex_);
    cache_.clear();
}

} // namespace pan::resolver
