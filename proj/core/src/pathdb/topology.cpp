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

#include "pan/pathdb/topology.hpp"

#include "pan/errors.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include <json.hpp>

namespace pan::pathdb {

using nlohmann::json;

Topology::Topology(IsdAs local_as, std::vector<AsInfo> ases, std::vector<Link> links)
  : local_as_(local_as)
  , links_(std::move(links))
{
    for (auto& info : ases) {
        if (!info.id.is_concrete()) {
            throw DomainError("AS identity " + info.id.to_string() + " must not contain wildcards");
        }
        HopMeta probe{info.id, info.latency_ms, info.bandwidth_mbps, info.mtu_bytes, info.geo, info.carbon_g_per_gb};
        probe.validate();
        auto id = info.id;
        if (!ases_.emplace(id, std::move(info)).second) {
            throw DomainError("duplicate AS " + id.to_string());
        }
    }
    if (!local_as_.is_concrete()) {
        throw DomainError("local_as " + local_as_.to_string() + " must not contain wildcards");
    }
    if (!ases_.contains(local_as_)) {
        throw DomainError("local_as " + local_as_.to_string() + " is not a declared AS");
    }

    std::set<std::pair<IsdAs, IsdAs>> seen;
    for (const auto& link : links_) {
        if (!ases_.contains(link.a) || !ases_.contains(link.b)) {
            throw DomainError("link " + link.a.to_string() + " <-> " + link.b.to_string() +
                              " references an undeclared AS");
        }
        if (link.a == link.b) {
            throw DomainError("self-link on " + link.a.to_string());
        }
        if (!(link.latency_ms >= 0.0) || !(link.bandwidth_mbps > 0.0) || link.mtu_bytes < kMinMtuBytes) {
            throw DomainError("link " + link.a.to_string() + " <-> " + link.b.to_string() +
                              " has invalid decoration");
        }
        auto key = std::minmax(link.a, link.b);
        if (!seen.emplace(key.first, key.second).second) {
            throw DomainError("duplicate link " + link.a.to_string() + " <-> " + link.b.to_string());
        }
    }
    for (const auto& [id, info] : ases_) {
        adjacency_[id];
    }
    for (const auto& link : links_) {
        adjacency_[link.a].push_back({link.b, link});
        adjacency_[link.b].push_back({link.a, link});
    }
    for (auto& [id, adj] : adjacency_) {
        std::sort(adj.begin(), adj.end(), [](const Adjacent& x, const Adjacent& y) { return x.neighbor < y.neighbor; });
    }
}

const AsInfo& Topology::as_info(const IsdAs& id) const
{
    auto it = ases_.find(id);
    if (it == ases_.end()) {
        throw DomainError("unknown AS " + id.to_string());
    }
    return it->second;
}

const std::vector<Topology::Adjacent>& Topology::neighbors(const IsdAs& id) const
{
    auto it = adjacency_.find(id);
    if (it == adjacency_.end()) {
        throw DomainError("unknown AS " + id.to_string());
    }
    return it->second;
}

namespace {

IsdAs concrete_id(const json& value, const char* what)
{
    if (!value.is_string()) {
        throw DomainError(std::string(what) + " must be an ISD-AS string");
    }
    IsdAs id;
    try {
        id = parse_isd_as(value.get<std::string>());
    } catch (const ParseError& e) {
        throw DomainError(std::string(what) + ": " + e.what());
    }
    if (!id.is_concrete()) {
        throw DomainError(std::string(what) + " " + id.to_string() + " must not contain wildcards");
    }
    return id;
}

template <class T>
T number_or(const json& obj, const char* key, T fallback)
{
    auto it = obj.find(key);
    if (it == obj.end()) {
        return fallback;
    }
    if (!it->is_number()) {
        throw DomainError(std::string("field '") + key + "' must be numeric");
    }
    if constexpr (std::is_integral_v<T>) {
        if (!it->is_number_integer() || it->get<std::int64_t>() < 0) {
            throw DomainError(std::string("field '") + key + "' must be a non-negative integer");
        }
    }
    return it->get<T>();
}

} // namespace

Topology load_topology(std::istream& source)
{
    json doc;
    try {
        doc = json::parse(source);
    } catch (const json::parse_error& e) {
        throw ParseError("topology syntax error at byte " + std::to_string(e.byte) + ": " + e.what());
    }
    if (!doc.is_object()) {
        throw DomainError("topology document must be a JSON object");
    }
    if (!doc.contains("local_as")) {
        throw DomainError("topology is missing local_as");
    }
    auto local = concrete_id(doc["local_as"], "local_as");

    std::vector<AsInfo> ases;
    const auto& as_map = doc.value("ases", json::object());
    if (!as_map.is_object()) {
        throw DomainError("'ases' must be an object");
    }
    for (const auto& [key, value] : as_map.items()) {
        AsInfo info;
        info.id = concrete_id(json(key), "AS key");
        if (!value.is_object()) {
            throw DomainError("AS " + key + " must map to an object");
        }
        info.latency_ms = number_or(value, "latency_ms", info.latency_ms);
        info.bandwidth_mbps = number_or(value, "bandwidth_mbps", info.bandwidth_mbps);
        info.mtu_bytes = number_or(value, "mtu_bytes", info.mtu_bytes);
        info.carbon_g_per_gb = number_or(value, "carbon_g_per_gb", info.carbon_g_per_gb);
        if (auto geo = value.find("geo"); geo != value.end() && !geo->is_null()) {
            if (!geo->is_array() || geo->size() != 2 || !(*geo)[0].is_number() || !(*geo)[1].is_number()) {
                throw DomainError("AS " + key + ": geo must be [lat, lon]");
            }
            info.geo = GeoCoord{(*geo)[0].get<double>(), (*geo)[1].get<double>()};
        }
        ases.push_back(std::move(info));
    }

    std::vector<Link> links;
    const auto& link_list = doc.value("links", json::array());
    if (!link_list.is_array()) {
        throw DomainError("'links' must be an array");
    }
    for (const auto& value : link_list) {
        if (!value.is_object() || !value.contains("a") || !value.contains("b")) {
            throw DomainError("each link needs 'a' and 'b'");
        }
        Link link;
        link.a = concrete_id(value["a"], "link endpoint");
        link.b = concrete_id(value["b"], "link endpoint");
        link.latency_ms = number_or(value, "latency_ms", link.latency_ms);
        link.bandwidth_mbps = number_or(value, "bandwidth_mbps", link.bandwidth_mbps);
        link.mtu_bytes = number_or(value, "mtu_bytes", link.mtu_bytes);
        links.push_back(link);
    }
    return Topology(local, std::move(ases), std::move(links));
}

Topology load_topology_file(const std::filesystem::path& file)
{
    std::ifstream in(file);
    if (!in) {
        throw DomainError("cannot open topology file " + file.string());
    }
    return load_topology(in);
}

} // namespace pan::pathdb
