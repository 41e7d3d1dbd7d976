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

#include "pan/resolver/txt_source.hpp"

#include "pan/errors.hpp"

#include <arpa/nameser.h>
#include <netdb.h>
#include <netinet/in.h>
#include <resolv.h>

#include <array>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace pan::resolver {

TxtAnswer SystemTxtSource::lookup(const std::string& host)
{
    TxtAnswer answer;
    struct __res_state state {};
    if (res_ninit(&state) != 0) {
        answer.status = TxtAnswer::Status::failure;
        answer.error = "res_ninit failed";
        return answer;
    }
    std::array<unsigned char, NS_PACKETSZ * 4> buf{};
    int len = res_nquery(&state, host.c_str(), ns_c_in, ns_t_txt, buf.data(), static_cast<int>(buf.size()));
    if (len < 0) {
        const int herr = state.res_h_errno;
        res_nclose(&state);
        if (herr == HOST_NOT_FOUND || herr == NO_DATA) {
            answer.status = TxtAnswer::Status::no_data;
        } else {
            answer.status = TxtAnswer::Status::failure;
            answer.error = hstrerror(herr);
        }
        return answer;
    }
    res_nclose(&state);

    ns_msg msg;
    if (ns_initparse(buf.data(), len, &msg) != 0) {
        answer.status = TxtAnswer::Status::failure;
        answer.error = "malformed DNS response";
        return answer;
    }
    const int count = ns_msg_count(msg, ns_s_an);
    std::int64_t min_ttl = -1;
    for (int i = 0; i < count; ++i) {
        ns_rr rr;
        if (ns_parserr(&msg, ns_s_an, i, &rr) != 0 || ns_rr_type(rr) != ns_t_txt) {
            continue;
        }
        // TXT rdata is a sequence of <len><bytes> character strings.
        const unsigned char* p = ns_rr_rdata(rr);
        const unsigned char* end = p + ns_rr_rdlen(rr);
        std::string record;
        while (p < end) {
            std::size_t n = *p++;
            if (p + n > end) {
                break;
            }
            record.append(reinterpret_cast<const char*>(p), n);
            p += n;
        }
        answer.records.push_back(std::move(record));
        const std::int64_t ttl = ns_rr_ttl(rr);
        min_ttl = min_ttl < 0 ? ttl : std::min(min_ttl, ttl);
    }
    answer.status = answer.records.empty() ? TxtAnswer::Status::no_data : TxtAnswer::Status::ok;
    answer.ttl_s = std::max<std::int64_t>(min_ttl, 0);
    return answer;
}

FixtureTxtSource FixtureTxtSource::from_json(const std::string& text)
{
    using nlohmann::json;
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("DNS fixtures: ") + e.what());
    }
    if (!doc.is_object()) {
        throw DomainError("DNS fixtures must be a JSON object");
    }
    std::map<std::string, TxtAnswer> answers;
    for (const auto& [name, value] : doc.items()) {
        TxtAnswer a;
        a.ttl_s = kDefaultTtl;
        const json* records = nullptr;
        if (value.is_array()) {
            records = &value;
        } else if (value.is_object()) {
            if (value.contains("error")) {
                a.status = TxtAnswer::Status::failure;
                a.error = value["error"].is_string() ? value["error"].get<std::string>() : "lookup failure";
                answers.emplace(name, std::move(a));
                continue;
            }
            a.ttl_s = value.value("ttl", kDefaultTtl);
            if (value.contains("records")) {
                records = &value["records"];
            }
        } else {
            throw DomainError("DNS fixture for '" + name + "' must be an array or object");
        }
        if (records) {
            for (const auto& r : *records) {
                a.records.push_back(r.get<std::string>());
            }
        }
        a.status = a.records.empty() ? TxtAnswer::Status::no_data : TxtAnswer::Status::ok;
        answers.emplace(name, std::move(a));
    }
    return FixtureTxtSource(std::move(answers));
}

FixtureTxtSource FixtureTxtSource::from_file(const std::filesystem::path& file)
{
    std::ifstream in(file);
    if (!in) {
        throw DomainError("cannot open DNS fixtures file " + file.string());
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str());
}

TxtAnswer FixtureTxtSource::lookup(const std::string& host)
{
    auto it = answers_.find(host);
    if (it == answers_.end()) {
        return TxtAnswer{};
    }
    return it->second;
}

} // namespace pan::resolver
