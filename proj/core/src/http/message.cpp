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

#include "pan/http/message.hpp"

#include "pan/errors.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>

namespace pan::http {

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

bool is_token(std::string_view s)
{
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || std::string_view("!#$%&'*+-.^_`|~").find(c) !=
                                                                    std::string_view::npos;
    });
}

// Splits the head into lines and parses header fields after the first line.
std::string_view parse_fields(std::string_view text, Headers& headers)
{
    auto eol = text.find("\r\n");
    if (eol == std::string_view::npos) {
        throw ParseError("missing CRLF after start line");
    }
    auto start = text.substr(0, eol);
    auto pos = eol + 2;
    while (pos < text.size()) {
        auto next = text.find("\r\n", pos);
        if (next == std::string_view::npos) {
            next = text.size();
        }
        auto line = text.substr(pos, next - pos);
        pos = next + 2;
        if (line.empty()) {
            break;
        }
        if (line.front() == ' ' || line.front() == '\t') {
            throw ParseError("obsolete header line folding");
        }
        auto colon = line.find(':');
        if (colon == std::string_view::npos || !is_token(line.substr(0, colon))) {
            throw ParseError("malformed header line");
        }
        headers.add(std::string(line.substr(0, colon)), std::string(trim(line.substr(colon + 1))));
    }
    return start;
}

bool parse_size(std::string_view text, std::size_t& out, int base = 10)
{
    if (text.empty()) {
        return false;
    }
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out, base);
    return ec == std::errc{} && ptr == text.data() + text.size();
}

} // namespace

bool iequals(std::string_view a, std::string_view b)
{
    return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
               return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
           });
}

bool has_token(std::string_view list, std::string_view token)
{
    std::size_t pos = 0;
    while (pos <= list.size()) {
        auto comma = list.find(',', pos);
        auto item = trim(list.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
        if (iequals(item, token)) {
            return true;
        }
        if (comma == std::string_view::npos) {
            break;
        }
        pos = comma + 1;
    }
    return false;
}

std::optional<std::string_view> Headers::get(std::string_view name) const
{
    for (const auto& f : fields_) {
        if (iequals(f.name, name)) {
            return std::string_view(f.value);
        }
    }
    return std::nullopt;
}

void Headers::add(std::string name, std::string value) { fields_.push_back({std::move(name), std::move(value)}); }

void Headers::set(std::string name, std::string value)
{
    remove(name);
    add(std::move(name), std::move(value));
}

void Headers::remove(std::string_view name)
{
    std::erase_if(fields_, [&](const Field& f) { return iequals(f.name, name); });
}

void Headers::strip_hop_by_hop()
{
    static constexpr std::array<std::string_view, 8> kHopByHop{
        "Connection", "Keep-Alive", "Proxy-Connection", "Proxy-Authenticate", "Proxy-Authorization", "TE", "Trailer",
        "Upgrade"};
    std::vector<std::string> listed;
    for (const auto& f : fields_) {
        if (iequals(f.name, "Connection")) {
            std::size_t pos = 0;
            while (pos <= f.value.size()) {
                auto comma = f.value.find(',', pos);
                auto item = trim(std::string_view(f.value).substr(pos, comma == std::string::npos ? std::string::npos
                                                                                                  : comma - pos));
                if (!item.empty()) {
                    listed.emplace_back(item);
                }
                if (comma == std::string::npos) {
                    break;
                }
                pos = comma + 1;
            }
        }
    }
    for (auto name : kHopByHop) {
        remove(name);
    }
    for (const auto& name : listed) {
        remove(name);
    }
}

RequestHead parse_request_head(std::string_view text)
{
    RequestHead head;
    auto start = parse_fields(text, head.headers);
    auto sp1 = start.find(' ');
    auto sp2 = sp1 == std::string_view::npos ? sp1 : start.find(' ', sp1 + 1);
    if (sp1 == std::string_view::npos || sp2 == std::string_view::npos || start.find(' ', sp2 + 1) != std::string_view::npos) {
        throw ParseError("malformed request line");
    }
    head.method = std::string(start.substr(0, sp1));
    head.target = std::string(start.substr(sp1 + 1, sp2 - sp1 - 1));
    head.version = std::string(start.substr(sp2 + 1));
    if (!is_token(head.method) || head.target.empty() || !head.version.starts_with("HTTP/1.")) {
        throw ParseError("malformed request line");
    }
    return head;
}

ResponseHead parse_response_head(std::string_view text)
{
    ResponseHead head;
    auto start = parse_fields(text, head.headers);
    auto sp1 = start.find(' ');
    if (sp1 == std::string_view::npos || !start.starts_with("HTTP/1.")) {
        throw ParseError("malformed status line");
    }
    head.version = std::string(start.substr(0, sp1));
    auto rest = start.substr(sp1 + 1);
    const auto sp_it = std::find(rest.begin(), rest.end(), ' ');
    const auto sp2 = sp_it == rest.end() ? std::string_view::npos : static_cast<std::size_t>(sp_it - rest.begin());
    auto code = rest.substr(0, sp2);
    std::size_t status = 0;
    if (code.size() != 3 || !parse_size(code, status)) {
        throw ParseError("malformed status code");
    }
    head.status = static_cast<int>(status);
    head.reason = sp2 == std::string_view::npos ? "" : std::string(rest.substr(sp2 + 1));
    return head;
}

std::string serialize(const RequestHead& head)
{
    std::string out = head.method + " " + head.target + " " + head.version + "\r\n";
    for (const auto& f : head.headers.fields()) {
        out += f.name + ": " + f.value + "\r\n";
    }
    out += "\r\n";
    return out;
}

std::string serialize(const ResponseHead& head)
{
    std::string out = head.version + " " + std::to_string(head.status) + " " + head.reason + "\r\n";
    for (const auto& f : head.headers.fields()) {
        out += f.name + ": " + f.value + "\r\n";
    }
    out += "\r\n";
    return out;
}

std::string_view reason_phrase(int status)
{
    switch (status) {
    case 200:
        return "OK";
    case 204:
        return "No Content";
    case 400:
        return "Bad Request";
    case 403:
        return "Forbidden";
    case 404:
        return "Not Found";
    case 405:
        return "Method Not Allowed";
    case 422:
        return "Unprocessable Entity";
    case 500:
        return "Internal Server Error";
    case 501:
        return "Not Implemented";
    case 502:
        return "Bad Gateway";
    case 504:
        return "Gateway Timeout";
    default:
        return "Unknown";
    }
}

bool BufferedReader::fill()
{
    if (pos_ > 0 && pos_ == buf_.size()) {
        buf_.clear();
        pos_ = 0;
    }
    char tmp[16384];
    auto n = stream_.read(tmp);
    if (n <= 0) {
        return false;
    }
    buf_.append(tmp, static_cast<std::size_t>(n));
    return true;
}

std::optional<std::string> BufferedReader::read_head()
{
    std::size_t scan_from = pos_;
    for (;;) {
        auto end = buf_.find("\r\n\r\n", scan_from);
        if (end != std::string::npos) {
            if (end + 4 - pos_ > kMaxHeadBytes) {
                throw ParseError("message head too large");
            }
            std::string head = buf_.substr(pos_, end + 4 - pos_);
            pos_ = end + 4;
            return head;
        }
        if (buf_.size() - pos_ > kMaxHeadBytes) {
            throw ParseError("message head too large");
        }
        scan_from = buf_.size() >= 3 ? std::max(pos_, buf_.size() - 3) : pos_;
        const bool had_bytes = buf_.size() > pos_;
        // fill() may compact the buffer; rebase scan_from accordingly.
        const auto offset = scan_from - pos_;
        if (!fill()) {
            if (!had_bytes) {
                return std::nullopt;
            }
            throw ParseError("connection closed inside message head");
        }
        scan_from = pos_ + offset;
    }
}

bool BufferedReader::read_exact(std::size_t n, std::string& out)
{
    while (n > 0) {
        if (pos_ == buf_.size() && !fill()) {
            return false;
        }
        auto take = std::min(n, buf_.size() - pos_);
        out.append(buf_, pos_, take);
        pos_ += take;
        n -= take;
    }
    return true;
}

bool BufferedReader::read_line(std::string& out, std::size_t limit)
{
    std::string line;
    for (;;) {
        auto nl = buf_.find('\n', pos_);
        if (nl != std::string::npos) {
            line.append(buf_, pos_, nl + 1 - pos_);
            pos_ = nl + 1;
            out += line;
            return true;
        }
        line.append(buf_, pos_, std::string::npos);
        pos_ = buf_.size();
        if (line.size() > limit || !fill()) {
            return false;
        }
    }
}

bool BufferedReader::read_to_eof(std::string& out)
{
    out.append(buf_, pos_, std::string::npos);
    pos_ = buf_.size();
    char tmp[16384];
    for (;;) {
        auto n = stream_.read(tmp);
        if (n == 0) {
            return true;
        }
        if (n < 0) {
            return false;
        }
        out.append(tmp, static_cast<std::size_t>(n));
    }
}

std::string BufferedReader::take_buffered()
{
    std::string rest = buf_.substr(pos_);
    buf_.clear();
    pos_ = 0;
    return rest;
}

BodyFraming request_framing(const RequestHead& head)
{
    if (auto te = head.headers.get("Transfer-Encoding"); te && has_token(*te, "chunked")) {
        return {Framing::chunked, 0};
    }
    if (auto cl = head.headers.get("Content-Length")) {
        std::size_t n = 0;
        if (!parse_size(trim(*cl), n)) {
            throw ParseError("invalid Content-Length");
        }
        return {n == 0 ? Framing::none : Framing::content_length, n};
    }
    return {Framing::none, 0};
}

BodyFraming response_framing(const ResponseHead& head, std::string_view request_method)
{
    if (request_method == "HEAD" || head.status / 100 == 1 || head.status == 204 || head.status == 304) {
        return {Framing::none, 0};
    }
    if (auto te = head.headers.get("Transfer-Encoding"); te && has_token(*te, "chunked")) {
        return {Framing::chunked, 0};
    }
    if (auto cl = head.headers.get("Content-Length")) {
        std::size_t n = 0;
        if (!parse_size(trim(*cl), n)) {
            throw ParseError("invalid Content-Length");
        }
        return {n == 0 ? Framing::none : Framing::content_length, n};
    }
    return {Framing::until_close, 0};
}

bool read_body_raw(BufferedReader& reader, BodyFraming framing, std::string& out)
{
    switch (framing.kind) {
    case Framing::none:
        return true;
    case Framing::content_length:
        return reader.read_exact(framing.length, out);
    case Framing::until_close:
        return reader.read_to_eof(out);
    case Framing::chunked:
        break;
    }
    for (;;) {
        std::string line;
        if (!reader.read_line(line)) {
            return false;
        }
        out += line;
        auto size_text = std::string_view(line);
        if (size_text.ends_with('\n')) {
            size_text.remove_suffix(1);
        }
        if (auto semi = size_text.find(';'); semi != std::string_view::npos) {
            size_text = size_text.substr(0, semi);
        }
        std::size_t size = 0;
        if (!parse_size(trim(size_text), size, 16)) {
            return false;
        }
        if (size == 0) {
            // Trailer section ends with an empty line.
            for (;;) {
                std::string trailer;
                if (!reader.read_line(trailer)) {
                    return false;
                }
                out += trailer;
                if (trailer == "\r\n" || trailer == "\n") {
                    return true;
                }
            }
        }
        if (!reader.read_exact(size, out)) {
            return false;
        }
        std::string crlf;
        if (!reader.read_line(crlf)) {
            return false;
        }
        out += crlf;
    }
}

net::Endpoint split_authority(std::string_view authority, std::uint16_t default_port)
{
    net::Endpoint ep;
    ep.port = default_port;
    std::string_view port_text;
    if (!authority.empty() && authority.front() == '[') {
        auto close = authority.find(']');
        if (close == std::string_view::npos) {
            throw ParseError("unterminated IPv6 literal in authority");
        }
        ep.host = std::string(authority.substr(1, close - 1));
        auto tail = authority.substr(close + 1);
        if (!tail.empty()) {
            if (tail.front() != ':') {
                throw ParseError("malformed authority");
            }
            port_text = tail.substr(1);
        }
    } else {
        auto colon = authority.find(':');
        ep.host = std::string(authority.substr(0, colon));
        if (colon != std::string_view::npos) {
            port_text = authority.substr(colon + 1);
        }
    }
    if (ep.host.empty()) {
        throw ParseError("empty host in authority");
    }
    if (!port_text.empty()) {
        std::size_t port = 0;
        if (!parse_size(port_text, port) || port < 1 || port > 65535) {
            throw ParseError("invalid port in authority");
        }
        ep.port = static_cast<std::uint16_t>(port);
    }
    std::transform(ep.host.begin(), ep.host.end(), ep.host.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ep;
}

Url parse_absolute_url(std::string_view target)
{
    auto scheme_end = target.find("://");
    if (scheme_end == std::string_view::npos) {
        throw ParseError("request target is not absolute-form");
    }
    Url url;
    url.scheme = std::string(target.substr(0, scheme_end));
    std::transform(url.scheme.begin(), url.scheme.end(), url.scheme.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (url.scheme != "http") {
        throw ParseError("unsupported scheme '" + url.scheme + "'");
    }
    auto rest = target.substr(scheme_end + 3);
    auto path_start = rest.find_first_of("/?");
    auto authority = rest.substr(0, path_start);
    if (authority.find('@') != std::string_view::npos) {
        throw ParseError("userinfo in request target");
    }
    auto ep = split_authority(authority, 80);
    url.host = ep.host;
    url.port = ep.port;
    if (path_start != std::string_view::npos) {
        url.path = std::string(rest.substr(path_start));
        if (url.path.front() == '?') {
            url.path.insert(url.path.begin(), '/');
        }
    }
    if (auto hash = url.path.find('#'); hash != std::string::npos) {
        url.path.erase(hash);
    }
    return url;
}

} // namespace pan::http
