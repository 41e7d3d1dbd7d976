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

#include "pan/proxy/proxy_server.hpp"

#include "pan/errors.hpp"
#include "pan/http/message.hpp"
#include "pan/log.hpp"

#include <chrono>

namespace pan::proxy {

namespace {

using SteadyClock = std::chrono::steady_clock;

double ms_since(SteadyClock::time_point start)
{
    return std::chrono::duration<double, std::milli>(SteadyClock::now() - start).count();
}

std::string simple_response(int status, const std::vector<std::pair<std::string, std::string>>& extra,
                            const std::string& body, bool close)
{
    http::ResponseHead head;
    head.status = status;
    head.reason = std::string(http::reason_phrase(status));
    for (const auto& [k, v] : extra) {
        head.headers.add(k, v);
    }
    head.headers.add("Content-Type", "text/plain");
    head.headers.add("Content-Length", std::to_string(body.size()));
    if (close) {
        head.headers.add("Connection", "close");
    }
    return http::serialize(head) + body;
}

std::string page_id_for(const http::RequestHead& req, const std::string& target_host)
{
    if (auto page = req.headers.get("X-PAN-Page"); page && !page->empty()) {
        return std::string(*page);
    }
    if (auto referer = req.headers.get("Referer")) {
        try {
            return http::parse_absolute_url(*referer).host;
        } catch (const ParseError&) {
        }
    }
    return target_host;
}

bool wants_close(const http::RequestHead& req)
{
    for (auto name : {"Connection", "Proxy-Connection"}) {
        if (auto v = req.headers.get(name)) {
            if (http::has_token(*v, "close")) {
                return true;
            }
            if (http::has_token(*v, "keep-alive")) {
                return false;
            }
        }
    }
    return req.version == "HTTP/1.0";
}

std::string_view status_label(const RequestPlan& plan)
{
    if (plan.via_pan()) {
        return "pan";
    }
    return plan.via_legacy() ? "legacy" : "blocked";
}

} // namespace

/// One client connection.
class ProxyServer::Session
{
  public:
    Session(ProxyServer& server, net::SocketStream& client) : server_(server), gw_(server.gateway_), client_(client) {}

    void run()
    {
        http::BufferedReader reader(client_);
        for (;;) {
            std::optional<std::string> raw;
            http::RequestHead req;
            try {
                raw = reader.read_head();
                if (!raw) {
                    return;
                }
                req = http::parse_request_head(*raw);
            } catch (const ParseError& e) {
                log::debug("malformed client request: {}", e.what());
                client_.write_str(simple_response(400, {}, std::string("malformed request: ") + e.what() + "\n", true));
                return;
            }
            bool keep_going = false;
            try {
                if (req.method == "CONNECT") {
                    handle_connect(req, reader);
                    return;
                }
                keep_going = handle_http(req, reader);
            } catch (const std::exception& e) {
                log::error("request handler failed: {}", e.what());
                client_.write_str(simple_response(500, {}, "internal proxy error\n", true));
                return;
            }
            if (!keep_going) {
                return;
            }
        }
    }

  private:
    struct Upstream {
        std::unique_ptr<net::ByteStream> stream;
        int error_status = 0;
        std::string error;
    };

    Upstream dial_legacy(const std::string& host, std::uint16_t port)
    {
        Upstream up;
        net::Endpoint target{host, port};
        if (auto it = server_.options_.legacy_overrides.find(host); it != server_.options_.legacy_overrides.end()) {
            target = it->second;
        }
        try {
            auto sock = net::connect_tcp(target.host, target.port, server_.options_.upstream_timeout);
            up.stream = std::make_unique<net::SocketStream>(std::move(sock));
        } catch (const net::ConnectError& e) {
            up.error_status = e.kind() == net::ConnectError::Kind::timeout ? 504 : 502;
            up.error = e.what();
        }
        return up;
    }

    /// Opens the route chosen by the plan. A PAN failure degrades to legacy in
    /// opportunistic mode and blocks in strict mode (plan is updated).
    Upstream open_route(RequestPlan& plan, std::uint16_t port)
    {
        if (const auto* via = plan.pan()) {
            try {
                Upstream up;
                up.stream = gw_.emu().open_channel(via->path, via->address, port, gw_.clock().now());
                return up;
            } catch (const emu::ChannelError& e) {
                log::warn("PAN channel to {} failed: {}", via->address.to_string(), e.what());
                if (plan.mode.strict()) {
                    plan.decision = Blocked{"pan-unreachable"};
                    return {};
                }
                plan.decision = LegacyFallback{};
            }
        }
        if (plan.via_legacy()) {
            return dial_legacy(plan.host, port);
        }
        return {};
    }

    std::vector<std::pair<std::string, std::string>> blocked_headers(const RequestPlan& plan)
    {
        return {{"X-PAN-Blocked", std::string(plan.block_reason())},
                {"X-PAN-Status", "blocked"},
                {"X-PAN-Compliant", plan.policy_compliant ? "true" : "false"}};
    }

    void observe_strict_header(const RequestPlan& plan, const http::Headers& headers)
    {
        auto value = headers.get("Strict-SCION");
        if (!value) {
            return;
        }
        if (plan.via_pan()) {
            gw_.resolver().record_strict_header(plan.host, *value, gw_.clock().now());
        } else {
            // Trust-on-PAN only: legacy responses merely advertise availability.
            gw_.resolver().note_advertisement(plan.host);
        }
    }

    bool handle_http(http::RequestHead& req, http::BufferedReader& reader)
    {
        const auto started = SteadyClock::now();
        http::Url url;
        try {
            url = http::parse_absolute_url(req.target);
        } catch (const ParseError& e) {
            client_.write_str(simple_response(400, {}, std::string("bad request target: ") + e.what() + "\n", true));
            return false;
        }
        std::string body;
        try {
            if (!http::read_body_raw(reader, http::request_framing(req), body)) {
                return false;
            }
        } catch (const ParseError& e) {
            client_.write_str(simple_response(400, {}, std::string(e.what()) + "\n", true));
            return false;
        }
        const bool client_close = wants_close(req);

        auto plan = gw_.plan_request(url.host, page_id_for(req, url.host));
        if (plan.blocked()) {
            gw_.record_completion(plan, {0.0, ms_since(started)}, 0);
            return client_.write_str(simple_response(502, blocked_headers(plan),
                                                 "blocked: " + std::string(plan.block_reason()) + "\n",
                                                 client_close)) &&
                   !client_close;
        }

        auto up = open_route(plan, url.port);
        const double connect_ms = ms_since(started);
        if (plan.blocked()) {
            gw_.record_completion(plan, {connect_ms, ms_since(started)}, 0);
            return client_.write_str(simple_response(502, blocked_headers(plan),
                                                 "blocked: " + std::string(plan.block_reason()) + "\n",
                                                 client_close)) &&
                   !client_close;
        }
        const std::vector<std::pair<std::string, std::string>> status_headers{
            {"X-PAN-Status", std::string(status_label(plan))},
            {"X-PAN-Compliant", plan.policy_compliant ? "true" : "false"}};
        if (!up.stream) {
            gw_.record_completion(plan, {connect_ms, ms_since(started)}, 0);
            return client_.write_str(simple_response(up.error_status, status_headers, up.error + "\n", client_close)) &&
                   !client_close;
        }

        http::RequestHead upstream_req;
        upstream_req.method = req.method;
        upstream_req.target = url.path;
        upstream_req.headers = req.headers;
        upstream_req.headers.strip_hop_by_hop();
        upstream_req.headers.remove("X-PAN-Page");
        if (!upstream_req.headers.contains("Host")) {
            upstream_req.headers.add("Host", url.port == 80 ? url.host : url.host + ":" + std::to_string(url.port));
        }
        upstream_req.headers.set("Connection", "close");

        const auto request_bytes = http::serialize(upstream_req) + body;
        std::string response_body;
        http::ResponseHead resp;
        bool ok = up.stream->write_str(request_bytes);
        if (ok) {
            http::BufferedReader upstream_reader(*up.stream);
            try {
                auto head = upstream_reader.read_head();
                ok = head.has_value();
                if (ok) {
                    resp = http::parse_response_head(*head);
                    auto framing = http::response_framing(resp, req.method);
                    ok = http::read_body_raw(upstream_reader, framing, response_body);
                    if (ok && framing.kind == http::Framing::until_close) {
                        resp.headers.set("Content-Length", std::to_string(response_body.size()));
                    }
                }
            } catch (const ParseError& e) {
                log::debug("bad upstream response from {}: {}", url.host, e.what());
                ok = false;
            }
        }
        up.stream->close();
        const double total_ms = ms_since(started);
        const std::uint64_t bytes = request_bytes.size() + response_body.size();
        gw_.record_completion(plan, {connect_ms, total_ms}, bytes);
        if (!ok) {
            return client_.write_str(simple_response(502, status_headers, "upstream failed\n", client_close)) &&
                   !client_close;
        }

        observe_strict_header(plan, resp.headers);

        resp.headers.strip_hop_by_hop();
        for (const auto& [k, v] : status_headers) {
            resp.headers.set(k, v);
        }
        if (const auto* via = plan.pan()) {
            resp.headers.set("X-PAN-Path", via->path.to_string());
        }
        if (client_close) {
            resp.headers.set("Connection", "close");
        }
        if (resp.reason.empty()) {
            resp.reason = std::string(http::reason_phrase(resp.status));
        }
        return client_.write_str(http::serialize(resp) + response_body) && !client_close;
    }

    void handle_connect(const http::RequestHead& req, http::BufferedReader& reader)
    {
        const auto started = SteadyClock::now();
        net::Endpoint target;
        try {
            target = http::split_authority(req.target, 443);
        } catch (const ParseError& e) {
            client_.write_str(simple_response(400, {}, std::string("bad CONNECT target: ") + e.what() + "\n", true));
            return;
        }
        auto plan = gw_.plan_request(target.host, page_id_for(req, target.host));
        Upstream up;
        if (!plan.blocked()) {
            up = open_route(plan, target.port);
        }
        const double connect_ms = ms_since(started);
        if (plan.blocked()) {
            gw_.record_completion(plan, {connect_ms, connect_ms}, 0);
            client_.write_str(simple_response(502, blocked_headers(plan),
                                          "blocked: " + std::string(plan.block_reason()) + "\n", true));
            return;
        }
        if (!up.stream) {
            gw_.record_completion(plan, {connect_ms, connect_ms}, 0);
            client_.write_str(simple_response(up.error_status, {{"X-PAN-Status", std::string(status_label(plan))}},
                                          up.error + "\n", true));
            return;
        }
        http::ResponseHead established;
        established.status = 200;
        established.reason = "Connection Established";
        established.headers.add("X-PAN-Status", std::string(status_label(plan)));
        established.headers.add("X-PAN-Compliant", plan.policy_compliant ? "true" : "false");
        if (!client_.write_str(http::serialize(established))) {
            up.stream->close();
            gw_.record_completion(plan, {connect_ms, ms_since(started)}, 0);
            return;
        }
        auto summary = emu::relay(*up.stream, client_, reader.take_buffered());
        up.stream->close();
        gw_.record_completion(plan, {connect_ms, ms_since(started)}, summary.bytes_up + summary.bytes_down);
    }

    ProxyServer& server_;
    Gateway& gw_;
    net::SocketStream& client_;
};

ProxyServer::ProxyServer(Gateway& gateway, ProxyOptions options)
  : gateway_(gateway)
  , options_(std::move(options))
{
}

ProxyServer::~ProxyServer() { stop(); }

void ProxyServer::start()
{
    if (running_) {
        return;
    }
    listener_ = net::listen_tcp(options_.listen);
    port_ = listener_.local_port();
    running_ = true;
    acceptor_ = std::thread([this] { accept_loop(); });
    log::info("proxy listening on {}:{}", options_.listen.host, port_);
}

void ProxyServer::untrack(std::uint64_t id)
{
    std::lock_guard lock(conn_mutex_);
    connections_.erase(id);
    conn_cv_.notify_all();
}

void ProxyServer::accept_loop()
{
    while (running_) {
        auto sock = net::accept_tcp(listener_);
        if (!sock) {
            if (!running_) {
                return;
            }
            std::this_thread::sleep_for(std::chrono::milliseconds(10));
            continue;
        }
        std::uint64_t id;
        auto stream = std::make_shared<net::SocketStream>(std::move(sock));
        {
            std::lock_guard lock(conn_mutex_);
            if (!running_) {
                return;
            }
            id = next_conn_id_++;
            connections_[id] = stream.get();
        }
        std::thread([this, id, stream] {
            try {
                Session(*this, *stream).run();
            } catch (const std::exception& e) {
                log::error("proxy session aborted: {}", e.what());
            }
            stream->close();
            untrack(id);
        }).detach();
    }
}

void ProxyServer::stop()
{
    if (!running_.exchange(false)) {
        return;
    }
    listener_.shutdown_both();
    if (acceptor_.joinable()) {
        acceptor_.join();
    }
    std::unique_lock lock(conn_mutex_);
    for (auto& [id, stream] : connections_) {
        stream->close();
    }
    conn_cv_.wait(lock, [this] { return connections_.empty(); });
    listener_.reset();
}

} // namespace pan::proxy
