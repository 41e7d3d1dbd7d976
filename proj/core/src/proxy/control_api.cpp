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

#include "pan/proxy/control_api.hpp"

#include "pan/errors.hpp"
#include "pan/log.hpp"

#include <thread>

#include <httplib.h>
#include <json.hpp>

namespace pan::proxy {

using nlohmann::json;

namespace {

json path_json(const Path& p)
{
    json hops = json::array();
    for (const auto& h : p.hops()) {
        hops.push_back(h.id.to_string());
    }
    const auto& m = p.meta();
    return json{{"hops", hops},
                {"fingerprint", p.fingerprint_hex()},
                {"latency_ms", m.latency_ms},
                {"bandwidth_mbps", m.bandwidth_mbps},
                {"mtu_bytes", m.mtu_bytes},
                {"carbon_g_per_gb", m.carbon_g_per_gb},
                {"hop_count", m.hop_count},
                {"isds", m.isds}};
}

json mode_json(const Mode& mode)
{
    json out{{"mode", std::string(to_string(mode.value))}, {"origin", std::string(to_string(mode.origin))}};
    if (mode.expires_at) {
        out["expires_at"] = to_unix_seconds(*mode.expires_at);
    }
    return out;
}

} // namespace

std::string paths_to_json(const PathsView& view)
{
    json doc;
    doc["host"] = view.host;
    doc["scion_capable"] = view.resolution.scion_capable();
    doc["source"] = std::string(resolver::to_string(view.resolution.source));
    if (view.resolution.address) {
        doc["address"] = view.resolution.address->to_string();
    }
    if (view.resolution.error) {
        doc["error"] = *view.resolution.error;
    }
    json paths = json::array();
    for (std::size_t i = 0; i < view.paths.size(); ++i) {
        auto p = path_json(view.paths[i]);
        p["compliant"] = static_cast<bool>(view.compliant[i]);
        paths.push_back(std::move(p));
    }
    doc["paths"] = std::move(paths);
    doc["selected"] = view.selected ? json(view.selected->fingerprint_hex()) : json(nullptr);
    return doc.dump(2);
}

std::string mode_to_json(Gateway& gateway, const std::optional<std::string>& host)
{
    const auto now = gateway.clock().now();
    json doc;
    if (host) {
        doc = mode_json(gateway.effective_mode(*host, now));
        doc["host"] = *host;
        if (auto site = gateway.host_mode(*host)) {
            doc["site_setting"] = std::string(to_string(*site));
        }
        return doc.dump(2);
    }
    doc["global"] = std::string(to_string(gateway.global_mode()));
    json sites = json::object();
    for (const auto& [h, v] : gateway.host_modes()) {
        sites[h] = std::string(to_string(v));
    }
    doc["hosts"] = std::move(sites);
    json strict = json::object();
    for (const auto& entry : gateway.resolver().strict_entries(now)) {
        strict[entry.host] = to_unix_seconds(entry.expires_at);
    }
    doc["header_imposed"] = std::move(strict);
    return doc.dump(2);
}

struct ControlServer::Impl {
    httplib::Server server;
    std::thread thread;
};

ControlServer::ControlServer(Gateway& gateway, ControlOptions options)
  : impl_(std::make_unique<Impl>())
  , gateway_(gateway)
  , options_(std::move(options))
{
}

ControlServer::~ControlServer() { stop(); }

void ControlServer::start()
{
    if (!net::is_loopback_host(options_.listen.host)) {
        throw DomainError("control API must bind to a loopback address, not " + options_.listen.host);
    }
    auto& svr = impl_->server;
    Gateway& gw = gateway_;

    svr.set_pre_routing_handler([](const httplib::Request& req, httplib::Response& res) {
        if (!net::is_loopback_host(req.remote_addr)) {
            res.status = 403;
            res.set_content("control API is loopback-only\n", "text/plain");
            return httplib::Server::HandlerResponse::Handled;
        }
        return httplib::Server::HandlerResponse::Unhandled;
    });

    svr.Get("/api/policy", [&gw](const httplib::Request&, httplib::Response& res) {
        res.set_content(gw.policy_text(), "text/plain");
    });
    svr.Put("/api/policy", [&gw](const httplib::Request& req, httplib::Response& res) {
        try {
            gw.set_policy_text(req.body);
            res.set_content(gw.policy_text(), "text/plain");
        } catch (const ParseError& e) {
            res.status = 422;
            json err{{"error", e.what()}};
            if (e.line()) {
                err["line"] = *e.line();
            }
            res.set_content(err.dump(), "application/json");
        }
    });

    svr.Get("/api/mode", [&gw](const httplib::Request& req, httplib::Response& res) {
        std::optional<std::string> host;
        if (req.has_param("host")) {
            host = req.get_param_value("host");
        }
        res.set_content(mode_to_json(gw, host), "application/json");
    });
    svr.Put("/api/mode", [&gw](const httplib::Request& req, httplib::Response& res) {
        auto value = parse_mode_value(req.body);
        if (!value) {
            res.status = 400;
            res.set_content("mode must be 'opportunistic' or 'strict'\n", "text/plain");
            return;
        }
        std::optional<std::string> host;
        if (req.has_param("host")) {
            host = req.get_param_value("host");
            gw.set_host_mode(*host, value);
        } else {
            gw.set_global_mode(*value);
        }
        res.set_content(mode_to_json(gw, host), "application/json");
    });
    svr.Delete("/api/mode", [&gw](const httplib::Request& req, httplib::Response& res) {
        if (!req.has_param("host")) {
            res.status = 400;
            res.set_content("host parameter required\n", "text/plain");
            return;
        }
        auto host = req.get_param_value("host");
        gw.set_host_mode(host, std::nullopt);
        res.set_content(mode_to_json(gw, host), "application/json");
    });

    svr.Get("/api/status", [&gw](const httplib::Request& req, httplib::Response& res) {
        if (!req.has_param("page")) {
            res.status = 400;
            res.set_content("page parameter required\n", "text/plain");
            return;
        }
        res.set_content(to_json(gw.classify_page(req.get_param_value("page"))), "application/json");
    });
    svr.Get("/api/stats", [&gw](const httplib::Request&, httplib::Response& res) {
        res.set_content(stats::to_json(gw.stats()), "application/json");
    });
    svr.Get("/api/paths", [&gw](const httplib::Request& req, httplib::Response& res) {
        if (!req.has_param("host") || req.get_param_value("host").empty()) {
            res.status = 400;
            res.set_content("host parameter required\n", "text/plain");
            return;
        }
        res.set_content(paths_to_json(gw.candidate_paths(req.get_param_value("host"), gw.clock().now())),
                        "application/json");
    });

    if (options_.ui_dir) {
        if (!svr.set_mount_point("/", options_.ui_dir->string())) {
            log::warn("dashboard directory {} not found; serving API only", options_.ui_dir->string());
        }
    }

    int port = options_.listen.port == 0 ? svr.bind_to_any_port(options_.listen.host)
                                         : (svr.bind_to_port(options_.listen.host, options_.listen.port)
                                                ? options_.listen.port
                                                : -1);
    if (port <= 0) {
        throw std::runtime_error("cannot bind control API to " + options_.listen.to_string());
    }
    port_ = static_cast<std::uint16_t>(port);
    impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
    impl_->server.wait_until_ready();
    log::info("control API listening on {}:{}", options_.listen.host, port_);
}

void ControlServer::stop()
{
    if (impl_->thread.joinable()) {
        impl_->server.stop();
        impl_->thread.join();
    }
}

} // namespace pan::proxy
