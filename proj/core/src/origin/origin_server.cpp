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

#include "pan/origin/origin_server.hpp"

#include "pan/errors.hpp"
#include "pan/http/message.hpp"
#include "pan/log.hpp"

#include <atomic>
#include <fstream>
#include <mutex>
#include <thread>

#include <httplib.h>

namespace pan::origin {

void OriginConfig::validate() const
{
    if (root.has_value() == upstream.has_value()) {
        throw DomainError("origin needs exactly one of root or upstream");
    }
    if (strict_max_age_s && *strict_max_age_s < 0) {
        throw DomainError("strict max-age must be >= 0");
    }
    if (root && !std::filesystem::is_directory(*root)) {
        throw DomainError("origin root " + root->string() + " is not a directory");
    }
    if (as_identity && !as_identity->is_concrete()) {
        throw DomainError("origin AS identity must not contain wildcards");
    }
}

namespace {

constexpr std::int64_t kNoStrict = -1;

bool is_hop_by_hop(std::string_view name)
{
    for (auto h : {"Connection", "Keep-Alive", "Proxy-Connection", "Proxy-Authenticate", "Proxy-Authorization", "TE",
                   "Trailer", "Transfer-Encoding", "Upgrade"}) {
        if (http::iequals(name, h)) {
            return true;
        }
    }
    return false;
}

} // namespace

struct OriginServer::Impl {
    httplib::Server server;
    std::thread thread;
    std::atomic<std::int64_t> strict_max_age{kNoStrict};
    mutable std::mutex log_mutex;
    std::vector<std::string> log_lines;
    std::ofstream log_file;
};

OriginServer::OriginServer(OriginConfig config) : impl_(std::make_unique<Impl>()), config_(std::move(config))
{
    config_.validate();
    impl_->strict_max_age = config_.strict_max_age_s.value_or(kNoStrict);
    if (config_.access_log) {
        impl_->log_file.open(*config_.access_log, std::ios::app);
    }
}

OriginServer::~OriginServer() { stop(); }

void OriginServer::set_strict_max_age(std::optional<std::int64_t> seconds)
{
    if (seconds && *seconds < 0) {
        throw DomainError("strict max-age must be >= 0");
    }
    impl_->strict_max_age = seconds.value_or(kNoStrict);
}

std::vector<std::string> OriginServer::access_log() const
{
    std::lock_guard lock(impl_->log_mutex);
    return impl_->log_lines;
}

void OriginServer::start()
{
    auto& svr = impl_->server;
    Impl* impl = impl_.get();

    svr.set_post_routing_handler([impl](const httplib::Request&, httplib::Response& res) {
        auto max_age = impl->strict_max_age.load();
        if (max_age >= 0) {
            res.headers.erase("Strict-SCION");
            res.set_header("Strict-SCION", "max-age=" + std::to_string(max_age));
        }
    });
    svr.set_logger([impl](const httplib::Request& req, const httplib::Response& res) {
        const std::size_t bytes = res.body.empty() ? res.content_length_ : res.body.size();
        auto line = req.method + " " + req.path + " " + std::to_string(res.status) + " " + std::to_string(bytes);
        std::lock_guard lock(impl->log_mutex);
        impl->log_lines.push_back(line);
        if (impl->log_file) {
            impl->log_file << line << '\n';
            impl->log_file.flush();
        }
    });

    if (config_.root) {
        if (!svr.set_mount_point("/", config_.root->string())) {
            throw DomainError("cannot serve " + config_.root->string());
        }
    } else {
        // Reverse-proxy everything; request headers pass through minus hop-by-hop.
        std::string upstream = *config_.upstream;
        svr.set_pre_routing_handler([upstream](const httplib::Request& req, httplib::Response& res) {
            httplib::Client client(upstream);
            client.set_connection_timeout(std::chrono::seconds(10));
            client.set_read_timeout(std::chrono::seconds(30));
            httplib::Headers headers;
            for (const auto& [k, v] : req.headers) {
                if (!is_hop_by_hop(k) && !http::iequals(k, "Host") && !http::iequals(k, "Content-Length") &&
                    !http::iequals(k, "REMOTE_ADDR") && !http::iequals(k, "REMOTE_PORT") &&
                    !http::iequals(k, "LOCAL_ADDR") && !http::iequals(k, "LOCAL_PORT")) {
                    headers.emplace(k, v);
                }
            }
            httplib::Request fwd;
            fwd.method = req.method;
            fwd.path = req.target.empty() ? req.path : req.target;
            fwd.headers = std::move(headers);
            fwd.body = req.body;
            auto result = client.send(fwd);
            if (!result) {
                res.status = 502;
                res.set_content("upstream unavailable: " + httplib::to_string(result.error()) + "\n", "text/plain");
                return httplib::Server::HandlerResponse::Handled;
            }
            res.status = result->status;
            for (const auto& [k, v] : result->headers) {
                if (!is_hop_by_hop(k) && !http::iequals(k, "Content-Length") && !http::iequals(k, "Content-Type")) {
                    res.headers.emplace(k, v);
                }
            }
            auto type = result->has_header("Content-Type") ? result->get_header_value("Content-Type")
                                                           : std::string("application/octet-stream");
            res.set_content(result->body, type);
            return httplib::Server::HandlerResponse::Handled;
        });
    }

    int port = config_.listen.port == 0
                   ? svr.bind_to_any_port(config_.listen.host)
                   : (svr.bind_to_port(config_.listen.host, config_.listen.port) ? config_.listen.port : -1);
    if (port <= 0) {
        throw std::runtime_error("cannot bind origin to " + config_.listen.to_string());
    }
    port_ = static_cast<std::uint16_t>(port);
    impl_->thread = std::thread([impl] { impl->server.listen_after_bind(); });
    impl_->server.wait_until_ready();
    log::info("origin listening on {}:{}{}", config_.listen.host, port_,
              config_.as_identity ? " as " + config_.as_identity->to_string() : std::string());
}

void OriginServer::stop()
{
    if (impl_->thread.joinable()) {
        impl_->server.stop();
        impl_->thread.join();
    }
}

} // namespace pan::origin
