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

#include "pan/net/socket.hpp"
#include "pan/proxy/gateway.hpp"

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>

namespace pan::proxy {

inline constexpr std::uint16_t kDefaultProxyPort = 8808;

struct ProxyOptions {
    net::Endpoint listen{"127.0.0.1", kDefaultProxyPort};
    std::chrono::milliseconds upstream_timeout{10000};
    /// Legacy-IP dial overrides, host -> endpoint. Lets tests route names to
    /// loopback servers without touching system DNS.
    std::map<std::string, net::Endpoint> legacy_overrides;
};

/// HTTP/1.1 forward proxy: absolute-form requests and CONNECT tunnels. Each
/// client connection is served on its own thread.
class ProxyServer
{
  public:
    ProxyServer(Gateway& gateway, ProxyOptions options);
    ~ProxyServer();

    ProxyServer(const ProxyServer&) = delete;
    ProxyServer& operator=(const ProxyServer&) = delete;

    /// Binds and starts accepting. Throws on bind failure.
    void start();
    /// Stops accepting, aborts open connections and waits for their threads.
    void stop();

    std::uint16_t port() const noexcept { return port_; }

  private:
    class Session;
    friend class Session;

    void accept_loop();
    void untrack(std::uint64_t id);

    Gateway& gateway_;
    ProxyOptions options_;
    net::Socket listener_;
    std::uint16_t port_ = 0;
    std::thread acceptor_;
    std::atomic<bool> running_{false};

    std::mutex conn_mutex_;
    std::condition_variable conn_cv_;
    std::map<std::uint64_t, net::SocketStream*> connections_;
    std::uint64_t next_conn_id_ = 0;
};

} // namespace pan::proxy
