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

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

namespace pan::proxy {

inline constexpr std::uint16_t kDefaultControlPort = 8809;

struct ControlOptions {
    net::Endpoint listen{"127.0.0.1", kDefaultControlPort};
    /// Static dashboard assets served under `/`.
    std::optional<std::filesystem::path> ui_dir;
};

/// Loopback-only REST surface over a Gateway:
///
///     GET|PUT /api/policy          text/plain policy
///     GET|PUT|DELETE /api/mode     ?host= optional; body opportunistic|strict
///     GET /api/status?page=<id>    PageReport JSON
///     GET /api/stats               Stats JSON
///     GET /api/paths?host=<name>   candidate paths with compliance flags
class ControlServer
{
  public:
    ControlServer(Gateway& gateway, ControlOptions options);
    ~ControlServer();

    ControlServer(const ControlServer&) = delete;
    ControlServer& operator=(const ControlServer&) = delete;

    /// Throws DomainError for a non-loopback listen address and
    /// std::runtime_error on bind failure.
    void start();
    void stop();
    std::uint16_t port() const noexcept { return port_; }

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    Gateway& gateway_;
    ControlOptions options_;
    std::uint16_t port_ = 0;
};

/// JSON body of `GET /api/paths`.
std::string paths_to_json(const PathsView& view);
/// JSON body of `GET /api/mode`.
std::string mode_to_json(Gateway& gateway, const std::optional<std::string>& host);

} // namespace pan::proxy
