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

#include "pan/isd_as.hpp"
#include "pan/net/socket.hpp"

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace pan::origin {

struct OriginConfig {
    net::Endpoint listen{"127.0.0.1", 0};
    std::optional<std::filesystem::path> root;
    std::optional<std::string> upstream; // http://host[:port]
    std::optional<std::int64_t> strict_max_age_s;
    std::optional<IsdAs> as_identity;
    std::optional<std::filesystem::path> access_log;

    /// Throws DomainError unless exactly one of root/upstream is set and the
    /// max-age is non-negative.
    void validate() const;
};

/// Test origin: serves a directory or reverse-proxies a legacy origin, and
/// stamps `Strict-SCION: max-age=<n>` on every response when configured.
class OriginServer
{
  public:
    explicit OriginServer(OriginConfig config);
    ~OriginServer();

    OriginServer(const OriginServer&) = delete;
    OriginServer& operator=(const OriginServer&) = delete;

    /// Throws std::runtime_error on bind failure.
    void start();
    void stop();

    std::uint16_t port() const noexcept { return port_; }
    const OriginConfig& config() const noexcept { return config_; }

    /// Takes effect for subsequent responses.
    void set_strict_max_age(std::optional<std::int64_t> seconds);

    /// `<method> <path> <status> <bytes>` per request, oldest first.
    std::vector<std::string> access_log() const;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    OriginConfig config_;
    std::uint16_t port_ = 0;
};

} // namespace pan::origin
