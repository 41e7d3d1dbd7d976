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

#include <chrono>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace pan::net {

struct Endpoint {
    std::string host;
    std::uint16_t port = 0;

    std::string to_string() const;
    friend bool operator==(const Endpoint&, const Endpoint&) = default;
};

/// Parses `host:port`, `[v6]:port` or `:port` (host defaults to 127.0.0.1).
Endpoint parse_endpoint(std::string_view text);

bool is_loopback_host(std::string_view host);

class ConnectError : public std::runtime_error
{
  public:
    enum class Kind { resolve, refused, timeout };

    ConnectError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    Kind kind() const noexcept { return kind_; }

  private:
    Kind kind_;
};

/// Owning TCP socket descriptor.
class Socket
{
  public:
    Socket() = default;
    explicit Socket(int fd) noexcept : fd_(fd) {}
    Socket(Socket&& other) noexcept : fd_(std::exchange(other.fd_, -1)) {}
    Socket& operator=(Socket&& other) noexcept;
    Socket(const Socket&) = delete;
    Socket& operator=(const Socket&) = delete;
    ~Socket() { reset(); }

    int fd() const noexcept { return fd_; }
    explicit operator bool() const noexcept { return fd_ >= 0; }

    void reset() noexcept;
    void shutdown_write() noexcept;
    /// Unblocks pending reads/writes on other threads without releasing the fd.
    void shutdown_both() noexcept;

    /// Bytes read, 0 on orderly EOF, -1 on error.
    std::ptrdiff_t read_some(std::span<char> buf) noexcept;
    bool write_all(std::span<const char> data) noexcept;

    std::uint16_t local_port() const;

  private:
    int fd_ = -1;
};

Socket listen_tcp(const Endpoint& at, int backlog = 128);

/// Returns an invalid socket when the listener has been shut down.
Socket accept_tcp(const Socket& listener);

Socket connect_tcp(const std::string& host, std::uint16_t port, std::chrono::milliseconds timeout);

/// Minimal duplex byte stream shared by plain sockets and emulated channels.
class ByteStream
{
  public:
    virtual ~ByteStream() = default;
    /// Bytes read, 0 on EOF, -1 on error.
    virtual std::ptrdiff_t read(std::span<char> buf) = 0;
    virtual bool write(std::span<const char> data) = 0;
    virtual void shutdown_write() = 0;
    /// Aborts both directions; safe to call from another thread.
    virtual void close() = 0;

    bool write_str(std::string_view s) { return write(std::span<const char>(s.data(), s.size())); }
};

class SocketStream final : public ByteStream
{
  public:
    explicit SocketStream(Socket sock) : sock_(std::move(sock)) {}

    std::ptrdiff_t read(std::span<char> buf) override { return sock_.read_some(buf); }
    bool write(std::span<const char> data) override { return sock_.write_all(data); }
    void shutdown_write() override { sock_.shutdown_write(); }
    void close() override { sock_.shutdown_both(); }

    Socket& socket() noexcept { return sock_; }

  private:
    Socket sock_;
};

/// Ignores SIGPIPE process-wide; writes report errors through return values.
void ignore_sigpipe();

} // namespace pan::net
