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

#include "pan/net/socket.hpp"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <csignal>
#include <cstring>
#include <memory>

namespace pan::net {

std::string Endpoint::to_string() const
{
    if (host.find(':') != std::string::npos) {
        return "[" + host + "]:" + std::to_string(port);
    }
    return host + ":" + std::to_string(port);
}

Endpoint parse_endpoint(std::string_view text)
{
    Endpoint ep;
    std::string_view port_text;
    if (!text.empty() && text.front() == '[') {
        auto close = text.find(']');
        if (close == std::string_view::npos || close + 1 >= text.size() || text[close + 1] != ':') {
            throw std::invalid_argument("invalid endpoint '" + std::string(text) + "'");
        }
        ep.host = std::string(text.substr(1, close - 1));
        port_text = text.substr(close + 2);
    } else {
        auto colon = text.rfind(':');
        if (colon == std::string_view::npos) {
            throw std::invalid_argument("endpoint '" + std::string(text) + "' lacks a port");
        }
        ep.host = std::string(text.substr(0, colon));
        port_text = text.substr(colon + 1);
    }
    if (ep.host.empty()) {
        ep.host = "127.0.0.1";
    }
    unsigned port = 0;
    auto [ptr, ec] = std::from_chars(port_text.data(), port_text.data() + port_text.size(), port);
    if (port_text.empty() || ec != std::errc{} || ptr != port_text.data() + port_text.size() || port > 65535) {
        throw std::invalid_argument("invalid port in endpoint '" + std::string(text) + "'");
    }
    ep.port = static_cast<std::uint16_t>(port);
    return ep;
}

bool is_loopback_host(std::string_view host)
{
    if (host == "localhost" || host == "::1" || host == "::ffff:127.0.0.1") {
        return true;
    }
    if (host.starts_with("::ffff:")) {
        host.remove_prefix(7);
    }
    in_addr addr{};
    std::string h(host);
    if (inet_pton(AF_INET, h.c_str(), &addr) == 1) {
        return (ntohl(addr.s_addr) >> 24) == 127;
    }
    return false;
}

Socket& Socket::operator=(Socket&& other) noexcept
{
    if (this != &other) {
        reset();
        fd_ = std::exchange(other.fd_, -1);
    }
    return *this;
}

void Socket::reset() noexcept
{
    if (fd_ >= 0) {
        ::close(fd_);
        fd_ = -1;
    }
}

void Socket::shutdown_write() noexcept
{
    if (fd_ >= 0) {
        ::shutdown(fd_, SHUT_WR);
    }
}

void Socket::shutdown_both() noexcept
{
    if (fd_ >= 0) {
        ::shutdown(fd_, SHUT_RDWR);
    }
}

std::ptrdiff_t Socket::read_some(std::span<char> buf) noexcept
{
    for (;;) {
        auto n = ::recv(fd_, buf.data(), buf.size(), 0);
        if (n < 0 && errno == EINTR) {
            continue;
        }
        return n < 0 ? -1 : n;
    }
}

bool Socket::write_all(std::span<const char> data) noexcept
{
    while (!data.empty()) {
        auto n = ::send(fd_, data.data(), data.size(), MSG_NOSIGNAL);
        if (n < 0) {
            if (errno == EINTR) {
                continue;
            }
            return false;
        }
        data = data.subspan(static_cast<std::size_t>(n));
    }
    return true;
}

std::uint16_t Socket::local_port() const
{
    sockaddr_storage ss{};
    socklen_t len = sizeof ss;
    if (::getsockname(fd_, reinterpret_cast<sockaddr*>(&ss), &len) != 0) {
        throw std::runtime_error(std::string("getsockname: ") + std::strerror(errno));
    }
    if (ss.ss_family == AF_INET6) {
        return ntohs(reinterpret_cast<sockaddr_in6*>(&ss)->sin6_port);
    }
    return ntohs(reinterpret_cast<sockaddr_in*>(&ss)->sin_port);
}

namespace {

struct AddrInfoDeleter {
    void operator()(addrinfo* ai) const noexcept { freeaddrinfo(ai); }
};
using AddrInfoPtr = std::unique_ptr<addrinfo, AddrInfoDeleter>;

AddrInfoPtr resolve(const std::string& host, std::uint16_t port, bool passive)
{
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    hints.ai_flags = passive ? AI_PASSIVE : 0;
    addrinfo* res = nullptr;
    auto service = std::to_string(port);
    int rc = ::getaddrinfo(host.empty() ? nullptr : host.c_str(), service.c_str(), &hints, &res);
    if (rc != 0) {
        throw ConnectError(ConnectError::Kind::resolve, "cannot resolve " + host + ": " + gai_strerror(rc));
    }
    return AddrInfoPtr(res);
}

} // namespace

Socket listen_tcp(const Endpoint& at, int backlog)
{
    auto addrs = resolve(at.host, at.port, true);
    std::string last_error = "no addresses";
    for (auto* ai = addrs.get(); ai; ai = ai->ai_next) {
        Socket sock(::socket(ai->ai_family, ai->ai_socktype | SOCK_CLOEXEC, ai->ai_protocol));
        if (!sock) {
            last_error = std::strerror(errno);
            continue;
        }
        int one = 1;
        ::setsockopt(sock.fd(), SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
        if (::bind(sock.fd(), ai->ai_addr, ai->ai_addrlen) == 0 && ::listen(sock.fd(), backlog) == 0) {
            return sock;
        }
        last_error = std::strerror(errno);
    }
    throw std::runtime_error("cannot listen on " + at.to_string() + ": " + last_error);
}

Socket accept_tcp(const Socket& listener)
{
    for (;;) {
        int fd = ::accept4(listener.fd(), nullptr, nullptr, SOCK_CLOEXEC);
        if (fd >= 0) {
            int one = 1;
            ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
            return Socket(fd);
        }
        if (errno == EINTR || errno == ECONNABORTED) {
            continue;
        }
        return Socket{};
    }
}

Socket connect_tcp(const std::string& host, std::uint16_t port, std::chrono::milliseconds timeout)
{
    auto addrs = resolve(host, port, false);
    ConnectError last(ConnectError::Kind::refused, "cannot connect to " + host + ":" + std::to_string(port));
    for (auto* ai = addrs.get(); ai; ai = ai->ai_next) {
        Socket sock(::socket(ai->ai_family, ai->ai_socktype | SOCK_CLOEXEC | SOCK_NONBLOCK, ai->ai_protocol));
        if (!sock) {
            continue;
        }
        int rc = ::connect(sock.fd(), ai->ai_addr, ai->ai_addrlen);
        if (rc != 0 && errno == EINPROGRESS) {
            pollfd pfd{sock.fd(), POLLOUT, 0};
            int ready;
            do {
                ready = ::poll(&pfd, 1, static_cast<int>(timeout.count()));
            } while (ready < 0 && errno == EINTR);
            if (ready == 0) {
                last = ConnectError(ConnectError::Kind::timeout,
                                    "connect to " + host + ":" + std::to_string(port) + " timed out");
                continue;
            }
            int err = 0;
            socklen_t len = sizeof err;
            ::getsockopt(sock.fd(), SOL_SOCKET, SO_ERROR, &err, &len);
            rc = err == 0 ? 0 : -1;
            errno = err;
        }
        if (rc != 0) {
            last = ConnectError(ConnectError::Kind::refused, "connect to " + host + ":" + std::to_string(port) +
                                                                 ": " + std::strerror(errno));
            continue;
        }
        int flags = ::fcntl(sock.fd(), F_GETFL);
        ::fcntl(sock.fd(), F_SETFL, flags & ~O_NONBLOCK);
        int one = 1;
        ::setsockopt(sock.fd(), IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
        return sock;
    }
    throw last;
}

void ignore_sigpipe() { std::signal(SIGPIPE, SIG_IGN); }

} // namespace pan::net
