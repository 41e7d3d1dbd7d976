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

#include "pan/emu/transport.hpp"

#include "pan/log.hpp"

#include <algorithm>
#include <cmath>

namespace pan::emu {

std::shared_ptr<ChannelAudit> AuditLog::open(const Path& path, const std::string& remote)
{
    auto audit = std::make_shared<ChannelAudit>();
    audit->path_fingerprint = path.fingerprint();
    audit->path = path.to_string();
    audit->isds = path.meta().isds;
    audit->remote = remote;
    std::lock_guard lock(mutex_);
    audit->channel_id = next_id_++;
    channels_.push_back(audit);
    return audit;
}

std::vector<AuditRecord> AuditLog::snapshot() const
{
    std::lock_guard lock(mutex_);
    std::vector<AuditRecord> out;
    out.reserve(channels_.size());
    for (const auto& c : channels_) {
        out.push_back(AuditRecord{c->channel_id, c->path_fingerprint, c->path, c->isds, c->remote, c->bytes_out.load(),
                                  c->bytes_in.load(), c->closed.load(), c->abnormal.load()});
    }
    return out;
}

std::uint64_t AuditLog::bytes_through_isd(std::uint32_t isd) const
{
    std::uint64_t total = 0;
    for (const auto& r : snapshot()) {
        if (r.isds.contains(isd)) {
            total += r.bytes_in + r.bytes_out;
        }
    }
    return total;
}

void AuditLog::clear()
{
    std::lock_guard lock(mutex_);
    channels_.clear();
}

Channel::Channel(net::Socket sock, const Path& path, resolver::ScionAddress remote,
                 std::shared_ptr<ChannelAudit> audit, const EmuOptions& options, Timestamp opened_at)
  : sock_(std::move(sock))
  , path_(path)
  , remote_(std::move(remote))
  , audit_(std::move(audit))
  , options_(options)
  , opened_at_(opened_at)
  , delay_(std::chrono::microseconds(static_cast<std::int64_t>(std::llround(path.meta().latency_ms * 1000.0))))
  , rng_(options.seed)
{
    writer_ = std::thread([this] { writer_loop(); });
    reader_ = std::thread([this] { reader_loop(); });
}

Channel::~Channel()
{
    close();
}

Channel::SteadyTime Channel::schedule(DelayQueue& q, std::size_t bytes)
{
    const auto now = std::chrono::steady_clock::now();
    auto due = now + delay_;
    if (options_.shaping && bytes > 0) {
        // Mbps == bits per microsecond.
        auto serialize = std::chrono::microseconds(
            static_cast<std::int64_t>(std::ceil(static_cast<double>(bytes) * 8.0 / path_.meta().bandwidth_mbps)));
        q.link_free = std::max(now, q.link_free) + serialize;
        due = q.link_free + delay_;
    }
    if (options_.loss_rate > 0.0) {
        std::lock_guard lock(rng_mutex_);
        if (std::uniform_real_distribution<double>(0.0, 1.0)(rng_) < options_.loss_rate) {
            // Retransmission after one emulated RTT; the stream stays reliable.
            due += 2 * delay_ + std::chrono::milliseconds(1);
        }
    }
    due = std::max(due, q.last_due);
    q.last_due = due;
    return due;
}

bool Channel::write(std::span<const char> data)
{
    if (stop_ || write_failed_ || write_shut_) {
        return false;
    }
    if (data.empty()) {
        return true;
    }
    {
        std::lock_guard lock(outbound_.mutex);
        auto due = schedule(outbound_, data.size());
        outbound_.chunks.push_back({Chunk::Kind::data, due, std::string(data.data(), data.size())});
    }
    audit_->bytes_out += data.size();
    outbound_.cv.notify_all();
    return true;
}

void Channel::shutdown_write()
{
    if (write_shut_.exchange(true)) {
        return;
    }
    {
        std::lock_guard lock(outbound_.mutex);
        auto due = schedule(outbound_, 0);
        outbound_.chunks.push_back({Chunk::Kind::eof, due, {}});
    }
    outbound_.cv.notify_all();
}

void Channel::writer_loop()
{
    std::unique_lock lock(outbound_.mutex);
    for (;;) {
        outbound_.cv.wait(lock, [&] { return stop_ || !outbound_.chunks.empty(); });
        if (stop_) {
            return;
        }
        auto due = outbound_.chunks.front().due;
        if (std::chrono::steady_clock::now() < due) {
            outbound_.cv.wait_until(lock, due, [&] { return stop_.load(); });
            continue;
        }
        auto chunk = std::move(outbound_.chunks.front());
        outbound_.chunks.pop_front();
        lock.unlock();
        if (chunk.kind == Chunk::Kind::eof) {
            sock_.shutdown_write();
        } else if (!sock_.write_all(chunk.bytes)) {
            write_failed_ = true;
            audit_->abnormal = true;
            return;
        }
        lock.lock();
    }
}

void Channel::reader_loop()
{
    char buf[65536];
    for (;;) {
        auto n = sock_.read_some(buf);
        Chunk chunk;
        if (n > 0) {
            chunk.kind = Chunk::Kind::data;
            chunk.bytes.assign(buf, static_cast<std::size_t>(n));
        } else {
            chunk.kind = n == 0 ? Chunk::Kind::eof : Chunk::Kind::error;
        }
        {
            std::lock_guard lock(inbound_.mutex);
            chunk.due = schedule(inbound_, chunk.bytes.size());
            inbound_.chunks.push_back(std::move(chunk));
        }
        inbound_.cv.notify_all();
        if (n <= 0) {
            return;
        }
    }
}

std::ptrdiff_t Channel::read(std::span<char> buf)
{
    std::unique_lock lock(inbound_.mutex);
    for (;;) {
        if (stop_) {
            return -1;
        }
        if (inbound_.chunks.empty()) {
            inbound_.cv.wait(lock, [&] { return stop_ || !inbound_.chunks.empty(); });
            continue;
        }
        auto& front = inbound_.chunks.front();
        if (std::chrono::steady_clock::now() < front.due) {
            auto due = front.due;
            inbound_.cv.wait_until(lock, due, [&] { return stop_.load(); });
            continue;
        }
        switch (front.kind) {
        case Chunk::Kind::eof:
            return 0;
        case Chunk::Kind::error:
            audit_->abnormal = true;
            return -1;
        case Chunk::Kind::data:
            break;
        }
        auto take = std::min(buf.size(), front.bytes.size() - inbound_offset_);
        std::copy_n(front.bytes.data() + inbound_offset_, take, buf.data());
        inbound_offset_ += take;
        if (inbound_offset_ == front.bytes.size()) {
            inbound_.chunks.pop_front();
            inbound_offset_ = 0;
        }
        audit_->bytes_in += take;
        return static_cast<std::ptrdiff_t>(take);
    }
}

void Channel::close()
{
    std::call_once(close_once_, [this] {
        stop_ = true;
        sock_.shutdown_both();
        {
            std::lock_guard a(outbound_.mutex);
        }
        outbound_.cv.notify_all();
        {
            std::lock_guard b(inbound_.mutex);
        }
        inbound_.cv.notify_all();
        if (writer_.joinable()) {
            writer_.join();
        }
        if (reader_.joinable()) {
            reader_.join();
        }
        audit_->closed = true;
    });
}

EmuNetwork::EmuNetwork(std::shared_ptr<const pathdb::Topology> topology, EmuOptions options)
  : topology_(std::move(topology))
  , options_(options)
{
}

std::unique_ptr<Channel> EmuNetwork::open_channel(const Path& path, const resolver::ScionAddress& remote,
                                                  std::uint16_t default_port, Timestamp now)
{
    if (!remote.id.is_concrete() || (topology_ && !topology_->contains(remote.id))) {
        throw ChannelError(ChannelError::Kind::emulation_refused,
                           "AS " + remote.id.to_string() + " is not part of the emulated topology");
    }
    if (path.dst() != remote.id) {
        throw ChannelError(ChannelError::Kind::emulation_refused,
                           "path " + path.to_string() + " does not end in " + remote.id.to_string());
    }
    const std::uint16_t port = remote.port.value_or(default_port);
    net::Socket sock;
    try {
        sock = net::connect_tcp(remote.host, port, options_.connect_timeout);
    } catch (const net::ConnectError& e) {
        throw ChannelError(ChannelError::Kind::endpoint_down, e.what());
    }

    // Handshake: one emulated round trip before the stream is usable.
    const auto rtt = std::chrono::microseconds(static_cast<std::int64_t>(std::llround(path.meta().rtt_ms() * 1000.0)));
    if (rtt.count() > 0) {
        std::this_thread::sleep_for(rtt);
    }

    auto opts = options_;
    opts.seed = options_.seed + seed_counter_.fetch_add(1);
    auto audit = audit_.open(path, remote.to_string());
    log::debug("channel {} open via {} to {}", audit->channel_id, path.to_string(), remote.to_string());
    return std::make_unique<Channel>(std::move(sock), path, remote, std::move(audit), opts, now);
}

RelaySummary relay(net::ByteStream& upstream, net::ByteStream& client, std::string_view client_prefix)
{
    RelaySummary summary;
    std::atomic<bool> abnormal{false};
    std::atomic<std::uint64_t> up{0};

    std::string prefix(client_prefix);
    std::thread to_upstream([&] {
        if (!prefix.empty()) {
            if (!upstream.write_str(prefix)) {
                abnormal = true;
                client.close();
                upstream.close();
                return;
            }
            up += prefix.size();
        }
        char buf[32768];
        for (;;) {
            auto n = client.read(buf);
            if (n == 0) {
                upstream.shutdown_write();
                return;
            }
            if (n < 0 || !upstream.write(std::span<const char>(buf, static_cast<std::size_t>(n)))) {
                abnormal = true;
                client.close();
                upstream.close();
                return;
            }
            up += static_cast<std::uint64_t>(n);
        }
    });

    char buf[32768];
    for (;;) {
        auto n = upstream.read(buf);
        if (n == 0) {
            client.shutdown_write();
            break;
        }
        if (n < 0 || !client.write(std::span<const char>(buf, static_cast<std::size_t>(n)))) {
            abnormal = true;
            client.close();
            upstream.close();
            break;
        }
        summary.bytes_down += static_cast<std::uint64_t>(n);
    }
    to_upstream.join();
    summary.bytes_up = up.load();
    summary.abnormal = abnormal.load();
    return summary;
}

} // namespace pan::emu
