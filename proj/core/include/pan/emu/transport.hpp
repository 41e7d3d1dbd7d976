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

#include "pan/clock.hpp"
#include "pan/net/socket.hpp"
#include "pan/path.hpp"
#include "pan/pathdb/topology.hpp"
#include "pan/resolver/scion_address.hpp"

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <memory>
#include <mutex>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace pan::emu {

struct EmuOptions {
    /// Scheduling slack reported alongside latency measurements.
    std::chrono::milliseconds tolerance{15};
    /// Serialization delay from the path's bottleneck bandwidth.
    bool shaping = false;
    /// Probability that a chunk is "lost" and redelivered one RTT later.
    double loss_rate = 0.0;
    std::uint64_t seed = 1;
    std::chrono::milliseconds connect_timeout{10000};
};

/// Byte accounting for a single channel. Counters only grow.
struct ChannelAudit {
    std::uint64_t channel_id = 0;
    std::uint64_t path_fingerprint = 0;
    std::string path;
    std::set<std::uint32_t> isds;
    std::string remote;
    std::atomic<std::uint64_t> bytes_out{0};
    std::atomic<std::uint64_t> bytes_in{0};
    std::atomic<bool> closed{false};
    std::atomic<bool> abnormal{false};
};

struct AuditRecord {
    std::uint64_t channel_id = 0;
    std::uint64_t path_fingerprint = 0;
    std::string path;
    std::set<std::uint32_t> isds;
    std::string remote;
    std::uint64_t bytes_out = 0;
    std::uint64_t bytes_in = 0;
    bool closed = false;
    bool abnormal = false;
};

class AuditLog
{
  public:
    std::shared_ptr<ChannelAudit> open(const Path& path, const std::string& remote);
    std::vector<AuditRecord> snapshot() const;
    /// Sum of bytes in both directions over channels whose path crosses `isd`.
    std::uint64_t bytes_through_isd(std::uint32_t isd) const;
    void clear();

  private:
    mutable std::mutex mutex_;
    std::vector<std::shared_ptr<ChannelAudit>> channels_;
    std::uint64_t next_id_ = 1;
};

class ChannelError : public std::runtime_error
{
  public:
    enum class Kind { endpoint_down, emulation_refused };

    ChannelError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    Kind kind() const noexcept { return kind_; }

  private:
    Kind kind_;
};

/// Reliable bidirectional stream bound to one path. Every byte is delivered
/// `path.meta().latency_ms` after it was handed over, in each direction.
class Channel final : public net::ByteStream
{
  public:
    Channel(net::Socket sock, const Path& path, resolver::ScionAddress remote, std::shared_ptr<ChannelAudit> audit,
            const EmuOptions& options, Timestamp opened_at);
    ~Channel() override;

    Channel(const Channel&) = delete;
    Channel& operator=(const Channel&) = delete;

    std::ptrdiff_t read(std::span<char> buf) override;
    bool write(std::span<const char> data) override;
    void shutdown_write() override;
    void close() override;

    const Path& path() const noexcept { return path_; }
    const resolver::ScionAddress& remote() const noexcept { return remote_; }
    Timestamp opened_at() const noexcept { return opened_at_; }
    const ChannelAudit& audit() const noexcept { return *audit_; }
    std::chrono::microseconds one_way_delay() const noexcept { return delay_; }

  private:
    using SteadyTime = std::chrono::steady_clock::time_point;

    struct Chunk {
        enum class Kind { data, eof, error };
        Kind kind = Kind::data;
        SteadyTime due;
        std::string bytes;
    };

    /// FIFO of chunks released at their due time.
    struct DelayQueue {
        std::mutex mutex;
        std::condition_variable cv;
        std::deque<Chunk> chunks;
        SteadyTime last_due{};
        SteadyTime link_free{}; // when shaping: end of the previous serialisation
    };

    SteadyTime schedule(DelayQueue& q, std::size_t bytes);
    void writer_loop();
    void reader_loop();

    net::Socket sock_;
    Path path_;
    resolver::ScionAddress remote_;
    std::shared_ptr<ChannelAudit> audit_;
    EmuOptions options_;
    Timestamp opened_at_;
    std::chrono::microseconds delay_;

    DelayQueue outbound_;
    DelayQueue inbound_;
    std::size_t inbound_offset_ = 0;
    std::mutex rng_mutex_;
    std::mt19937_64 rng_;

    std::atomic<bool> stop_{false};
    std::atomic<bool> write_failed_{false};
    std::atomic<bool> write_shut_{false};
    std::once_flag close_once_;
    std::thread writer_;
    std::thread reader_;
};

/// Emulated path-aware data plane over loopback TCP.
class EmuNetwork
{
  public:
    EmuNetwork(std::shared_ptr<const pathdb::Topology> topology, EmuOptions options = {});

    /// Dials `remote.host` on `remote.port` (or `default_port`) and waits one
    /// emulated round trip before returning. Throws ChannelError.
    std::unique_ptr<Channel> open_channel(const Path& path, const resolver::ScionAddress& remote,
                                          std::uint16_t default_port, Timestamp now);

    AuditLog& audit() noexcept { return audit_; }
    const AuditLog& audit() const noexcept { return audit_; }
    const EmuOptions& options() const noexcept { return options_; }

  private:
    std::shared_ptr<const pathdb::Topology> topology_;
    EmuOptions options_;
    AuditLog audit_;
    std::atomic<std::uint64_t> seed_counter_{0};
};

struct RelaySummary {
    std::uint64_t bytes_up = 0;   // client -> upstream
    std::uint64_t bytes_down = 0; // upstream -> client
    bool abnormal = false;
};

/// Full-duplex copy until both directions finish. Half-closes propagate; an
/// error on either side closes both.
RelaySummary relay(net::ByteStream& upstream, net::ByteStream& client, std::string_view client_prefix = {});

} // namespace pan::emu
