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

#include "pan/errors.hpp"
#include "pan/log.hpp"
#include "pan/pathdb/topology.hpp"
#include "pan/policy/policy.hpp"
#include "pan/proxy/control_api.hpp"
#include "pan/proxy/gateway.hpp"
#include "pan/proxy/proxy_server.hpp"
#include "pan/resolver/resolver.hpp"
#include "signals.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

namespace {

std::string read_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw pan::DomainError("cannot open " + path);
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::map<std::string, pan::net::Endpoint> load_legacy_hosts(const std::string& path)
{
    auto doc = nlohmann::json::parse(read_file(path));
    std::map<std::string, pan::net::Endpoint> out;
    for (const auto& [host, value] : doc.items()) {
        out.emplace(host, pan::net::parse_endpoint(value.get<std::string>()));
    }
    return out;
}

} // namespace

int main(int argc, char** argv)
{
    auto signals = pan::tools::block_shutdown_signals();
    pan::net::ignore_sigpipe();
    pan::log::init_from_env();

    CLI::App app{"pan-gate: path-aware browsing gateway (HTTP forward proxy)"};
    std::string topology_file;
    std::string policy_file;
    std::string static_hosts_file;
    std::string dns_fixtures_file;
    std::string strict_store_file;
    std::string legacy_hosts_file;
    std::string stats_export_file;
    std::string ui_dir;
    std::string listen = "127.0.0.1:8808";
    std::string control = "127.0.0.1:8809";
    std::string mode = "opportunistic";
    std::string shaping = "off";
    int tolerance_ms = 15;
    int path_ttl_s = 60;

    app.add_option("--topology", topology_file, "AS-level topology JSON")->required()->check(CLI::ExistingFile);
    app.add_option("--policy", policy_file, "path policy file")->check(CLI::ExistingFile);
    app.add_option("--static-hosts", static_hosts_file, "JSON map host -> \"<isd>-<as>,<host>[:<port>]\"")
        ->check(CLI::ExistingFile);
    app.add_option("--dns-fixtures", dns_fixtures_file, "stub TXT records instead of system DNS")
        ->check(CLI::ExistingFile);
    app.add_option("--strict-store", strict_store_file, "persistent Strict-SCION entries");
    app.add_option("--legacy-hosts", legacy_hosts_file, "JSON map host -> \"ip:port\" for legacy dials")
        ->check(CLI::ExistingFile);
    app.add_option("--listen", listen, "proxy endpoint")->capture_default_str();
    app.add_option("--control", control, "loopback control API endpoint")->capture_default_str();
    app.add_option("--mode", mode, "global mode")->check(CLI::IsMember({"opportunistic", "strict"}))->capture_default_str();
    app.add_option("--emu-tolerance-ms", tolerance_ms, "emulation scheduling tolerance")->capture_default_str();
    app.add_option("--emu-shaping", shaping, "bandwidth shaping on emulated channels")
        ->check(CLI::IsMember({"on", "off"}))
        ->capture_default_str();
    app.add_option("--path-ttl", path_ttl_s, "path cache TTL in seconds")->capture_default_str();
    app.add_option("--stats-export", stats_export_file, "write stats JSON here on shutdown");
    app.add_option("--ui-dir", ui_dir, "dashboard assets served on the control port")->check(CLI::ExistingDirectory);
    CLI11_PARSE(app, argc, argv);

    try {
        auto topology = std::make_shared<const pan::pathdb::Topology>(pan::pathdb::load_topology_file(topology_file));

        pan::policy::Policy policy;
        if (!policy_file.empty()) {
            policy = pan::policy::parse(read_file(policy_file));
        }

        std::map<std::string, pan::resolver::ScionAddress> static_hosts;
        if (!static_hosts_file.empty()) {
            static_hosts = pan::resolver::load_static_hosts(static_hosts_file);
        }
        std::shared_ptr<pan::resolver::TxtSource> txt;
        if (!dns_fixtures_file.empty()) {
            txt = std::make_shared<pan::resolver::FixtureTxtSource>(
                pan::resolver::FixtureTxtSource::from_file(dns_fixtures_file));
        } else {
            txt = std::make_shared<pan::resolver::SystemTxtSource>();
        }
        pan::resolver::ResolverOptions resolver_options;
        if (!strict_store_file.empty()) {
            resolver_options.strict_store = strict_store_file;
        }
        pan::SystemClock clock;
        auto resolver = std::make_unique<pan::resolver::Resolver>(std::move(static_hosts), std::move(txt),
                                                                  resolver_options, clock.now());

        pan::proxy::GatewayOptions options;
        options.global_mode = *pan::proxy::parse_mode_value(mode);
        options.pathdb.ttl = std::chrono::seconds(path_ttl_s);
        options.emu.tolerance = std::chrono::milliseconds(tolerance_ms);
        options.emu.shaping = shaping == "on";
        pan::proxy::Gateway gateway(topology, std::move(resolver), std::move(policy), clock, options);

        pan::proxy::ProxyOptions proxy_options;
        proxy_options.listen = pan::net::parse_endpoint(listen);
        if (!legacy_hosts_file.empty()) {
            proxy_options.legacy_overrides = load_legacy_hosts(legacy_hosts_file);
        }
        pan::proxy::ProxyServer proxy(gateway, proxy_options);

        pan::proxy::ControlOptions control_options;
        control_options.listen = pan::net::parse_endpoint(control);
        if (!ui_dir.empty()) {
            control_options.ui_dir = ui_dir;
        }
        pan::proxy::ControlServer control_api(gateway, control_options);

        proxy.start();
        control_api.start();
        pan::log::info("local AS {}; mode {}", topology->local_as().to_string(), mode);

        int sig = pan::tools::wait_for_shutdown(signals);
        pan::log::info("signal {} received, shutting down", sig);
        control_api.stop();
        proxy.stop();

        if (!stats_export_file.empty()) {
            std::ofstream out(stats_export_file);
            out << pan::stats::to_json(gateway.stats()) << '\n';
        }
    } catch (const std::exception& e) {
        std::cerr << "pan-gate: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
