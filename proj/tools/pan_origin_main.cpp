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

#include "pan/log.hpp"
#include "pan/origin/origin_server.hpp"
#include "signals.hpp"

#include <iostream>

#include <CLI11.hpp>

int main(int argc, char** argv)
{
    auto signals = pan::tools::block_shutdown_signals();
    pan::net::ignore_sigpipe();
    pan::log::init_from_env();

    CLI::App app{"pan-origin: test origin with optional Strict-SCION"};
    std::string listen;
    std::string root;
    std::string upstream;
    std::string as_text;
    std::string access_log;
    std::int64_t strict_max_age = -1;

    app.add_option("--listen", listen, "address to serve on")->required();
    auto* root_opt = app.add_option("--root", root, "static content directory")->check(CLI::ExistingDirectory);
    auto* upstream_opt = app.add_option("--upstream", upstream, "legacy origin URL (reverse-proxy mode)");
    root_opt->excludes(upstream_opt);
    app.add_option("--strict-max-age", strict_max_age, "emit Strict-SCION: max-age=<s>")->check(CLI::NonNegativeNumber);
    app.add_option("--as", as_text, "ISD-AS this origin is reachable in");
    app.add_option("--access-log", access_log, "append access log lines here");
    CLI11_PARSE(app, argc, argv);

    try {
        pan::origin::OriginConfig config;
        config.listen = pan::net::parse_endpoint(listen);
        if (!root.empty()) {
            config.root = root;
        }
        if (!upstream.empty()) {
            config.upstream = upstream;
        }
        if (strict_max_age >= 0) {
            config.strict_max_age_s = strict_max_age;
        }
        if (!as_text.empty()) {
            config.as_identity = pan::parse_isd_as(as_text);
        }
        if (!access_log.empty()) {
            config.access_log = access_log;
        }
        pan::origin::OriginServer server(std::move(config));
        server.start();
        pan::tools::wait_for_shutdown(signals);
        server.stop();
    } catch (const std::exception& e) {
        std::cerr << "pan-origin: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
