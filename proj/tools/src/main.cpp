// Copyright 2026 The qvolume Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <atomic>
#include <csignal>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "qvolume_cli/cli.hpp"

namespace {

std::atomic<bool> g_cancel{false};

extern "C" void on_interrupt(int) {
    // A second interrupt falls back to the default action and terminates at once.
    g_cancel.store(true);
    std::signal(SIGINT, SIG_DFL);
}

}  // namespace

int main(int argc, char **argv) {
    static_assert(std::atomic<bool>::is_always_lock_free);
    std::signal(SIGINT, on_interrupt);
    std::signal(SIGTERM, on_interrupt);
    std::vector<std::string> args(argv + 1, argv + argc);
    std::optional<std::string> env_seed;
    if (const char *s = std::getenv("QVOLUME_SEED")) {
        env_seed = s;
    }
    return qvolume::cli::main_with_args(args, env_seed, {std::cin, std::cout, std::cerr}, &g_cancel);
}
