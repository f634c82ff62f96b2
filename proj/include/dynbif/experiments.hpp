#pragma once

// Experiment dispatch behind the command-line tool. Every run writes
// manifest.txt (config echo, version, platform), summary.txt and its CSV or
// binary artifacts into the configured output directory.

#include "dynbif/config.hpp"

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

namespace dynbif {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;
constexpr int kExitCheckFailed = 4;

std::string version_string();
std::string platform_fingerprint();
std::string manifest_text(const ExperimentConfig& c);

// Runs the configured experiment; returns kExitOk or kExitCheckFailed.
// Configuration inconsistencies throw ConfigError, everything else propagates.
int run_experiment(const ExperimentConfig& c, std::ostream& log);

int resolve_workers(int requested);

// Runs body(i) for i in [0, n) on at most `workers` threads. Each index runs
// exactly once; the first exception (lowest index) is rethrown after all
// workers finish.
template <class Body>
void parallel_for(std::size_t n, int workers, Body body)
{
    const std::size_t threads = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, workers)));
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                body(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (threads <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(work);
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace dynbif
