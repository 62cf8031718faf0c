// Copyright 2026 The Treble Toolkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "treble/bench/bench.h"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <latch>
#include <numeric>
#include <sstream>
#include <system_error>
#include <thread>

#include "treble/base/error.h"
#include "treble/demo/demo.h"
#include "treble/runtime/fmq.h"
#include "treble/runtime/serve.h"

namespace treble::bench {
namespace {

using Clock = std::chrono::steady_clock;

double ElapsedNs(Clock::time_point start, Clock::time_point end) {
  return static_cast<double>(std::chrono::duration_cast<std::chrono::nanoseconds>(end - start).count());
}

void CheckOptions(const BenchOptions& options) {
  if (options.iterations < kMinIterations) {
    throw Error(ErrorCode::kInvalidArgument,
                "iterations must be at least " + std::to_string(kMinIterations));
  }
}

void AppendSamples(const BenchOptions& options, const BenchStats& stats, const std::vector<double>& samples) {
  if (options.samples_path.empty()) {
    return;
  }
  std::ofstream out(options.samples_path, std::ios::app);
  if (!out) {
    throw Error(ErrorCode::kIoError, "cannot write " + options.samples_path);
  }
  for (size_t i = 0; i < samples.size(); ++i) {
    out << stats.scenario << ',' << stats.size << ',' << stats.concurrency << ',' << i << ','
        << static_cast<uint64_t>(samples[i]) << '\n';
  }
}

wire::TypedValue Payload(uint64_t size) { return wire::TypedValue(std::string(size, 'x')); }

}  // namespace

BenchStats Summarize(std::string scenario, uint64_t size, uint32_t concurrency,
                     const std::vector<double>& samples_ns) {
  if (samples_ns.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no samples");
  }
  BenchStats stats{std::move(scenario), size, concurrency};
  std::vector<double> sorted = samples_ns;
  std::sort(sorted.begin(), sorted.end());
  double n = static_cast<double>(sorted.size());
  stats.best_ns = sorted.front();
  stats.mean_ns = std::accumulate(sorted.begin(), sorted.end(), 0.0) / n;
  double squares = 0;
  for (double s : sorted) {
    squares += (s - stats.mean_ns) * (s - stats.mean_ns);
  }
  stats.stddev_ns = std::sqrt(squares / n);
  size_t rank = static_cast<size_t>(std::ceil(0.9 * n));
  stats.p90_ns = sorted[std::max<size_t>(rank, 1) - 1];
  stats.iterations = sorted.size();
  return stats;
}

std::vector<BenchStats> BenchRoundtrip(const ir::InterfaceSpec& echo_spec, const std::string& address,
                                       const std::vector<uint64_t>& sizes, const BenchOptions& options) {
  CheckOptions(options);
  auto proxy = runtime::ConnectProxy(echo_spec, address);
  std::vector<wire::TypedValue> payloads;
  for (uint64_t size : sizes) {
    payloads.push_back(Payload(size));
  }
  for (uint64_t w = 0; w < options.warmup; ++w) {
    for (const wire::TypedValue& payload : payloads) {
      proxy->Call("echo", {payload});
    }
  }
  std::vector<std::vector<double>> samples(sizes.size());
  for (auto& s : samples) {
    s.reserve(options.iterations);
  }
  for (uint64_t i = 0; i < options.iterations; ++i) {
    // Rotate the starting size so no size always follows another.
    for (size_t k = 0; k < sizes.size(); ++k) {
      size_t j = (k + i) % sizes.size();
      runtime::Values args{payloads[j]};
      Clock::time_point start = Clock::now();
      proxy->Call("echo", std::move(args));
      samples[j].push_back(ElapsedNs(start, Clock::now()));
    }
  }
  std::vector<BenchStats> result;
  for (size_t j = 0; j < sizes.size(); ++j) {
    result.push_back(Summarize("roundtrip", sizes[j], 1, samples[j]));
    AppendSamples(options, result.back(), samples[j]);
  }
  return result;
}

std::vector<BenchStats> BenchThroughput(const ir::InterfaceSpec& echo_spec, const std::vector<uint32_t>& pairs,
                                        uint64_t message_size, const BenchOptions& options,
                                        wire::RegistryClient* registry) {
  CheckOptions(options);
  std::vector<BenchStats> result;
  for (uint32_t count : pairs) {
    if (count == 0) {
      throw Error(ErrorCode::kInvalidArgument, "pair count must be positive");
    }
    std::vector<std::unique_ptr<runtime::Service>> services;
    std::vector<std::unique_ptr<runtime::Proxy>> proxies;
    try {
      for (uint32_t p = 0; p < count; ++p) {
        runtime::ServeOptions serve_options;
        serve_options.instance = "bench-" + std::to_string(count) + "-" + std::to_string(p);
        services.push_back(runtime::Serve(echo_spec, demo::Echo(), wire::Transport::kBinderized, registry,
                                          serve_options));
        proxies.push_back(runtime::ConnectProxy(echo_spec, services.back()->record().endpoint));
      }
    } catch (const Error& e) {
      throw Error(ErrorCode::kResourceExhausted,
                  "cannot start " + std::to_string(count) + " pairs: " + e.message());
    }

    std::vector<std::vector<double>> samples(count);
    std::vector<std::exception_ptr> failures(count);
    std::latch start_line(count);
    std::vector<std::thread> workers;
    wire::TypedValue payload = Payload(message_size);
    auto work = [&](uint32_t p) {
      try {
        samples[p].reserve(options.iterations);
        for (uint64_t w = 0; w < options.warmup; ++w) {
          proxies[p]->Call("echo", {payload});
        }
        start_line.arrive_and_wait();
        for (uint64_t i = 0; i < options.iterations; ++i) {
          runtime::Values args{payload};
          Clock::time_point start = Clock::now();
          proxies[p]->Call("echo", std::move(args));
          samples[p].push_back(ElapsedNs(start, Clock::now()));
        }
      } catch (...) {
        failures[p] = std::current_exception();
      }
    };
    try {
      for (uint32_t p = 0; p < count; ++p) {
        workers.emplace_back(work, p);
      }
    } catch (const std::system_error& e) {
      // Release the workers already waiting at the start line.
      for (size_t p = workers.size(); p < count; ++p) {
        start_line.count_down();
      }
      for (std::thread& t : workers) {
        t.join();
      }
      throw Error(ErrorCode::kResourceExhausted, std::string("cannot spawn worker: ") + e.what());
    }
    for (std::thread& t : workers) {
      t.join();
    }
    for (const std::exception_ptr& failure : failures) {
      if (failure) {
        std::rethrow_exception(failure);
      }
    }
    std::vector<double> pooled;
    for (const auto& s : samples) {
      pooled.insert(pooled.end(), s.begin(), s.end());
    }
    result.push_back(Summarize("throughput", message_size, count, pooled));
    AppendSamples(options, result.back(), pooled);
  }
  return result;
}

std::vector<BenchStats> BenchFmq(const std::vector<uint64_t>& sizes, const BenchOptions& options) {
  CheckOptions(options);
  std::vector<BenchStats> result;
  for (uint64_t size : sizes) {
    uint64_t capacity = std::bit_ceil(std::max<uint64_t>(2 * size, 4096));
    if (capacity > (uint64_t{1} << 30)) {
      throw Error(ErrorCode::kInvalidArgument, "message too large for a queue");
    }
    runtime::FastQueue queue = runtime::FastQueue::Create(static_cast<uint32_t>(capacity));
    std::vector<uint8_t> message(size, 0x5a);
    std::vector<uint8_t> buffer(size);
    std::vector<double> samples;
    samples.reserve(options.iterations);
    for (uint64_t i = 0; i < options.warmup + options.iterations; ++i) {
      queue.Write(message);
      Clock::time_point start = Clock::now();
      size_t read = queue.Read(buffer);
      Clock::time_point end = Clock::now();
      if (read != size) {
        throw Error(ErrorCode::kIoError, "short queue read");
      }
      if (i >= options.warmup) {
        samples.push_back(ElapsedNs(start, end));
      }
    }
    result.push_back(Summarize("fmq", size, 1, samples));
    AppendSamples(options, result.back(), samples);
  }
  return result;
}

std::string ToCsv(const std::vector<BenchStats>& stats) {
  std::ostringstream out;
  out << kCsvHeader << '\n';
  for (const BenchStats& s : stats) {
    out << s.scenario << ',' << s.size << ',' << s.concurrency << ',' << static_cast<uint64_t>(s.best_ns) << ','
        << static_cast<uint64_t>(s.mean_ns) << ',' << static_cast<uint64_t>(s.stddev_ns) << ','
        << static_cast<uint64_t>(s.p90_ns) << ',' << s.iterations << '\n';
  }
  return out.str();
}

std::string ToTable(const std::vector<BenchStats>& stats) {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof line, "%-11s %9s %5s %12s %12s %12s %12s %8s\n", "scenario", "size", "pairs",
                "best_us", "mean_us", "stddev_us", "p90_us", "iters");
  out << line;
  for (const BenchStats& s : stats) {
    std::snprintf(line, sizeof line, "%-11s %9llu %5u %12.3f %12.3f %12.3f %12.3f %8llu\n", s.scenario.c_str(),
                  static_cast<unsigned long long>(s.size), s.concurrency, s.best_ns / 1000, s.mean_ns / 1000,
                  s.stddev_ns / 1000, s.p90_ns / 1000, static_cast<unsigned long long>(s.iterations));
    out << line;
  }
  return out.str();
}

}  // namespace treble::bench
