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

#ifndef TREBLE_BENCH_BENCH_H_
#define TREBLE_BENCH_BENCH_H_

#include <cstdint>
#include <string>
#include <vector>

#include "treble/ir/interface_spec.h"
#include "treble/wire/registry.h"

namespace treble::bench {

struct BenchStats {
  std::string scenario;
  uint64_t size = 0;
  uint32_t concurrency = 1;
  double best_ns = 0;
  double mean_ns = 0;
  double stddev_ns = 0;
  double p90_ns = 0;
  uint64_t iterations = 0;

  bool heavy_tail() const { return p90_ns >= mean_ns; }
};

// Population statistics; p90 is the nearest-rank percentile.
BenchStats Summarize(std::string scenario, uint64_t size, uint32_t concurrency,
                     const std::vector<double>& samples_ns);

struct BenchOptions {
  uint64_t iterations = 1000;
  uint64_t warmup = 100;
  // When set, every timed sample is appended here as
  // `scenario,size,concurrency,index,ns`.
  std::string samples_path;
};

inline constexpr uint64_t kMinIterations = 100;

// Times IEcho.echo with string payloads of each size. Sizes are interleaved
// within every round so drift hits them alike. Throws
// Error(kInvalidArgument) for fewer than kMinIterations iterations and
// Error(kServiceUnavailable) when nothing serves `address`.
std::vector<BenchStats> BenchRoundtrip(const ir::InterfaceSpec& echo_spec, const std::string& address,
                                       const std::vector<uint64_t>& sizes, const BenchOptions& options);

// For each count N, starts N binderized echo services and N client threads
// that run concurrently; reports the pooled per-call latency. Services are
// registered when `registry` is set. Throws Error(kResourceExhausted) when a
// pair cannot be started.
std::vector<BenchStats> BenchThroughput(const ir::InterfaceSpec& echo_spec, const std::vector<uint32_t>& pairs,
                                        uint64_t message_size, const BenchOptions& options,
                                        wire::RegistryClient* registry = nullptr);

// FastQueue read latency of one pre-written message per sample.
std::vector<BenchStats> BenchFmq(const std::vector<uint64_t>& sizes, const BenchOptions& options);

inline constexpr char kCsvHeader[] = "scenario,size,concurrency,best_ns,mean_ns,stddev_ns,p90_ns,iters";
std::string ToCsv(const std::vector<BenchStats>& stats);
std::string ToTable(const std::vector<BenchStats>& stats);

}  // namespace treble::bench

#endif  // TREBLE_BENCH_BENCH_H_
