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

#ifndef TREBLE_TESTKIT_PROFILER_H_
#define TREBLE_TESTKIT_PROFILER_H_

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "treble/runtime/proxy.h"

namespace treble::testkit {

inline constexpr char kTraceHeader[] = "treble-trace v1";

struct TraceRecord {
  // Since the start of the profiling session.
  uint64_t ts_ns = 0;
  std::string fqname;
  std::string method;
  // Encoded size of the request message.
  uint64_t req_bytes = 0;
  uint64_t latency_ns = 0;
  // OK, or the error code name.
  std::string status;

  std::string ToLine() const;
  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

// Parses a whole trace file. Throws Error(kSpecSyntaxError).
std::vector<TraceRecord> ParseTrace(std::string_view text);

// Forwards every call to `inner` unchanged and appends one record per call
// to `out`. The header is written on construction.
class ProfilingProxy : public runtime::Proxy {
 public:
  ProfilingProxy(std::unique_ptr<runtime::Proxy> inner, std::ostream& out);

  wire::Handle RegisterCallback(ir::InterfaceSpec callback_spec, runtime::EventHandlers handlers) override;
  void UnregisterCallback(wire::Handle handle) override;
  uint32_t ClientCount() override { return inner_->ClientCount(); }
  wire::Transport transport() const override { return inner_->transport(); }
  size_t records() const { return records_; }

 protected:
  runtime::Values Invoke(const ir::ApiSpec& api, runtime::Values args) override;

 private:
  std::unique_ptr<runtime::Proxy> inner_;
  std::ostream& out_;
  std::mutex mutex_;
  std::chrono::steady_clock::time_point start_;
  size_t records_ = 0;
};

// What one test module exercised.
struct ModuleTrace {
  std::string name;
  double duration_s = 0;
  // fqname -> trace bytes.
  std::map<std::string, uint64_t> hal_bytes;
};

// Trace bytes per fqname: the summed length of each record's line.
std::map<std::string, uint64_t> TraceSizes(const std::vector<TraceRecord>& records);

struct Candidate {
  std::string name;
  double duration_s = 0;
  // Sum over touched HALs of min(module bytes, noise bytes).
  uint64_t overlap = 0;

  friend bool operator==(const Candidate&, const Candidate&) = default;
};

// Modules whose every touched HAL (nonzero bytes) also appears in `noise`
// at a size ratio module/noise within [0.1, 10]. Ranked by duration
// descending, then overlap descending, then name. The caller decides.
std::vector<Candidate> SelectRemovable(const std::vector<ModuleTrace>& modules,
                                       const std::map<std::string, uint64_t>& noise);

// `module: { name: "m" duration_s: "1.5" hal: { fqname: "..." bytes: "123" } }`
// and `noise: { fqname: "..." bytes: "123" }` blocks. Throws
// Error(kSpecSyntaxError).
struct SelectionInput {
  std::vector<ModuleTrace> modules;
  std::map<std::string, uint64_t> noise;
};
SelectionInput ParseSelectionInput(std::string_view text);

}  // namespace treble::testkit

#endif  // TREBLE_TESTKIT_PROFILER_H_
