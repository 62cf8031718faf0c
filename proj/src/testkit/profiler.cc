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

#include "treble/testkit/profiler.h"

#include <algorithm>
#include <charconv>
#include <cstdlib>

#include "treble/base/error.h"
#include "treble/base/strings.h"
#include "treble/ir/block_text.h"
#include "treble/wire/codec.h"

namespace treble::testkit {
namespace {

uint64_t ParseU64(std::string_view text, const std::string& what) {
  uint64_t value = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size() || text.empty()) {
    throw Error(ErrorCode::kSpecSyntaxError, "bad " + what + " \"" + std::string(text) + "\"");
  }
  return value;
}

}  // namespace

std::string TraceRecord::ToLine() const {
  return std::to_string(ts_ns) + "\t" + fqname + "\t" + method + "\t" + std::to_string(req_bytes) + "\t" +
         std::to_string(latency_ns) + "\t" + status;
}

std::vector<TraceRecord> ParseTrace(std::string_view text) {
  std::vector<std::string> lines = Split(text, '\n');
  if (lines.empty() || lines[0] != kTraceHeader) {
    throw Error(ErrorCode::kSpecSyntaxError, std::string("trace must start with \"") + kTraceHeader + "\"");
  }
  std::vector<TraceRecord> records;
  for (size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) {
      continue;
    }
    std::vector<std::string> cols = Split(lines[i], '\t');
    std::string where = "trace line " + std::to_string(i + 1);
    if (cols.size() != 6) {
      throw Error(ErrorCode::kSpecSyntaxError, where + ": expected 6 columns");
    }
    TraceRecord r;
    r.ts_ns = ParseU64(cols[0], where + " timestamp");
    r.fqname = cols[1];
    r.method = cols[2];
    r.req_bytes = ParseU64(cols[3], where + " size");
    r.latency_ns = ParseU64(cols[4], where + " latency");
    r.status = cols[5];
    records.push_back(std::move(r));
  }
  return records;
}

ProfilingProxy::ProfilingProxy(std::unique_ptr<runtime::Proxy> inner, std::ostream& out)
    : Proxy(inner->spec()), inner_(std::move(inner)), out_(out), start_(std::chrono::steady_clock::now()) {
  out_ << kTraceHeader << "\n";
  out_.flush();
}

wire::Handle ProfilingProxy::RegisterCallback(ir::InterfaceSpec callback_spec, runtime::EventHandlers handlers) {
  return inner_->RegisterCallback(std::move(callback_spec), std::move(handlers));
}

void ProfilingProxy::UnregisterCallback(wire::Handle handle) { inner_->UnregisterCallback(handle); }

runtime::Values ProfilingProxy::Invoke(const ir::ApiSpec& api, runtime::Values args) {
  TraceRecord record;
  record.fqname = spec().fqname().ToString();
  record.method = api.name;
  wire::WireMessage request;
  request.kind = api.oneway ? wire::MessageKind::kOneway : wire::MessageKind::kCall;
  request.fqname = record.fqname;
  request.method = api.name;
  request.values = args;
  record.req_bytes = wire::Encode(request).size();

  auto begin = std::chrono::steady_clock::now();
  auto finish = [&](std::string status) {
    auto end = std::chrono::steady_clock::now();
    record.ts_ns = static_cast<uint64_t>(std::chrono::duration_cast<std::chrono::nanoseconds>(begin - start_).count());
    record.latency_ns = static_cast<uint64_t>(std::chrono::duration_cast<std::chrono::nanoseconds>(end - begin).count());
    record.status = std::move(status);
    std::lock_guard<std::mutex> lock(mutex_);
    out_ << record.ToLine() << "\n";
    out_.flush();
    ++records_;
  };
  try {
    runtime::Values results = inner_->Call(api.name, std::move(args));
    finish("OK");
    return results;
  } catch (const RemoteError& e) {
    finish(e.remote_code());
    throw;
  } catch (const Error& e) {
    finish(std::string(ErrorCodeName(e.code())));
    throw;
  }
}

std::map<std::string, uint64_t> TraceSizes(const std::vector<TraceRecord>& records) {
  std::map<std::string, uint64_t> sizes;
  for (const TraceRecord& r : records) {
    sizes[r.fqname] += r.ToLine().size() + 1;
  }
  return sizes;
}

std::vector<Candidate> SelectRemovable(const std::vector<ModuleTrace>& modules,
                                       const std::map<std::string, uint64_t>& noise) {
  std::vector<Candidate> out;
  for (const ModuleTrace& module : modules) {
    bool ok = true;
    uint64_t overlap = 0;
    for (const auto& [hal, bytes] : module.hal_bytes) {
      if (bytes == 0) {
        continue;
      }
      auto it = noise.find(hal);
      if (it == noise.end() || it->second == 0) {
        ok = false;
        break;
      }
      // ratio = bytes / noise within [0.1, 10], in integers.
      if (bytes * 10 < it->second || bytes > it->second * 10) {
        ok = false;
        break;
      }
      overlap += std::min(bytes, it->second);
    }
    if (ok) {
      out.push_back({module.name, module.duration_s, overlap});
    }
  }
  std::sort(out.begin(), out.end(), [](const Candidate& a, const Candidate& b) {
    if (a.duration_s != b.duration_s) return a.duration_s > b.duration_s;
    if (a.overlap != b.overlap) return a.overlap > b.overlap;
    return a.name < b.name;
  });
  return out;
}

SelectionInput ParseSelectionInput(std::string_view text) {
  ir::BlockNode root = ir::ParseBlockText(text);
  root.CheckKeys({"module", "noise"});
  SelectionInput input;
  auto hal_entry = [](const ir::BlockNode& node) {
    node.CheckKeys({"fqname", "bytes"});
    return std::pair(node.RequireQuoted("fqname"), ParseU64(node.RequireQuoted("bytes"), "bytes"));
  };
  for (const ir::BlockField* field : root.FindAll("module")) {
    ir::BlockNode node = ir::BlockNode::Of(*field);
    node.CheckKeys({"name", "duration_s", "hal"});
    ModuleTrace module;
    module.name = node.RequireQuoted("name");
    const std::string& duration = node.RequireQuoted("duration_s");
    char* end = nullptr;
    module.duration_s = std::strtod(duration.c_str(), &end);
    if (duration.empty() || *end != '\0' || module.duration_s < 0) {
      throw Error(ErrorCode::kSpecSyntaxError, "line " + std::to_string(field->line) + ": bad duration");
    }
    for (const ir::BlockField* hal : node.FindAll("hal")) {
      auto [name, bytes] = hal_entry(ir::BlockNode::Of(*hal));
      module.hal_bytes[name] += bytes;
    }
    input.modules.push_back(std::move(module));
  }
  for (const ir::BlockField* field : root.FindAll("noise")) {
    auto [name, bytes] = hal_entry(ir::BlockNode::Of(*field));
    input.noise[name] += bytes;
  }
  return input;
}

}  // namespace treble::testkit
