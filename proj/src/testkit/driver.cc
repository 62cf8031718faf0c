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

#include "treble/testkit/driver.h"

#include "treble/base/error.h"
#include "treble/wire/conformance.h"

namespace treble::testkit {

wire::WireMessage Drive(runtime::Proxy& proxy, const wire::WireMessage& request) {
  if (request.kind != wire::MessageKind::kCall && request.kind != wire::MessageKind::kOneway) {
    throw Error(ErrorCode::kInvalidArgument,
                "cannot drive a " + std::string(wire::MessageKindName(request.kind)) + " message");
  }
  wire::WireMessage reply;
  reply.kind = wire::MessageKind::kReturn;
  reply.correlation_id = request.correlation_id;
  reply.fqname = request.fqname;
  reply.method = request.method;
  try {
    reply.values = proxy.Call(request.method, request.values);
  } catch (const RemoteError& e) {
    return wire::MakeError(request.correlation_id, e.remote_code(), e.detail());
  }
  return reply;
}

Driver::Driver(const ir::InterfaceSpec& spec, const std::string& address, runtime::ProxyOptions options)
    : proxy_(runtime::ConnectProxy(spec, address, options)) {}

wire::WireMessage MakeRequest(const ir::InterfaceSpec& spec, const std::string& method, runtime::Values args) {
  const ir::ApiSpec* api = spec.FindApi(method);
  wire::WireMessage request;
  request.kind = api && api->oneway ? wire::MessageKind::kOneway : wire::MessageKind::kCall;
  request.fqname = spec.fqname().ToString();
  request.method = method;
  request.values = std::move(args);
  return request;
}

bool StructuralReport::passed() const {
  if (!isolation_violation.empty()) {
    return false;
  }
  for (const StructuralCase& c : cases) {
    if (!c.passed) {
      return false;
    }
  }
  return true;
}

std::string StructuralReport::ToText() const {
  std::string out;
  if (!isolation_violation.empty()) {
    out += "ISOLATION_VIOLATION " + fqname + ": " + isolation_violation + "\n";
  }
  for (const StructuralCase& c : cases) {
    out += std::string(c.passed ? "PASS " : "FAIL ") + c.method;
    if (!c.detail.empty()) {
      out += ": " + c.detail;
    }
    out += "\n";
  }
  return out + (passed() ? "PASSED" : "FAILED") + "\n";
}

StructuralReport StructuralTest(const ir::InterfaceSpec& spec, const std::string& address, bool isolation) {
  StructuralReport report;
  report.fqname = spec.fqname().ToString();
  auto proxy = runtime::ConnectProxy(spec, address);
  if (isolation) {
    uint32_t clients = proxy->ClientCount();
    if (clients > 1) {
      report.isolation_violation = std::to_string(clients - 1) + " other client(s) attached";
      return report;
    }
  }
  for (const ir::ApiSpec& api : spec.apis) {
    StructuralCase result;
    result.method = api.name;
    runtime::Values args;
    for (const ir::VarSpec& arg : api.args) {
      args.push_back(wire::DefaultValue(arg));
    }
    try {
      runtime::Values returns = proxy->Call(api.name, std::move(args));
      result.passed = true;
      if (!api.oneway) {
        result.detail = std::to_string(returns.size()) + " value(s)";
      }
    } catch (const Error& e) {
      result.detail = e.what();
      if (e.code() == ErrorCode::kTransportError || e.code() == ErrorCode::kTimeout) {
        // The service may be gone; later apis get a fresh connection.
        try {
          proxy = runtime::ConnectProxy(spec, address);
        } catch (const Error&) {
        }
      }
    }
    report.cases.push_back(std::move(result));
  }
  return report;
}

}  // namespace treble::testkit
