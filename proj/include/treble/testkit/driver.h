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

#ifndef TREBLE_TESTKIT_DRIVER_H_
#define TREBLE_TESTKIT_DRIVER_H_

#include <memory>
#include <string>
#include <vector>

#include "treble/ir/interface_spec.h"
#include "treble/runtime/proxy.h"
#include "treble/wire/codec.h"

namespace treble::testkit {

// Runs a CALL (or ONEWAY) message through `proxy` and answers it the way a
// service would: RETURN with the results, or ERROR [code, detail] when the
// service reported an error. Throws Error(kUnknownMethod),
// Error(kTypeMismatch), Error(kTransportError) or Error(kTimeout); nothing is
// dispatched when the request does not fit the spec.
wire::WireMessage Drive(runtime::Proxy& proxy, const wire::WireMessage& request);

// A proxy bound to one service, driving requests against it.
class Driver {
 public:
  // Throws Error(kServiceUnavailable).
  Driver(const ir::InterfaceSpec& spec, const std::string& address, runtime::ProxyOptions options = {});

  wire::WireMessage Drive(const wire::WireMessage& request) { return testkit::Drive(*proxy_, request); }
  runtime::Proxy& proxy() { return *proxy_; }

 private:
  std::unique_ptr<runtime::Proxy> proxy_;
};

// A CALL (ONEWAY for oneway apis) to `method` of `spec`.
wire::WireMessage MakeRequest(const ir::InterfaceSpec& spec, const std::string& method, runtime::Values args);

// Per-api result of a structural test.
struct StructuralCase {
  std::string method;
  bool passed = false;
  std::string detail;
};

struct StructuralReport {
  std::string fqname;
  // Set when isolation was requested and another client was attached; no
  // apis are run then.
  std::string isolation_violation;
  std::vector<StructuralCase> cases;

  bool passed() const;
  std::string ToText() const;
};

// Calls every api once with default arguments (zeros, empty strings and
// vectors, first enumerators, null handles) and checks that the call
// completes with conforming results. With `isolation`, first verifies that
// no other client is attached to the service. Throws
// Error(kServiceUnavailable).
StructuralReport StructuralTest(const ir::InterfaceSpec& spec, const std::string& address, bool isolation);

}  // namespace treble::testkit

#endif  // TREBLE_TESTKIT_DRIVER_H_
