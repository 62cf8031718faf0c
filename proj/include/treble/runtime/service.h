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

#ifndef TREBLE_RUNTIME_SERVICE_H_
#define TREBLE_RUNTIME_SERVICE_H_

#include <atomic>
#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "treble/ir/interface_spec.h"
#include "treble/wire/codec.h"

namespace treble::runtime {

using Values = std::vector<wire::TypedValue>;

// Delivers EVENT messages to one client.
class EventSink {
 public:
  virtual ~EventSink() = default;
  // False once the client is gone.
  virtual bool Emit(const wire::WireMessage& event) = 0;
};

// Server-side reference to a callback object the client passed as an
// interface-typed argument.
class CallbackRef {
 public:
  CallbackRef() = default;
  CallbackRef(std::shared_ptr<EventSink> sink, uint64_t id, std::string fqname);

  // False for the null handle.
  bool valid() const { return sink_ && id_ != 0; }
  uint64_t id() const { return id_; }
  const std::string& fqname() const { return fqname_; }

  // Invokes `method` on the client's callback. False when the client is gone
  // or the handle is null.
  bool Emit(const std::string& method, Values values) const;

 private:
  std::shared_ptr<EventSink> sink_;
  uint64_t id_ = 0;
  std::string fqname_;
};

class CallContext {
 public:
  CallContext(const ir::ApiSpec& api, const Values& args, std::shared_ptr<EventSink> sink);

  const ir::ApiSpec& api() const { return api_; }
  // The callback passed as argument `index`, which must be interface-typed.
  CallbackRef Callback(size_t index) const;

 private:
  const ir::ApiSpec& api_;
  const Values& args_;
  std::shared_ptr<EventSink> sink_;
};

// Thrown by a handler to simulate the service process dying mid-call: a
// binderized host drops the client connection without replying.
class ServiceCrash : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Handler = std::function<Values(CallContext&, const Values& args)>;

// Method table of a HAL implementation. Oneway handlers return {}.
class Implementation {
 public:
  Implementation& On(std::string method, Handler handler);
  const Handler* Find(std::string_view method) const;
  std::vector<std::string> Methods() const;

 private:
  std::map<std::string, Handler, std::less<>> handlers_;
};

// Reserved method answering the number of attached clients.
inline constexpr char kClientCountMethod[] = "__client_count";

// A spec bound to a complete implementation. Immutable once built; Dispatch
// may be called concurrently.
class ServiceHost {
 public:
  // Throws Error(kIncompleteImplementation) naming every api without a
  // handler.
  ServiceHost(ir::InterfaceSpec spec, Implementation implementation);

  const ir::InterfaceSpec& spec() const { return spec_; }

  // Requests may name this interface at the same major and any minor up to
  // the served one. Throws Error(kPackageMismatch) otherwise.
  void CheckClient(std::string_view fqname) const;

  // Validates arguments, runs the handler and validates its results.
  // Throws Error(kUnknownMethod), Error(kTypeMismatch), or whatever the
  // handler throws.
  Values Dispatch(std::string_view method, const Values& args, std::shared_ptr<EventSink> sink) const;

  void Attach() { clients_.fetch_add(1); }
  void Detach() { clients_.fetch_sub(1); }
  uint32_t clients() const { return static_cast<uint32_t>(clients_.load()); }

 private:
  ir::InterfaceSpec spec_;
  Implementation implementation_;
  std::atomic<int> clients_{0};
};

}  // namespace treble::runtime

#endif  // TREBLE_RUNTIME_SERVICE_H_
