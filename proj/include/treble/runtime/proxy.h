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

#ifndef TREBLE_RUNTIME_PROXY_H_
#define TREBLE_RUNTIME_PROXY_H_

#include <chrono>
#include <condition_variable>
#include <deque>
#include <functional>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <thread>

#include "treble/runtime/service.h"
#include "treble/wire/registry.h"
#include "treble/wire/transport.h"

namespace treble::runtime {

using EventHandler = std::function<void(const Values&)>;
// Keyed by callback method name.
using EventHandlers = std::map<std::string, EventHandler, std::less<>>;

// Client-side callback objects, addressed by handle id.
class CallbackTable {
 public:
  wire::Handle Add(ir::InterfaceSpec spec, EventHandlers handlers);
  void Remove(wire::Handle handle);

  // Runs the handler for one EVENT. Events for unknown handles, unknown
  // methods or with non-conforming values are counted and dropped.
  bool Dispatch(const wire::WireMessage& event);
  uint64_t dropped() const { return dropped_.load(); }

 private:
  struct Entry {
    ir::InterfaceSpec spec;
    EventHandlers handlers;
  };

  std::mutex mutex_;
  uint64_t next_id_ = 1;
  std::map<uint64_t, std::shared_ptr<const Entry>> entries_;
  std::atomic<uint64_t> dropped_{0};
};

// Client end of one interface. Not shareable between concurrent callers.
class Proxy {
 public:
  explicit Proxy(ir::InterfaceSpec spec);
  virtual ~Proxy() = default;

  const ir::InterfaceSpec& spec() const { return spec_; }

  // Checks the method and argument shapes before anything is sent.
  // Throws Error(kUnknownMethod), Error(kTypeMismatch), Error(kTransportError),
  // Error(kTimeout) or RemoteError. Oneway calls return {} without waiting for
  // the server.
  Values Call(std::string_view method, Values args);

  // Returns a handle to pass as an interface-typed argument. Handlers run on
  // the proxy's event thread and must not call back into this proxy.
  virtual wire::Handle RegisterCallback(ir::InterfaceSpec callback_spec, EventHandlers handlers);
  virtual void UnregisterCallback(wire::Handle handle);

  // Clients attached to the service, this one included.
  virtual uint32_t ClientCount() = 0;
  virtual wire::Transport transport() const = 0;

 protected:
  // `args` already conform to `api`.
  virtual Values Invoke(const ir::ApiSpec& api, Values args) = 0;

  std::shared_ptr<CallbackTable> callbacks_ = std::make_shared<CallbackTable>();

 private:
  ir::InterfaceSpec spec_;
};

struct ProxyOptions {
  // Two-way calls give up with Error(kTimeout) after this long.
  std::optional<std::chrono::milliseconds> call_timeout;
};

class RemoteProxy : public Proxy {
 public:
  // Throws Error(kServiceUnavailable) when nothing listens at `endpoint`.
  RemoteProxy(ir::InterfaceSpec spec, const wire::Endpoint& endpoint, ProxyOptions options = {});
  ~RemoteProxy() override;

  uint32_t ClientCount() override;
  wire::Transport transport() const override { return wire::Transport::kBinderized; }
  // False once the connection dropped.
  bool connected() const { return !broken_.load(); }

 protected:
  Values Invoke(const ir::ApiSpec& api, Values args) override;

 private:
  wire::WireMessage Roundtrip(wire::WireMessage request);
  void ReadLoop();
  void FailPending(const std::string& reason);

  ProxyOptions options_;
  wire::Connection connection_;
  std::atomic<bool> broken_{false};
  std::mutex mutex_;
  uint64_t next_id_ = 1;
  std::map<uint64_t, std::promise<wire::WireMessage>> pending_;
  std::string broken_reason_;
  std::thread reader_;
};

// In-process binding to a pass-through service: calls are direct function
// calls; oneway calls run in order on a per-proxy worker thread.
class PassthroughProxy : public Proxy {
 public:
  PassthroughProxy(ir::InterfaceSpec spec, std::shared_ptr<ServiceHost> host);
  ~PassthroughProxy() override;

  uint32_t ClientCount() override { return host_->clients(); }
  wire::Transport transport() const override { return wire::Transport::kPassthrough; }

 protected:
  Values Invoke(const ir::ApiSpec& api, Values args) override;

 private:
  void WorkLoop();

  std::shared_ptr<ServiceHost> host_;
  std::shared_ptr<EventSink> sink_;
  std::mutex mutex_;
  std::condition_variable cv_;
  std::deque<std::function<void()>> oneway_queue_;
  bool stopping_ = false;
  std::thread worker_;
};

// Binds to the service at `address` (unix:, tcp: or inproc:). Throws
// Error(kServiceUnavailable).
std::unique_ptr<Proxy> ConnectProxy(const ir::InterfaceSpec& spec, const std::string& address,
                                    ProxyOptions options = {});

// Looks `spec`'s interface up in the registry and binds to the selected
// record. Throws Error(kNotFound) or Error(kServiceUnavailable).
std::unique_ptr<Proxy> GetService(wire::RegistryClient& registry, const ir::InterfaceSpec& spec,
                                  const std::string& instance = "default", ProxyOptions options = {});

}  // namespace treble::runtime

#endif  // TREBLE_RUNTIME_PROXY_H_
