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

#include "treble/runtime/proxy.h"

#include "treble/base/error.h"
#include "treble/runtime/serve.h"
#include "treble/wire/conformance.h"

namespace treble::runtime {
namespace {

// Routes server emissions straight into the client's callback table.
class DirectSink : public EventSink {
 public:
  explicit DirectSink(std::weak_ptr<CallbackTable> table) : table_(std::move(table)) {}

  bool Emit(const wire::WireMessage& event) override {
    auto table = table_.lock();
    if (!table) {
      return false;
    }
    table->Dispatch(event);
    return true;
  }

 private:
  std::weak_ptr<CallbackTable> table_;
};

}  // namespace

wire::Handle CallbackTable::Add(ir::InterfaceSpec spec, EventHandlers handlers) {
  std::lock_guard<std::mutex> lock(mutex_);
  uint64_t id = next_id_++;
  entries_[id] = std::make_shared<const Entry>(Entry{std::move(spec), std::move(handlers)});
  return wire::Handle{id};
}

void CallbackTable::Remove(wire::Handle handle) {
  std::lock_guard<std::mutex> lock(mutex_);
  entries_.erase(handle.id);
}

bool CallbackTable::Dispatch(const wire::WireMessage& event) {
  std::shared_ptr<const Entry> entry;
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = entries_.find(event.correlation_id);
    if (it != entries_.end()) {
      entry = it->second;
    }
  }
  const ir::ApiSpec* api = entry ? entry->spec.FindApi(event.method) : nullptr;
  auto handler = entry ? entry->handlers.find(event.method) : EventHandlers::const_iterator{};
  if (!api || handler == entry->handlers.end()) {
    dropped_.fetch_add(1);
    return false;
  }
  try {
    wire::CheckValues(api->args, event.values, api->name);
  } catch (const Error&) {
    dropped_.fetch_add(1);
    return false;
  }
  handler->second(event.values);
  return true;
}

Proxy::Proxy(ir::InterfaceSpec spec) : spec_(std::move(spec)) {}

Values Proxy::Call(std::string_view method, Values args) {
  const ir::ApiSpec* api = spec_.FindApi(method);
  if (!api) {
    throw Error(ErrorCode::kUnknownMethod, spec_.fqname().ToString() + "::" + std::string(method));
  }
  wire::CheckValues(api->args, args, api->name);
  Values results = Invoke(*api, std::move(args));
  if (!api->oneway) {
    wire::CheckValues(api->returns, results, api->name + " results");
  }
  return results;
}

wire::Handle Proxy::RegisterCallback(ir::InterfaceSpec callback_spec, EventHandlers handlers) {
  return callbacks_->Add(std::move(callback_spec), std::move(handlers));
}

void Proxy::UnregisterCallback(wire::Handle handle) { callbacks_->Remove(handle); }

RemoteProxy::RemoteProxy(ir::InterfaceSpec spec, const wire::Endpoint& endpoint, ProxyOptions options)
    : Proxy(std::move(spec)), options_(options) {
  try {
    connection_ = wire::Connection::Connect(endpoint);
  } catch (const Error& e) {
    throw Error(ErrorCode::kServiceUnavailable, e.message());
  }
  reader_ = std::thread([this] { ReadLoop(); });
}

RemoteProxy::~RemoteProxy() {
  connection_.Shutdown();
  reader_.join();
}

void RemoteProxy::ReadLoop() {
  std::string reason = "connection closed by service";
  try {
    while (auto message = connection_.Receive()) {
      if (message->kind == wire::MessageKind::kEvent) {
        callbacks_->Dispatch(*message);
        continue;
      }
      if (message->kind != wire::MessageKind::kReturn && message->kind != wire::MessageKind::kError) {
        continue;
      }
      std::lock_guard<std::mutex> lock(mutex_);
      auto it = pending_.find(message->correlation_id);
      if (it != pending_.end()) {
        it->second.set_value(std::move(*message));
        pending_.erase(it);
      }
    }
  } catch (const Error& e) {
    reason = e.what();
  }
  FailPending(reason);
}

void RemoteProxy::FailPending(const std::string& reason) {
  std::lock_guard<std::mutex> lock(mutex_);
  broken_ = true;
  broken_reason_ = reason;
  for (auto& [id, promise] : pending_) {
    promise.set_exception(std::make_exception_ptr(Error(ErrorCode::kTransportError, reason)));
  }
  pending_.clear();
}

wire::WireMessage RemoteProxy::Roundtrip(wire::WireMessage request) {
  std::future<wire::WireMessage> reply;
  {
    std::lock_guard<std::mutex> lock(mutex_);
    if (broken_) {
      throw Error(ErrorCode::kTransportError, broken_reason_);
    }
    request.correlation_id = next_id_++;
    reply = pending_[request.correlation_id].get_future();
  }
  try {
    connection_.Send(request);
  } catch (const Error&) {
    std::lock_guard<std::mutex> lock(mutex_);
    pending_.erase(request.correlation_id);
    throw;
  }
  if (options_.call_timeout && reply.wait_for(*options_.call_timeout) != std::future_status::ready) {
    std::lock_guard<std::mutex> lock(mutex_);
    if (pending_.erase(request.correlation_id) > 0) {
      throw Error(ErrorCode::kTimeout, request.method + " did not answer within " +
                                           std::to_string(options_.call_timeout->count()) + " ms");
    }
  }
  wire::WireMessage message = reply.get();
  if (message.kind == wire::MessageKind::kError) {
    auto [code, detail] = wire::ErrorParts(message);
    throw RemoteError(code, detail);
  }
  return message;
}

Values RemoteProxy::Invoke(const ir::ApiSpec& api, Values args) {
  wire::WireMessage request;
  request.fqname = spec().fqname().ToString();
  request.method = api.name;
  request.values = std::move(args);
  if (api.oneway) {
    request.kind = wire::MessageKind::kOneway;
    {
      std::lock_guard<std::mutex> lock(mutex_);
      if (broken_) {
        throw Error(ErrorCode::kTransportError, broken_reason_);
      }
      request.correlation_id = next_id_++;
    }
    connection_.Send(request);
    return {};
  }
  request.kind = wire::MessageKind::kCall;
  return Roundtrip(std::move(request)).values;
}

uint32_t RemoteProxy::ClientCount() {
  wire::WireMessage request;
  request.kind = wire::MessageKind::kCall;
  request.fqname = spec().fqname().ToString();
  request.method = kClientCountMethod;
  wire::WireMessage reply = Roundtrip(std::move(request));
  if (reply.values.size() != 1 || !reply.values[0].get_if<uint32_t>()) {
    throw Error(ErrorCode::kProtocolMismatch, "malformed client count");
  }
  return reply.values[0].as<uint32_t>();
}

PassthroughProxy::PassthroughProxy(ir::InterfaceSpec spec, std::shared_ptr<ServiceHost> host)
    : Proxy(std::move(spec)), host_(std::move(host)), sink_(std::make_shared<DirectSink>(callbacks_)) {
  host_->CheckClient(this->spec().fqname().ToString());
  host_->Attach();
  worker_ = std::thread([this] { WorkLoop(); });
}

PassthroughProxy::~PassthroughProxy() {
  {
    std::lock_guard<std::mutex> lock(mutex_);
    stopping_ = true;
  }
  cv_.notify_all();
  worker_.join();
  host_->Detach();
}

void PassthroughProxy::WorkLoop() {
  std::unique_lock<std::mutex> lock(mutex_);
  while (true) {
    cv_.wait(lock, [this] { return stopping_ || !oneway_queue_.empty(); });
    if (oneway_queue_.empty()) {
      return;
    }
    std::function<void()> task = std::move(oneway_queue_.front());
    oneway_queue_.pop_front();
    lock.unlock();
    task();
    lock.lock();
  }
}

Values PassthroughProxy::Invoke(const ir::ApiSpec& api, Values args) {
  if (api.oneway) {
    std::string method = api.name;
    {
      std::lock_guard<std::mutex> lock(mutex_);
      oneway_queue_.push_back([host = host_, sink = sink_, method, args = std::move(args)] {
        try {
          host->Dispatch(method, args, sink);
        } catch (...) {
          // Oneway failures are invisible to the caller, as over a socket.
        }
      });
    }
    cv_.notify_one();
    return {};
  }
  try {
    return host_->Dispatch(api.name, args, sink_);
  } catch (const ServiceCrash& crash) {
    throw Error(ErrorCode::kTransportError, std::string("service crashed: ") + crash.what());
  } catch (const RemoteError&) {
    throw;
  } catch (const Error& e) {
    throw RemoteError(std::string(ErrorCodeName(e.code())), e.message());
  } catch (const std::exception& e) {
    throw RemoteError("InternalError", e.what());
  }
}

std::unique_ptr<Proxy> ConnectProxy(const ir::InterfaceSpec& spec, const std::string& address,
                                    ProxyOptions options) {
  wire::Endpoint endpoint = wire::Endpoint::Parse(address);
  if (endpoint.kind == wire::Endpoint::Kind::kInproc) {
    std::shared_ptr<ServiceHost> host = FindPassthrough(endpoint.path);
    if (!host) {
      throw Error(ErrorCode::kServiceUnavailable, "no pass-through service " + address + " in this process");
    }
    return std::make_unique<PassthroughProxy>(spec, std::move(host));
  }
  return std::make_unique<RemoteProxy>(spec, endpoint, options);
}

std::unique_ptr<Proxy> GetService(wire::RegistryClient& registry, const ir::InterfaceSpec& spec,
                                  const std::string& instance, ProxyOptions options) {
  wire::ServiceRecord record = registry.Lookup(spec.fqname().ToString(), instance);
  return ConnectProxy(spec, record.endpoint, options);
}

}  // namespace treble::runtime
