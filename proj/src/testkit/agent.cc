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

#include "treble/testkit/agent.h"

#include <atomic>
#include <map>

#include "treble/base/error.h"
#include "treble/runtime/proxy.h"
#include "treble/testkit/driver.h"

namespace treble::testkit {
namespace {

// The host connection, shared with callback handlers that may fire after
// the session ended.
struct Outbox {
  wire::Connection connection;
  std::mutex mutex;
  bool closed = false;

  explicit Outbox(wire::Connection c) : connection(std::move(c)) {}

  void Send(const wire::WireMessage& message) {
    std::lock_guard<std::mutex> lock(mutex);
    if (closed) {
      return;
    }
    try {
      connection.Send(message);
    } catch (const Error&) {
      closed = true;
    }
  }
  void Close() {
    std::lock_guard<std::mutex> lock(mutex);
    closed = true;
    connection.Shutdown();
  }
};

wire::WireMessage Reply(wire::MessageKind kind, uint64_t id, runtime::Values values) {
  wire::WireMessage m;
  m.kind = kind;
  m.correlation_id = id;
  m.values = std::move(values);
  return m;
}

wire::WireMessage ErrorReply(uint64_t id, ErrorCode code, const std::string& detail) {
  return wire::MakeError(id, std::string(ErrorCodeName(code)), detail);
}

}  // namespace

struct Agent::Session {
  struct Loaded {
    ir::InterfaceSpec spec;
    std::string endpoint;
    std::unique_ptr<runtime::Proxy> proxy;
    // Host handle id -> handle registered on `proxy`.
    std::map<uint64_t, wire::Handle> callbacks;
  };

  Agent& agent;
  std::shared_ptr<Outbox> outbox;
  std::map<std::string, Loaded> loaded;
  std::atomic<bool> finished{false};

  Session(Agent& a, wire::Connection c) : agent(a), outbox(std::make_shared<Outbox>(std::move(c))) {}

  void Run() {
    try {
      if (Handshake()) {
        while (auto message = outbox->connection.Receive()) {
          if (!Handle(*message)) {
            break;
          }
        }
      }
    } catch (const Error& e) {
      outbox->Send(ErrorReply(0, ErrorCode::kProtocolMismatch, e.message()));
    }
    outbox->Close();
    // Proxies go before the outbox so no handler outlives its session.
    loaded.clear();
    finished = true;
  }

  bool Violation(uint64_t id, const std::string& detail) {
    outbox->Send(ErrorReply(id, ErrorCode::kProtocolMismatch, detail));
    return false;
  }

  bool Handshake() {
    auto hello = outbox->connection.Receive();
    if (!hello) {
      return false;
    }
    if (hello->kind != wire::MessageKind::kHello || hello->values.size() != 1 ||
        !hello->values[0].get_if<std::string>() || hello->values[0].as<std::string>() != kAgentBanner) {
      return Violation(hello->correlation_id, std::string("expected HELLO \"") + kAgentBanner + "\"");
    }
    outbox->Send(Reply(wire::MessageKind::kHello, hello->correlation_id, {wire::TypedValue(kAgentBanner)}));
    return true;
  }

  bool Handle(const wire::WireMessage& message) {
    switch (message.kind) {
      case wire::MessageKind::kLoad:
        Load(message);
        return true;
      case wire::MessageKind::kCall:
      case wire::MessageKind::kOneway:
        return Call(message);
      default:
        return Violation(message.correlation_id,
                         "unexpected " + std::string(wire::MessageKindName(message.kind)) + " from host");
    }
  }

  void Load(const wire::WireMessage& message) {
    const ir::InterfaceSpec* spec = agent.library_.Find(message.fqname);
    if (!spec) {
      outbox->Send(ErrorReply(message.correlation_id, ErrorCode::kLoadFailed, "no spec for " + message.fqname));
      return;
    }
    std::string instance = "default";
    if (!message.values.empty() && message.values[0].get_if<std::string>()) {
      instance = message.values[0].as<std::string>();
    }
    std::string endpoint;
    try {
      endpoint = agent.registry_->Lookup(message.fqname, instance).endpoint;
    } catch (const Error& e) {
      // Callback interfaces load without a service behind them.
      if (e.code() != ErrorCode::kNotFound) {
        outbox->Send(ErrorReply(message.correlation_id, ErrorCode::kLoadFailed, e.message()));
        return;
      }
    }
    Loaded& entry = loaded[message.fqname];
    entry.spec = *spec;
    entry.endpoint = endpoint;
    entry.proxy.reset();
    entry.callbacks.clear();
    outbox->Send(Reply(wire::MessageKind::kOk, message.correlation_id,
                       {wire::TypedValue(ir::EmitSpecText(*spec)), wire::TypedValue(endpoint)}));
  }

  // Replaces host handle ids in interface-typed arguments by callbacks that
  // forward to the host. Returns false with `error` set on failure.
  bool TranslateHandles(Loaded& entry, const ir::ApiSpec& api, wire::WireMessage& request, std::string& error) {
    for (size_t i = 0; i < api.args.size() && i < request.values.size(); ++i) {
      const auto* handle = request.values[i].get_if<wire::Handle>();
      if (api.args[i].type != ir::TypeTag::kInterface || !handle || handle->id == 0) {
        continue;
      }
      uint64_t host_id = handle->id;
      auto it = entry.callbacks.find(host_id);
      if (it == entry.callbacks.end()) {
        const ir::InterfaceSpec* callback_spec = agent.library_.Find(api.args[i].type_name);
        if (!callback_spec) {
          error = "no spec for callback " + api.args[i].type_name;
          return false;
        }
        runtime::EventHandlers handlers;
        std::string callback_fq = api.args[i].type_name;
        for (const ir::ApiSpec& method : callback_spec->apis) {
          handlers[method.name] = [outbox = outbox, host_id, callback_fq, name = method.name](const runtime::Values& v) {
            wire::WireMessage event = Reply(wire::MessageKind::kEvent, host_id, v);
            event.fqname = callback_fq;
            event.method = name;
            outbox->Send(event);
          };
        }
        it = entry.callbacks.emplace(host_id, entry.proxy->RegisterCallback(*callback_spec, std::move(handlers))).first;
      }
      request.values[i] = wire::TypedValue(it->second);
    }
    return true;
  }

  bool Call(const wire::WireMessage& message) {
    auto it = loaded.find(message.fqname);
    if (it == loaded.end()) {
      return Violation(message.correlation_id, message.fqname + " called before LOAD");
    }
    Loaded& entry = it->second;
    bool two_way = message.kind == wire::MessageKind::kCall;
    auto fail = [&](ErrorCode code, const std::string& detail) {
      if (two_way) {
        outbox->Send(ErrorReply(message.correlation_id, code, detail));
      }
      return true;
    };
    if (entry.endpoint.empty()) {
      return fail(ErrorCode::kServiceUnavailable, message.fqname + " has no registered service");
    }
    const ir::ApiSpec* api = entry.spec.FindApi(message.method);
    if (!api) {
      return fail(ErrorCode::kUnknownMethod, message.fqname + "::" + message.method);
    }
    try {
      if (!entry.proxy) {
        entry.proxy = runtime::ConnectProxy(entry.spec, entry.endpoint);
        entry.callbacks.clear();
      }
      wire::WireMessage request = message;
      std::string error;
      if (!TranslateHandles(entry, *api, request, error)) {
        return fail(ErrorCode::kLoadFailed, error);
      }
      request.kind = api->oneway ? wire::MessageKind::kOneway : wire::MessageKind::kCall;
      wire::WireMessage reply = Drive(*entry.proxy, request);
      if (two_way) {
        outbox->Send(reply);
      }
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kTransportError || e.code() == ErrorCode::kServiceUnavailable) {
        entry.proxy.reset();
      }
      return fail(e.code(), e.message());
    }
    return true;
  }
};

Agent::Agent(const wire::Endpoint& listen, ir::SpecLibrary library, std::shared_ptr<wire::RegistryClient> registry)
    : library_(std::move(library)), registry_(std::move(registry)), listener_(wire::Listener::Bind(listen)) {
  accept_thread_ = std::thread([this] { AcceptLoop(); });
}

Agent::~Agent() {
  listener_.Shutdown();
  accept_thread_.join();
  {
    std::lock_guard<std::mutex> lock(mutex_);
    for (auto& session : sessions_) {
      session->outbox->connection.Shutdown();
    }
  }
  for (std::thread& thread : threads_) {
    thread.join();
  }
}

void Agent::AcceptLoop() {
  while (auto connection = listener_.Accept()) {
    auto session = std::make_shared<Session>(*this, std::move(*connection));
    std::lock_guard<std::mutex> lock(mutex_);
    for (size_t i = 0; i < sessions_.size();) {
      if (sessions_[i]->finished.load()) {
        threads_[i].join();
        sessions_.erase(sessions_.begin() + static_cast<std::ptrdiff_t>(i));
        threads_.erase(threads_.begin() + static_cast<std::ptrdiff_t>(i));
      } else {
        ++i;
      }
    }
    sessions_.push_back(session);
    threads_.emplace_back([session] { session->Run(); });
  }
}

}  // namespace treble::testkit
