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

#include "treble/runtime/serve.h"

#include <unistd.h>

#include <atomic>
#include <filesystem>
#include <map>

#include "treble/base/error.h"

namespace treble::runtime {
namespace {

std::mutex g_passthrough_mutex;
std::map<std::string, std::weak_ptr<ServiceHost>>& PassthroughTable() {
  static auto* table = new std::map<std::string, std::weak_ptr<ServiceHost>>();
  return *table;
}

std::atomic<uint64_t> g_next_service{1};

std::string FreshSocketPath() {
  return (std::filesystem::temp_directory_path() /
          ("treble-" + std::to_string(::getpid()) + "-" + std::to_string(g_next_service++) + ".sock"))
      .string();
}

wire::WireMessage Reply(const wire::WireMessage& request, Values values) {
  wire::WireMessage reply;
  reply.kind = wire::MessageKind::kReturn;
  reply.correlation_id = request.correlation_id;
  reply.fqname = request.fqname;
  reply.method = request.method;
  reply.values = std::move(values);
  return reply;
}

}  // namespace

void PublishPassthrough(const std::string& name, std::shared_ptr<ServiceHost> host) {
  std::lock_guard<std::mutex> lock(g_passthrough_mutex);
  PassthroughTable()[name] = host;
}

void WithdrawPassthrough(const std::string& name) {
  std::lock_guard<std::mutex> lock(g_passthrough_mutex);
  PassthroughTable().erase(name);
}

std::shared_ptr<ServiceHost> FindPassthrough(const std::string& name) {
  std::lock_guard<std::mutex> lock(g_passthrough_mutex);
  auto it = PassthroughTable().find(name);
  return it == PassthroughTable().end() ? nullptr : it->second.lock();
}

// One client connection. The sink outlives the serving thread when a
// handler keeps a CallbackRef; `closed` then turns emissions into no-ops.
struct BinderizedService::Session : EventSink {
  wire::Connection connection;
  std::mutex mutex;
  bool closed = false;
  std::atomic<bool> finished{false};

  explicit Session(wire::Connection c) : connection(std::move(c)) {}

  bool Emit(const wire::WireMessage& event) override {
    std::lock_guard<std::mutex> lock(mutex);
    if (closed) {
      return false;
    }
    try {
      connection.Send(event);
      return true;
    } catch (const Error&) {
      return false;
    }
  }

  void Send(const wire::WireMessage& message) {
    std::lock_guard<std::mutex> lock(mutex);
    if (!closed) {
      connection.Send(message);
    }
  }

  void Close() {
    std::lock_guard<std::mutex> lock(mutex);
    closed = true;
    connection.Shutdown();
  }
};

BinderizedService::BinderizedService(std::shared_ptr<ServiceHost> host, const wire::Endpoint& endpoint)
    : host_(std::move(host)), listener_(wire::Listener::Bind(endpoint)) {
  accept_thread_ = std::thread([this] { AcceptLoop(); });
}

BinderizedService::~BinderizedService() {
  listener_.Shutdown();
  accept_thread_.join();
  {
    std::lock_guard<std::mutex> lock(mutex_);
    for (auto& session : sessions_) {
      session->connection.Shutdown();
    }
  }
  for (std::thread& thread : threads_) {
    thread.join();
  }
}

void BinderizedService::AcceptLoop() {
  while (auto connection = listener_.Accept()) {
    auto session = std::make_shared<Session>(std::move(*connection));
    std::lock_guard<std::mutex> lock(mutex_);
    // Reap sessions that have ended so reconnect-heavy clients stay bounded.
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
    threads_.emplace_back([this, session] { Serve(session); });
  }
}

void BinderizedService::Serve(std::shared_ptr<Session> session) {
  host_->Attach();
  try {
    while (auto request = session->connection.Receive()) {
      bool two_way = request->kind == wire::MessageKind::kCall;
      if (!two_way && request->kind != wire::MessageKind::kOneway) {
        session->Send(wire::MakeError(request->correlation_id, "ProtocolMismatch",
                                      "unexpected " + std::string(wire::MessageKindName(request->kind))));
        continue;
      }
      try {
        host_->CheckClient(request->fqname);
        Values results;
        if (two_way && request->method == kClientCountMethod) {
          results.emplace_back(host_->clients());
        } else {
          results = host_->Dispatch(request->method, request->values, session);
        }
        if (two_way) {
          session->Send(Reply(*request, std::move(results)));
        }
      } catch (const ServiceCrash&) {
        break;
      } catch (const Error& e) {
        if (two_way) {
          session->Send(wire::MakeError(request->correlation_id, std::string(ErrorCodeName(e.code())), e.message()));
        }
      } catch (const std::exception& e) {
        if (two_way) {
          session->Send(wire::MakeError(request->correlation_id, "InternalError", e.what()));
        }
      }
    }
  } catch (const Error&) {
    // Malformed stream or broken pipe: drop this client only.
  }
  session->Close();
  host_->Detach();
  session->finished = true;
}

Service::~Service() {
  if (registry_) {
    try {
      for (const wire::ServiceRecord& current : registry_->List()) {
        if (current == record_) {
          registry_->Unregister(record_.fqname, record_.instance);
        }
      }
    } catch (const Error&) {
      // The registry went away first; nothing to withdraw.
    }
  }
  if (record_.transport == wire::Transport::kPassthrough) {
    WithdrawPassthrough(wire::Endpoint::Parse(record_.endpoint).path);
  }
  binderized_.reset();
}

std::unique_ptr<Service> Serve(ir::InterfaceSpec spec, Implementation implementation, wire::Transport mode,
                               wire::RegistryClient* registry, ServeOptions options) {
  auto host = std::make_shared<ServiceHost>(std::move(spec), std::move(implementation));
  std::unique_ptr<Service> service(new Service());
  service->host_ = host;
  service->record_.fqname = host->spec().fqname().ToString();
  service->record_.instance = options.instance;
  service->record_.transport = mode;
  if (mode == wire::Transport::kBinderized) {
    wire::Endpoint endpoint = options.address.empty() ? wire::Endpoint::Unix(FreshSocketPath())
                                                      : wire::Endpoint::Parse(options.address);
    service->binderized_ = std::make_unique<BinderizedService>(host, endpoint);
    service->record_.endpoint = service->binderized_->endpoint().ToString();
  } else {
    std::string name = service->record_.fqname + "/" + options.instance + "#" + std::to_string(g_next_service++);
    PublishPassthrough(name, host);
    service->record_.endpoint = "inproc:" + name;
  }
  if (registry) {
    registry->Register(service->record_);
    service->registry_ = registry;
  }
  return service;
}

}  // namespace treble::runtime
