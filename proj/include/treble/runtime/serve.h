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

#ifndef TREBLE_RUNTIME_SERVE_H_
#define TREBLE_RUNTIME_SERVE_H_

#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "treble/runtime/service.h"
#include "treble/wire/registry.h"
#include "treble/wire/transport.h"

namespace treble::runtime {

// Pass-through hosts visible to this process, keyed by `inproc:` name.
void PublishPassthrough(const std::string& name, std::shared_ptr<ServiceHost> host);
void WithdrawPassthrough(const std::string& name);
std::shared_ptr<ServiceHost> FindPassthrough(const std::string& name);

// Accepts clients on a socket, one thread per connection.
class BinderizedService {
 public:
  BinderizedService(std::shared_ptr<ServiceHost> host, const wire::Endpoint& endpoint);
  ~BinderizedService();
  BinderizedService(const BinderizedService&) = delete;
  BinderizedService& operator=(const BinderizedService&) = delete;

  const wire::Endpoint& endpoint() const { return listener_.endpoint(); }

 private:
  struct Session;

  void AcceptLoop();
  void Serve(std::shared_ptr<Session> session);

  std::shared_ptr<ServiceHost> host_;
  wire::Listener listener_;
  std::mutex mutex_;
  std::vector<std::shared_ptr<Session>> sessions_;
  std::vector<std::thread> threads_;
  std::thread accept_thread_;
};

struct ServeOptions {
  std::string instance = "default";
  // Listening address for binderized services; empty picks a fresh unix
  // socket under the temp directory.
  std::string address;
};

// A running, registered service. Destruction withdraws the registry record
// (if it still points here) and stops serving.
class Service {
 public:
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  const wire::ServiceRecord& record() const { return record_; }
  ServiceHost& host() { return *host_; }

 private:
  friend std::unique_ptr<Service> Serve(ir::InterfaceSpec, Implementation, wire::Transport,
                                        wire::RegistryClient*, ServeOptions);
  Service() = default;

  wire::ServiceRecord record_;
  wire::RegistryClient* registry_ = nullptr;
  std::shared_ptr<ServiceHost> host_;
  std::unique_ptr<BinderizedService> binderized_;
};

// Validates the implementation, starts serving, then registers. A null
// registry skips registration. Throws Error(kIncompleteImplementation),
// Error(kAddressInUse) or Error(kRegistryUnavailable).
std::unique_ptr<Service> Serve(ir::InterfaceSpec spec, Implementation implementation,
                               wire::Transport mode, wire::RegistryClient* registry,
                               ServeOptions options = {});

}  // namespace treble::runtime

#endif  // TREBLE_RUNTIME_SERVE_H_
