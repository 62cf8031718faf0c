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

#ifndef TREBLE_WIRE_REGISTRY_H_
#define TREBLE_WIRE_REGISTRY_H_

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "treble/wire/transport.h"

namespace treble::wire {

enum class Transport { kBinderized, kPassthrough };

std::string_view TransportName(Transport transport);
// BINDERIZED or PASSTHROUGH.
std::optional<Transport> ParseTransport(std::string_view text);

struct ServiceRecord {
  // package@M.m::IName
  std::string fqname;
  std::string instance = "default";
  std::string endpoint;
  Transport transport = Transport::kBinderized;

  friend bool operator==(const ServiceRecord&, const ServiceRecord&) = default;
};

// The lookup rule: identical package and interface name, same major, minor at
// least the requested one; the highest such minor wins.
std::optional<ServiceRecord> SelectCompatible(const std::vector<ServiceRecord>& records,
                                              std::string_view fqname, std::string_view instance);

class RegistryClient {
 public:
  virtual ~RegistryClient() = default;

  // Replaces any record with the same (fqname, instance).
  virtual void Register(const ServiceRecord& record) = 0;
  virtual void Unregister(const std::string& fqname, const std::string& instance) = 0;
  // Throws Error(kNotFound).
  virtual ServiceRecord Lookup(const std::string& fqname, const std::string& instance = "default") = 0;
  // Sorted by (fqname, instance).
  virtual std::vector<ServiceRecord> List() = 0;
};

// In-process registry. Writers publish a fresh immutable snapshot; readers
// never wait on a writer's critical section beyond the pointer copy.
class Registry : public RegistryClient {
 public:
  Registry();

  void Register(const ServiceRecord& record) override;
  void Unregister(const std::string& fqname, const std::string& instance) override;
  ServiceRecord Lookup(const std::string& fqname, const std::string& instance = "default") override;
  std::vector<ServiceRecord> List() override;

 private:
  using Table = std::map<std::pair<std::string, std::string>, ServiceRecord>;

  std::shared_ptr<const Table> Snapshot() const;

  std::mutex write_mutex_;
  mutable std::mutex pointer_mutex_;
  std::shared_ptr<const Table> table_;
};

// Talks to a RegistryServer. Throws Error(kRegistryUnavailable) when the
// server cannot be reached.
class RemoteRegistry : public RegistryClient {
 public:
  explicit RemoteRegistry(Endpoint endpoint);

  void Register(const ServiceRecord& record) override;
  void Unregister(const std::string& fqname, const std::string& instance) override;
  ServiceRecord Lookup(const std::string& fqname, const std::string& instance = "default") override;
  std::vector<ServiceRecord> List() override;

 private:
  WireMessage Call(const std::string& method, std::vector<TypedValue> values);

  Endpoint endpoint_;
  std::mutex mutex_;
  Connection connection_;
  uint64_t next_id_ = 1;
};

// Serves a Registry over a socket until destroyed.
class RegistryServer {
 public:
  RegistryServer(const Endpoint& endpoint, std::shared_ptr<Registry> registry);
  ~RegistryServer();
  RegistryServer(const RegistryServer&) = delete;
  RegistryServer& operator=(const RegistryServer&) = delete;

  const Endpoint& endpoint() const { return listener_.endpoint(); }
  Registry& registry() { return *registry_; }

 private:
  void AcceptLoop();
  void Session(std::shared_ptr<Connection> connection);

  std::shared_ptr<Registry> registry_;
  Listener listener_;
  std::mutex mutex_;
  std::vector<std::shared_ptr<Connection>> sessions_;
  std::vector<std::thread> threads_;
  std::thread accept_thread_;
};

// Interface name used on the registry's own connections.
inline constexpr char kRegistryFqname[] = "treble.registry@1.0::IRegistry";

// $TREBLE_REGISTRY, or `./treble-registry.sock`.
std::string DefaultRegistryAddress();

std::unique_ptr<RegistryClient> ConnectRegistry(const std::string& address);

}  // namespace treble::wire

#endif  // TREBLE_WIRE_REGISTRY_H_
