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

#include "treble/wire/registry.h"

#include <cstdlib>

#include "treble/base/error.h"
#include "treble/idl/ast.h"

namespace treble::wire {
namespace {

void PutRecord(std::vector<TypedValue>& values, const ServiceRecord& record) {
  values.emplace_back(record.fqname);
  values.emplace_back(record.instance);
  values.emplace_back(record.endpoint);
  values.emplace_back(std::string(TransportName(record.transport)));
}

std::vector<ServiceRecord> TakeRecords(const std::vector<TypedValue>& values) {
  if (values.size() % 4 != 0) {
    throw Error(ErrorCode::kProtocolMismatch, "registry record has " + std::to_string(values.size()) + " values");
  }
  std::vector<ServiceRecord> records;
  for (size_t i = 0; i < values.size(); i += 4) {
    for (size_t j = i; j < i + 4; ++j) {
      if (!values[j].get_if<std::string>()) {
        throw Error(ErrorCode::kProtocolMismatch, "registry record field is not a string");
      }
    }
    ServiceRecord record;
    record.fqname = values[i].as<std::string>();
    record.instance = values[i + 1].as<std::string>();
    record.endpoint = values[i + 2].as<std::string>();
    auto transport = ParseTransport(values[i + 3].as<std::string>());
    if (!transport) {
      throw Error(ErrorCode::kProtocolMismatch, "unknown transport " + values[i + 3].as<std::string>());
    }
    record.transport = *transport;
    records.push_back(std::move(record));
  }
  return records;
}

std::string StringArg(const WireMessage& message, size_t index) {
  if (index >= message.values.size() || !message.values[index].get_if<std::string>()) {
    throw Error(ErrorCode::kTypeMismatch, message.method + " expects a string at position " + std::to_string(index));
  }
  return message.values[index].as<std::string>();
}

}  // namespace

std::string_view TransportName(Transport transport) {
  return transport == Transport::kBinderized ? "BINDERIZED" : "PASSTHROUGH";
}

std::optional<Transport> ParseTransport(std::string_view text) {
  if (text == "BINDERIZED") {
    return Transport::kBinderized;
  }
  if (text == "PASSTHROUGH") {
    return Transport::kPassthrough;
  }
  return std::nullopt;
}

std::optional<ServiceRecord> SelectCompatible(const std::vector<ServiceRecord>& records,
                                              std::string_view fqname, std::string_view instance) {
  idl::FqName want = idl::FqName::Parse(fqname);
  const ServiceRecord* best = nullptr;
  uint32_t best_minor = 0;
  for (const ServiceRecord& record : records) {
    if (record.instance != instance) {
      continue;
    }
    idl::FqName have = idl::FqName::Parse(record.fqname);
    if (have.name != want.name || have.package.name != want.package.name ||
        have.package.version.major != want.package.version.major ||
        have.package.version.minor < want.package.version.minor) {
      continue;
    }
    if (!best || have.package.version.minor > best_minor) {
      best = &record;
      best_minor = have.package.version.minor;
    }
  }
  return best ? std::optional<ServiceRecord>(*best) : std::nullopt;
}

Registry::Registry() : table_(std::make_shared<const Table>()) {}

std::shared_ptr<const Registry::Table> Registry::Snapshot() const {
  std::lock_guard<std::mutex> lock(pointer_mutex_);
  return table_;
}

void Registry::Register(const ServiceRecord& record) {
  idl::FqName::Parse(record.fqname);
  std::lock_guard<std::mutex> lock(write_mutex_);
  auto next = std::make_shared<Table>(*Snapshot());
  (*next)[{record.fqname, record.instance}] = record;
  std::lock_guard<std::mutex> swap(pointer_mutex_);
  table_ = std::move(next);
}

void Registry::Unregister(const std::string& fqname, const std::string& instance) {
  std::lock_guard<std::mutex> lock(write_mutex_);
  auto next = std::make_shared<Table>(*Snapshot());
  next->erase({fqname, instance});
  std::lock_guard<std::mutex> swap(pointer_mutex_);
  table_ = std::move(next);
}

ServiceRecord Registry::Lookup(const std::string& fqname, const std::string& instance) {
  auto table = Snapshot();
  std::vector<ServiceRecord> records;
  records.reserve(table->size());
  for (const auto& [key, record] : *table) {
    records.push_back(record);
  }
  auto found = SelectCompatible(records, fqname, instance);
  if (!found) {
    throw Error(ErrorCode::kNotFound, fqname + "/" + instance);
  }
  return *found;
}

std::vector<ServiceRecord> Registry::List() {
  auto table = Snapshot();
  std::vector<ServiceRecord> records;
  for (const auto& [key, record] : *table) {
    records.push_back(record);
  }
  return records;
}

RemoteRegistry::RemoteRegistry(Endpoint endpoint) : endpoint_(std::move(endpoint)) {}

WireMessage RemoteRegistry::Call(const std::string& method, std::vector<TypedValue> values) {
  std::lock_guard<std::mutex> lock(mutex_);
  WireMessage request;
  request.kind = MessageKind::kCall;
  request.fqname = kRegistryFqname;
  request.method = method;
  request.values = std::move(values);
  // One retry covers a server restart between calls.
  for (int attempt = 0; attempt < 2; ++attempt) {
    try {
      if (!connection_.valid()) {
        connection_ = Connection::Connect(endpoint_);
      }
      request.correlation_id = next_id_++;
      connection_.Send(request);
      std::optional<WireMessage> reply = connection_.Receive();
      if (!reply) {
        throw Error(ErrorCode::kTransportError, "registry closed the connection");
      }
      if (reply->kind == MessageKind::kError) {
        auto [code, detail] = ErrorParts(*reply);
        if (code == ErrorCodeName(ErrorCode::kNotFound)) {
          throw Error(ErrorCode::kNotFound, detail);
        }
        throw RemoteError(code, detail);
      }
      return *reply;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kTransportError) {
        throw;
      }
      connection_.Close();
      if (attempt == 1) {
        throw Error(ErrorCode::kRegistryUnavailable, endpoint_.ToString() + " (" + e.what() + ")");
      }
    }
  }
  throw Error(ErrorCode::kRegistryUnavailable, endpoint_.ToString());
}

void RemoteRegistry::Register(const ServiceRecord& record) {
  std::vector<TypedValue> values;
  PutRecord(values, record);
  Call("register", std::move(values));
}

void RemoteRegistry::Unregister(const std::string& fqname, const std::string& instance) {
  Call("unregister", {TypedValue(fqname), TypedValue(instance)});
}

ServiceRecord RemoteRegistry::Lookup(const std::string& fqname, const std::string& instance) {
  std::vector<ServiceRecord> records = TakeRecords(Call("lookup", {TypedValue(fqname), TypedValue(instance)}).values);
  if (records.size() != 1) {
    throw Error(ErrorCode::kProtocolMismatch, "lookup returned " + std::to_string(records.size()) + " records");
  }
  return records[0];
}

std::vector<ServiceRecord> RemoteRegistry::List() { return TakeRecords(Call("list", {}).values); }

RegistryServer::RegistryServer(const Endpoint& endpoint, std::shared_ptr<Registry> registry)
    : registry_(std::move(registry)), listener_(Listener::Bind(endpoint)) {
  accept_thread_ = std::thread([this] { AcceptLoop(); });
}

RegistryServer::~RegistryServer() {
  listener_.Shutdown();
  accept_thread_.join();
  {
    std::lock_guard<std::mutex> lock(mutex_);
    for (auto& session : sessions_) {
      session->Shutdown();
    }
  }
  for (std::thread& thread : threads_) {
    thread.join();
  }
}

void RegistryServer::AcceptLoop() {
  while (auto connection = listener_.Accept()) {
    auto shared = std::make_shared<Connection>(std::move(*connection));
    std::lock_guard<std::mutex> lock(mutex_);
    sessions_.push_back(shared);
    threads_.emplace_back([this, shared] { Session(shared); });
  }
}

void RegistryServer::Session(std::shared_ptr<Connection> connection) {
  try {
    while (auto request = connection->Receive()) {
      WireMessage reply;
      reply.kind = MessageKind::kReturn;
      reply.correlation_id = request->correlation_id;
      reply.fqname = request->fqname;
      reply.method = request->method;
      try {
        if (request->kind != MessageKind::kCall || request->fqname != kRegistryFqname) {
          throw Error(ErrorCode::kProtocolMismatch, "expected a registry CALL");
        }
        if (request->method == "register") {
          std::vector<ServiceRecord> records = TakeRecords(request->values);
          if (records.size() != 1) {
            throw Error(ErrorCode::kTypeMismatch, "register takes one record");
          }
          registry_->Register(records[0]);
        } else if (request->method == "unregister") {
          registry_->Unregister(StringArg(*request, 0), StringArg(*request, 1));
        } else if (request->method == "lookup") {
          PutRecord(reply.values, registry_->Lookup(StringArg(*request, 0), StringArg(*request, 1)));
        } else if (request->method == "list") {
          for (const ServiceRecord& record : registry_->List()) {
            PutRecord(reply.values, record);
          }
        } else {
          throw Error(ErrorCode::kUnknownMethod, request->method);
        }
      } catch (const Error& e) {
        reply = MakeError(request->correlation_id, std::string(ErrorCodeName(e.code())), e.message());
      }
      connection->Send(reply);
    }
  } catch (const Error&) {
    // A malformed or dropped client ends only its own session.
  }
}

std::string DefaultRegistryAddress() {
  const char* env = std::getenv("TREBLE_REGISTRY");
  return env && *env ? env : "./treble-registry.sock";
}

std::unique_ptr<RegistryClient> ConnectRegistry(const std::string& address) {
  return std::make_unique<RemoteRegistry>(Endpoint::Parse(address));
}

}  // namespace treble::wire
