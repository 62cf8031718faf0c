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

#ifndef TREBLE_WIRE_TRANSPORT_H_
#define TREBLE_WIRE_TRANSPORT_H_

#include <chrono>
#include <cstdint>
#include <mutex>
#include <optional>
#include <string>

#include "treble/wire/codec.h"

namespace treble::wire {

// `unix:/path/to.sock`, `tcp:host:port` or `inproc:name`. A bare path is a
// unix socket.
struct Endpoint {
  enum class Kind { kUnix, kTcp, kInproc };

  Kind kind = Kind::kUnix;
  // Socket path or in-process name.
  std::string path;
  std::string host;
  uint16_t port = 0;

  // Throws Error(kInvalidArgument).
  static Endpoint Parse(std::string_view address);
  static Endpoint Unix(std::string path);
  static Endpoint Tcp(std::string host, uint16_t port);

  std::string ToString() const;
};

// Total bytes sent and received by every Connection in this process.
uint64_t TransportBytes();

// A framed, bidirectional stream carrying WireMessages. Send is safe to call
// from several threads; Receive must have a single caller at a time.
class Connection {
 public:
  Connection() = default;
  explicit Connection(int fd);
  ~Connection();
  Connection(Connection&& other) noexcept;
  Connection& operator=(Connection&& other) noexcept;

  // Throws Error(kTransportError) when nothing listens at `endpoint`.
  static Connection Connect(const Endpoint& endpoint);

  bool valid() const { return fd_ >= 0; }

  void Send(const WireMessage& message);

  // Next message, or nullopt once the peer has closed the stream. With a
  // timeout, throws Error(kTimeout) when no complete frame arrives in time.
  // Malformed frames throw the decoder's error.
  std::optional<WireMessage> Receive(
      std::optional<std::chrono::milliseconds> timeout = std::nullopt);

  // Wakes a blocked Receive, which then reports end of stream.
  void Shutdown();
  void Close();

 private:
  int fd_ = -1;
  std::unique_ptr<std::mutex> send_mutex_ = std::make_unique<std::mutex>();
  FrameSplitter splitter_;
};

class Listener {
 public:
  Listener() = default;
  ~Listener();
  Listener(Listener&& other) noexcept;
  Listener& operator=(Listener&& other) noexcept;

  // Port 0 picks a free port. Throws Error(kAddressInUse) when another live
  // listener owns the address; a stale unix socket file is replaced.
  static Listener Bind(const Endpoint& endpoint);

  // The bound address, with the actual port for TCP.
  const Endpoint& endpoint() const { return endpoint_; }

  // Blocks for the next client; nullopt after Shutdown.
  std::optional<Connection> Accept();
  void Shutdown();

 private:
  void Release();

  int fd_ = -1;
  Endpoint endpoint_;
};

}  // namespace treble::wire

#endif  // TREBLE_WIRE_TRANSPORT_H_
