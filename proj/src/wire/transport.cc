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

#include "treble/wire/transport.h"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <sys/un.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <cstring>

#include "treble/base/error.h"
#include "treble/base/strings.h"

namespace treble::wire {
namespace {

std::atomic<uint64_t> g_transport_bytes{0};

std::string Errno(const std::string& what) { return what + ": " + std::strerror(errno); }

sockaddr_un UnixAddress(const std::string& path) {
  sockaddr_un addr{};
  addr.sun_family = AF_UNIX;
  if (path.size() >= sizeof(addr.sun_path)) {
    throw Error(ErrorCode::kInvalidArgument, "socket path too long: " + path);
  }
  std::memcpy(addr.sun_path, path.c_str(), path.size() + 1);
  return addr;
}

sockaddr_in TcpAddress(const Endpoint& endpoint) {
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(endpoint.port);
  std::string host = endpoint.host == "localhost" || endpoint.host.empty() ? "127.0.0.1" : endpoint.host;
  if (inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
    addrinfo hints{};
    hints.ai_family = AF_INET;
    addrinfo* result = nullptr;
    if (getaddrinfo(host.c_str(), nullptr, &hints, &result) != 0 || !result) {
      throw Error(ErrorCode::kInvalidArgument, "unknown host " + endpoint.host);
    }
    addr.sin_addr = reinterpret_cast<sockaddr_in*>(result->ai_addr)->sin_addr;
    freeaddrinfo(result);
  }
  return addr;
}

void SendAll(int fd, const uint8_t* data, size_t size) {
  while (size > 0) {
    ssize_t n = ::send(fd, data, size, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) {
        continue;
      }
      throw Error(ErrorCode::kTransportError, Errno("send"));
    }
    g_transport_bytes.fetch_add(static_cast<uint64_t>(n), std::memory_order_relaxed);
    data += n;
    size -= static_cast<size_t>(n);
  }
}

bool ConnectUnix(const std::string& path) {
  int fd = ::socket(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0);
  if (fd < 0) {
    return false;
  }
  sockaddr_un addr = UnixAddress(path);
  bool ok = ::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) == 0;
  ::close(fd);
  return ok;
}

}  // namespace

Endpoint Endpoint::Parse(std::string_view address) {
  if (address.starts_with("unix:")) {
    std::string path(address.substr(5));
    if (path.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "empty socket path");
    }
    return Unix(std::move(path));
  }
  if (address.starts_with("inproc:")) {
    Endpoint endpoint;
    endpoint.kind = Kind::kInproc;
    endpoint.path = std::string(address.substr(7));
    return endpoint;
  }
  if (address.starts_with("tcp:")) {
    std::string_view rest = address.substr(4);
    size_t colon = rest.rfind(':');
    if (colon == std::string_view::npos) {
      throw Error(ErrorCode::kInvalidArgument, "expected tcp:host:port, got " + std::string(address));
    }
    auto port = ParseUint(rest.substr(colon + 1));
    if (!port || *port > 65535) {
      throw Error(ErrorCode::kInvalidArgument, "bad port in " + std::string(address));
    }
    return Tcp(std::string(rest.substr(0, colon)), static_cast<uint16_t>(*port));
  }
  if (address.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "empty address");
  }
  return Unix(std::string(address));
}

Endpoint Endpoint::Unix(std::string path) {
  Endpoint endpoint;
  endpoint.kind = Kind::kUnix;
  endpoint.path = std::move(path);
  return endpoint;
}

Endpoint Endpoint::Tcp(std::string host, uint16_t port) {
  Endpoint endpoint;
  endpoint.kind = Kind::kTcp;
  endpoint.host = std::move(host);
  endpoint.port = port;
  return endpoint;
}

std::string Endpoint::ToString() const {
  switch (kind) {
    case Kind::kUnix: return "unix:" + path;
    case Kind::kTcp: return "tcp:" + host + ":" + std::to_string(port);
    case Kind::kInproc: return "inproc:" + path;
  }
  return "";
}

uint64_t TransportBytes() { return g_transport_bytes.load(std::memory_order_relaxed); }

Connection::Connection(int fd) : fd_(fd) {}

Connection::~Connection() { Close(); }

Connection::Connection(Connection&& other) noexcept
    : fd_(std::exchange(other.fd_, -1)),
      send_mutex_(std::move(other.send_mutex_)),
      splitter_(std::move(other.splitter_)) {
  other.send_mutex_ = std::make_unique<std::mutex>();
}

Connection& Connection::operator=(Connection&& other) noexcept {
  if (this != &other) {
    Close();
    fd_ = std::exchange(other.fd_, -1);
    send_mutex_ = std::move(other.send_mutex_);
    splitter_ = std::move(other.splitter_);
    other.send_mutex_ = std::make_unique<std::mutex>();
  }
  return *this;
}

Connection Connection::Connect(const Endpoint& endpoint) {
  int fd = -1;
  int rc = -1;
  switch (endpoint.kind) {
    case Endpoint::Kind::kUnix: {
      sockaddr_un addr = UnixAddress(endpoint.path);
      fd = ::socket(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0);
      if (fd >= 0) {
        rc = ::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr));
      }
      break;
    }
    case Endpoint::Kind::kTcp: {
      sockaddr_in addr = TcpAddress(endpoint);
      fd = ::socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC, 0);
      if (fd >= 0) {
        rc = ::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr));
        int one = 1;
        ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
      }
      break;
    }
    case Endpoint::Kind::kInproc:
      throw Error(ErrorCode::kTransportError, "in-process endpoint has no socket: " + endpoint.ToString());
  }
  if (rc != 0) {
    std::string message = Errno("connect " + endpoint.ToString());
    if (fd >= 0) {
      ::close(fd);
    }
    throw Error(ErrorCode::kTransportError, message);
  }
  return Connection(fd);
}

void Connection::Send(const WireMessage& message) {
  if (fd_ < 0) {
    throw Error(ErrorCode::kTransportError, "send on closed connection");
  }
  std::vector<uint8_t> payload = Encode(message);
  std::vector<uint8_t> frame = Frame(payload);
  std::lock_guard<std::mutex> lock(*send_mutex_);
  SendAll(fd_, frame.data(), frame.size());
}

std::optional<WireMessage> Connection::Receive(std::optional<std::chrono::milliseconds> timeout) {
  auto deadline = timeout ? std::chrono::steady_clock::now() + *timeout
                          : std::chrono::steady_clock::time_point::max();
  while (true) {
    if (auto payload = splitter_.Next()) {
      return Decode(*payload);
    }
    if (fd_ < 0) {
      return std::nullopt;
    }
    if (timeout) {
      auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
      pollfd pfd{fd_, POLLIN, 0};
      int rc = left.count() > 0 ? ::poll(&pfd, 1, static_cast<int>(left.count())) : 0;
      if (rc < 0 && errno == EINTR) {
        continue;
      }
      if (rc == 0) {
        throw Error(ErrorCode::kTimeout, "no reply within " + std::to_string(timeout->count()) + " ms");
      }
    }
    uint8_t buffer[64 * 1024];
    ssize_t n = ::recv(fd_, buffer, sizeof(buffer), 0);
    if (n < 0) {
      if (errno == EINTR) {
        continue;
      }
      if (errno == ECONNRESET) {
        return std::nullopt;
      }
      throw Error(ErrorCode::kTransportError, Errno("recv"));
    }
    if (n == 0) {
      if (splitter_.buffered() > 0) {
        throw Error(ErrorCode::kTruncatedMessage, "stream ended inside a frame");
      }
      return std::nullopt;
    }
    g_transport_bytes.fetch_add(static_cast<uint64_t>(n), std::memory_order_relaxed);
    splitter_.Feed(std::span<const uint8_t>(buffer, static_cast<size_t>(n)));
  }
}

void Connection::Shutdown() {
  if (fd_ >= 0) {
    ::shutdown(fd_, SHUT_RDWR);
  }
}

void Connection::Close() {
  if (fd_ >= 0) {
    ::close(fd_);
    fd_ = -1;
  }
}

Listener::~Listener() { Release(); }

Listener::Listener(Listener&& other) noexcept
    : fd_(std::exchange(other.fd_, -1)), endpoint_(std::move(other.endpoint_)) {}

Listener& Listener::operator=(Listener&& other) noexcept {
  if (this != &other) {
    Release();
    fd_ = std::exchange(other.fd_, -1);
    endpoint_ = std::move(other.endpoint_);
  }
  return *this;
}

Listener Listener::Bind(const Endpoint& endpoint) {
  Listener listener;
  listener.endpoint_ = endpoint;
  int rc = -1;
  switch (endpoint.kind) {
    case Endpoint::Kind::kUnix: {
      sockaddr_un addr = UnixAddress(endpoint.path);
      if (::access(endpoint.path.c_str(), F_OK) == 0) {
        if (ConnectUnix(endpoint.path)) {
          throw Error(ErrorCode::kAddressInUse, endpoint.ToString());
        }
        ::unlink(endpoint.path.c_str());
      }
      listener.fd_ = ::socket(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0);
      rc = ::bind(listener.fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr));
      break;
    }
    case Endpoint::Kind::kTcp: {
      sockaddr_in addr = TcpAddress(endpoint);
      listener.fd_ = ::socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC, 0);
      int one = 1;
      ::setsockopt(listener.fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
      rc = ::bind(listener.fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr));
      if (rc == 0) {
        socklen_t len = sizeof(addr);
        ::getsockname(listener.fd_, reinterpret_cast<sockaddr*>(&addr), &len);
        listener.endpoint_.port = ntohs(addr.sin_port);
      }
      break;
    }
    case Endpoint::Kind::kInproc:
      throw Error(ErrorCode::kInvalidArgument, "cannot listen on " + endpoint.ToString());
  }
  if (rc != 0) {
    ErrorCode code = errno == EADDRINUSE ? ErrorCode::kAddressInUse : ErrorCode::kTransportError;
    throw Error(code, Errno("bind " + endpoint.ToString()));
  }
  if (::listen(listener.fd_, 128) != 0) {
    throw Error(ErrorCode::kTransportError, Errno("listen " + endpoint.ToString()));
  }
  return listener;
}

std::optional<Connection> Listener::Accept() {
  while (fd_ >= 0) {
    int fd = ::accept4(fd_, nullptr, nullptr, SOCK_CLOEXEC);
    if (fd >= 0) {
      if (endpoint_.kind == Endpoint::Kind::kTcp) {
        int one = 1;
        ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
      }
      return Connection(fd);
    }
    if (errno == EINTR || errno == ECONNABORTED) {
      continue;
    }
    return std::nullopt;
  }
  return std::nullopt;
}

void Listener::Shutdown() {
  if (fd_ >= 0) {
    ::shutdown(fd_, SHUT_RDWR);
  }
}

void Listener::Release() {
  if (fd_ >= 0) {
    ::close(fd_);
    fd_ = -1;
    if (endpoint_.kind == Endpoint::Kind::kUnix) {
      ::unlink(endpoint_.path.c_str());
    }
  }
}

}  // namespace treble::wire
