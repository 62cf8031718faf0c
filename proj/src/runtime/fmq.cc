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

#include "treble/runtime/fmq.h"

#include <fcntl.h>
#include <sys/mman.h>
#include <sys/stat.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cstring>
#include <thread>

#include "treble/base/error.h"

namespace treble::runtime {
namespace {

struct Header {
  char magic[4];
  uint32_t capacity;
  uint64_t read;
  uint64_t write;
};

constexpr size_t kDataOffset = 64;
constexpr char kMagic[4] = {'T', 'F', 'M', 'Q'};

void CheckCapacity(uint32_t capacity) {
  if (capacity == 0 || (capacity & (capacity - 1)) != 0) {
    throw Error(ErrorCode::kInvalidArgument, "queue capacity must be a power of two, got " + std::to_string(capacity));
  }
}

void* Map(int fd, size_t size) {
  int flags = fd < 0 ? MAP_SHARED | MAP_ANONYMOUS : MAP_SHARED;
  void* region = ::mmap(nullptr, size, PROT_READ | PROT_WRITE, flags, fd, 0);
  if (region == MAP_FAILED) {
    throw Error(ErrorCode::kResourceExhausted, std::string("mmap: ") + std::strerror(errno));
  }
  return region;
}

void InitHeader(void* region, uint32_t capacity) {
  auto* header = static_cast<Header*>(region);
  std::memcpy(header->magic, kMagic, 4);
  header->capacity = capacity;
  header->read = 0;
  header->write = 0;
}

// Spin briefly, then yield, until `ready` or the deadline.
template <typename Ready>
bool Await(Ready ready, std::chrono::nanoseconds timeout) {
  auto deadline = std::chrono::steady_clock::now() + timeout;
  for (int spin = 0;; ++spin) {
    if (ready()) {
      return true;
    }
    if (spin >= 256) {
      if (std::chrono::steady_clock::now() >= deadline) {
        return false;
      }
      std::this_thread::yield();
    }
  }
}

}  // namespace

FastQueue::FastQueue(void* region, size_t region_size, uint32_t capacity)
    : region_(region),
      region_size_(region_size),
      capacity_(capacity),
      data_(static_cast<uint8_t*>(region) + kDataOffset) {}

FastQueue FastQueue::Create(uint32_t capacity) {
  CheckCapacity(capacity);
  size_t size = kDataOffset + capacity;
  void* region = Map(-1, size);
  InitHeader(region, capacity);
  return FastQueue(region, size, capacity);
}

FastQueue FastQueue::CreateFile(const std::string& path, uint32_t capacity) {
  CheckCapacity(capacity);
  int fd = ::open(path.c_str(), O_RDWR | O_CREAT | O_TRUNC | O_CLOEXEC, 0600);
  if (fd < 0) {
    throw Error(ErrorCode::kIoError, "open " + path + ": " + std::strerror(errno));
  }
  size_t size = kDataOffset + capacity;
  if (::ftruncate(fd, static_cast<off_t>(size)) != 0) {
    ::close(fd);
    throw Error(ErrorCode::kIoError, "ftruncate " + path + ": " + std::strerror(errno));
  }
  void* region = Map(fd, size);
  ::close(fd);
  InitHeader(region, capacity);
  return FastQueue(region, size, capacity);
}

FastQueue FastQueue::Open(const std::string& path) {
  int fd = ::open(path.c_str(), O_RDWR | O_CLOEXEC);
  if (fd < 0) {
    throw Error(ErrorCode::kIoError, "open " + path + ": " + std::strerror(errno));
  }
  struct stat st {};
  ::fstat(fd, &st);
  if (static_cast<size_t>(st.st_size) < kDataOffset) {
    ::close(fd);
    throw Error(ErrorCode::kInvalidArgument, path + " is not a queue file");
  }
  void* region = Map(fd, static_cast<size_t>(st.st_size));
  ::close(fd);
  const auto* header = static_cast<const Header*>(region);
  uint32_t capacity = header->capacity;
  if (std::memcmp(header->magic, kMagic, 4) != 0 || kDataOffset + capacity != static_cast<size_t>(st.st_size) ||
      capacity == 0 || (capacity & (capacity - 1)) != 0) {
    ::munmap(region, static_cast<size_t>(st.st_size));
    throw Error(ErrorCode::kInvalidArgument, path + " is not a queue file");
  }
  return FastQueue(region, static_cast<size_t>(st.st_size), capacity);
}

FastQueue::FastQueue(FastQueue&& other) noexcept
    : region_(std::exchange(other.region_, nullptr)),
      region_size_(other.region_size_),
      capacity_(other.capacity_),
      data_(other.data_) {}

FastQueue& FastQueue::operator=(FastQueue&& other) noexcept {
  if (this != &other) {
    Release();
    region_ = std::exchange(other.region_, nullptr);
    region_size_ = other.region_size_;
    capacity_ = other.capacity_;
    data_ = other.data_;
  }
  return *this;
}

FastQueue::~FastQueue() { Release(); }

void FastQueue::Release() {
  if (region_) {
    ::munmap(region_, region_size_);
    region_ = nullptr;
  }
}

uint64_t& FastQueue::read_counter() const { return static_cast<Header*>(region_)->read; }
uint64_t& FastQueue::write_counter() const { return static_cast<Header*>(region_)->write; }

size_t FastQueue::AvailableToRead() const {
  uint64_t write = std::atomic_ref<uint64_t>(write_counter()).load(std::memory_order_acquire);
  uint64_t read = std::atomic_ref<uint64_t>(read_counter()).load(std::memory_order_relaxed);
  return static_cast<size_t>(write - read);
}

size_t FastQueue::AvailableToWrite() const {
  uint64_t read = std::atomic_ref<uint64_t>(read_counter()).load(std::memory_order_acquire);
  uint64_t write = std::atomic_ref<uint64_t>(write_counter()).load(std::memory_order_relaxed);
  return capacity_ - static_cast<size_t>(write - read);
}

size_t FastQueue::Write(std::span<const uint8_t> bytes) {
  std::atomic_ref<uint64_t> write_ref(write_counter());
  uint64_t write = write_ref.load(std::memory_order_relaxed);
  uint64_t read = std::atomic_ref<uint64_t>(read_counter()).load(std::memory_order_acquire);
  size_t n = std::min(bytes.size(), capacity_ - static_cast<size_t>(write - read));
  if (n == 0) {
    return 0;
  }
  size_t pos = static_cast<size_t>(write & (capacity_ - 1));
  size_t first = std::min(n, capacity_ - pos);
  std::memcpy(data_ + pos, bytes.data(), first);
  std::memcpy(data_, bytes.data() + first, n - first);
  write_ref.store(write + n, std::memory_order_release);
  return n;
}

size_t FastQueue::Read(std::span<uint8_t> out) {
  std::atomic_ref<uint64_t> read_ref(read_counter());
  uint64_t read = read_ref.load(std::memory_order_relaxed);
  uint64_t write = std::atomic_ref<uint64_t>(write_counter()).load(std::memory_order_acquire);
  size_t n = std::min(out.size(), static_cast<size_t>(write - read));
  if (n == 0) {
    return 0;
  }
  size_t pos = static_cast<size_t>(read & (capacity_ - 1));
  size_t first = std::min(n, capacity_ - pos);
  std::memcpy(out.data(), data_ + pos, first);
  std::memcpy(out.data() + first, data_, n - first);
  read_ref.store(read + n, std::memory_order_release);
  return n;
}

size_t FastQueue::WriteBlocking(std::span<const uint8_t> bytes, std::chrono::nanoseconds timeout) {
  size_t done = 0;
  Await([&] {
    done += Write(bytes.subspan(done));
    return done == bytes.size();
  }, timeout);
  return done;
}

size_t FastQueue::ReadBlocking(std::span<uint8_t> out, std::chrono::nanoseconds timeout) {
  size_t done = 0;
  Await([&] {
    done += Read(out.subspan(done));
    return done == out.size();
  }, timeout);
  return done;
}

}  // namespace treble::runtime
