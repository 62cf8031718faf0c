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

#ifndef TREBLE_RUNTIME_FMQ_H_
#define TREBLE_RUNTIME_FMQ_H_

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>

namespace treble::runtime {

// Single-producer single-consumer byte ring in shared memory. The region
// starts with a header (magic `TFMQ`, u32 capacity, u64 read counter, u64
// write counter) followed by the data area. Counters only grow; positions
// are counters masked by capacity - 1.
class FastQueue {
 public:
  // Anonymous shared mapping, inherited across fork.
  static FastQueue Create(uint32_t capacity);
  // File-backed mapping another process can Open. Truncates `path`.
  static FastQueue CreateFile(const std::string& path, uint32_t capacity);
  static FastQueue Open(const std::string& path);

  FastQueue(FastQueue&& other) noexcept;
  FastQueue& operator=(FastQueue&& other) noexcept;
  ~FastQueue();

  uint32_t capacity() const { return capacity_; }
  size_t AvailableToRead() const;
  size_t AvailableToWrite() const;

  // Non-blocking: accepts as many bytes as fit, possibly none.
  size_t Write(std::span<const uint8_t> bytes);
  // Non-blocking: removes up to out.size() bytes.
  size_t Read(std::span<uint8_t> out);

  // Waits, spinning then yielding, until all of `bytes` is written or the
  // timeout passes. Returns the bytes written.
  size_t WriteBlocking(std::span<const uint8_t> bytes, std::chrono::nanoseconds timeout);
  // Same for reading exactly out.size() bytes.
  size_t ReadBlocking(std::span<uint8_t> out, std::chrono::nanoseconds timeout);

 private:
  FastQueue(void* region, size_t region_size, uint32_t capacity);
  void Release();

  uint64_t& read_counter() const;
  uint64_t& write_counter() const;

  void* region_ = nullptr;
  size_t region_size_ = 0;
  uint32_t capacity_ = 0;
  uint8_t* data_ = nullptr;
};

}  // namespace treble::runtime

#endif  // TREBLE_RUNTIME_FMQ_H_
