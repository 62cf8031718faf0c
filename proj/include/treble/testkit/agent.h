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

#ifndef TREBLE_TESTKIT_AGENT_H_
#define TREBLE_TESTKIT_AGENT_H_

#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "treble/ir/interface_spec.h"
#include "treble/wire/registry.h"
#include "treble/wire/transport.h"

namespace treble::testkit {

inline constexpr char kAgentBanner[] = "treble-agent/1";
inline constexpr int kAgentPort = 5731;

// On-target agent serving host test sessions over the wire framing:
//   HELLO [banner]            -> HELLO [banner]
//   LOAD fqname [instance?]   -> OK [spec text, endpoint] | ERROR [LoadFailed, ..]
//   CALL / ONEWAY             -> RETURN | ERROR, forwarded to the service
//   EVENT                     <- callbacks, correlation_id = the host's handle
// Interface-typed arguments carry host-chosen handle ids; the agent
// registers a callback per id and forwards its invocations as EVENTs. Any
// other message, or a CALL before its LOAD, ends the session with ERROR
// [ProtocolMismatch, ..].
class Agent {
 public:
  // `library` must contain every interface and callback spec hosts load.
  // Throws Error(kAddressInUse).
  Agent(const wire::Endpoint& listen, ir::SpecLibrary library, std::shared_ptr<wire::RegistryClient> registry);
  ~Agent();
  Agent(const Agent&) = delete;
  Agent& operator=(const Agent&) = delete;

  const wire::Endpoint& endpoint() const { return listener_.endpoint(); }

 private:
  struct Session;
  void AcceptLoop();

  ir::SpecLibrary library_;
  std::shared_ptr<wire::RegistryClient> registry_;
  wire::Listener listener_;
  std::mutex mutex_;
  std::vector<std::shared_ptr<Session>> sessions_;
  std::vector<std::thread> threads_;
  std::thread accept_thread_;
};

}  // namespace treble::testkit

#endif  // TREBLE_TESTKIT_AGENT_H_
