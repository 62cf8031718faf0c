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

#ifndef TREBLE_DEMO_DEMO_H_
#define TREBLE_DEMO_DEMO_H_

#include <atomic>
#include <chrono>
#include <memory>
#include <string>
#include <vector>

#include "treble/runtime/proxy.h"
#include "treble/runtime/service.h"

// Vendor-side implementations of the HALs under hal/demo and the vehicle
// package, plus the framework-side client suite used by the swap test.
namespace treble::demo {

// demo.light@1.0::ILight keeping brightness as an integer level.
runtime::Implementation LightA();
// Same contract, stored as a fraction of full scale.
runtime::Implementation LightB();
// demo.light@1.1::ILight.
runtime::Implementation Light11();

struct VehicleOptions {
  // onPropertyEvent emissions per subscribed property.
  int events_per_subscription = 10;
  std::chrono::milliseconds interval{5};
};
// hardware.automotive.vehicle@2.0::IVehicle. Subscribing starts a publisher
// that emits events whose timestamp field is a per-subscription sequence
// number starting at 1.
runtime::Implementation Vehicle(VehicleOptions options = {});
// Property ids reported by getAllPropConfigs.
std::vector<int32_t> VehicleProps();

// demo.graphics.mapper@1.0::IMapper.
runtime::Implementation Mapper();

struct EchoState {
  std::atomic<int> notified{0};
  std::atomic<int32_t> last_token{0};
  // Applied inside the oneway notify handler.
  std::chrono::milliseconds notify_delay{0};
};
// demo.echo@1.0::IEcho; every method returns its arguments.
runtime::Implementation Echo(std::shared_ptr<EchoState> state = std::make_shared<EchoState>());

// The ordinal of demo.fuzz@1.0::Mode that crashes setMode.
inline constexpr int32_t kFaultyOrdinal = 7;
// demo.fuzz@1.0::IFaulty.
runtime::Implementation Faulty();

// By name: light-a, light-b, light-1.1, vehicle, mapper, echo, faulty.
// Throws Error(kNotFound).
runtime::Implementation ByName(const std::string& name);
// The interface each named implementation serves.
std::string InterfaceOf(const std::string& name);
std::vector<std::string> Names();

struct SuiteResult {
  int checks = 0;
  std::vector<std::string> failures;
  bool passed() const { return failures.empty(); }
};

// The framework's expectations of demo.light@1.0::ILight. Must hold for any
// compliant implementation reached through `light`.
SuiteResult RunLightSuite(runtime::Proxy& light);

}  // namespace treble::demo

#endif  // TREBLE_DEMO_DEMO_H_
