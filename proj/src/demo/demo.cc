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

#include "treble/demo/demo.h"

#include <algorithm>
#include <cmath>
#include <condition_variable>
#include <functional>
#include <map>
#include <mutex>
#include <set>
#include <thread>

#include "treble/base/error.h"
#include "treble/wire/conformance.h"

namespace treble::demo {
namespace {

using runtime::CallContext;
using runtime::Values;
using wire::EnumValue;
using wire::NamedValue;
using wire::StructValue;
using wire::TypedValue;
using wire::VecValue;

constexpr char kLightPkg[] = "demo.light@1.0::";
constexpr char kVehiclePkg[] = "hardware.automotive.vehicle@2.0::";

TypedValue Enum(const std::string& type, int32_t ordinal) { return TypedValue(EnumValue{type, ordinal}); }

int32_t Ordinal(const TypedValue& value) { return value.as<EnumValue>().ordinal; }

// demo.light@1.0::Status
enum LightStatus : int32_t { kSuccess = 0, kLightNotSupported = 1, kBrightnessNotSupported = 2, kUnknown = 3 };
// demo.light@1.0::Flash
enum LightFlash : int32_t { kFlashNone = 0, kFlashTimed = 1, kFlashHardware = 2 };

TypedValue LightStatusValue(int32_t status) { return Enum(std::string(kLightPkg) + "Status", status); }

struct LightStateFields {
  uint32_t color = 0;
  int32_t flash = kFlashNone;
  int32_t on_ms = 0;
  int32_t off_ms = 0;
};

LightStateFields FromValue(const TypedValue& value) {
  const auto& s = value.as<StructValue>();
  return LightStateFields{s.Field("color")->as<uint32_t>(), Ordinal(*s.Field("flashMode")),
                          s.Field("flashOnMs")->as<int32_t>(), s.Field("flashOffMs")->as<int32_t>()};
}

TypedValue ToValue(const LightStateFields& f) {
  StructValue s;
  s.type_name = std::string(kLightPkg) + "LightState";
  s.fields = {{"color", TypedValue(f.color)},
              {"flashMode", Enum(std::string(kLightPkg) + "Flash", f.flash)},
              {"flashOnMs", TypedValue(f.on_ms)},
              {"flashOffMs", TypedValue(f.off_ms)}};
  return TypedValue(std::move(s));
}

// Storage strategy is the only difference between the light variants.
class LightStore {
 public:
  virtual ~LightStore() = default;
  virtual void SetLevel(int32_t level) = 0;
  virtual int32_t Level() const = 0;
  LightStateFields state;
  std::mutex mutex;
};

class IntegerStore : public LightStore {
 public:
  void SetLevel(int32_t level) override { level_ = level; }
  int32_t Level() const override { return level_; }

 private:
  int32_t level_ = 0;
};

class FractionStore : public LightStore {
 public:
  void SetLevel(int32_t level) override { fraction_ = level / 255.0; }
  int32_t Level() const override { return static_cast<int32_t>(std::lround(fraction_ * 255.0)); }

 private:
  double fraction_ = 0.0;
};

runtime::Implementation LightOn(std::shared_ptr<LightStore> store) {
  runtime::Implementation impl;
  impl.On("setBrightness", [store](CallContext&, const Values& args) {
    std::lock_guard<std::mutex> lock(store->mutex);
    store->SetLevel(std::clamp(args[0].as<int32_t>(), 0, 255));
    return Values{LightStatusValue(kSuccess)};
  });
  impl.On("getBrightness", [store](CallContext&, const Values&) {
    std::lock_guard<std::mutex> lock(store->mutex);
    return Values{TypedValue(store->Level())};
  });
  impl.On("setLight", [store](CallContext&, const Values& args) {
    LightStateFields next = FromValue(args[0]);
    if (next.flash == kFlashHardware) {
      return Values{LightStatusValue(kLightNotSupported)};
    }
    if (next.flash != kFlashNone && next.flash != kFlashTimed) {
      return Values{LightStatusValue(kUnknown)};
    }
    std::lock_guard<std::mutex> lock(store->mutex);
    store->state = next;
    return Values{LightStatusValue(kSuccess)};
  });
  impl.On("getLight", [store](CallContext&, const Values&) {
    std::lock_guard<std::mutex> lock(store->mutex);
    return Values{ToValue(store->state)};
  });
  return impl;
}

// Vehicle properties: id, access, change mode, sample rates.
struct PropInfo {
  int32_t prop;
  int32_t access;
  int32_t change_mode;
  float min_rate;
  float max_rate;
  std::string config;
};

const std::vector<PropInfo>& Props() {
  static const std::vector<PropInfo> props = {
      {0x11600207, 1, 2, 1.0f, 10.0f, "PERF_VEHICLE_SPEED"},
      {0x11400400, 1, 1, 0.0f, 0.0f, "GEAR_SELECTION"},
      {0x11100101, 1, 0, 0.0f, 0.0f, "INFO_MAKE"},
      {0x15400a03, 3, 1, 0.0f, 0.0f, "HVAC_FAN_SPEED"},
  };
  return props;
}

TypedValue VehicleStatus(int32_t code) { return Enum(std::string(kVehiclePkg) + "StatusCode", code); }

TypedValue ConfigValue(const PropInfo& info) {
  StructValue area;
  area.type_name = std::string(kVehiclePkg) + "VehicleAreaConfig";
  area.fields = {{"areaId", TypedValue(int32_t{0})},
                 {"minInt32Value", TypedValue(int32_t{0})},
                 {"maxInt32Value", TypedValue(int32_t{100})}};
  StructValue config;
  config.type_name = std::string(kVehiclePkg) + "VehiclePropConfig";
  config.fields = {
      {"prop", TypedValue(info.prop)},
      {"access", Enum(std::string(kVehiclePkg) + "VehiclePropertyAccess", info.access)},
      {"changeMode", Enum(std::string(kVehiclePkg) + "VehiclePropertyChangeMode", info.change_mode)},
      {"areaConfigs", TypedValue(VecValue{wire::ValueTag::kStruct, {TypedValue(std::move(area))}})},
      {"configString", TypedValue(info.config)},
      {"minSampleRate", TypedValue(info.min_rate)},
      {"maxSampleRate", TypedValue(info.max_rate)},
  };
  return TypedValue(std::move(config));
}

TypedValue PropValue(int64_t timestamp, int32_t prop, int32_t value) {
  StructValue s;
  s.type_name = std::string(kVehiclePkg) + "VehiclePropValue";
  s.fields = {{"timestamp", TypedValue(timestamp)},
              {"areaId", TypedValue(int32_t{0})},
              {"prop", TypedValue(prop)},
              {"int32Values", TypedValue(VecValue{wire::ValueTag::kInt32, {TypedValue(value)}})},
              {"floatValues", TypedValue(VecValue{wire::ValueTag::kFloat32, {}})},
              {"stringValue", TypedValue(std::string())}};
  return TypedValue(std::move(s));
}

const PropInfo* FindProp(int32_t prop) {
  for (const PropInfo& info : Props()) {
    if (info.prop == prop) {
      return &info;
    }
  }
  return nullptr;
}

// Publisher threads and stored property values. Destroyed with the service
// host, which stops and joins every publisher.
class VehicleState {
 public:
  explicit VehicleState(VehicleOptions options) : options_(options) {}

  ~VehicleState() {
    {
      std::lock_guard<std::mutex> lock(mutex_);
      stopping_ = true;
    }
    cv_.notify_all();
    for (std::thread& thread : publishers_) {
      thread.join();
    }
  }

  void Subscribe(const runtime::CallbackRef& callback, int32_t prop) {
    std::lock_guard<std::mutex> lock(mutex_);
    cancelled_.erase({callback.id(), prop});
    publishers_.emplace_back([this, callback, prop] { Publish(callback, prop); });
  }

  void Unsubscribe(uint64_t handle, int32_t prop) {
    std::lock_guard<std::mutex> lock(mutex_);
    cancelled_.insert({handle, prop});
  }

  std::pair<bool, TypedValue> Get(const TypedValue& request) {
    const auto& s = request.as<StructValue>();
    int32_t prop = s.Field("prop")->as<int32_t>();
    if (!FindProp(prop)) {
      return {false, request};
    }
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = values_.find(prop);
    return {true, it != values_.end() ? it->second : PropValue(0, prop, 0)};
  }

  bool Set(const TypedValue& value) {
    int32_t prop = value.as<StructValue>().Field("prop")->as<int32_t>();
    const PropInfo* info = FindProp(prop);
    if (!info || info->access == 1) {
      return false;
    }
    std::lock_guard<std::mutex> lock(mutex_);
    values_.insert_or_assign(prop, value);
    return true;
  }

 private:
  void Publish(runtime::CallbackRef callback, int32_t prop) {
    for (int64_t seq = 1; seq <= options_.events_per_subscription; ++seq) {
      {
        std::unique_lock<std::mutex> lock(mutex_);
        if (seq > 1 && cv_.wait_for(lock, options_.interval, [this] { return stopping_; })) {
          return;
        }
        if (stopping_ || cancelled_.contains({callback.id(), prop})) {
          return;
        }
      }
      VecValue batch{wire::ValueTag::kStruct, {PropValue(seq, prop, static_cast<int32_t>(seq))}};
      if (!callback.Emit("onPropertyEvent", {TypedValue(std::move(batch))})) {
        return;
      }
    }
  }

  VehicleOptions options_;
  std::mutex mutex_;
  std::condition_variable cv_;
  bool stopping_ = false;
  std::set<std::pair<uint64_t, int32_t>> cancelled_;
  std::map<int32_t, TypedValue> values_;
  std::vector<std::thread> publishers_;
};

}  // namespace

runtime::Implementation LightA() { return LightOn(std::make_shared<IntegerStore>()); }
runtime::Implementation LightB() { return LightOn(std::make_shared<FractionStore>()); }

runtime::Implementation Light11() {
  runtime::Implementation impl = LightOn(std::make_shared<IntegerStore>());
  impl.On("getSupportedFlashModes", [](CallContext&, const Values&) {
    std::string flash = std::string(kLightPkg) + "Flash";
    return Values{TypedValue(VecValue{wire::ValueTag::kEnum, {Enum(flash, kFlashNone), Enum(flash, kFlashTimed)}})};
  });
  return impl;
}

std::vector<int32_t> VehicleProps() {
  std::vector<int32_t> ids;
  for (const PropInfo& info : Props()) {
    ids.push_back(info.prop);
  }
  return ids;
}

runtime::Implementation Vehicle(VehicleOptions options) {
  auto state = std::make_shared<VehicleState>(options);
  runtime::Implementation impl;
  impl.On("getAllPropConfigs", [](CallContext&, const Values&) {
    VecValue configs{wire::ValueTag::kStruct, {}};
    for (const PropInfo& info : Props()) {
      configs.items.push_back(ConfigValue(info));
    }
    return Values{TypedValue(std::move(configs))};
  });
  impl.On("getPropConfigs", [](CallContext&, const Values& args) {
    VecValue configs{wire::ValueTag::kStruct, {}};
    bool all = true;
    for (const TypedValue& id : args[0].as<VecValue>().items) {
      const PropInfo* info = FindProp(id.as<int32_t>());
      if (info) {
        configs.items.push_back(ConfigValue(*info));
      } else {
        all = false;
      }
    }
    return Values{VehicleStatus(all ? 0 : 2), TypedValue(std::move(configs))};
  });
  impl.On("subscribe", [state](CallContext& ctx, const Values& args) {
    runtime::CallbackRef callback = ctx.Callback(0);
    if (!callback.valid()) {
      return Values{VehicleStatus(2)};
    }
    std::vector<int32_t> props;
    for (const TypedValue& option : args[1].as<VecValue>().items) {
      int32_t prop = option.as<StructValue>().Field("propId")->as<int32_t>();
      if (!FindProp(prop)) {
        return Values{VehicleStatus(2)};
      }
      props.push_back(prop);
    }
    for (int32_t prop : props) {
      state->Subscribe(callback, prop);
    }
    return Values{VehicleStatus(0)};
  });
  impl.On("unsubscribe", [state](CallContext& ctx, const Values& args) {
    state->Unsubscribe(ctx.Callback(0).id(), args[1].as<int32_t>());
    return Values{VehicleStatus(0)};
  });
  impl.On("get", [state](CallContext&, const Values& args) {
    auto [ok, value] = state->Get(args[0]);
    return Values{VehicleStatus(ok ? 0 : 2), value};
  });
  impl.On("set", [state](CallContext&, const Values& args) {
    return Values{VehicleStatus(state->Set(args[0]) ? 0 : 4)};
  });
  return impl;
}

runtime::Implementation Mapper() {
  struct Buffers {
    std::mutex mutex;
    uint64_t next = 1;
    std::map<uint64_t, uint64_t> raw;
    std::set<uint64_t> locked;
  };
  auto buffers = std::make_shared<Buffers>();
  std::string error = "demo.graphics.mapper@1.0::Error";
  // Error: NONE, BAD_BUFFER, BAD_VALUE, NO_RESOURCES
  runtime::Implementation impl;
  impl.On("importBuffer", [buffers, error](CallContext&, const Values& args) {
    uint64_t raw = args[0].as<uint64_t>();
    if (raw == 0) {
      return Values{Enum(error, 1), TypedValue(uint64_t{0})};
    }
    std::lock_guard<std::mutex> lock(buffers->mutex);
    uint64_t id = buffers->next++;
    buffers->raw[id] = raw;
    return Values{Enum(error, 0), TypedValue(id)};
  });
  impl.On("freeBuffer", [buffers, error](CallContext&, const Values& args) {
    std::lock_guard<std::mutex> lock(buffers->mutex);
    uint64_t id = args[0].as<uint64_t>();
    buffers->locked.erase(id);
    return Values{Enum(error, buffers->raw.erase(id) ? 0 : 1)};
  });
  impl.On("lock", [buffers, error](CallContext&, const Values& args) {
    std::lock_guard<std::mutex> lock(buffers->mutex);
    uint64_t id = args[0].as<uint64_t>();
    auto it = buffers->raw.find(id);
    if (it == buffers->raw.end()) {
      return Values{Enum(error, 1), TypedValue(uint64_t{0})};
    }
    const auto& rect = args[2].as<StructValue>();
    int32_t width = rect.Field("width")->as<int32_t>();
    int32_t height = rect.Field("height")->as<int32_t>();
    if (width < 0 || height < 0) {
      return Values{Enum(error, 2), TypedValue(uint64_t{0})};
    }
    buffers->locked.insert(id);
    uint64_t offset = static_cast<uint64_t>(rect.Field("top")->as<int32_t>()) * 4096u +
                      static_cast<uint64_t>(rect.Field("left")->as<int32_t>());
    return Values{Enum(error, 0), TypedValue(it->second + offset)};
  });
  impl.On("unlock", [buffers, error](CallContext&, const Values& args) {
    std::lock_guard<std::mutex> lock(buffers->mutex);
    return Values{Enum(error, buffers->locked.erase(args[0].as<uint64_t>()) ? 0 : 1)};
  });
  return impl;
}

runtime::Implementation Echo(std::shared_ptr<EchoState> state) {
  runtime::Implementation impl;
  auto identity = [](CallContext&, const Values& args) { return args; };
  impl.On("echo", identity);
  impl.On("echoInts", identity);
  impl.On("echoSample", identity);
  impl.On("echoMixed", identity);
  impl.On("notify", [state](CallContext&, const Values& args) {
    if (state->notify_delay.count() > 0) {
      std::this_thread::sleep_for(state->notify_delay);
    }
    state->last_token = args[0].as<int32_t>();
    state->notified.fetch_add(1);
    return Values{};
  });
  return impl;
}

runtime::Implementation Faulty() {
  auto mode = std::make_shared<std::atomic<int32_t>>(0);
  runtime::Implementation impl;
  impl.On("setMode", [mode](CallContext&, const Values& args) {
    int32_t ordinal = Ordinal(args[0]);
    if (ordinal == kFaultyOrdinal) {
      throw runtime::ServiceCrash("null dereference in mode table");
    }
    *mode = ordinal;
    return Values{TypedValue(std::clamp(args[1].as<int32_t>(), -100, 100))};
  });
  impl.On("getMode", [mode](CallContext&, const Values&) {
    return Values{Enum("demo.fuzz@1.0::Mode", mode->load())};
  });
  impl.On("label", [](CallContext&, const Values& args) {
    return Values{TypedValue(static_cast<uint32_t>(args[0].as<std::string>().size()))};
  });
  return impl;
}

namespace {

struct Entry {
  std::string interface;
  std::function<runtime::Implementation()> make;
};

const std::map<std::string, Entry>& Catalog() {
  static const std::map<std::string, Entry> catalog = {
      {"light-a", {"demo.light@1.0::ILight", LightA}},
      {"light-b", {"demo.light@1.0::ILight", LightB}},
      {"light-1.1", {"demo.light@1.1::ILight", Light11}},
      {"vehicle", {"hardware.automotive.vehicle@2.0::IVehicle", [] { return Vehicle(); }}},
      {"mapper", {"demo.graphics.mapper@1.0::IMapper", Mapper}},
      {"echo", {"demo.echo@1.0::IEcho", [] { return Echo(); }}},
      {"faulty", {"demo.fuzz@1.0::IFaulty", Faulty}},
  };
  return catalog;
}

const Entry& Lookup(const std::string& name) {
  auto it = Catalog().find(name);
  if (it == Catalog().end()) {
    throw Error(ErrorCode::kNotFound, "no demo implementation '" + name + "'");
  }
  return it->second;
}

}  // namespace

runtime::Implementation ByName(const std::string& name) { return Lookup(name).make(); }
std::string InterfaceOf(const std::string& name) { return Lookup(name).interface; }

std::vector<std::string> Names() {
  std::vector<std::string> names;
  for (const auto& [name, entry] : Catalog()) {
    names.push_back(name);
  }
  return names;
}

SuiteResult RunLightSuite(runtime::Proxy& light) {
  SuiteResult result;
  auto check = [&](bool ok, const std::string& what) {
    ++result.checks;
    if (!ok) {
      result.failures.push_back(what);
    }
  };
  auto status_of = [](const Values& values) { return Ordinal(values.at(0)); };
  try {
    for (int32_t level : {0, 1, 128, 254, 255}) {
      check(status_of(light.Call("setBrightness", {TypedValue(level)})) == kSuccess,
            "setBrightness(" + std::to_string(level) + ") succeeds");
      check(light.Call("getBrightness", {}).at(0).as<int32_t>() == level,
            "getBrightness returns " + std::to_string(level));
    }
    light.Call("setBrightness", {TypedValue(int32_t{999})});
    check(light.Call("getBrightness", {}).at(0).as<int32_t>() == 255, "brightness clamps at 255");
    light.Call("setBrightness", {TypedValue(int32_t{-5})});
    check(light.Call("getBrightness", {}).at(0).as<int32_t>() == 0, "brightness clamps at 0");

    LightStateFields timed{0xFF00FF00u, kFlashTimed, 100, 250};
    check(status_of(light.Call("setLight", {ToValue(timed)})) == kSuccess, "setLight(TIMED) succeeds");
    check(light.Call("getLight", {}).at(0) == ToValue(timed), "getLight returns the state just set");
    LightStateFields hardware{0xFFFFFFFFu, kFlashHardware, 0, 0};
    check(status_of(light.Call("setLight", {ToValue(hardware)})) == kLightNotSupported,
          "HARDWARE flash is reported unsupported");
    check(light.Call("getLight", {}).at(0) == ToValue(timed), "rejected state leaves the light unchanged");
  } catch (const std::exception& e) {
    result.failures.push_back(std::string("call failed: ") + e.what());
  }
  return result;
}

}  // namespace treble::demo
