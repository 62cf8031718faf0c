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

#include <sys/wait.h>
#include <unistd.h>

#include <deque>
#include <thread>

#include "generators.h"
#include "gtest/gtest.h"
#include "test_util.h"
#include "treble/base/strings.h"
#include "treble/demo/demo.h"
#include "treble/runtime/fmq.h"
#include "treble/runtime/manifest.h"
#include "treble/runtime/proxy.h"
#include "treble/runtime/serve.h"
#include "treble/wire/conformance.h"
#include "treble/wire/transport.h"

namespace treble::runtime {
namespace {

using wire::EnumValue;
using wire::StructValue;
using wire::Transport;
using wire::TypedValue;
using wire::VecValue;

constexpr char kLight[] = "demo.light@1.0::ILight";
constexpr char kEcho[] = "demo.echo@1.0::IEcho";
constexpr char kVehicle[] = "hardware.automotive.vehicle@2.0::IVehicle";
constexpr char kVehicleCallback[] = "hardware.automotive.vehicle@2.0::IVehicleCallback";

class RuntimeTest : public ::testing::TestWithParam<Transport> {
 protected:
  std::unique_ptr<Service> Start(const std::string& fqname, Implementation impl, ServeOptions options = {}) {
    return Serve(testing::CompileHal(fqname), std::move(impl), GetParam(), &registry_, std::move(options));
  }
  std::unique_ptr<Proxy> Get(const std::string& fqname, ProxyOptions options = {}) {
    return GetService(registry_, testing::CompileHal(fqname), "default", options);
  }

  wire::Registry registry_;
};

TEST_P(RuntimeTest, LightSuitePassesForBothImplementations) {
  for (auto make : {demo::LightA, demo::LightB}) {
    auto service = Start(kLight, make());
    auto light = Get(kLight);
    EXPECT_EQ(light->transport(), GetParam());
    demo::SuiteResult result = demo::RunLightSuite(*light);
    EXPECT_TRUE(result.passed()) << ::testing::PrintToString(result.failures);
    EXPECT_GT(result.checks, 5);
  }
}

TEST_P(RuntimeTest, NewerMinorServesOlderClient) {
  auto service = Start("demo.light@1.1::ILight", demo::Light11());
  auto light = Get(kLight);
  EXPECT_TRUE(demo::RunLightSuite(*light).passed());
  auto newer = Get("demo.light@1.1::ILight");
  Values modes = newer->Call("getSupportedFlashModes", {});
  EXPECT_EQ(modes[0].as<VecValue>().items.size(), 2u);
}

TEST_P(RuntimeTest, IncompleteImplementationIsRejected) {
  Implementation missing;
  missing.On("getBrightness", [](CallContext&, const Values&) { return Values{TypedValue(int32_t{0})}; });
  try {
    Start(kLight, missing);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIncompleteImplementation);
    EXPECT_NE(std::string(e.what()).find("setLight"), std::string::npos);
  }
  EXPECT_TRUE(registry_.List().empty());
}

TEST_P(RuntimeTest, ClientSideChecksSendNothing) {
  auto service = Start(kEcho, demo::Echo());
  auto echo = Get(kEcho);
  uint64_t before = wire::TransportBytes();
  EXPECT_TREBLE_ERROR(echo->Call("nope", {}), ErrorCode::kUnknownMethod);
  EXPECT_TREBLE_ERROR(echo->Call("echo", {TypedValue(int32_t{1})}), ErrorCode::kTypeMismatch);
  EXPECT_TREBLE_ERROR(echo->Call("echo", {}), ErrorCode::kTypeMismatch);
  EXPECT_EQ(wire::TransportBytes(), before);
}

TEST_P(RuntimeTest, HandlerErrorsBecomeRemoteErrors) {
  Implementation impl = demo::Echo();
  impl.On("echo", [](CallContext&, const Values& args) -> Values {
    if (args[0].as<std::string>() == "bad") {
      throw Error(ErrorCode::kInvalidArgument, "refused");
    }
    if (args[0].as<std::string>() == "wrong") {
      return {TypedValue(int32_t{1})};
    }
    return args;
  });
  auto service = Start(kEcho, impl);
  auto echo = Get(kEcho);
  try {
    echo->Call("echo", {TypedValue("bad")});
    FAIL();
  } catch (const RemoteError& e) {
    EXPECT_EQ(e.remote_code(), "InvalidArgument");
    EXPECT_EQ(e.detail(), "refused");
  }
  try {
    echo->Call("echo", {TypedValue("wrong")});
    FAIL();
  } catch (const RemoteError& e) {
    EXPECT_EQ(e.remote_code(), "TypeMismatch");
  }
  // The service keeps working.
  EXPECT_EQ(echo->Call("echo", {TypedValue("ok")})[0].as<std::string>(), "ok");
}

TEST_P(RuntimeTest, CrashFailsTheCallAndServiceStaysRegistered) {
  auto service = Start("demo.fuzz@1.0::IFaulty", demo::Faulty());
  auto faulty = Get("demo.fuzz@1.0::IFaulty");
  std::string mode = "demo.fuzz@1.0::Mode";
  EXPECT_EQ(faulty->Call("setMode", {TypedValue(EnumValue{mode, 3}), TypedValue(int32_t{500})})[0].as<int32_t>(), 100);
  EXPECT_TREBLE_ERROR(faulty->Call("setMode", {TypedValue(EnumValue{mode, demo::kFaultyOrdinal}), TypedValue(int32_t{0})}),
                      ErrorCode::kTransportError);
  auto again = Get("demo.fuzz@1.0::IFaulty");
  EXPECT_EQ(again->Call("getMode", {})[0].as<EnumValue>().ordinal, 3);
}

TEST_P(RuntimeTest, OnewayReturnsBeforeHandlerFinishes) {
  auto state = std::make_shared<demo::EchoState>();
  state->notify_delay = std::chrono::milliseconds(400);
  auto service = Start(kEcho, demo::Echo(state));
  auto echo = Get(kEcho);
  auto start = std::chrono::steady_clock::now();
  EXPECT_TRUE(echo->Call("notify", {TypedValue(int32_t{42})}).empty());
  EXPECT_LT(std::chrono::steady_clock::now() - start, std::chrono::milliseconds(200));
  EXPECT_EQ(state->notified.load(), 0);
  auto deadline = start + std::chrono::seconds(5);
  while (state->notified.load() == 0 && std::chrono::steady_clock::now() < deadline) {
    std::this_thread::sleep_for(std::chrono::milliseconds(10));
  }
  EXPECT_EQ(state->notified.load(), 1);
  EXPECT_EQ(state->last_token.load(), 42);
}

TEST_P(RuntimeTest, ClientCountTracksProxies) {
  auto service = Start(kEcho, demo::Echo());
  auto a = Get(kEcho);
  EXPECT_EQ(a->ClientCount(), 1u);
  {
    auto b = Get(kEcho);
    EXPECT_EQ(b->ClientCount(), 2u);
  }
  auto deadline = std::chrono::steady_clock::now() + std::chrono::seconds(3);
  while (a->ClientCount() != 1 && std::chrono::steady_clock::now() < deadline) {
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
  EXPECT_EQ(a->ClientCount(), 1u);
}

TEST_P(RuntimeTest, CallTimeout) {
  Implementation impl = demo::Echo();
  impl.On("echo", [](CallContext&, const Values& args) {
    std::this_thread::sleep_for(std::chrono::milliseconds(300));
    return args;
  });
  auto service = Start(kEcho, impl);
  if (GetParam() == Transport::kPassthrough) {
    GTEST_SKIP() << "direct calls have no timeout";
  }
  auto echo = Get(kEcho, ProxyOptions{std::chrono::milliseconds(50)});
  EXPECT_TREBLE_ERROR(echo->Call("echo", {TypedValue("x")}), ErrorCode::kTimeout);
}

TEST_P(RuntimeTest, OlderServerRejectsNewerClient) {
  auto service = Start(kLight, demo::LightA());
  ir::InterfaceSpec newer = testing::CompileHal("demo.light@1.1::ILight");
  try {
    auto proxy = ConnectProxy(newer, service->record().endpoint);
    proxy->Call("getBrightness", {});
    FAIL();
  } catch (const RemoteError& e) {
    EXPECT_EQ(e.remote_code(), "PackageMismatch");
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kPackageMismatch);
  }
}

struct Collected {
  std::mutex mutex;
  std::condition_variable cv;
  std::vector<StructValue> events;

  EventHandlers Handlers() {
    return {{"onPropertyEvent",
             [this](const Values& values) {
               std::lock_guard<std::mutex> lock(mutex);
               for (const TypedValue& v : values[0].as<VecValue>().items) {
                 events.push_back(v.as<StructValue>());
               }
               cv.notify_all();
             }},
            {"onPropertySet", [](const Values&) {}}};
  }
  bool WaitFor(size_t n, std::chrono::milliseconds timeout) {
    std::unique_lock<std::mutex> lock(mutex);
    return cv.wait_for(lock, timeout, [&] { return events.size() >= n; });
  }
};

TypedValue Options(int32_t prop) {
  StructValue option{"hardware.automotive.vehicle@2.0::SubscribeOptions",
                     {{"propId", TypedValue(prop)}, {"sampleRate", TypedValue(10.0f)}}};
  return TypedValue(VecValue{wire::ValueTag::kStruct, {TypedValue(option)}});
}

int32_t Status(const Values& values) { return values.at(0).as<EnumValue>().ordinal; }

TEST_P(RuntimeTest, CallbacksDeliverEventsWithoutCrossTalk) {
  auto service = Start(kVehicle, demo::Vehicle({.events_per_subscription = 5, .interval = std::chrono::milliseconds(2)}));
  std::vector<int32_t> props = demo::VehicleProps();
  ir::InterfaceSpec callback_spec = testing::CompileHal(kVehicleCallback);
  auto first = Get(kVehicle);
  auto second = Get(kVehicle);
  Collected a, b;
  wire::Handle ha = first->RegisterCallback(callback_spec, a.Handlers());
  wire::Handle hb = second->RegisterCallback(callback_spec, b.Handlers());
  EXPECT_EQ(Status(first->Call("subscribe", {TypedValue(ha), Options(props[0])})), 0);
  EXPECT_EQ(Status(second->Call("subscribe", {TypedValue(hb), Options(props[1])})), 0);
  ASSERT_TRUE(a.WaitFor(5, std::chrono::seconds(3)));
  ASSERT_TRUE(b.WaitFor(5, std::chrono::seconds(3)));
  std::this_thread::sleep_for(std::chrono::milliseconds(50));
  std::lock_guard<std::mutex> la(a.mutex), lb(b.mutex);
  ASSERT_EQ(a.events.size(), 5u);
  ASSERT_EQ(b.events.size(), 5u);
  for (int i = 0; i < 5; ++i) {
    EXPECT_EQ(a.events[i].Field("prop")->as<int32_t>(), props[0]);
    EXPECT_EQ(b.events[i].Field("prop")->as<int32_t>(), props[1]);
    EXPECT_EQ(a.events[i].Field("timestamp")->as<int64_t>(), i + 1);
  }
}

TEST_P(RuntimeTest, NullCallbackAndUnknownProp) {
  auto service = Start(kVehicle, demo::Vehicle());
  auto vehicle = Get(kVehicle);
  EXPECT_EQ(Status(vehicle->Call("subscribe", {TypedValue(wire::Handle{0}), Options(demo::VehicleProps()[0])})), 2);
  Collected c;
  wire::Handle h = vehicle->RegisterCallback(testing::CompileHal(kVehicleCallback), c.Handlers());
  EXPECT_EQ(Status(vehicle->Call("subscribe", {TypedValue(h), Options(0x7777)})), 2);
}

TEST_P(RuntimeTest, ServiceDestructionWithdrawsRecord) {
  { auto service = Start(kEcho, demo::Echo()); }
  EXPECT_TREBLE_ERROR(Get(kEcho), ErrorCode::kNotFound);
}

INSTANTIATE_TEST_SUITE_P(Modes, RuntimeTest, ::testing::Values(Transport::kBinderized, Transport::kPassthrough),
                         [](const auto& info) { return std::string(wire::TransportName(info.param)); });

TEST(PassthroughTest, MapperMovesNoTransportBytes) {
  wire::Registry registry;
  auto service = Serve(testing::CompileHal("demo.graphics.mapper@1.0::IMapper"), demo::Mapper(),
                       Transport::kPassthrough, &registry);
  EXPECT_EQ(service->record().endpoint.rfind("inproc:", 0), 0u);
  auto mapper = GetService(registry, testing::CompileHal("demo.graphics.mapper@1.0::IMapper"));
  uint64_t before = wire::TransportBytes();
  Values imported = mapper->Call("importBuffer", {TypedValue(uint64_t{0x1000})});
  ASSERT_EQ(imported[0].as<EnumValue>().ordinal, 0);
  uint64_t buffer = imported[1].as<uint64_t>();
  StructValue rect{"demo.graphics.mapper@1.0::Rect",
                   {{"left", TypedValue(int32_t{4})}, {"top", TypedValue(int32_t{1})},
                    {"width", TypedValue(int32_t{8})}, {"height", TypedValue(int32_t{8})}}};
  for (int i = 0; i < 100; ++i) {
    Values locked = mapper->Call("lock", {TypedValue(buffer), TypedValue(uint64_t{3}), TypedValue(rect)});
    EXPECT_EQ(locked[0].as<EnumValue>().ordinal, 0);
    EXPECT_EQ(mapper->Call("unlock", {TypedValue(buffer)})[0].as<EnumValue>().ordinal, 0);
  }
  EXPECT_EQ(mapper->Call("freeBuffer", {TypedValue(buffer)})[0].as<EnumValue>().ordinal, 0);
  EXPECT_EQ(mapper->Call("freeBuffer", {TypedValue(buffer)})[0].as<EnumValue>().ordinal, 1);
  EXPECT_EQ(wire::TransportBytes(), before);
}

TEST(PassthroughTest, UnknownInprocAddress) {
  EXPECT_TREBLE_ERROR(ConnectProxy(testing::CompileHal(kEcho), "inproc:nowhere"), ErrorCode::kServiceUnavailable);
}

TEST(BinderizedTest, DeadEndpointIsUnavailable) {
  wire::Registry registry;
  registry.Register({kEcho, "default", "unix:/nonexistent/echo.sock", Transport::kBinderized});
  EXPECT_TREBLE_ERROR(GetService(registry, testing::CompileHal(kEcho)), ErrorCode::kServiceUnavailable);
}

TEST(BinderizedTest, ExplicitAddressInUse) {
  testing::TempDir dir;
  ServeOptions options;
  options.address = "unix:" + dir.File("echo.sock");
  auto first = Serve(testing::CompileHal(kEcho), demo::Echo(), Transport::kBinderized, nullptr, options);
  EXPECT_TREBLE_ERROR(Serve(testing::CompileHal(kEcho), demo::Echo(), Transport::kBinderized, nullptr, options),
                      ErrorCode::kAddressInUse);
}

// Same requests, fresh implementations in each mode: results and error
// codes must agree.
TEST(DifferentialTest, BinderizedMatchesPassthrough) {
  struct Target {
    std::string fqname;
    Implementation (*make)();
  };
  std::vector<Target> targets = {
      {kEcho, [] { return demo::Echo(); }},
      {kLight, demo::LightA},
      {"demo.graphics.mapper@1.0::IMapper", demo::Mapper},
  };
  testing::Rng rng(77);
  int calls = 0;
  for (const Target& target : targets) {
    ir::InterfaceSpec spec = testing::CompileHal(target.fqname);
    wire::Registry registry;
    ServeOptions pass_options;
    pass_options.instance = "pass";
    auto bind = Serve(spec, target.make(), Transport::kBinderized, &registry);
    auto pass = Serve(spec, target.make(), Transport::kPassthrough, &registry, pass_options);
    auto remote = GetService(registry, spec);
    auto local = GetService(registry, spec, "pass");
    for (int i = 0; i < 120; ++i, ++calls) {
      const ir::ApiSpec& api = spec.apis[rng() % spec.apis.size()];
      if (api.oneway) {
        continue;
      }
      Values args;
      for (const ir::VarSpec& var : api.args) {
        args.push_back(testing::RandomValue(rng, var));
      }
      auto run = [&](Proxy& proxy) -> std::pair<Values, std::string> {
        try {
          return {proxy.Call(api.name, args), ""};
        } catch (const RemoteError& e) {
          return {{}, e.remote_code()};
        } catch (const Error& e) {
          return {{}, std::string(ErrorCodeName(e.code()))};
        }
      };
      auto r = run(*remote);
      auto l = run(*local);
      ASSERT_EQ(r.second, l.second) << api.name;
      ASSERT_EQ(r.first, l.first) << api.name;
      wire::CheckValues(api.returns, r.first.empty() && !r.second.empty() ? Values{} : r.first, api.name + ".out");
    }
  }
  EXPECT_GE(calls, 200);
}

TEST(FastQueueTest, CapacityMustBePowerOfTwo) {
  EXPECT_TREBLE_ERROR(FastQueue::Create(1000), ErrorCode::kInvalidArgument);
  EXPECT_TREBLE_ERROR(FastQueue::Create(0), ErrorCode::kInvalidArgument);
  EXPECT_EQ(FastQueue::Create(1024).capacity(), 1024u);
}

TEST(FastQueueTest, WrapsAroundAndReportsSpace) {
  FastQueue q = FastQueue::Create(8);
  std::vector<uint8_t> in = {1, 2, 3, 4, 5, 6};
  EXPECT_EQ(q.Write(in), 6u);
  std::vector<uint8_t> out(4);
  EXPECT_EQ(q.Read(out), 4u);
  EXPECT_EQ(out, (std::vector<uint8_t>{1, 2, 3, 4}));
  EXPECT_EQ(q.Write(in), 6u);
  EXPECT_EQ(q.AvailableToRead(), 8u);
  EXPECT_EQ(q.AvailableToWrite(), 0u);
  EXPECT_EQ(q.Write(in), 0u);
  out.resize(8);
  EXPECT_EQ(q.Read(out), 8u);
  EXPECT_EQ(out, (std::vector<uint8_t>{5, 6, 1, 2, 3, 4, 5, 6}));
  EXPECT_EQ(q.Read(out), 0u);
  EXPECT_EQ(q.ReadBlocking(std::span(out).first(1), std::chrono::milliseconds(10)), 0u);
}

TEST(FastQueueTest, RandomOperationsMatchDequeModel) {
  testing::Rng rng(3);
  for (uint32_t capacity : {1u, 2u, 16u, 64u}) {
    FastQueue q = FastQueue::Create(capacity);
    std::deque<uint8_t> model;
    for (int step = 0; step < 5000; ++step) {
      size_t n = rng() % (2 * capacity + 1);
      if (rng() % 2) {
        std::vector<uint8_t> bytes(n);
        for (auto& b : bytes) {
          b = static_cast<uint8_t>(rng());
        }
        size_t expected = std::min(n, capacity - model.size());
        ASSERT_EQ(q.Write(bytes), expected);
        model.insert(model.end(), bytes.begin(), bytes.begin() + expected);
      } else {
        std::vector<uint8_t> out(n);
        size_t expected = std::min(n, model.size());
        ASSERT_EQ(q.Read(out), expected);
        for (size_t i = 0; i < expected; ++i) {
          ASSERT_EQ(out[i], model.front());
          model.pop_front();
        }
      }
      ASSERT_EQ(q.AvailableToRead(), model.size());
      ASSERT_EQ(q.AvailableToWrite(), capacity - model.size());
    }
  }
}

TEST(FastQueueTest, ThreadsStreamInOrder) {
  FastQueue q = FastQueue::Create(64);
  constexpr size_t kTotal = 200000;
  std::thread producer([&] {
    std::vector<uint8_t> chunk(37);
    for (size_t sent = 0; sent < kTotal; sent += chunk.size()) {
      size_t n = std::min(chunk.size(), kTotal - sent);
      for (size_t i = 0; i < n; ++i) {
        chunk[i] = static_cast<uint8_t>((sent + i) * 7);
      }
      ASSERT_EQ(q.WriteBlocking(std::span(chunk).first(n), std::chrono::seconds(10)), n);
    }
  });
  std::vector<uint8_t> got(kTotal);
  size_t received = 0;
  while (received < kTotal) {
    size_t n = std::min<size_t>(23, kTotal - received);
    ASSERT_EQ(q.ReadBlocking(std::span(got).subspan(received, n), std::chrono::seconds(10)), n);
    received += n;
  }
  producer.join();
  for (size_t i = 0; i < kTotal; ++i) {
    ASSERT_EQ(got[i], static_cast<uint8_t>(i * 7)) << i;
  }
}

TEST(FastQueueTest, CrossesProcessesThroughAFile) {
  testing::TempDir dir;
  std::string path = dir.File("q");
  FastQueue q = FastQueue::CreateFile(path, 256);
  pid_t pid = fork();
  ASSERT_GE(pid, 0);
  if (pid == 0) {
    FastQueue child = FastQueue::Open(path);
    std::vector<uint8_t> bytes(1000);
    for (size_t i = 0; i < bytes.size(); ++i) {
      bytes[i] = static_cast<uint8_t>(i);
    }
    size_t n = child.WriteBlocking(bytes, std::chrono::seconds(10));
    _exit(n == bytes.size() ? 0 : 1);
  }
  std::vector<uint8_t> out(1000);
  EXPECT_EQ(q.ReadBlocking(out, std::chrono::seconds(10)), out.size());
  for (size_t i = 0; i < out.size(); ++i) {
    ASSERT_EQ(out[i], static_cast<uint8_t>(i));
  }
  int status = 0;
  waitpid(pid, &status, 0);
  EXPECT_TRUE(WIFEXITED(status) && WEXITSTATUS(status) == 0);
  treble::WriteFile(dir.File("junk"), "not a queue at all, just some bytes padding the header out");
  EXPECT_TREBLE_ERROR(FastQueue::Open(dir.File("junk")), ErrorCode::kInvalidArgument);
  EXPECT_TREBLE_ERROR(FastQueue::Open(dir.File("missing")), ErrorCode::kIoError);
}

TEST(ManifestTest, VersionStringIsCanonical) {
  VendorManifest m;
  m.vndk = Version{30, 0};
  m.hals = {{"demo.light", Version{1, 1}, Transport::kBinderized},
            {"demo.graphics.mapper", Version{1, 0}, Transport::kPassthrough},
            {"demo.light", Version{1, 0}, Transport::kBinderized}};
  EXPECT_EQ(m.VersionString(),
            "demo.graphics.mapper@1.0/PASSTHROUGH;demo.light@1.0/BINDERIZED;demo.light@1.1/BINDERIZED;vndk@30.0");
  VendorManifest shuffled = m;
  std::reverse(shuffled.hals.begin(), shuffled.hals.end());
  EXPECT_EQ(shuffled.VersionString(), m.VersionString());
  EXPECT_EQ(m.Find("demo.light")->version, (Version{1, 1}));
  EXPECT_EQ(m.Find("demo.echo"), nullptr);
  VendorManifest parsed = VendorManifest::Parse(m.Emit());
  m.Canonicalize();
  EXPECT_EQ(parsed, m);
}

TEST(ManifestTest, ParseErrors) {
  EXPECT_TREBLE_ERROR(VendorManifest::Parse("hal: { name: \"a\" version: \"1.0\" transport: HIDL }\nvndk: { version: \"1.0\" }\n"),
                      ErrorCode::kSpecSyntaxError);
  EXPECT_TREBLE_ERROR(VendorManifest::Parse("hal: { name: \"a\" version: \"x\" transport: BINDERIZED }\nvndk: { version: \"1.0\" }\n"),
                      ErrorCode::kSpecSyntaxError);
  EXPECT_TREBLE_ERROR(VendorManifest::Parse("hal: { name: \"a\" version: \"1.0\" transport: BINDERIZED }\n"),
                      ErrorCode::kSpecSyntaxError);
}

}  // namespace
}  // namespace treble::runtime
