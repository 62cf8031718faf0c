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

#include <thread>

#include "generators.h"
#include "oracles.h"
#include "gtest/gtest.h"
#include "test_util.h"
#include "treble/base/strings.h"
#include "treble/wire/codec.h"
#include "treble/wire/conformance.h"
#include "treble/wire/registry.h"
#include "treble/wire/transport.h"

namespace treble::wire {
namespace {

using Bytes = std::vector<uint8_t>;

TEST(CodecTest, ScalarLayout) {
  EXPECT_EQ(EncodeValue(TypedValue(int32_t{5})), (Bytes{0x02, 0x05, 0x00, 0x00, 0x00}));
  EXPECT_EQ(EncodeValue(TypedValue(true)), (Bytes{0x01, 0x01}));
  EXPECT_EQ(EncodeValue(TypedValue(uint64_t{0x0102030405060708})),
            (Bytes{0x05, 0x08, 0x07, 0x06, 0x05, 0x04, 0x03, 0x02, 0x01}));
  EXPECT_EQ(EncodeValue(TypedValue(1.0f)), (Bytes{0x06, 0x00, 0x00, 0x80, 0x3F}));
  EXPECT_EQ(EncodeValue(TypedValue("hi")), (Bytes{0x08, 0x02, 0x00, 0x00, 0x00, 'h', 'i'}));
  EXPECT_EQ(EncodeValue(TypedValue(Handle{3})), (Bytes{0x0C, 3, 0, 0, 0, 0, 0, 0, 0}));
}

TEST(CodecTest, VecLayout) {
  TypedValue vec(VecValue{ValueTag::kInt32, {TypedValue(int32_t{1}), TypedValue(int32_t{2})}});
  EXPECT_EQ(EncodeValue(vec), (Bytes{0x09, 0x02, 0x02, 0x00, 0x00, 0x00, 0x01, 0x00, 0x00, 0x00, 0x02, 0x00, 0x00, 0x00}));
  EXPECT_EQ(DecodeValue(EncodeValue(vec)), vec);
}

TEST(CodecTest, StructEnumAndMessageLayout) {
  StructValue s{"a::S", {NamedValue{"x", TypedValue(EnumValue{"a::E", -1})}}};
  Bytes expected = {0x0A, 4, 0, 0, 0, 'a', ':', ':', 'S', 1, 0, 0, 0, 1, 0, 0, 0, 'x',
                    0x0B, 4, 0, 0, 0, 'a', ':', ':', 'E', 0xFF, 0xFF, 0xFF, 0xFF};
  EXPECT_EQ(EncodeValue(TypedValue(s)), expected);

  WireMessage m;
  m.kind = MessageKind::kCall;
  m.correlation_id = 0x0102;
  m.fqname = "p@1.0::I";
  m.method = "f";
  m.values = {TypedValue(true)};
  Bytes payload = {1, 0x02, 0x01, 0, 0, 0, 0, 0, 0, 8, 0, 0, 0, 'p', '@', '1', '.', '0', ':', ':', 'I',
                   1, 0, 0, 0, 'f', 1, 0, 0, 0, 0x01, 0x01};
  EXPECT_EQ(Encode(m), payload);
  EXPECT_EQ(Decode(payload), m);
  Bytes frame = Frame(payload);
  EXPECT_EQ(frame.size(), payload.size() + 4);
  EXPECT_EQ(frame[0], payload.size());
}

TEST(CodecTest, DecodeErrors) {
  EXPECT_TREBLE_ERROR(DecodeValue(Bytes{0x02, 0x05, 0x00}), ErrorCode::kTruncatedMessage);
  EXPECT_TREBLE_ERROR(DecodeValue(Bytes{}), ErrorCode::kTruncatedMessage);
  EXPECT_TREBLE_ERROR(DecodeValue(Bytes{0x0D}), ErrorCode::kUnknownTag);
  EXPECT_TREBLE_ERROR(DecodeValue(Bytes{0x00}), ErrorCode::kUnknownTag);
  EXPECT_TREBLE_ERROR(DecodeValue(Bytes{0x09, 0x0F, 0, 0, 0, 0}), ErrorCode::kUnknownTag);
  EXPECT_TREBLE_ERROR(DecodeValue(Bytes{0x01, 0x01, 0x00}), ErrorCode::kTrailingBytes);
  // Length prefix larger than the remaining bytes.
  EXPECT_TREBLE_ERROR(DecodeValue(Bytes{0x08, 0xFF, 0xFF, 0xFF, 0x7F, 'a'}), ErrorCode::kTruncatedMessage);
  EXPECT_TREBLE_ERROR(DecodeValue(Bytes{0x09, 0x02, 0xFF, 0xFF, 0xFF, 0x7F}), ErrorCode::kTruncatedMessage);
  EXPECT_TREBLE_ERROR(Decode(Bytes{9, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}),
                      ErrorCode::kUnknownTag);
  WireMessage m;
  m.values = {TypedValue(int32_t{1})};
  Bytes payload = Encode(m);
  for (size_t cut = 0; cut < payload.size(); ++cut) {
    EXPECT_TREBLE_ERROR(Decode(std::span(payload).first(cut)), ErrorCode::kTruncatedMessage);
  }
  payload.push_back(0);
  EXPECT_TREBLE_ERROR(Decode(payload), ErrorCode::kTrailingBytes);
}

TEST(CodecTest, HeterogeneousVecIsRejected) {
  TypedValue vec(VecValue{ValueTag::kInt32, {TypedValue(int64_t{1})}});
  EXPECT_TREBLE_ERROR(EncodeValue(vec), ErrorCode::kTypeMismatch);
}

TEST(CodecTest, RandomConformantMessagesRoundTrip) {
  testing::Rng rng(1234);
  int checked = 0;
  while (checked < 1500) {
    ir::InterfaceSpec spec = testing::RandomInterfaceSpec(rng);
    for (int i = 0; i < 5; ++i, ++checked) {
      WireMessage m = testing::RandomMessage(rng, spec);
      Bytes bytes = Encode(m);
      ASSERT_EQ(Decode(bytes), m);
      // Deterministic.
      ASSERT_EQ(Encode(m), bytes);
    }
  }
}

TEST(CodecTest, GeneratedValuesConformToTheirSpec) {
  testing::Rng rng(99);
  for (int i = 0; i < 500; ++i) {
    ir::VarSpec spec = testing::RandomVarSpec(rng, 3);
    TypedValue value = testing::RandomValue(rng, spec);
    EXPECT_NO_THROW(CheckValue(spec, value, "v"));
    EXPECT_NO_THROW(CheckValue(spec, DefaultValue(spec), "v"));
  }
}

TEST(FrameSplitterTest, ConcatenatedFramesResplitUnderAnyChunking) {
  testing::Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    ir::InterfaceSpec spec = testing::RandomInterfaceSpec(rng);
    std::vector<Bytes> payloads;
    Bytes stream;
    for (int i = 0; i < 20; ++i) {
      payloads.push_back(Encode(testing::RandomMessage(rng, spec)));
      Bytes frame = Frame(payloads.back());
      stream.insert(stream.end(), frame.begin(), frame.end());
    }
    FrameSplitter splitter;
    std::vector<Bytes> out;
    size_t pos = 0;
    while (pos < stream.size()) {
      size_t chunk = std::min<size_t>(stream.size() - pos, 1 + rng() % 97);
      splitter.Feed(std::span(stream).subspan(pos, chunk));
      pos += chunk;
      while (auto payload = splitter.Next()) {
        out.push_back(*payload);
      }
    }
    EXPECT_EQ(out, payloads);
    EXPECT_EQ(splitter.buffered(), 0u);
  }
}

TEST(FrameSplitterTest, OversizedFrameIsRejected) {
  FrameSplitter splitter;
  Bytes prefix = {0xFF, 0xFF, 0xFF, 0xFF};
  splitter.Feed(prefix);
  EXPECT_TREBLE_ERROR(splitter.Next(), ErrorCode::kResourceExhausted);
}

TEST(ConformanceTest, MismatchNamesThePath) {
  ir::InterfaceSpec vehicle = testing::CompileHal("hardware.automotive.vehicle@2.0::IVehicle");
  const ir::ApiSpec* api = vehicle.FindApi("getPropConfigs");
  std::vector<TypedValue> args = {
      TypedValue(VecValue{ValueTag::kInt32, {TypedValue(int32_t{1}), TypedValue(int32_t{2})}})};
  EXPECT_NO_THROW(CheckValues(api->args, args, api->name));
  std::vector<TypedValue> wide = {TypedValue(VecValue{ValueTag::kInt64, {}})};
  try {
    CheckValues(api->args, wide, api->name);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTypeMismatch);
    EXPECT_NE(std::string(e.what()).find("getPropConfigs.props"), std::string::npos) << e.what();
  }
  EXPECT_TREBLE_ERROR(CheckValues(api->args, {}, api->name), ErrorCode::kTypeMismatch);
  TypedValue config = DefaultValue(api->returns[1].element.operator*());
  EXPECT_EQ(FormatValue(config, &*api->returns[1].element).substr(0, 25), "{prop: 0, access: NONE, c");
}

ServiceRecord Record(const std::string& fqname, const std::string& endpoint, const std::string& instance = "default") {
  return ServiceRecord{fqname, instance, endpoint, Transport::kBinderized};
}

TEST(RegistryTest, RegisterLookupReplace) {
  Registry registry;
  registry.Register(Record("demo.light@1.0::ILight", "unix:/a"));
  EXPECT_EQ(registry.Lookup("demo.light@1.0::ILight").endpoint, "unix:/a");
  registry.Register(Record("demo.light@1.0::ILight", "unix:/b"));
  EXPECT_EQ(registry.Lookup("demo.light@1.0::ILight").endpoint, "unix:/b");
  EXPECT_EQ(registry.List().size(), 1u);
  EXPECT_TREBLE_ERROR(registry.Lookup("demo.light@1.0::ILight", "other"), ErrorCode::kNotFound);
  registry.Unregister("demo.light@1.0::ILight", "default");
  EXPECT_TREBLE_ERROR(registry.Lookup("demo.light@1.0::ILight"), ErrorCode::kNotFound);
}

TEST(RegistryTest, MinorVersionRule) {
  Registry registry;
  registry.Register(Record("demo.light@1.1::ILight", "unix:/11"));
  // Candidates for @1.0: {1.1}. Highest minor wins.
  EXPECT_EQ(registry.Lookup("demo.light@1.0::ILight").fqname, "demo.light@1.1::ILight");
  EXPECT_EQ(registry.Lookup("demo.light@1.1::ILight").endpoint, "unix:/11");
  EXPECT_TREBLE_ERROR(registry.Lookup("demo.light@2.0::ILight"), ErrorCode::kNotFound);
  EXPECT_TREBLE_ERROR(registry.Lookup("demo.light@1.2::ILight"), ErrorCode::kNotFound);
  registry.Register(Record("demo.light@1.0::ILight", "unix:/10"));
  registry.Register(Record("demo.light@1.3::ILight", "unix:/13"));
  registry.Register(Record("demo.light@2.5::ILight", "unix:/25"));
  registry.Register(Record("demo.light@1.9::ILamp", "unix:/lamp"));
  registry.Register(Record("demo.lights@1.9::ILight", "unix:/lights"));
  EXPECT_EQ(registry.Lookup("demo.light@1.0::ILight").endpoint, "unix:/13");
  EXPECT_EQ(registry.Lookup("demo.light@1.2::ILight").endpoint, "unix:/13");
  EXPECT_EQ(registry.Lookup("demo.light@2.0::ILight").endpoint, "unix:/25");
}

TEST(RegistryTest, ConcurrentRegistrationsAllVisible) {
  Registry registry;
  constexpr int kThreads = 8;
  constexpr int kEach = 50;
  std::vector<std::thread> threads;
  for (int t = 0; t < kThreads; ++t) {
    threads.emplace_back([&registry, t] {
      for (int i = 0; i < kEach; ++i) {
        registry.Register(Record("demo.light@1.0::ILight", "unix:/" + std::to_string(t),
                                 "i" + std::to_string(t) + "_" + std::to_string(i)));
        registry.Lookup("demo.light@1.0::ILight", "i" + std::to_string(t) + "_" + std::to_string(i));
      }
    });
  }
  for (auto& thread : threads) {
    thread.join();
  }
  std::vector<ServiceRecord> all = registry.List();
  ASSERT_EQ(all.size(), static_cast<size_t>(kThreads * kEach));
  for (int t = 0; t < kThreads; ++t) {
    for (int i = 0; i < kEach; ++i) {
      EXPECT_EQ(registry.Lookup("demo.light@1.0::ILight", "i" + std::to_string(t) + "_" + std::to_string(i)).endpoint,
                "unix:/" + std::to_string(t));
    }
  }
}

TEST(RegistryTest, LookupIsMonotoneUnderAdditions) {
  testing::Rng rng(8);
  auto random_fq = [&] {
    return std::string(rng() % 2 ? "demo.a" : "demo.b") + "@" + std::to_string(rng() % 3) + "." +
           std::to_string(rng() % 4) + "::" + (rng() % 2 ? "IX" : "IY");
  };
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<ServiceRecord> records;
    std::vector<std::string> queries;
    for (int i = 0; i < 10; ++i) {
      queries.push_back(random_fq());
    }
    for (int step = 0; step < 10; ++step) {
      std::vector<bool> before;
      for (const auto& q : queries) {
        before.push_back(SelectCompatible(records, q, "default").has_value());
      }
      records.push_back(Record(random_fq(), "unix:/" + std::to_string(step)));
      for (size_t i = 0; i < queries.size(); ++i) {
        auto found = SelectCompatible(records, queries[i], "default");
        if (before[i]) {
          EXPECT_TRUE(found.has_value());
        }
        if (found) {
          idl::FqName want = idl::FqName::Parse(queries[i]);
          idl::FqName have = idl::FqName::Parse(found->fqname);
          EXPECT_EQ(have.package.version.major, want.package.version.major);
          EXPECT_GE(have.package.version.minor, want.package.version.minor);
        }
      }
    }
  }
}

TEST(RemoteRegistryTest, SpeaksToServer) {
  testing::TempDir dir;
  Endpoint endpoint = Endpoint::Unix(dir.File("registry.sock"));
  auto shared = std::make_shared<Registry>();
  RegistryServer server(endpoint, shared);
  RemoteRegistry client(endpoint);
  client.Register(Record("demo.light@1.1::ILight", "unix:/x"));
  EXPECT_EQ(shared->Lookup("demo.light@1.1::ILight").endpoint, "unix:/x");
  EXPECT_EQ(client.Lookup("demo.light@1.0::ILight").fqname, "demo.light@1.1::ILight");
  EXPECT_TREBLE_ERROR(client.Lookup("demo.light@2.0::ILight"), ErrorCode::kNotFound);
  ServiceRecord pass{"demo.graphics.mapper@1.0::IMapper", "default", "inproc:m", Transport::kPassthrough};
  client.Register(pass);
  EXPECT_EQ(client.List().size(), 2u);
  EXPECT_EQ(client.Lookup(pass.fqname), pass);
  client.Unregister(pass.fqname, pass.instance);
  EXPECT_EQ(client.List().size(), 1u);
}

TEST(RemoteRegistryTest, UnavailableWithoutServer) {
  testing::TempDir dir;
  RemoteRegistry client(Endpoint::Unix(dir.File("missing.sock")));
  EXPECT_TREBLE_ERROR(client.List(), ErrorCode::kRegistryUnavailable);
}

TEST(RegistryAddressTest, EnvironmentOverridesDefault) {
  unsetenv("TREBLE_REGISTRY");
  EXPECT_EQ(DefaultRegistryAddress(), "./treble-registry.sock");
  setenv("TREBLE_REGISTRY", "unix:/tmp/r.sock", 1);
  EXPECT_EQ(DefaultRegistryAddress(), "unix:/tmp/r.sock");
  unsetenv("TREBLE_REGISTRY");
}

TEST(TransportTest, EndpointParsing) {
  EXPECT_EQ(Endpoint::Parse("tcp:127.0.0.1:5731").port, 5731);
  EXPECT_EQ(Endpoint::Parse("/tmp/x.sock").ToString(), "unix:/tmp/x.sock");
  EXPECT_EQ(Endpoint::Parse("inproc:a/b").kind, Endpoint::Kind::kInproc);
  EXPECT_TREBLE_ERROR(Endpoint::Parse("tcp:host"), ErrorCode::kInvalidArgument);
  EXPECT_TREBLE_ERROR(Endpoint::Parse("tcp:host:99999"), ErrorCode::kInvalidArgument);
}

TEST(TransportTest, AddressInUseAndStaleSocket) {
  testing::TempDir dir;
  Endpoint endpoint = Endpoint::Unix(dir.File("s.sock"));
  {
    Listener first = Listener::Bind(endpoint);
    EXPECT_TREBLE_ERROR(Listener::Bind(endpoint), ErrorCode::kAddressInUse);
  }
  // A leftover file with nobody listening is replaced.
  treble::WriteFile(endpoint.path, "");
  EXPECT_NO_THROW(Listener::Bind(endpoint));
  Listener tcp = Listener::Bind(Endpoint::Tcp("127.0.0.1", 0));
  EXPECT_NE(tcp.endpoint().port, 0);
  EXPECT_TREBLE_ERROR(Listener::Bind(tcp.endpoint()), ErrorCode::kAddressInUse);
}

TEST(TransportTest, MessagesCrossASocket) {
  Listener listener = Listener::Bind(Endpoint::Tcp("127.0.0.1", 0));
  uint64_t before = TransportBytes();
  std::thread server([&] {
    auto connection = listener.Accept();
    while (auto m = connection->Receive()) {
      m->kind = MessageKind::kReturn;
      connection->Send(*m);
    }
  });
  Connection client = Connection::Connect(listener.endpoint());
  WireMessage m;
  m.kind = MessageKind::kCall;
  m.values = {TypedValue(std::string(200000, 'x'))};
  for (uint64_t i = 1; i <= 3; ++i) {
    m.correlation_id = i;
    client.Send(m);
    auto reply = client.Receive(std::chrono::milliseconds(5000));
    ASSERT_TRUE(reply);
    EXPECT_EQ(reply->correlation_id, i);
    EXPECT_EQ(reply->values, m.values);
  }
  EXPECT_GT(TransportBytes(), before + 4 * 200000);
  client.Close();
  server.join();
  EXPECT_TREBLE_ERROR(Connection::Connect(Endpoint::Unix("/nonexistent/x.sock")), ErrorCode::kTransportError);
}

TEST(TransportTest, ReceiveTimeout) {
  Listener listener = Listener::Bind(Endpoint::Tcp("127.0.0.1", 0));
  Connection client = Connection::Connect(listener.endpoint());
  auto server_side = listener.Accept();
  EXPECT_TREBLE_ERROR(client.Receive(std::chrono::milliseconds(50)), ErrorCode::kTimeout);
}

}  // namespace
}  // namespace treble::wire
