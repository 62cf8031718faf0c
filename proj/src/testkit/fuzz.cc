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

#include "treble/testkit/fuzz.h"

#include <bit>
#include <limits>
#include <map>
#include <set>

#include "treble/base/error.h"
#include "treble/runtime/proxy.h"
#include "treble/wire/conformance.h"

namespace treble::testkit {
namespace {

using wire::TypedValue;
using Rng = std::mt19937_64;

uint64_t Below(Rng& rng, uint64_t n) { return n == 0 ? 0 : rng() % n; }

template <typename T>
TypedValue MutateInteger(Rng& rng, T v) {
  switch (Below(rng, 6)) {
    case 0: return TypedValue(static_cast<T>(v + 1));
    case 1: return TypedValue(static_cast<T>(v - 1));
    case 2: return TypedValue(static_cast<T>(v ^ (T{1} << Below(rng, sizeof(T) * 8))));
    case 3: return TypedValue(std::numeric_limits<T>::min());
    case 4: return TypedValue(std::numeric_limits<T>::max());
    default: return TypedValue(T{0});
  }
}

template <typename T>
TypedValue RandomInteger(Rng& rng) {
  // Small values and boundaries are more interesting than uniform bits.
  switch (Below(rng, 4)) {
    case 0: return TypedValue(static_cast<T>(static_cast<int64_t>(Below(rng, 512)) - 256));
    case 1: return MutateInteger<T>(rng, T{0});
    default: return TypedValue(static_cast<T>(rng()));
  }
}

std::string RandomText(Rng& rng) {
  std::string text;
  uint64_t length = Below(rng, 33);
  for (uint64_t i = 0; i < length; ++i) {
    text += static_cast<char>(0x20 + Below(rng, 0x5f));
  }
  return text;
}

TypedValue RandomEnumerator(Rng& rng, const ir::VarSpec& spec) {
  int32_t ordinal = spec.enumerators.empty()
                        ? 0
                        : static_cast<int32_t>(spec.enumerators[Below(rng, spec.enumerators.size())].value);
  return TypedValue(wire::EnumValue{spec.type_name, ordinal});
}

struct Outcome {
  std::string status;
  std::optional<FailureClass> failure;
  std::string detail;
};

Outcome Execute(runtime::Proxy& proxy, const ir::ApiSpec& api, const runtime::Values& args) {
  Outcome outcome;
  try {
    // Return values are not part of the class: they may reflect state left
    // by earlier campaigns, which would break seed determinism.
    proxy.Call(api.name, args);
    outcome.status = "OK";
  } catch (const RemoteError& e) {
    outcome.status = "ERROR:" + e.remote_code();
    outcome.failure = FailureClass::kError;
    outcome.detail = e.what();
  } catch (const Error& e) {
    outcome.detail = e.what();
    if (e.code() == ErrorCode::kTransportError) {
      outcome.failure = FailureClass::kCrash;
    } else if (e.code() == ErrorCode::kTimeout) {
      outcome.failure = FailureClass::kHang;
    } else {
      outcome.failure = FailureClass::kError;
    }
    outcome.status = std::string(FailureClassName(*outcome.failure)) + ":" + std::string(ErrorCodeName(e.code()));
  }
  return outcome;
}

}  // namespace

std::string_view FailureClassName(FailureClass failure) {
  switch (failure) {
    case FailureClass::kCrash: return "CRASH";
    case FailureClass::kError: return "ERROR";
    case FailureClass::kHang: return "HANG";
  }
  return "?";
}

TypedValue GenerateValue(Rng& rng, const ir::VarSpec& spec) {
  switch (spec.type) {
    case ir::TypeTag::kScalar:
      switch (spec.scalar_type) {
        case idl::ScalarType::kBool: return TypedValue(Below(rng, 2) == 1);
        case idl::ScalarType::kInt32: return RandomInteger<int32_t>(rng);
        case idl::ScalarType::kInt64: return RandomInteger<int64_t>(rng);
        case idl::ScalarType::kUint32: return RandomInteger<uint32_t>(rng);
        case idl::ScalarType::kUint64: return RandomInteger<uint64_t>(rng);
        case idl::ScalarType::kFloat: return TypedValue(std::bit_cast<float>(static_cast<uint32_t>(rng())));
        case idl::ScalarType::kDouble: return TypedValue(std::bit_cast<double>(static_cast<uint64_t>(rng())));
      }
      break;
    case ir::TypeTag::kString:
      return TypedValue(RandomText(rng));
    case ir::TypeTag::kVector: {
      wire::VecValue vec{wire::TagFor(*spec.element), {}};
      uint64_t count = Below(rng, 5);
      for (uint64_t i = 0; i < count; ++i) {
        vec.items.push_back(GenerateValue(rng, *spec.element));
      }
      return TypedValue(std::move(vec));
    }
    case ir::TypeTag::kStruct: {
      wire::StructValue s{spec.type_name, {}};
      for (const ir::VarSpec& field : spec.fields) {
        s.fields.push_back({field.name, GenerateValue(rng, field)});
      }
      return TypedValue(std::move(s));
    }
    case ir::TypeTag::kEnum:
      return RandomEnumerator(rng, spec);
    case ir::TypeTag::kInterface:
      return TypedValue(wire::Handle{0});
  }
  return wire::DefaultValue(spec);
}

TypedValue MutateValue(Rng& rng, const ir::VarSpec& spec, const TypedValue& value) {
  switch (spec.type) {
    case ir::TypeTag::kScalar:
      return std::visit(
          [&](const auto& v) -> TypedValue {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, bool>) {
              return TypedValue(!v);
            } else if constexpr (std::is_integral_v<T>) {
              return MutateInteger<T>(rng, v);
            } else if constexpr (std::is_floating_point_v<T>) {
              return Below(rng, 2) ? TypedValue(static_cast<T>(-v)) : GenerateValue(rng, spec);
            } else {
              return GenerateValue(rng, spec);
            }
          },
          value.storage());
    case ir::TypeTag::kString: {
      std::string text = value.as<std::string>();
      switch (Below(rng, 3)) {
        case 0: text += static_cast<char>(0x20 + Below(rng, 0x5f)); break;
        case 1: if (!text.empty()) text.pop_back(); break;
        default: text = RandomText(rng);
      }
      return TypedValue(std::move(text));
    }
    case ir::TypeTag::kVector: {
      wire::VecValue vec = value.as<wire::VecValue>();
      uint64_t choice = vec.items.empty() ? 0 : Below(rng, 3);
      if (choice == 0) {
        vec.items.push_back(GenerateValue(rng, *spec.element));
      } else if (choice == 1) {
        vec.items.erase(vec.items.begin() + static_cast<long>(Below(rng, vec.items.size())));
      } else {
        size_t i = Below(rng, vec.items.size());
        vec.items[i] = MutateValue(rng, *spec.element, vec.items[i]);
      }
      return TypedValue(std::move(vec));
    }
    case ir::TypeTag::kStruct: {
      wire::StructValue s = value.as<wire::StructValue>();
      if (!spec.fields.empty()) {
        size_t i = Below(rng, spec.fields.size());
        s.fields[i].value = MutateValue(rng, spec.fields[i], s.fields[i].value);
      }
      return TypedValue(std::move(s));
    }
    case ir::TypeTag::kEnum:
      return RandomEnumerator(rng, spec);
    case ir::TypeTag::kInterface:
      return TypedValue(wire::Handle{0});
  }
  return value;
}

std::string FuzzResult::ToText(const ir::InterfaceSpec& spec) const {
  std::string out;
  for (const FuzzFinding& f : findings) {
    const ir::ApiSpec* api = spec.FindApi(f.input.method);
    std::string args;
    for (size_t i = 0; i < f.input.values.size(); ++i) {
      args += (i ? ", " : "") + wire::FormatValue(f.input.values[i], api && i < api->args.size() ? &api->args[i] : nullptr);
    }
    out += std::string(FailureClassName(f.failure)) + " " + f.input.method + "(" + args + ") iteration=" +
           std::to_string(f.iteration) + " seed=" + std::to_string(f.seed) + "\n";
  }
  out += std::to_string(findings.size()) + " finding(s) in " + std::to_string(iterations) + " iteration(s), corpus " +
         std::to_string(corpus_size) + "\n";
  return out;
}

FuzzResult Fuzz(const ir::InterfaceSpec& spec, const std::string& address, const FuzzOptions& options) {
  if (options.budget == 0) {
    throw Error(ErrorCode::kInvalidArgument, "fuzz budget must be at least 1");
  }
  std::vector<const ir::ApiSpec*> targets;
  for (const ir::ApiSpec& api : spec.apis) {
    if (!api.oneway) {
      targets.push_back(&api);
    }
  }
  runtime::ProxyOptions proxy_options{options.hang_timeout};
  auto proxy = runtime::ConnectProxy(spec, address, proxy_options);
  FuzzResult result;
  if (targets.empty()) {
    return result;
  }
  Rng rng(options.seed);
  struct Entry {
    const ir::ApiSpec* api;
    runtime::Values args;
  };
  std::vector<Entry> corpus;
  std::set<std::pair<std::string, std::string>> seen;
  std::set<std::pair<FailureClass, std::string>> reported;
  for (uint64_t iteration = 0; iteration < options.budget; ++iteration) {
    result.iterations = iteration + 1;
    Entry input;
    if (!corpus.empty() && Below(rng, 2) == 0) {
      input = corpus[Below(rng, corpus.size())];
      if (!input.api->args.empty()) {
        size_t i = Below(rng, input.api->args.size());
        input.args[i] = MutateValue(rng, input.api->args[i], input.args[i]);
      }
    } else {
      input.api = targets[Below(rng, targets.size())];
      for (const ir::VarSpec& arg : input.api->args) {
        input.args.push_back(GenerateValue(rng, arg));
      }
    }
    Outcome outcome = Execute(*proxy, *input.api, input.args);
    if (seen.insert({input.api->name, outcome.status}).second) {
      corpus.push_back(input);
    }
    if (!outcome.failure) {
      continue;
    }
    if (*outcome.failure != FailureClass::kError) {
      proxy = runtime::ConnectProxy(spec, address, proxy_options);
    }
    if (reported.insert({*outcome.failure, input.api->name}).second) {
      FuzzFinding finding;
      finding.input.kind = wire::MessageKind::kCall;
      finding.input.correlation_id = iteration;
      finding.input.fqname = spec.fqname().ToString();
      finding.input.method = input.api->name;
      finding.input.values = input.args;
      finding.failure = *outcome.failure;
      finding.iteration = iteration;
      finding.seed = options.seed;
      finding.detail = outcome.detail;
      result.findings.push_back(std::move(finding));
      if (options.stop_after_first) {
        break;
      }
    }
  }
  result.corpus_size = corpus.size();
  return result;
}

std::optional<FailureClass> Replay(const ir::InterfaceSpec& spec, const std::string& address,
                                   const wire::WireMessage& input, std::chrono::milliseconds hang_timeout) {
  const ir::ApiSpec* api = spec.FindApi(input.method);
  if (!api) {
    throw Error(ErrorCode::kUnknownMethod, input.method);
  }
  auto proxy = runtime::ConnectProxy(spec, address, runtime::ProxyOptions{hang_timeout});
  return Execute(*proxy, *api, input.values).failure;
}

}  // namespace treble::testkit
