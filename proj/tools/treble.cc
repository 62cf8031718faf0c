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

// treble: command-line entry point for the toolchain.
//
// Exit status: 0 success, 1 check or test failure, 2 usage error, 3 I/O or
// transport error.

#include <signal.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "treble/base/error.h"
#include "treble/base/strings.h"
#include "treble/bench/bench.h"
#include "treble/cli/args.h"
#include "treble/compat/compat.h"
#include "treble/demo/demo.h"
#include "treble/idl/parser.h"
#include "treble/ir/block_text.h"
#include "treble/ir/interface_spec.h"
#include "treble/runtime/manifest.h"
#include "treble/runtime/proxy.h"
#include "treble/runtime/serve.h"
#include "treble/testkit/agent.h"
#include "treble/testkit/driver.h"
#include "treble/testkit/fuzz.h"
#include "treble/testkit/profiler.h"
#include "treble/wire/conformance.h"
#include "treble/wire/registry.h"

namespace fs = std::filesystem;

namespace treble::cli {
namespace {

enum Exit { kOk = 0, kCheckFailed = 1, kUsage = 2, kIo = 3 };

struct Globals {
  std::string registry;
  std::string format;
  std::string hal_root;

  std::string Format(const std::string& fallback) const { return format.empty() ? fallback : format; }

  std::string HalRoot() const {
    if (!hal_root.empty()) return hal_root;
    if (const char* env = std::getenv("TREBLE_HAL_ROOT"); env && *env) return env;
    return "hal";
  }
  std::string RegistryAddress() const { return registry.empty() ? wire::DefaultRegistryAddress() : registry; }
};

class Usage : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

int ExitFor(const Error& e) {
  switch (e.code()) {
    case ErrorCode::kInvalidArgument:
      return kUsage;
    case ErrorCode::kIoError:
    case ErrorCode::kSpecSyntaxError:
    case ErrorCode::kUnknownTypeTag:
    case ErrorCode::kTransportError:
    case ErrorCode::kTimeout:
    case ErrorCode::kServiceUnavailable:
    case ErrorCode::kRegistryUnavailable:
    case ErrorCode::kAddressInUse:
    case ErrorCode::kProtocolMismatch:
      return kIo;
    default:
      return kCheckFailed;
  }
}

std::string Read(const std::string& path) {
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) {
    throw Error(ErrorCode::kIoError, "cannot read " + path);
  }
  return ReadFile(path);
}

// A `.spec` file, or an interface name compiled from the HAL tree.
ir::InterfaceSpec LoadSpec(const Globals& g, const std::string& source) {
  if (source.find("::") != std::string::npos && !fs::exists(source)) {
    idl::PackageLoader loader({g.HalRoot()});
    return ir::CompileInterface(loader, source);
  }
  return ir::ParseSpecText(Read(source));
}

// Waits for SIGINT or SIGTERM. Call before starting threads so that they
// inherit the blocked mask.
class SignalWaiter {
 public:
  SignalWaiter() {
    sigemptyset(&set_);
    sigaddset(&set_, SIGINT);
    sigaddset(&set_, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &set_, nullptr);
  }
  void Wait() {
    int signal = 0;
    sigwait(&set_, &signal);
  }

 private:
  sigset_t set_;
};

std::unique_ptr<runtime::Proxy> Connect(const Globals& g, const ir::InterfaceSpec& spec, const std::string& address,
                                        const std::string& instance) {
  if (!address.empty()) {
    return runtime::ConnectProxy(spec, address);
  }
  auto registry = wire::ConnectRegistry(g.RegistryAddress());
  return runtime::GetService(*registry, spec, instance);
}

std::string ResolveAddress(const Globals& g, const ir::InterfaceSpec& spec, const std::string& address,
                           const std::string& instance) {
  if (!address.empty()) {
    return address;
  }
  auto registry = wire::ConnectRegistry(g.RegistryAddress());
  auto record = wire::SelectCompatible(registry->List(), spec.fqname().ToString(), instance);
  if (!record) {
    throw Error(ErrorCode::kServiceUnavailable, "no service for " + spec.fqname().ToString() + "/" + instance);
  }
  return record->endpoint;
}

void PrintReport(const Globals& g, const compat::CompatReport& report) {
  std::string format = g.Format("text");
  if (format == "spec") {
    std::cout << report.ToSpecText();
  } else if (format == "csv") {
    std::cout << "rule,subject,detail\n";
    for (const compat::Violation& v : report.violations) {
      std::cout << v.rule << ',' << v.subject << ',' << v.detail << '\n';
    }
  } else {
    std::cout << report.ToText();
  }
}

// ---- compile

struct CompileArgs {
  std::vector<std::string> inputs;
  std::string out_dir = ".";
};

int Compile(const Globals& g, const CompileArgs& a) {
  std::map<idl::PackageId, std::vector<idl::SourceFile>> packages;
  for (const std::string& path : a.inputs) {
    idl::SourceFile source{fs::path(path).filename().string(), Read(path)};
    idl::PackageId id = idl::ParseDocument(source).id;
    source.name = path;
    packages[id].push_back(std::move(source));
  }
  idl::PackageLoader loader({g.HalRoot()});
  for (auto& [id, sources] : packages) {
    loader.Add(idl::ParsePackage(sources, id));
  }
  std::map<std::string, ir::InterfaceSpec> outputs;
  for (const auto& [id, sources] : packages) {
    for (ir::InterfaceSpec& spec : ir::CompilePackage(loader, id)) {
      std::string file = spec.component_name + ".spec";
      if (outputs.count(file)) {
        throw Error(ErrorCode::kInvalidArgument,
                    "two inputs define " + spec.component_name + "; compile them separately");
      }
      outputs.emplace(file, std::move(spec));
    }
  }
  std::error_code ec;
  fs::create_directories(a.out_dir, ec);
  for (const auto& [file, spec] : outputs) {
    std::string path = (fs::path(a.out_dir) / file).string();
    WriteFile(path, ir::EmitSpecText(spec));
    std::cout << path << '\n';
  }
  return kOk;
}

// ---- check

struct CheckArgs {
  std::string mode;
  std::vector<std::string> files;
  std::string origin = "vendor";
  int platform = 0;
  std::string snapshot;
  int window = 3;
};

int Check(const Globals& g, const CheckArgs& a) {
  compat::CompatReport report;
  if (a.mode == "iface") {
    report = compat::CheckInterfaceCompat(LoadSpec(g, a.files[0]), LoadSpec(g, a.files[1]));
  } else if (a.mode == "deps") {
    compat::Namespace origin = a.origin == "system" ? compat::Namespace::kSystem : compat::Namespace::kVendor;
    report = compat::CheckDependencyClosure(compat::ParseLibraryManifests(Read(a.files[0])), origin);
  } else if (a.mode == "manifest") {
    runtime::VendorManifest manifest = runtime::VendorManifest::Parse(Read(a.files[0]));
    report = compat::CheckManifestAgainstFramework(manifest, compat::ParseRequirements(Read(a.files[1])));
  } else {
    std::optional<Version> snapshot = Version::Parse(a.snapshot);
    if (!snapshot) {
      throw Usage("bad snapshot version '" + a.snapshot + "'");
    }
    if (!compat::SnapshotSupported(a.platform, *snapshot, {a.window})) {
      report.Add(compat::kSnapshotUnsupported, "vndk@" + snapshot->ToString(),
                 "platform " + std::to_string(a.platform) + " keeps " + std::to_string(a.window) + " major(s)");
    }
    report.Finish();
  }
  PrintReport(g, report);
  return report.compatible() ? kOk : kCheckFailed;
}

// ---- serve

struct ServeArgs {
  std::string impl;
  std::string mode = "binderized";
  std::string instance = "default";
  std::string address;
  bool no_register = false;
};

int Serve(const Globals& g, const ServeArgs& a) {
  runtime::Implementation impl = demo::ByName(a.impl);
  ir::InterfaceSpec spec = LoadSpec(g, demo::InterfaceOf(a.impl));
  if (a.mode != "binderized") {
    throw Usage("pass-through services live inside their client; use the library to embed one");
  }
  std::unique_ptr<wire::RegistryClient> registry;
  if (!a.no_register) {
    registry = wire::ConnectRegistry(g.RegistryAddress());
  }
  SignalWaiter waiter;
  auto service = runtime::Serve(std::move(spec), std::move(impl), wire::Transport::kBinderized, registry.get(),
                                {a.instance, a.address});
  std::cout << "serving " << service->record().fqname << "/" << a.instance << " at " << service->record().endpoint
            << std::endl;
  waiter.Wait();
  return kOk;
}

// ---- call and profile

struct CallArgs {
  std::string iface;
  std::string method;
  std::vector<std::string> values;
  std::string args_file;
  std::string instance = "default";
  std::string address;
  // profile only
  std::string trace;
  int repeat = 1;
};

void PrintReturns(const Globals& g, const ir::ApiSpec& api, const runtime::Values& returns) {
  std::string format = g.Format("text");
  if (format == "spec") {
    ir::BlockNode node;
    for (size_t i = 0; i < returns.size(); ++i) {
      node.Quoted(api.returns[i].name, wire::FormatValue(returns[i], &api.returns[i]));
    }
    std::cout << ir::EmitBlockText(node);
    return;
  }
  if (format == "csv") std::cout << "name,value\n";
  for (size_t i = 0; i < returns.size(); ++i) {
    std::cout << api.returns[i].name << (format == "csv" ? "," : " = ")
              << wire::FormatValue(returns[i], &api.returns[i]) << '\n';
  }
}

const ir::ApiSpec& RequireApi(const ir::InterfaceSpec& spec, const std::string& method) {
  const ir::ApiSpec* api = spec.FindApi(method);
  if (api == nullptr) {
    throw Usage(spec.fqname().ToString() + " has no method " + method);
  }
  return *api;
}

int Call(const Globals& g, const CallArgs& a) {
  ir::InterfaceSpec spec = LoadSpec(g, a.iface);
  const ir::ApiSpec& api = RequireApi(spec, a.method);
  runtime::Values args = BuildArgs(api, a.args_file.empty() ? "" : Read(a.args_file), a.values);
  auto proxy = Connect(g, spec, a.address, a.instance);
  PrintReturns(g, api, proxy->Call(api.name, std::move(args)));
  return kOk;
}

int ProfileCall(const Globals& g, const CallArgs& a) {
  ir::InterfaceSpec spec = LoadSpec(g, a.iface);
  const ir::ApiSpec& api = RequireApi(spec, a.method);
  runtime::Values args = BuildArgs(api, a.args_file.empty() ? "" : Read(a.args_file), a.values);
  std::ofstream trace(a.trace);
  if (!trace) {
    throw Error(ErrorCode::kIoError, "cannot write " + a.trace);
  }
  testkit::ProfilingProxy proxy(Connect(g, spec, a.address, a.instance), trace);
  runtime::Values returns;
  for (int i = 0; i < a.repeat; ++i) {
    returns = proxy.Call(api.name, args);
  }
  PrintReturns(g, api, returns);
  std::cerr << proxy.records() << " call(s) traced to " << a.trace << '\n';
  return kOk;
}

int ProfileSizes(const Globals& g, const std::string& trace) {
  std::map<std::string, uint64_t> sizes = testkit::TraceSizes(testkit::ParseTrace(Read(trace)));
  std::string format = g.Format("text");
  if (format == "csv") std::cout << "fqname,bytes\n";
  for (const auto& [fqname, bytes] : sizes) {
    if (format == "spec") {
      ir::BlockNode node;
      node.Block("noise", ir::BlockNode().Quoted("fqname", fqname).Quoted("bytes", std::to_string(bytes)));
      std::cout << ir::EmitBlockText(node);
    } else {
      std::cout << fqname << (format == "csv" ? "," : " ") << bytes << '\n';
    }
  }
  return kOk;
}

// ---- fuzz

struct FuzzArgs {
  std::string iface;
  std::string instance = "default";
  std::string address;
  uint64_t budget = 10000;
  uint64_t seed = 0;
  bool stop_after_first = false;
  int hang_timeout_ms = 2000;
};

int Fuzz(const Globals& g, const FuzzArgs& a) {
  ir::InterfaceSpec spec = LoadSpec(g, a.iface);
  std::string address = ResolveAddress(g, spec, a.address, a.instance);
  testkit::FuzzResult result =
      testkit::Fuzz(spec, address,
                    {a.budget, a.seed, a.stop_after_first, std::chrono::milliseconds(a.hang_timeout_ms)});
  std::cout << result.ToText(spec);
  return result.findings.empty() ? kOk : kCheckFailed;
}

// ---- structural

struct StructuralArgs {
  std::string iface;
  std::string instance = "default";
  std::string address;
  bool isolation = false;
};

int Structural(const Globals& g, const StructuralArgs& a) {
  ir::InterfaceSpec spec = LoadSpec(g, a.iface);
  testkit::StructuralReport report =
      testkit::StructuralTest(spec, ResolveAddress(g, spec, a.address, a.instance), a.isolation);
  std::cout << report.ToText();
  return report.passed() ? kOk : kCheckFailed;
}

// ---- bench

struct BenchArgs {
  std::string suite = "all";
  std::vector<uint64_t> sizes;
  std::vector<uint32_t> pairs = {2, 3, 5, 10};
  uint64_t message_size = 512;
  uint64_t iterations = 1000;
  uint64_t warmup = 100;
  std::string samples;
  std::string address;
};

int Bench(const Globals& g, const BenchArgs& a) {
  bench::BenchOptions options{a.iterations, a.warmup, a.samples};
  if (options.iterations < bench::kMinIterations) {
    throw Usage("--iterations must be at least " + std::to_string(bench::kMinIterations));
  }
  if (!a.samples.empty()) {
    std::ofstream truncate(a.samples);
    if (!truncate) throw Error(ErrorCode::kIoError, "cannot write " + a.samples);
  }
  ir::InterfaceSpec echo = LoadSpec(g, demo::InterfaceOf("echo"));
  std::vector<bench::BenchStats> stats;
  if (a.suite == "roundtrip" || a.suite == "all") {
    std::vector<uint64_t> sizes = a.sizes.empty() ? std::vector<uint64_t>{4, 2048, 4096, 16384, 65536} : a.sizes;
    std::unique_ptr<runtime::Service> local;
    std::string address = a.address;
    if (address.empty()) {
      local = runtime::Serve(echo, demo::Echo(), wire::Transport::kBinderized, nullptr);
      address = local->record().endpoint;
    }
    auto part = bench::BenchRoundtrip(echo, address, sizes, options);
    stats.insert(stats.end(), part.begin(), part.end());
  }
  if (a.suite == "throughput" || a.suite == "all") {
    auto part = bench::BenchThroughput(echo, a.pairs, a.message_size, options);
    stats.insert(stats.end(), part.begin(), part.end());
  }
  if (a.suite == "fmq" || a.suite == "all") {
    std::vector<uint64_t> sizes = a.sizes.empty() ? std::vector<uint64_t>{64, 512} : a.sizes;
    auto part = bench::BenchFmq(sizes, options);
    stats.insert(stats.end(), part.begin(), part.end());
  }
  std::cout << (g.Format("csv") == "text" ? bench::ToTable(stats) : bench::ToCsv(stats));
  return kOk;
}

// ---- agent

struct AgentArgs {
  std::string listen = "tcp:127.0.0.1:" + std::to_string(testkit::kAgentPort);
  std::vector<std::string> spec_dirs;
};

// Every package found under `root`, compiled.
void CompileTree(const std::string& root, ir::SpecLibrary& library) {
  std::set<idl::PackageId> ids;
  std::error_code ec;
  for (auto it = fs::recursive_directory_iterator(root, ec); !ec && it != fs::recursive_directory_iterator();
       it.increment(ec)) {
    if (it->path().extension() == ".hal") {
      ids.insert(idl::ParseDocument({it->path().string(), ReadFile(it->path().string())}).id);
    }
  }
  idl::PackageLoader loader({root});
  for (const idl::PackageId& id : ids) {
    for (ir::InterfaceSpec& spec : ir::CompilePackage(loader, id)) {
      library.Add(std::move(spec));
    }
  }
}

int RunAgent(const Globals& g, const AgentArgs& a) {
  ir::SpecLibrary library;
  if (a.spec_dirs.empty()) {
    CompileTree(g.HalRoot(), library);
  }
  for (const std::string& dir : a.spec_dirs) {
    library.LoadDirectory(dir);
  }
  std::shared_ptr<wire::RegistryClient> registry = wire::ConnectRegistry(g.RegistryAddress());
  SignalWaiter waiter;
  testkit::Agent agent(wire::Endpoint::Parse(a.listen), std::move(library), registry);
  std::cout << testkit::kAgentBanner << " listening at " << agent.endpoint().ToString() << std::endl;
  waiter.Wait();
  return kOk;
}

// ---- select-tests

std::string FormatDouble(double v) {
  std::ostringstream out;
  out << v;
  return out.str();
}

int SelectTests(const Globals& g, const std::string& input) {
  testkit::SelectionInput parsed = testkit::ParseSelectionInput(Read(input));
  std::vector<testkit::Candidate> candidates = testkit::SelectRemovable(parsed.modules, parsed.noise);
  std::string format = g.Format("text");
  if (format == "csv") std::cout << "module,duration_s,overlap\n";
  for (const testkit::Candidate& c : candidates) {
    if (format == "spec") {
      ir::BlockNode node;
      node.Block("candidate", ir::BlockNode()
                                  .Quoted("name", c.name)
                                  .Quoted("duration_s", FormatDouble(c.duration_s))
                                  .Quoted("overlap", std::to_string(c.overlap)));
      std::cout << ir::EmitBlockText(node);
    } else if (format == "csv") {
      std::cout << c.name << ',' << FormatDouble(c.duration_s) << ',' << c.overlap << '\n';
    } else {
      std::cout << c.name << " duration_s=" << FormatDouble(c.duration_s) << " overlap=" << c.overlap << '\n';
    }
  }
  return kOk;
}

// ---- registry

int RunRegistry(const Globals& g) {
  SignalWaiter waiter;
  wire::RegistryServer server(wire::Endpoint::Parse(g.RegistryAddress()), std::make_shared<wire::Registry>());
  std::cout << "registry at " << server.endpoint().ToString() << std::endl;
  waiter.Wait();
  return kOk;
}

int ListRegistry(const Globals& g) {
  auto registry = wire::ConnectRegistry(g.RegistryAddress());
  for (const wire::ServiceRecord& r : registry->List()) {
    std::cout << r.fqname << ' ' << r.instance << ' ' << r.endpoint << ' ' << wire::TransportName(r.transport)
              << '\n';
  }
  return kOk;
}

int Main(int argc, char** argv) {
  CLI::App app{"treble: HAL interface toolchain"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--registry", g.registry, "Registry address (default $TREBLE_REGISTRY or ./treble-registry.sock)");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"text", "csv", "spec"}));
  app.add_option("--hal-root", g.hal_root, "Root of the .hal tree (default $TREBLE_HAL_ROOT or ./hal)");

  std::function<int()> run;

  CompileArgs compile;
  auto* c = app.add_subcommand("compile", "Compile .hal files to .spec files");
  c->add_option("inputs", compile.inputs, ".hal files")->required()->check(CLI::ExistingFile);
  c->add_option("-o,--out", compile.out_dir, "Output directory");
  c->callback([&] { run = [&] { return Compile(g, compile); }; });

  CheckArgs check;
  auto* ck = app.add_subcommand("check", "Compatibility checks");
  ck->require_subcommand(1);
  auto* ck_iface = ck->add_subcommand("iface", "Old vs new interface (.spec file or package@M.m::IName)");
  ck_iface->add_option("old", check.files)->required()->expected(2);
  ck_iface->callback([&] { check.mode = "iface"; });
  auto* ck_deps = ck->add_subcommand("deps", "Library dependency closure");
  ck_deps->add_option("libs", check.files)->required()->expected(1);
  ck_deps->add_option("--origin", check.origin)->check(CLI::IsMember({"system", "vendor"}));
  ck_deps->callback([&] { check.mode = "deps"; });
  auto* ck_manifest = ck->add_subcommand("manifest", "Vendor manifest vs framework requirements");
  ck_manifest->add_option("files", check.files, "manifest.tspec requirements.txt")->required()->expected(2);
  ck_manifest->callback([&] { check.mode = "manifest"; });
  auto* ck_snapshot = ck->add_subcommand("snapshot", "Whether a platform keeps a VNDK snapshot");
  ck_snapshot->add_option("--platform", check.platform)->required()->check(CLI::Range(0, 1 << 20));
  ck_snapshot->add_option("--snapshot", check.snapshot)->required();
  ck_snapshot->add_option("--window", check.window)->check(CLI::PositiveNumber);
  ck_snapshot->callback([&] { check.mode = "snapshot"; });
  ck->callback([&] { run = [&] { return Check(g, check); }; });

  ServeArgs serve;
  auto* sv = app.add_subcommand("serve", "Run a demo implementation until interrupted");
  sv->add_option("--impl", serve.impl, "light-a, light-b, light-1.1, vehicle, mapper, echo, faulty")
      ->required()
      ->check(CLI::IsMember(demo::Names()));
  sv->add_option("--mode", serve.mode)->check(CLI::IsMember({"binderized", "passthrough"}));
  sv->add_option("--instance", serve.instance);
  sv->add_option("--address", serve.address, "Listening address (unix:path or tcp:host:port)");
  sv->add_flag("--no-register", serve.no_register, "Do not register");
  sv->callback([&] { run = [&] { return Serve(g, serve); }; });

  CallArgs call;
  auto add_call_options = [&](CLI::App* sub) {
    sub->add_option("--iface", call.iface, "package@M.m::IName or a .spec file")->required();
    sub->add_option("--method", call.method)->required();
    sub->add_option("values", call.values, "name=value arguments");
    sub->add_option("--args-file", call.args_file, "Block-text argument values");
    sub->add_option("--instance", call.instance);
    sub->add_option("--address", call.address, "Bypass the registry");
  };
  auto* cl = app.add_subcommand("call", "Call one method and print the returns");
  add_call_options(cl);
  cl->callback([&] { run = [&] { return Call(g, call); }; });

  auto* pf = app.add_subcommand("profile", "Trace calls");
  pf->require_subcommand(1);
  auto* pf_call = pf->add_subcommand("call", "Profiled call");
  add_call_options(pf_call);
  pf_call->add_option("--trace", call.trace, "Trace output file")->required();
  pf_call->add_option("--repeat", call.repeat)->check(CLI::PositiveNumber);
  pf_call->callback([&] { run = [&] { return ProfileCall(g, call); }; });
  std::string trace_in;
  auto* pf_sizes = pf->add_subcommand("sizes", "Trace bytes per interface");
  pf_sizes->add_option("trace", trace_in)->required();
  pf_sizes->callback([&] { run = [&] { return ProfileSizes(g, trace_in); }; });

  FuzzArgs fuzz;
  auto* fz = app.add_subcommand("fuzz", "Fuzz a running service");
  fz->add_option("--iface", fuzz.iface)->required();
  fz->add_option("--instance", fuzz.instance);
  fz->add_option("--address", fuzz.address);
  fz->add_option("--budget", fuzz.budget)->check(CLI::PositiveNumber);
  fz->add_option("--seed", fuzz.seed);
  fz->add_flag("--stop-after-first", fuzz.stop_after_first);
  fz->add_option("--hang-timeout-ms", fuzz.hang_timeout_ms)->check(CLI::PositiveNumber);
  fz->callback([&] { run = [&] { return Fuzz(g, fuzz); }; });

  StructuralArgs structural;
  auto* st = app.add_subcommand("structural", "Call every method with default arguments");
  st->add_option("--iface", structural.iface)->required();
  st->add_option("--instance", structural.instance);
  st->add_option("--address", structural.address);
  st->add_flag("--isolation", structural.isolation, "Fail when other clients are attached");
  st->callback([&] { run = [&] { return Structural(g, structural); }; });

  BenchArgs bench_args;
  auto* bn = app.add_subcommand("bench", "IPC microbenchmarks");
  bn->add_option("--suite", bench_args.suite)->check(CLI::IsMember({"roundtrip", "throughput", "fmq", "all"}));
  bn->add_option("--sizes", bench_args.sizes, "Message sizes in bytes")->delimiter(',');
  bn->add_option("--pairs", bench_args.pairs, "Concurrent pair counts")->delimiter(',');
  bn->add_option("--message-size", bench_args.message_size);
  bn->add_option("--iterations", bench_args.iterations);
  bn->add_option("--warmup", bench_args.warmup);
  bn->add_option("--samples", bench_args.samples, "Raw samples CSV");
  bn->add_option("--address", bench_args.address, "Echo service for the roundtrip suite");
  bn->callback([&] { run = [&] { return Bench(g, bench_args); }; });

  AgentArgs agent;
  auto* ag = app.add_subcommand("agent", "Serve the host test protocol");
  ag->add_option("--listen", agent.listen);
  ag->add_option("--spec-dir", agent.spec_dirs, "Load .spec files instead of compiling the HAL tree");
  ag->callback([&] { run = [&] { return RunAgent(g, agent); }; });

  std::string selection_input;
  auto* sl = app.add_subcommand("select-tests", "Rank test modules that could be removed");
  sl->add_option("input", selection_input)->required();
  sl->callback([&] { run = [&] { return SelectTests(g, selection_input); }; });

  auto* rg = app.add_subcommand("registry", "Service registry");
  rg->require_subcommand(1);
  rg->add_subcommand("serve", "Run the registry until interrupted")->callback([&] {
    run = [&] { return RunRegistry(g); };
  });
  rg->add_subcommand("list", "Print registered services")->callback([&] { run = [&] { return ListRegistry(g); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }
  try {
    return run();
  } catch (const Usage& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return ExitFor(e);
  }
}

}  // namespace
}  // namespace treble::cli

int main(int argc, char** argv) { return treble::cli::Main(argc, argv); }
