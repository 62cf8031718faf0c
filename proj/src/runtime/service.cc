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

#include "treble/runtime/service.h"

#include "treble/base/error.h"
#include "treble/base/strings.h"
#include "treble/wire/conformance.h"

namespace treble::runtime {

CallbackRef::CallbackRef(std::shared_ptr<EventSink> sink, uint64_t id, std::string fqname)
    : sink_(std::move(sink)), id_(id), fqname_(std::move(fqname)) {}

bool CallbackRef::Emit(const std::string& method, Values values) const {
  if (!valid()) {
    return false;
  }
  wire::WireMessage event;
  event.kind = wire::MessageKind::kEvent;
  event.correlation_id = id_;
  event.fqname = fqname_;
  event.method = method;
  event.values = std::move(values);
  return sink_->Emit(event);
}

CallContext::CallContext(const ir::ApiSpec& api, const Values& args, std::shared_ptr<EventSink> sink)
    : api_(api), args_(args), sink_(std::move(sink)) {}

CallbackRef CallContext::Callback(size_t index) const {
  if (index >= api_.args.size() || api_.args[index].type != ir::TypeTag::kInterface) {
    throw Error(ErrorCode::kInvalidArgument,
                api_.name + " argument " + std::to_string(index) + " is not an interface");
  }
  return CallbackRef(sink_, args_[index].as<wire::Handle>().id, api_.args[index].type_name);
}

Implementation& Implementation::On(std::string method, Handler handler) {
  handlers_.insert_or_assign(std::move(method), std::move(handler));
  return *this;
}

const Handler* Implementation::Find(std::string_view method) const {
  auto it = handlers_.find(method);
  return it == handlers_.end() ? nullptr : &it->second;
}

std::vector<std::string> Implementation::Methods() const {
  std::vector<std::string> names;
  for (const auto& [name, handler] : handlers_) {
    names.push_back(name);
  }
  return names;
}

ServiceHost::ServiceHost(ir::InterfaceSpec spec, Implementation implementation)
    : spec_(std::move(spec)), implementation_(std::move(implementation)) {
  std::vector<std::string> missing;
  for (const ir::ApiSpec& api : spec_.apis) {
    if (!implementation_.Find(api.name)) {
      missing.push_back(api.name);
    }
  }
  if (!missing.empty()) {
    throw Error(ErrorCode::kIncompleteImplementation,
                spec_.fqname().ToString() + " lacks " + Join(missing, ", "));
  }
}

void ServiceHost::CheckClient(std::string_view fqname) const {
  idl::FqName want = idl::FqName::Parse(fqname);
  idl::FqName have = spec_.fqname();
  if (want.name != have.name || want.package.name != have.package.name ||
      want.package.version.major != have.package.version.major ||
      want.package.version.minor > have.package.version.minor) {
    throw Error(ErrorCode::kPackageMismatch, std::string(fqname) + " is not served by " + have.ToString());
  }
}

Values ServiceHost::Dispatch(std::string_view method, const Values& args, std::shared_ptr<EventSink> sink) const {
  const ir::ApiSpec* api = spec_.FindApi(method);
  if (!api) {
    throw Error(ErrorCode::kUnknownMethod, spec_.fqname().ToString() + "::" + std::string(method));
  }
  wire::CheckValues(api->args, args, api->name);
  CallContext context(*api, args, std::move(sink));
  Values results = (*implementation_.Find(method))(context, args);
  if (api->oneway) {
    return {};
  }
  wire::CheckValues(api->returns, results, api->name + " results");
  return results;
}

}  // namespace treble::runtime
