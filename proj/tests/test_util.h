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

#ifndef TREBLE_TESTS_TEST_UTIL_H_
#define TREBLE_TESTS_TEST_UTIL_H_

#include <filesystem>
#include <string>

#include "gtest/gtest.h"
#include "treble/base/error.h"
#include "treble/ir/interface_spec.h"

namespace treble::testing {

inline std::string HalDir() { return TREBLE_HAL_DIR; }
inline std::string TestdataDir() { return TREBLE_TESTDATA_DIR; }

// Compiles one interface of a package under hal/.
inline ir::InterfaceSpec CompileHal(const std::string& fqname) {
  idl::PackageLoader loader({HalDir()});
  return ir::CompileInterface(loader, fqname);
}

// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::string pattern = (std::filesystem::temp_directory_path() / "treble-XXXXXX").string();
    path_ = mkdtemp(pattern.data());
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::string& path() const { return path_; }
  std::string File(const std::string& name) const { return path_ + "/" + name; }

 private:
  std::string path_;
};

#define EXPECT_TREBLE_ERROR(statement, error_code)                                       \
  do {                                                                                   \
    try {                                                                                \
      statement;                                                                         \
      ADD_FAILURE() << "expected " << ::treble::ErrorCodeName(error_code);               \
    } catch (const ::treble::Error& e) {                                                 \
      EXPECT_EQ(e.code(), error_code) << e.what();                                       \
    }                                                                                    \
  } while (false)

}  // namespace treble::testing

#endif  // TREBLE_TESTS_TEST_UTIL_H_
