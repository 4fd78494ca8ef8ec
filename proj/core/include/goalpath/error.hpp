// Copyright 2026 The goalpath Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GOALPATH__ERROR_HPP_
#define GOALPATH__ERROR_HPP_

#include <stdexcept>
#include <string>

namespace goalpath
{

// Failure categories. The CLI maps these onto process exit codes.
enum class ErrorKind { kUsage = 1, kData = 2, kNumeric = 3 };

class Error : public std::runtime_error
{
public:
  Error(ErrorKind kind, const std::string & what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

inline Error usage_error(const std::string & what) { return {ErrorKind::kUsage, what}; }
inline Error data_error(const std::string & what) { return {ErrorKind::kData, what}; }
inline Error numeric_error(const std::string & what) { return {ErrorKind::kNumeric, what}; }

}  // namespace goalpath

#endif  // GOALPATH__ERROR_HPP_
