// SPDX-License-Identifier: Apache-2.0
//
// secbeam - worst-case secrecy rate allocation across mmWave beams
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <stdexcept>
#include <string>

namespace secbeam {

/// Malformed input file. Carries the origin (path or stream name) and the
/// 1-based line number where parsing failed; line 0 means "whole file".
class ParseError : public std::runtime_error {
  public:
    ParseError(std::string origin, std::size_t line, const std::string& what_arg)
        : std::runtime_error(format(origin, line, what_arg)),
          origin_(std::move(origin)),
          line_(line) {}

    const std::string& origin() const { return origin_; }
    std::size_t line() const { return line_; }

  private:
    static std::string format(const std::string& origin, std::size_t line,
                              const std::string& what_arg) {
        if (line == 0)
            return origin + ": " + what_arg;
        return origin + ":" + std::to_string(line) + ": " + what_arg;
    }

    std::string origin_;
    std::size_t line_;
};

} // namespace secbeam
