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

#include <cstddef>
#include <string>
#include <vector>

#include "secbeam/errors.hpp"

namespace secbeam::detail {

// Shared by the line-oriented file parsers. Lines are whitespace-tokenized;
// everything from '#' to end of line is a comment.

std::vector<std::string> tokenize(const std::string& line);

double parse_double(const std::string& token, const std::string& origin,
                    std::size_t line, const std::string& what);

std::size_t parse_index(const std::string& token, const std::string& origin,
                        std::size_t line, const std::string& what);

bool parse_bool(const std::string& token, const std::string& origin,
                std::size_t line, const std::string& what);

/// Directory component of a path, "" when none; used to resolve references
/// between input files.
std::string dir_of(const std::string& path);

std::string join_path(const std::string& dir, const std::string& rel);

} // namespace secbeam::detail
