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

#include "parse_util.hpp"

#include <cctype>
#include <cstdlib>

namespace secbeam::detail {

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> tokens;
    std::string current;
    for (char c : line) {
        if (c == '#')
            break;
        if (std::isspace(static_cast<unsigned char>(c))) {
            if (!current.empty()) {
                tokens.push_back(current);
                current.clear();
            }
        } else {
            current.push_back(c);
        }
    }
    if (!current.empty())
        tokens.push_back(current);
    return tokens;
}

double parse_double(const std::string& token, const std::string& origin,
                    std::size_t line, const std::string& what) {
    const char* begin = token.c_str();
    char* end = nullptr;
    double value = std::strtod(begin, &end);
    if (end == begin || *end != '\0')
        throw ParseError(origin, line, "expected a number for " + what + ", got '" + token + "'");
    return value;
}

std::size_t parse_index(const std::string& token, const std::string& origin,
                        std::size_t line, const std::string& what) {
    for (char c : token)
        if (!std::isdigit(static_cast<unsigned char>(c)))
            throw ParseError(origin, line,
                             "expected a positive integer for " + what + ", got '" + token + "'");
    unsigned long value = std::strtoul(token.c_str(), nullptr, 10);
    if (value == 0)
        throw ParseError(origin, line, what + " must be >= 1, got '" + token + "'");
    return static_cast<std::size_t>(value);
}

bool parse_bool(const std::string& token, const std::string& origin,
                std::size_t line, const std::string& what) {
    if (token == "1" || token == "true" || token == "on")
        return true;
    if (token == "0" || token == "false" || token == "off")
        return false;
    throw ParseError(origin, line, "expected 0/1 for " + what + ", got '" + token + "'");
}

std::string dir_of(const std::string& path) {
    auto pos = path.find_last_of('/');
    if (pos == std::string::npos)
        return "";
    return path.substr(0, pos);
}

std::string join_path(const std::string& dir, const std::string& rel) {
    if (dir.empty() || (!rel.empty() && rel.front() == '/'))
        return rel;
    return dir + "/" + rel;
}

} // namespace secbeam::detail
