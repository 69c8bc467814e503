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

#ifndef CRL_SCAN_HPP
#define CRL_SCAN_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace crl {

/// One significant line of CRL input. Comments and blank lines never make it
/// into a RawLine; the original line number is preserved for diagnostics.
struct RawLine {
  std::string source_name;
  std::uint64_t line_number = 0;  // 1-based
  std::string content;            // comment-stripped, trimmed, non-empty
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const char* ws = " \t\r";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

}  // namespace detail

/// Splits raw text into significant lines. A '#' starts a comment anywhere on
/// a line; lines that are blank after comment stripping are dropped. Both LF
/// and CRLF inputs are accepted. Scanning is total: there is no malformed
/// input at this stage.
inline std::vector<RawLine> scan(std::string_view text,
                                 std::string source_name) {
  std::vector<RawLine> out;
  std::uint64_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    std::string_view line = nl == std::string_view::npos
                                ? text.substr(pos)
                                : text.substr(pos, nl - pos);
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = detail::trim(line);
    if (!line.empty())
      out.push_back(RawLine{source_name, line_no, std::string(line)});
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  return out;
}

}  // namespace crl

#endif  // CRL_SCAN_HPP
