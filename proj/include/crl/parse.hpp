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

#ifndef CRL_PARSE_HPP
#define CRL_PARSE_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "crl/errors.hpp"
#include "crl/location.hpp"
#include "crl/scan.hpp"

namespace crl {

/// The closed set of CRL directives. Keywords are uppercase and
/// case-sensitive; anything else is rejected, never skipped.
enum class Keyword {
  crl_version,
  define,
  target,
  type,
  url,
  auth_url,
  anon_user,
  anon_pass,
  repo_path,
  checkout,
  name,
};

inline const char* keyword_text(Keyword k) {
  switch (k) {
    case Keyword::crl_version: return "CRL_VERSION";
    case Keyword::define: return "DEFINE";
    case Keyword::target: return "TARGET";
    case Keyword::type: return "TYPE";
    case Keyword::url: return "URL";
    case Keyword::auth_url: return "AUTH_URL";
    case Keyword::anon_user: return "ANON_USER";
    case Keyword::anon_pass: return "ANON_PASS";
    case Keyword::repo_path: return "REPO_PATH";
    case Keyword::checkout: return "CHECKOUT";
    case Keyword::name: return "NAME";
  }
  return "";
}

inline std::optional<Keyword> keyword_from(std::string_view s) {
  for (Keyword k : {Keyword::crl_version, Keyword::define, Keyword::target,
                    Keyword::type, Keyword::url, Keyword::auth_url,
                    Keyword::anon_user, Keyword::anon_pass, Keyword::repo_path,
                    Keyword::checkout, Keyword::name})
    if (s == keyword_text(k)) return k;
  return std::nullopt;
}

/// One directive as written, before variable expansion. DEFINE carries its
/// name in define_name; CHECKOUT carries its component list in
/// checkout_paths; every other directive carries a single value.
struct RawDirective {
  Keyword keyword = Keyword::crl_version;
  std::string value;
  std::string define_name;                  // DEFINE only
  std::vector<std::string> checkout_paths;  // CHECKOUT only
  RawLine origin;
};

namespace detail {

inline bool define_name_char(char c, bool first) {
  if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_')
    return true;
  return !first && c >= '0' && c <= '9';
}

inline bool valid_define_name(std::string_view s) {
  if (s.empty()) return false;
  for (std::size_t i = 0; i < s.size(); ++i)
    if (!define_name_char(s[i], i == 0)) return false;
  return true;
}

[[noreturn]] inline void fail_at(errc code, const std::string& message,
                                 const RawLine& ln) {
  throw error(code, message, ln.source_name, ln.line_number);
}

inline void check_component_path(std::string_view path, const RawLine& ln) {
  if (!is_component_path(path))
    fail_at(errc::malformed_directive,
            "'" + std::string(path) + "' is not a valid component path", ln);
}

}  // namespace detail

/// Parses scanned lines into the directive stream.
///
/// Shapes accepted:
///   !KEYWORD = value
///   !KEYWORD =            (value on the following line)
///   !DEFINE name = value
///   !CHECKOUT = [path]    (list continues on following lines until the next
///                          '!' directive or end of input)
///
/// The first directive must be CRL_VERSION. Errors carry the offending line.
inline std::vector<RawDirective> parse_document(
    const std::vector<RawLine>& lines) {
  std::vector<RawDirective> out;
  std::size_t i = 0;
  while (i < lines.size()) {
    const RawLine& ln = lines[i];
    const std::string& s = ln.content;
    if (s[0] != '!')
      detail::fail_at(errc::malformed_directive,
                      "expected a '!' directive, got '" + s + "'", ln);

    std::size_t kend = 1;
    while (kend < s.size() && s[kend] != '=' && s[kend] != ' ' &&
           s[kend] != '\t')
      ++kend;
    std::string kw_text = s.substr(1, kend - 1);
    auto kw = keyword_from(kw_text);
    if (!kw)
      detail::fail_at(errc::unknown_directive,
                      "'!" + kw_text + "' is not a CRL directive", ln);

    RawDirective d;
    d.keyword = *kw;
    d.origin = ln;

    std::size_t p = kend;
    auto skip_ws = [&] {
      while (p < s.size() && (s[p] == ' ' || s[p] == '\t')) ++p;
    };
    skip_ws();

    if (d.keyword == Keyword::define) {
      std::size_t nend = p;
      while (nend < s.size() && s[nend] != '=' && s[nend] != ' ' &&
             s[nend] != '\t')
        ++nend;
      d.define_name = s.substr(p, nend - p);
      if (!detail::valid_define_name(d.define_name))
        detail::fail_at(errc::malformed_directive,
                        "'" + d.define_name + "' is not a valid DEFINE name",
                        ln);
      p = nend;
      skip_ws();
    }

    if (p >= s.size() || s[p] != '=')
      detail::fail_at(errc::malformed_directive,
                      "expected '=' after !" + kw_text, ln);
    ++p;
    skip_ws();
    std::string value = std::string(detail::trim(std::string_view(s).substr(p)));

    if (d.keyword == Keyword::checkout) {
      if (!value.empty()) {
        detail::check_component_path(value, ln);
        d.checkout_paths.push_back(value);
      }
      ++i;
      while (i < lines.size() && lines[i].content[0] != '!') {
        detail::check_component_path(lines[i].content, lines[i]);
        d.checkout_paths.push_back(lines[i].content);
        ++i;
      }
      if (d.checkout_paths.empty())
        detail::fail_at(errc::empty_checkout,
                        "!CHECKOUT names no components", ln);
    } else {
      if (value.empty()) {
        // Long values may sit on the line after '!KEYWORD ='.
        if (i + 1 < lines.size() && lines[i + 1].content[0] != '!') {
          value = lines[i + 1].content;
          i += 2;
        } else {
          detail::fail_at(errc::malformed_directive,
                          "!" + kw_text + " requires a value", ln);
        }
      } else {
        ++i;
      }
      d.value = value;
    }

    if (out.empty() && d.keyword != Keyword::crl_version)
      detail::fail_at(errc::missing_version_header,
                      "the first directive must be !CRL_VERSION", ln);
    out.push_back(std::move(d));
  }

  if (out.empty())
    throw error(errc::missing_version_header,
                "document contains no directives");
  return out;
}

}  // namespace crl

#endif  // CRL_PARSE_HPP
