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

#ifndef CRL_LOCATION_HPP
#define CRL_LOCATION_HPP

#include <string>
#include <string_view>

#include "crl/errors.hpp"

namespace crl {

/// A repository location in one of the three recognized shapes:
///
///   pserver          :pserver:<rest>                 (CVS password server)
///   scheme_url       <scheme>://<path>               (git/svn/http/...)
///   user_host_path   <user>@<host>:<path>            (ssh-style)
///
/// The original text is kept; the decomposed fields are filled per form.
enum class LocationForm { pserver, scheme_url, user_host_path };

struct Location {
  LocationForm form = LocationForm::scheme_url;
  std::string text;    // the location exactly as written
  std::string path;    // all forms
  std::string scheme;  // scheme_url only
  std::string user;    // user_host_path only
  std::string host;    // user_host_path only

  friend bool operator==(const Location&, const Location&) = default;
};

namespace detail {

inline bool strict_name_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9') || c == '.';
}

inline bool path_segment_char(char c) {
  return strict_name_char(c) || c == '_' || c == '-' || c == '$';
}

inline bool valid_path(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = 0;
  if (s[0] == '/') i = 1;  // absolute paths are allowed
  bool segment_open = false;
  for (; i < s.size(); ++i) {
    if (s[i] == '/') {
      if (!segment_open) return false;  // empty segment
      segment_open = false;
    } else if (path_segment_char(s[i])) {
      segment_open = true;
    } else {
      return false;
    }
  }
  return segment_open;
}

}  // namespace detail

/// Strict NAME class: alphanumeric or '.'.
inline bool is_strict_name(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!detail::strict_name_char(c)) return false;
  return true;
}

/// Name validation for path segments and component names. In addition to the
/// strict alphanumeric-or-dot class this admits '_', '-' and '$', which
/// real component names and pre-expansion values use ($ROOT, ML_BSSN).
inline bool validate_name(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!detail::path_segment_char(c)) return false;
  return true;
}

/// True when s is a slash-separated sequence of valid name segments.
inline bool is_component_path(std::string_view s) {
  return detail::valid_path(s) && s.front() != '/';
}

/// Decomposes a repository location, trying the pserver, scheme and
/// user@host:path productions in that order. Throws malformed_location when
/// no production matches.
inline Location parse_location(std::string_view value) {
  constexpr std::string_view kPserver = ":pserver:";
  Location loc;
  loc.text = std::string(value);

  auto fail = [&]() -> Location {
    throw error(errc::malformed_location,
                "'" + loc.text + "' is not a recognizable repository location");
  };

  if (value.substr(0, kPserver.size()) == kPserver) {
    auto rest = value.substr(kPserver.size());
    if (rest.empty() || rest.find_first_of(" \t") != std::string_view::npos)
      return fail();
    loc.form = LocationForm::pserver;
    loc.path = std::string(rest);
    return loc;
  }

  if (auto sep = value.find("://"); sep != std::string_view::npos) {
    auto scheme = value.substr(0, sep);
    auto path = value.substr(sep + 3);
    // What follows the scheme is owned by that scheme's tool; ports,
    // userinfo and the like must pass through. Only whitespace is out.
    if (!is_strict_name(scheme) || path.empty() ||
        path.find_first_of(" \t") != std::string_view::npos)
      return fail();
    loc.form = LocationForm::scheme_url;
    loc.scheme = std::string(scheme);
    loc.path = std::string(path);
    return loc;
  }

  if (auto at = value.find('@'); at != std::string_view::npos) {
    auto user = value.substr(0, at);
    auto rest = value.substr(at + 1);
    auto colon = rest.find(':');
    if (colon == std::string_view::npos) return fail();
    auto host = rest.substr(0, colon);
    auto path = rest.substr(colon + 1);
    if (!is_strict_name(user) || !is_strict_name(host) ||
        !detail::valid_path(path))
      return fail();
    loc.form = LocationForm::user_host_path;
    loc.user = std::string(user);
    loc.host = std::string(host);
    loc.path = std::string(path);
    return loc;
  }

  return fail();
}

}  // namespace crl

#endif  // CRL_LOCATION_HPP
