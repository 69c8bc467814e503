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

#ifndef CRL_ERRORS_HPP
#define CRL_ERRORS_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace crl {

/// Error kinds raised across the library. Tests match on these rather than
/// on message text.
enum class errc {
  // parser
  unknown_directive,
  missing_version_header,
  malformed_directive,
  empty_checkout,
  malformed_location,
  // resolver
  undefined_variable,
  duplicate_definition,
  missing_required_directive,
  orphan_anon_pass,
  invalid_type,
  repo_path_without_dvcs,
  anon_credentials_non_cvs,
  ambiguous_name_override,
  positional_out_of_range,
  unresolved_placeholder,
  version_mismatch,
  unsupported_version,
  // auth
  prompt_unavailable,
  login_failed,
  io_failure,
  // backends
  tool_missing,
  fetch_failed,
  would_overwrite,
  not_a_working_copy,
  extract_missing,
  // engine
  source_unavailable,
  foreign_destination,
  // cli
  unknown_flag,
  missing_value,
  no_list_given,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::unknown_directive: return "unknown directive";
    case errc::missing_version_header: return "missing version header";
    case errc::malformed_directive: return "malformed directive";
    case errc::empty_checkout: return "empty checkout";
    case errc::malformed_location: return "malformed location";
    case errc::undefined_variable: return "undefined variable";
    case errc::duplicate_definition: return "duplicate definition";
    case errc::missing_required_directive: return "missing required directive";
    case errc::orphan_anon_pass: return "orphan anonymous credentials";
    case errc::invalid_type: return "invalid type";
    case errc::repo_path_without_dvcs: return "repo path without dvcs";
    case errc::anon_credentials_non_cvs: return "anonymous credentials on non-cvs block";
    case errc::ambiguous_name_override: return "ambiguous name override";
    case errc::positional_out_of_range: return "positional out of range";
    case errc::unresolved_placeholder: return "unresolved placeholder";
    case errc::version_mismatch: return "version mismatch";
    case errc::unsupported_version: return "unsupported version";
    case errc::prompt_unavailable: return "prompt unavailable";
    case errc::login_failed: return "login failed";
    case errc::io_failure: return "io failure";
    case errc::tool_missing: return "tool missing";
    case errc::fetch_failed: return "fetch failed";
    case errc::would_overwrite: return "would overwrite";
    case errc::not_a_working_copy: return "not a working copy";
    case errc::extract_missing: return "extract missing";
    case errc::source_unavailable: return "source unavailable";
    case errc::foreign_destination: return "foreign destination";
    case errc::unknown_flag: return "unknown flag";
    case errc::missing_value: return "missing value";
    case errc::no_list_given: return "no list given";
  }
  return "error";
}

/// Library-wide exception. Carries an error kind plus, when the failure is
/// tied to a line of CRL input, the source name and 1-based line number.
class error : public std::runtime_error {
 public:
  error(errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  error(errc code, const std::string& message, std::string source,
        std::uint64_t line)
      : std::runtime_error(format(source, line, message)),
        code_(code),
        source_(std::move(source)),
        line_(line) {}

  errc code() const { return code_; }
  const std::string& source() const { return source_; }
  std::uint64_t line() const { return line_; }
  bool has_location() const { return line_ != 0; }

 private:
  static std::string format(const std::string& source, std::uint64_t line,
                            const std::string& message) {
    return source + ":" + std::to_string(line) + ": " + message;
  }

  errc code_;
  std::string source_;
  std::uint64_t line_ = 0;
};

}  // namespace crl

#endif  // CRL_ERRORS_HPP
