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

#ifndef CRL_AUTH_HPP
#define CRL_AUTH_HPP

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "crl/backends.hpp"
#include "crl/errors.hpp"
#include "crl/resolve.hpp"

namespace crl {

/// One persistent association of a repository AUTH_URL with either a
/// username or the explicit anonymous marker "-".
struct CredentialRecord {
  std::string url_key;   // the AUTH_URL as written, after DEFINE expansion
  std::string identity;  // a username, or "-" for anonymous

  bool anonymous() const { return identity == "-"; }

  friend bool operator==(const CredentialRecord&,
                         const CredentialRecord&) = default;
};

/// The users file: one `<url_key> <identity>` record per line. Loading and
/// saving are byte-stable so the file survives round trips untouched.
class UsersFile {
 public:
  UsersFile() = default;
  explicit UsersFile(std::filesystem::path path) : path_(std::move(path)) {}

  /// $CRL_USERS overrides the default $HOME/.crl/users location.
  static std::filesystem::path default_path() {
    if (const char* env = std::getenv("CRL_USERS"); env && *env)
      return env;
    const char* home = std::getenv("HOME");
    return std::filesystem::path(home ? home : ".") / ".crl" / "users";
  }

  static UsersFile load(std::filesystem::path path) {
    UsersFile f(std::move(path));
    std::ifstream in(f.path_);
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      auto space = line.find(' ');
      if (space == std::string::npos) continue;
      f.records_.push_back(
          {line.substr(0, space), line.substr(space + 1)});
    }
    return f;
  }

  void save() const {
    std::error_code ec;
    if (path_.has_parent_path())
      std::filesystem::create_directories(path_.parent_path(), ec);
    std::ofstream out(path_, std::ios::binary | std::ios::trunc);
    if (!out)
      throw error(errc::io_failure,
                  "cannot write users file '" + path_.string() + "'");
    for (const auto& r : records_) out << r.url_key << ' ' << r.identity << '\n';
  }

  const CredentialRecord* find(std::string_view url_key) const {
    for (const auto& r : records_)
      if (r.url_key == url_key) return &r;
    return nullptr;
  }

  /// Adds a record and persists immediately. Existing records are never
  /// rewritten or removed here.
  void append_record(CredentialRecord record) {
    records_.push_back(std::move(record));
    save();
  }

  const std::vector<CredentialRecord>& records() const { return records_; }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::vector<CredentialRecord> records_;
};

/// Asks the user for a username for the given AUTH_URL. Returning "-" means
/// anonymous; nullopt means no answer could be obtained.
using PromptFn =
    std::function<std::optional<std::string>(const std::string& auth_url)>;

struct DecideOptions {
  bool anonymous_flag = false;
  /// When a prompt would be needed but none is available, fall back to an
  /// anonymous checkout with a warning instead of failing. This is what
  /// keeps unattended runs from hanging.
  bool batch_fallback = true;
  std::function<void(const std::string&)> warn;
};

/// Per-block credential decision:
///
///   anonymous flag set            -> anonymous
///   block has no AUTH_URL         -> anonymous
///   users file knows the AUTH_URL -> stored identity
///   otherwise                     -> prompt, and persist the answer
///
/// Only the last arm interacts with the user; "-" at the prompt selects
/// anonymous and is stored too, so the question is asked only once.
inline Credential decide(const ComponentBlock& block, UsersFile& store,
                         const DecideOptions& opts, const PromptFn& prompt) {
  if (opts.anonymous_flag) return Credential::anonymous();
  if (!block.auth_url) return Credential::anonymous();

  const std::string& key = block.auth_url->text;
  if (const CredentialRecord* rec = store.find(key))
    return rec->anonymous() ? Credential::anonymous()
                            : Credential::with_username(rec->identity);

  std::optional<std::string> answer;
  if (prompt) answer = prompt(key);
  if (!answer) {
    if (!opts.batch_fallback)
      throw error(errc::prompt_unavailable,
                  "a username for " + key +
                      " is required but no prompt is available");
    if (opts.warn)
      opts.warn("no way to ask for a username for " + key +
                "; using anonymous access");
    return Credential::anonymous();
  }
  if (answer->empty()) {
    if (opts.warn)
      opts.warn("empty username for " + key + "; using anonymous access");
    return Credential::anonymous();
  }

  store.append_record({key, *answer});
  return *answer == "-" ? Credential::anonymous()
                        : Credential::with_username(*answer);
}

/// Runs the backend's explicit login step when the credential calls for one.
/// At most one login per block; passwords stay with the tool.
inline std::optional<CommandTrace> login_if_needed(const ComponentBlock& block,
                                                   const Credential& credential,
                                                   Backend& backend) {
  if (credential.kind == Credential::Kind::anonymous) return std::nullopt;
  return backend.login(block, credential);
}

/// Deletes the users file so subsequent runs prompt afresh. Deleting an
/// absent file succeeds.
inline void reset(const std::filesystem::path& users_path) {
  std::error_code ec;
  std::filesystem::remove(users_path, ec);
  if (ec)
    throw error(errc::io_failure, "cannot remove users file '" +
                                      users_path.string() +
                                      "': " + ec.message());
}

}  // namespace crl

#endif  // CRL_AUTH_HPP
