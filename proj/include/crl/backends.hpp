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

#ifndef CRL_BACKENDS_HPP
#define CRL_BACKENDS_HPP

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "crl/errors.hpp"
#include "crl/resolve.hpp"
#include "crl/subprocess.hpp"

namespace crl {

/// A retrieval failure with the exact command that failed attached.
class fetch_error : public error {
 public:
  fetch_error(errc code, const std::string& message, CommandTrace trace)
      : error(code, message), trace_(std::move(trace)) {}

  const CommandTrace& trace() const { return trace_; }

 private:
  CommandTrace trace_;
};

/// Shared state handed to every backend: the directory the assembled tree
/// lives under. The clone store and run log sit in <run_root>/.crl.
struct BackendContext {
  std::filesystem::path run_root = ".";
};

/// Metadata directory each tool leaves in a working copy. Downloads leave
/// plain files and have none.
inline std::optional<std::string> metadata_dir_name(VcsType t) {
  switch (t) {
    case VcsType::cvs: return "CVS";
    case VcsType::svn: return ".svn";
    case VcsType::git: return ".git";
    case VcsType::darcs: return "_darcs";
    case VcsType::hg: return ".hg";
    case VcsType::http:
    case VcsType::ftp: return std::nullopt;
  }
  return std::nullopt;
}

enum class DestState { absent, working_copy, foreign };

struct DetectResult {
  DestState state = DestState::absent;
  std::optional<VcsType> vcs;
};

namespace detail {

inline void copy_tree(const std::filesystem::path& src,
                      const std::filesystem::path& dst) {
  std::filesystem::create_directories(dst);
  std::filesystem::copy(src, dst,
                        std::filesystem::copy_options::recursive |
                            std::filesystem::copy_options::overwrite_existing);
}

inline void wipe_except(const std::filesystem::path& dir,
                        const std::set<std::string>& keep) {
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (!keep.count(entry.path().filename().string()))
      std::filesystem::remove_all(entry.path());
}

inline void write_file(const std::filesystem::path& p,
                       const std::string& content) {
  std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

inline std::optional<std::string> read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return std::nullopt;
  std::string s((std::istreambuf_iterator<char>(in)),
                std::istreambuf_iterator<char>());
  return s;
}

}  // namespace detail

/// Stable hex digest used to key the clone store (FNV-1a 64).
inline std::string url_hash(std::string_view url) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : url) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

/// Where the full clone of a distributed repository lives. All components of
/// one repository share this single clone.
inline std::filesystem::path clone_store_dir(
    const std::filesystem::path& run_root, std::string_view url) {
  return run_root / ".crl" / "repos" / url_hash(url);
}

/// Classifies a destination so the engine can choose checkout vs update.
/// Working copies are recognized by their tool metadata directory; subtrees
/// materialized from a shared clone carry a .crl/origin marker recording the
/// tool they came from.
inline DetectResult detect_state(const std::filesystem::path& destination) {
  std::error_code ec;
  auto st = std::filesystem::status(destination, ec);
  if (ec || !std::filesystem::exists(st)) return {DestState::absent, {}};
  if (!std::filesystem::is_directory(st)) return {DestState::foreign, {}};
  if (std::filesystem::is_empty(destination, ec) && !ec)
    return {DestState::absent, {}};
  for (VcsType t : {VcsType::cvs, VcsType::svn, VcsType::git, VcsType::darcs,
                    VcsType::hg})
    if (std::filesystem::exists(destination / *metadata_dir_name(t), ec))
      return {DestState::working_copy, t};
  if (auto origin = detail::read_file(destination / ".crl" / "origin")) {
    auto space = origin->find(' ');
    if (auto t = vcs_type_from(origin->substr(0, space)))
      return {DestState::working_copy, *t};
  }
  return {DestState::foreign, {}};
}

/// Copies the requested subtree out of a repository clone into destination
/// and records where it came from, so later runs can plan an update.
inline void materialize_component(const std::filesystem::path& repo_dir,
                                  const std::string& repo_extract,
                                  const std::filesystem::path& destination,
                                  VcsType vcs, std::string_view origin_url) {
  auto src = repo_dir / repo_extract;
  std::error_code ec;
  if (!std::filesystem::exists(src, ec))
    throw error(errc::extract_missing,
                "'" + repo_extract + "' does not exist in the repository at " +
                    repo_dir.string());
  if (std::filesystem::exists(destination))
    detail::wipe_except(destination, {".crl"});
  if (std::filesystem::is_directory(src)) {
    detail::copy_tree(src, destination);
  } else {
    std::filesystem::create_directories(destination);
    std::filesystem::copy_file(
        src, destination / src.filename(),
        std::filesystem::copy_options::overwrite_existing);
  }
  detail::write_file(destination / ".crl" / "origin",
                     std::string(to_string(vcs)) + " " +
                         std::string(origin_url) + "\n");
}

namespace detail {

inline void ensure_checkout_dest(const std::string& destination) {
  std::filesystem::path p(destination);
  std::error_code ec;
  if (std::filesystem::exists(p, ec)) {
    if (!std::filesystem::is_directory(p) || !std::filesystem::is_empty(p, ec))
      throw error(errc::would_overwrite,
                  "destination '" + destination + "' already exists");
  } else if (p.has_parent_path()) {
    std::filesystem::create_directories(p.parent_path());
  }
}

inline CommandTrace run_checked(std::vector<std::string> argv,
                                const std::filesystem::path& cwd = {}) {
  CommandTrace trace = run_command(std::move(argv), cwd);
  if (trace.exit_code != 0)
    throw fetch_error(errc::fetch_failed,
                      "command failed (exit " +
                          std::to_string(trace.exit_code) +
                          "): " + join_argv(trace.argv),
                      trace);
  return trace;
}

inline void require_metadata(const FetchTask& task) {
  auto meta = metadata_dir_name(task.vcs_type);
  auto det = detect_state(task.destination);
  bool ok = meta ? det.state == DestState::working_copy &&
                       det.vcs == task.vcs_type
                 : std::filesystem::exists(task.destination);
  if (!ok)
    throw error(errc::not_a_working_copy,
                "'" + task.destination + "' is not a " +
                    to_string(task.vcs_type) + " working copy");
}

}  // namespace detail

/// The uniform retrieval contract. checkout() requires an absent or empty
/// destination; update() requires a prior checkout of matching type. Both
/// return the trace of the invocation that did the work and throw
/// fetch_error (with the trace attached) when the tool fails.
class Backend {
 public:
  virtual ~Backend() = default;

  virtual std::string name() const = 0;
  virtual CommandTrace checkout(const FetchTask& task) = 0;
  virtual CommandTrace update(const FetchTask& task) = 0;

  /// Explicit pre-fetch login, where the tool has such a concept (CVS).
  /// Returns the trace when a login ran, nullopt when none is needed.
  /// Passwords are never handled here; they stay between the user and the
  /// tool, or come from the block's designated anonymous pair.
  virtual std::optional<CommandTrace> login(const ComponentBlock&,
                                            const Credential&) {
    return std::nullopt;
  }

  /// Fails fast with tool_missing before any network work.
  virtual void ensure_tool_available() {}
};

/// git and hg share the clone-store flow for REPO_PATH components: the full
/// clone lives once under <root>/.crl/repos/<hash> and every requested
/// component is copied out of it. The store is refreshed at most once per
/// run.
class DvcsBackend : public Backend {
 public:
  explicit DvcsBackend(BackendContext ctx) : ctx_(std::move(ctx)) {}

  CommandTrace checkout(const FetchTask& task) override {
    ensure_tool_available();
    detail::ensure_checkout_dest(task.destination);
    if (!task.repo_extract)
      return detail::run_checked(clone_argv(task, task.destination));
    auto store = clone_store_dir(ctx_.run_root, task.resolved_url);
    CommandTrace trace;
    if (!std::filesystem::exists(store)) {
      std::filesystem::create_directories(store.parent_path());
      trace = detail::run_checked(clone_argv(task, store.string()));
      synced_.insert(store.string());
    } else {
      trace = CommandTrace{{"crl-store", "reuse", store.string()},
                           ctx_.run_root.string(), 0, ""};
    }
    materialize_component(store, *task.repo_extract, task.destination,
                          task.vcs_type, task.resolved_url);
    return trace;
  }

  CommandTrace update(const FetchTask& task) override {
    ensure_tool_available();
    if (!task.repo_extract) {
      detail::require_metadata(task);
      return detail::run_checked(pull_argv(task), task.destination);
    }
    auto store = clone_store_dir(ctx_.run_root, task.resolved_url);
    CommandTrace trace;
    if (!std::filesystem::exists(store)) {
      std::filesystem::create_directories(store.parent_path());
      trace = detail::run_checked(clone_argv(task, store.string()));
      synced_.insert(store.string());
    } else if (!synced_.count(store.string())) {
      trace = detail::run_checked(pull_argv(task), store);
      synced_.insert(store.string());
    } else {
      trace = CommandTrace{{"crl-store", "reuse", store.string()},
                           ctx_.run_root.string(), 0, ""};
    }
    materialize_component(store, *task.repo_extract, task.destination,
                          task.vcs_type, task.resolved_url);
    return trace;
  }

  void ensure_tool_available() override {
    if (tool_checked_) return;
    if (!find_tool(tool()))
      throw error(errc::tool_missing,
                  "'" + std::string(tool()) + "' not found in PATH");
    tool_checked_ = true;
  }

 protected:
  virtual std::string_view tool() const = 0;
  virtual std::vector<std::string> clone_argv(const FetchTask& task,
                                              const std::string& dest)
      const = 0;
  virtual std::vector<std::string> pull_argv(const FetchTask& task) const = 0;

  const BackendContext& context() const { return ctx_; }

 private:
  BackendContext ctx_;
  bool tool_checked_ = false;
  std::set<std::string> synced_;
};

class GitBackend final : public DvcsBackend {
 public:
  using DvcsBackend::DvcsBackend;
  std::string name() const override { return "git"; }

 protected:
  std::string_view tool() const override { return "git"; }

  std::vector<std::string> clone_argv(const FetchTask& task,
                                      const std::string& dest) const override {
    std::vector<std::string> argv{"git", "clone"};
    // Anonymous checkouts only clone the most recent changeset; developers
    // fetching via their account need the full history to commit.
    if (task.credentials.kind == Credential::Kind::anonymous) {
      argv.push_back("--depth");
      argv.push_back("1");
    }
    argv.push_back(task.resolved_url);
    argv.push_back(dest);
    return argv;
  }

  std::vector<std::string> pull_argv(const FetchTask&) const override {
    return {"git", "pull"};
  }
};

class HgBackend final : public DvcsBackend {
 public:
  using DvcsBackend::DvcsBackend;
  std::string name() const override { return "hg"; }

 protected:
  std::string_view tool() const override { return "hg"; }

  std::vector<std::string> clone_argv(const FetchTask& task,
                                      const std::string& dest) const override {
    return {"hg", "clone", task.resolved_url, dest};
  }

  std::vector<std::string> pull_argv(const FetchTask&) const override {
    return {"hg", "pull", "-u"};
  }
};

class SvnBackend final : public Backend {
 public:
  explicit SvnBackend(BackendContext ctx) : ctx_(std::move(ctx)) {}
  std::string name() const override { return "svn"; }

  CommandTrace checkout(const FetchTask& task) override {
    ensure_tool_available();
    detail::ensure_checkout_dest(task.destination);
    std::vector<std::string> argv{"svn", "checkout"};
    if (task.credentials.kind == Credential::Kind::username) {
      argv.push_back("--username");
      argv.push_back(task.credentials.user);
    }
    argv.push_back(task.resolved_url);
    argv.push_back(task.destination);
    return detail::run_checked(std::move(argv));
  }

  CommandTrace update(const FetchTask& task) override {
    ensure_tool_available();
    detail::require_metadata(task);
    return detail::run_checked({"svn", "update"}, task.destination);
  }

  void ensure_tool_available() override {
    if (tool_checked_) return;
    if (!find_tool("svn"))
      throw error(errc::tool_missing, "'svn' not found in PATH");
    tool_checked_ = true;
  }

 private:
  BackendContext ctx_;
  bool tool_checked_ = false;
};

/// Rebuilds a :pserver: root around the given user (or user:pass) spec.
/// Non-pserver roots are returned unchanged.
inline std::string cvs_root_with_user(const std::string& root,
                                      const std::string& user_spec) {
  constexpr std::string_view kPserver = ":pserver:";
  if (root.rfind(kPserver, 0) != 0) return root;
  std::string rest = root.substr(kPserver.size());
  if (auto at = rest.find('@'); at != std::string::npos)
    rest = rest.substr(at + 1);
  return std::string(kPserver) + user_spec + "@" + rest;
}

class CvsBackend final : public Backend {
 public:
  explicit CvsBackend(BackendContext ctx) : ctx_(std::move(ctx)) {}
  std::string name() const override { return "cvs"; }

  CommandTrace checkout(const FetchTask& task) override {
    ensure_tool_available();
    detail::ensure_checkout_dest(task.destination);
    std::filesystem::path dest(task.destination);
    auto parent = dest.parent_path();
    if (parent.empty()) parent = ".";
    std::filesystem::create_directories(parent);
    return detail::run_checked(
        {"cvs", "-d", task_root(task), "checkout", "-d",
         dest.filename().string(), task.component_path},
        parent);
  }

  CommandTrace update(const FetchTask& task) override {
    ensure_tool_available();
    detail::require_metadata(task);
    return detail::run_checked({"cvs", "update", "-d"}, task.destination);
  }

  std::optional<CommandTrace> login(const ComponentBlock& block,
                                    const Credential& cred) override {
    std::string root;
    if (cred.kind == Credential::Kind::username) {
      const Location& base = block.auth_url ? *block.auth_url : block.url;
      root = cvs_root_with_user(base.text, cred.user);
    } else if (cred.kind == Credential::Kind::cvs_anon) {
      root = cvs_root_with_user(block.url.text, cred.user + ":" + cred.pass);
    } else {
      return std::nullopt;
    }
    ensure_tool_available();
    CommandTrace trace = run_command({"cvs", "-d", root, "login"});
    if (trace.exit_code != 0)
      throw fetch_error(errc::login_failed,
                        "cvs login failed for " + block.url.text, trace);
    return trace;
  }

  void ensure_tool_available() override {
    if (tool_checked_) return;
    if (!find_tool("cvs"))
      throw error(errc::tool_missing, "'cvs' not found in PATH");
    tool_checked_ = true;
  }

 private:
  static std::string task_root(const FetchTask& task) {
    if (task.credentials.kind == Credential::Kind::username)
      return cvs_root_with_user(task.resolved_url, task.credentials.user);
    if (task.credentials.kind == Credential::Kind::cvs_anon)
      return cvs_root_with_user(task.resolved_url, task.credentials.user);
    return task.resolved_url;
  }

  BackendContext ctx_;
  bool tool_checked_ = false;
};

class DarcsBackend final : public Backend {
 public:
  explicit DarcsBackend(BackendContext ctx) : ctx_(std::move(ctx)) {}
  std::string name() const override { return "darcs"; }

  CommandTrace checkout(const FetchTask& task) override {
    ensure_tool_available();
    detail::ensure_checkout_dest(task.destination);
    return detail::run_checked(
        {"darcs", "clone", task.resolved_url, task.destination});
  }

  CommandTrace update(const FetchTask& task) override {
    ensure_tool_available();
    detail::require_metadata(task);
    return detail::run_checked({"darcs", "pull", "--all"}, task.destination);
  }

  void ensure_tool_available() override {
    if (tool_checked_) return;
    if (!find_tool("darcs"))
      throw error(errc::tool_missing, "'darcs' not found in PATH");
    tool_checked_ = true;
  }

 private:
  BackendContext ctx_;
  bool tool_checked_ = false;
};

/// Plain http/ftp retrieval: the destination is the downloaded file itself.
/// The fetch is delegated to curl (or wget) as a child process like every
/// other backend; "update" re-downloads in place.
class DownloadBackend final : public Backend {
 public:
  explicit DownloadBackend(BackendContext ctx) : ctx_(std::move(ctx)) {}
  std::string name() const override { return "download"; }

  CommandTrace checkout(const FetchTask& task) override {
    ensure_tool_available();
    std::filesystem::path dest(task.destination);
    std::error_code ec;
    if (std::filesystem::exists(dest, ec))
      throw error(errc::would_overwrite,
                  "destination '" + task.destination + "' already exists");
    return fetch(task);
  }

  CommandTrace update(const FetchTask& task) override {
    ensure_tool_available();
    return fetch(task);
  }

  void ensure_tool_available() override {
    if (!tool_.empty()) return;
    if (find_tool("curl"))
      tool_ = "curl";
    else if (find_tool("wget"))
      tool_ = "wget";
    else
      throw error(errc::tool_missing,
                  "neither 'curl' nor 'wget' found in PATH");
  }

 private:
  CommandTrace fetch(const FetchTask& task) {
    std::filesystem::path dest(task.destination);
    if (dest.has_parent_path())
      std::filesystem::create_directories(dest.parent_path());
    std::vector<std::string> argv =
        tool_ == "curl"
            ? std::vector<std::string>{"curl", "-fsSL", "--output",
                                       task.destination, task.resolved_url}
            : std::vector<std::string>{"wget", "-q", "-O", task.destination,
                                       task.resolved_url};
    return detail::run_checked(std::move(argv));
  }

  BackendContext ctx_;
  std::string tool_;
};

/// Filesystem-backed stand-in for any of the real backends. A mock:// URL
/// names a fixture directory (or file); checkout copies it into place and
/// leaves the same metadata the real tool would, so planning and state
/// detection behave identically with zero network or external tools.
/// Failures can be injected per URL substring for error-path tests.
class MockBackend final : public Backend {
 public:
  explicit MockBackend(BackendContext ctx) : ctx_(std::move(ctx)) {}
  std::string name() const override { return "mock"; }

  CommandTrace checkout(const FetchTask& task) override {
    CommandTrace trace = op_trace("checkout", task);
    auto fixture = fixture_path(task.resolved_url);
    check_healthy(task, fixture, trace);
    detail::ensure_checkout_dest(task.destination);
    if (task.repo_extract) {
      sync_store(task, fixture, /*refresh=*/false);
      materialize_component(clone_store_dir(ctx_.run_root, task.resolved_url),
                            *task.repo_extract, task.destination,
                            task.vcs_type, task.resolved_url);
    } else {
      place(task, fixture);
    }
    log_.push_back(trace);
    return trace;
  }

  CommandTrace update(const FetchTask& task) override {
    CommandTrace trace = op_trace("update", task);
    auto fixture = fixture_path(task.resolved_url);
    check_healthy(task, fixture, trace);
    if (task.repo_extract) {
      sync_store(task, fixture, /*refresh=*/true);
      materialize_component(clone_store_dir(ctx_.run_root, task.resolved_url),
                            *task.repo_extract, task.destination,
                            task.vcs_type, task.resolved_url);
    } else if (is_file_fixture(task, fixture)) {
      place(task, fixture);
    } else {
      detail::require_metadata(task);
      auto meta = metadata_dir_name(task.vcs_type);
      std::set<std::string> keep{".crl"};
      if (meta) keep.insert(*meta);
      detail::wipe_except(task.destination, keep);
      detail::copy_tree(fixture, task.destination);
    }
    log_.push_back(trace);
    return trace;
  }

  std::optional<CommandTrace> login(const ComponentBlock& block,
                                    const Credential& cred) override {
    if (block.vcs_type != VcsType::cvs ||
        cred.kind == Credential::Kind::anonymous)
      return std::nullopt;
    CommandTrace trace{{"mock-cvs", "login", block.url.text},
                       ctx_.run_root.string(),
                       0,
                       ""};
    log_.push_back(trace);
    return trace;
  }

  void inject_failure(std::string url_substring) {
    fail_markers_.insert(std::move(url_substring));
  }
  void clear_failures() { fail_markers_.clear(); }

  const std::vector<CommandTrace>& trace_log() const { return log_; }

 private:
  static std::filesystem::path fixture_path(const std::string& url) {
    constexpr std::string_view kScheme = "mock://";
    return url.rfind(kScheme, 0) == 0
               ? std::filesystem::path(url.substr(kScheme.size()))
               : std::filesystem::path(url);
  }

  CommandTrace op_trace(const char* op, const FetchTask& task) const {
    return {{std::string("mock-") + to_string(task.vcs_type), op,
             task.resolved_url, task.destination},
            ctx_.run_root.string(),
            0,
            ""};
  }

  void check_healthy(const FetchTask& task,
                     const std::filesystem::path& fixture,
                     CommandTrace& trace) {
    bool injected = false;
    for (const auto& marker : fail_markers_)
      if (task.resolved_url.find(marker) != std::string::npos) injected = true;
    std::error_code ec;
    if (injected || !std::filesystem::exists(fixture, ec)) {
      trace.exit_code = 1;
      trace.output = injected
                         ? "mock: injected failure for " + task.resolved_url
                         : "mock: no such fixture: " + fixture.string();
      log_.push_back(trace);
      throw fetch_error(errc::fetch_failed, trace.output, trace);
    }
  }

  bool is_file_fixture(const FetchTask& task,
                       const std::filesystem::path& fixture) const {
    return is_download(task.vcs_type) ||
           std::filesystem::is_regular_file(fixture);
  }

  void place(const FetchTask& task, const std::filesystem::path& fixture) {
    std::filesystem::path dest(task.destination);
    if (is_file_fixture(task, fixture)) {
      if (dest.has_parent_path())
        std::filesystem::create_directories(dest.parent_path());
      std::filesystem::copy_file(
          fixture, dest, std::filesystem::copy_options::overwrite_existing);
      return;
    }
    detail::copy_tree(fixture, dest);
    if (auto meta = metadata_dir_name(task.vcs_type))
      detail::write_file(dest / *meta / "origin", task.resolved_url + "\n");
  }

  void sync_store(const FetchTask& task, const std::filesystem::path& fixture,
                  bool refresh) {
    auto store = clone_store_dir(ctx_.run_root, task.resolved_url);
    std::string key = store.string();
    if (!std::filesystem::exists(store)) {
      detail::copy_tree(fixture, store);
      if (auto meta = metadata_dir_name(task.vcs_type))
        detail::write_file(store / *meta / "origin", task.resolved_url + "\n");
      log_.push_back({{std::string("mock-") + to_string(task.vcs_type),
                       "clone", task.resolved_url, key},
                      ctx_.run_root.string(),
                      0,
                      ""});
      synced_.insert(key);
    } else if (refresh && !synced_.count(key)) {
      auto meta = metadata_dir_name(task.vcs_type);
      std::set<std::string> keep;
      if (meta) keep.insert(*meta);
      detail::wipe_except(store, keep);
      detail::copy_tree(fixture, store);
      log_.push_back({{std::string("mock-") + to_string(task.vcs_type),
                       "pull", task.resolved_url, key},
                      ctx_.run_root.string(),
                      0,
                      ""});
      synced_.insert(key);
    }
  }

  BackendContext ctx_;
  std::set<std::string> fail_markers_;
  std::set<std::string> synced_;
  std::vector<CommandTrace> log_;
};

/// Maps each !TYPE value to its backend. Adding a tool means registering one
/// entry here; the engine never changes. Tasks whose resolved URL uses the
/// mock:// scheme are routed to the mock backend regardless of type, which
/// is what makes hermetic end-to-end runs possible through the real CLI.
class BackendRegistry {
 public:
  void register_backend(VcsType type, std::shared_ptr<Backend> backend) {
    backends_[type] = std::move(backend);
  }

  void set_mock(std::shared_ptr<Backend> mock) { mock_ = std::move(mock); }

  bool has(VcsType type) const { return backends_.count(type) != 0; }

  Backend& backend_for(const FetchTask& task) {
    if (mock_ && task.resolved_url.rfind("mock://", 0) == 0) return *mock_;
    auto it = backends_.find(task.vcs_type);
    if (it == backends_.end())
      throw error(errc::tool_missing,
                  std::string("no backend registered for type '") +
                      to_string(task.vcs_type) + "'");
    return *it->second;
  }

  Backend* mock() { return mock_.get(); }

  static BackendRegistry standard(const BackendContext& ctx) {
    BackendRegistry reg;
    reg.register_backend(VcsType::cvs, std::make_shared<CvsBackend>(ctx));
    reg.register_backend(VcsType::svn, std::make_shared<SvnBackend>(ctx));
    reg.register_backend(VcsType::git, std::make_shared<GitBackend>(ctx));
    reg.register_backend(VcsType::darcs, std::make_shared<DarcsBackend>(ctx));
    reg.register_backend(VcsType::hg, std::make_shared<HgBackend>(ctx));
    auto download = std::make_shared<DownloadBackend>(ctx);
    reg.register_backend(VcsType::http, download);
    reg.register_backend(VcsType::ftp, download);
    reg.set_mock(std::make_shared<MockBackend>(ctx));
    return reg;
  }

 private:
  std::map<VcsType, std::shared_ptr<Backend>> backends_;
  std::shared_ptr<Backend> mock_;
};

}  // namespace crl

#endif  // CRL_BACKENDS_HPP
