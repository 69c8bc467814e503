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

#ifndef CRL_ENGINE_HPP
#define CRL_ENGINE_HPP

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "crl/auth.hpp"
#include "crl/backends.hpp"
#include "crl/errors.hpp"
#include "crl/resolve.hpp"
#include "crl/subprocess.hpp"

namespace crl {

/// Exit codes: success, fetch failures present, fatal parse/resolve/source
/// error.
inline constexpr int kExitSuccess = 0;
inline constexpr int kExitFetchFailures = 1;
inline constexpr int kExitFatal = 2;

struct RunConfig {
  std::vector<std::string> list_sources;  // file paths or URLs
  bool anonymous = false;
  bool auto_update = false;
  std::optional<std::string> root_override;
  int verbosity = 0;  // 0, 1 or 2
  bool debug_only = false;
  bool reset_auth_first = false;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

struct FetchFailure {
  std::string component_path;
  std::vector<std::string> argv;  // exact failing command, empty if none ran
  std::string tool_message;
};

struct FetchReport {
  std::size_t attempted = 0;
  std::size_t succeeded = 0;
  std::vector<FetchFailure> failures;
  double elapsed_seconds = 0.0;
};

inline int exit_code_for(const FetchReport& report) {
  return report.failures.empty() ? kExitSuccess : kExitFetchFailures;
}

/// Everything the engine tells the outside world flows through these events;
/// the CLI renders them according to the verbosity level.
struct RunEvent {
  enum class Kind {
    task_started,
    command,
    command_output,
    task_succeeded,
    task_failed,
    warning,
    note,
    error_text,
    summary,
  };
  Kind kind = Kind::note;
  std::string component;
  std::vector<std::string> argv;
  std::string text;
  FetchMode mode = FetchMode::checkout;
};

/// Interaction points injected by the CLI (or by tests): the username
/// prompt, the single yes/no update confirmation, the event sink, and the
/// users-file location. Empty members mean "not available".
struct EngineHooks {
  PromptFn prompt_username;
  std::function<bool(std::size_t update_count)> confirm_update;
  std::function<void(const RunEvent&)> events;
  std::filesystem::path users_path;
};

struct PlannedTask {
  FetchTask task;
  /// Set when the destination conflicts (exists but is not a working copy of
  /// the right type). Such tasks are reported as failures without running.
  std::optional<std::string> conflict;
};

struct Plan {
  Document document;
  std::vector<Credential> block_credentials;
  std::vector<PlannedTask> tasks;
  std::size_t checkout_count = 0;
  std::size_t update_count = 0;
  std::size_t skipped_updates = 0;
};

namespace detail {

inline void emit(const EngineHooks& hooks, RunEvent ev) {
  if (hooks.events) hooks.events(ev);
}

inline void warn(const EngineHooks& hooks, std::string text) {
  emit(hooks, {RunEvent::Kind::warning, "", {}, std::move(text)});
}

inline std::optional<std::string> slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return std::nullopt;
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

inline bool looks_like_url(const std::string& s) {
  auto sep = s.find("://");
  if (sep == std::string::npos || sep == 0) return false;
  for (std::size_t i = 0; i < sep; ++i) {
    char c = s[i];
    if (!((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '+'))
      return false;
  }
  return true;
}

inline std::string format_elapsed(double seconds) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.1f", seconds);
  return buf;
}

/// Appends command traces to <run_root>/.crl/log.
class RunLog {
 public:
  explicit RunLog(const std::filesystem::path& run_root) {
    std::error_code ec;
    std::filesystem::create_directories(run_root / ".crl", ec);
    if (!ec) out_.open(run_root / ".crl" / "log", std::ios::app);
  }

  void write(const CommandTrace& trace) {
    if (!out_.is_open()) return;
    out_ << "$ " << join_argv(trace.argv);
    if (!trace.working_dir.empty()) out_ << "  (cwd " << trace.working_dir << ")";
    out_ << "\n"
         << "exit " << trace.exit_code << "\n";
    if (!trace.output.empty()) {
      out_ << trace.output;
      if (trace.output.back() != '\n') out_ << "\n";
    }
    out_.flush();
  }

 private:
  std::ofstream out_;
};

}  // namespace detail

/// Fetches the text of one component list. Local paths are read directly;
/// http/https/ftp lists are downloaded to a temporary file first; mock://
/// names a fixture file on disk.
inline std::string acquire_source(const std::string& source) {
  constexpr std::string_view kMock = "mock://";
  if (source.rfind(kMock, 0) == 0) {
    if (auto text = detail::slurp(source.substr(kMock.size()))) return *text;
    throw error(errc::source_unavailable,
                "cannot read component list '" + source + "'");
  }
  if (detail::looks_like_url(source)) {
    auto sep = source.find("://");
    std::string scheme = source.substr(0, sep);
    if (scheme == "file") {
      if (auto text = detail::slurp(source.substr(sep + 3))) return *text;
      throw error(errc::source_unavailable,
                  "cannot read component list '" + source + "'");
    }
    if (scheme != "http" && scheme != "https" && scheme != "ftp")
      throw error(errc::source_unavailable,
                  "unsupported component list scheme '" + scheme + "'");
    std::filesystem::path tmp =
        std::filesystem::temp_directory_path() /
        ("crl-list-" + url_hash(source) + ".th");
    std::vector<std::string> argv;
    if (find_tool("curl"))
      argv = {"curl", "-fsSL", "--output", tmp.string(), source};
    else if (find_tool("wget"))
      argv = {"wget", "-q", "-O", tmp.string(), source};
    else
      throw error(errc::source_unavailable,
                  "neither 'curl' nor 'wget' is available to download '" +
                      source + "'");
    CommandTrace trace = run_command(std::move(argv));
    auto text = detail::slurp(tmp);
    std::error_code ec;
    std::filesystem::remove(tmp, ec);
    if (trace.exit_code != 0 || !text)
      throw error(errc::source_unavailable,
                  "download of '" + source + "' failed: " + trace.output);
    return *text;
  }
  if (auto text = detail::slurp(source)) return *text;
  throw error(errc::source_unavailable,
              "cannot read component list '" + source + "'");
}

/// Acquires and parses every list, merges them in order, decides credentials
/// per block, resolves tasks and assigns checkout/update modes from the
/// state found on disk. With auto_update unset, pending updates go through a
/// single confirmation covering all of them; declining skips them.
inline Plan plan(const RunConfig& config, const EngineHooks& hooks) {
  if (config.list_sources.empty())
    throw error(errc::no_list_given, "no component list given");

  std::vector<Document> docs;
  for (const auto& src : config.list_sources)
    docs.push_back(parse_crl(acquire_source(src), src));

  Plan plan;
  plan.document = merge_documents(docs);

  UsersFile store = UsersFile::load(
      hooks.users_path.empty() ? UsersFile::default_path() : hooks.users_path);
  DecideOptions opts;
  opts.anonymous_flag = config.anonymous;
  opts.batch_fallback = true;
  opts.warn = [&](const std::string& w) { detail::warn(hooks, w); };
  PromptFn prompt = config.debug_only ? PromptFn{} : hooks.prompt_username;
  for (const auto& block : plan.document.blocks)
    plan.block_credentials.push_back(decide(block, store, opts, prompt));

  auto tasks =
      dedupe_tasks(resolve_tasks(plan.document, config.root_override,
                                 config.anonymous, plan.block_credentials));

  for (auto& task : tasks) {
    PlannedTask pt{std::move(task), std::nullopt};
    FetchTask& t = pt.task;
    if (is_download(t.vcs_type)) {
      // Downloads leave plain files, not working copies; an existing
      // destination simply means re-download.
      std::error_code ec;
      t.mode = std::filesystem::exists(t.destination, ec)
                   ? FetchMode::update
                   : FetchMode::checkout;
    } else {
      DetectResult det = detect_state(t.destination);
      switch (det.state) {
        case DestState::absent:
          t.mode = FetchMode::checkout;
          break;
        case DestState::working_copy:
          if (det.vcs == t.vcs_type) {
            t.mode = FetchMode::update;
          } else {
            pt.conflict = "destination '" + t.destination + "' holds a " +
                          to_string(*det.vcs) + " working copy, not " +
                          to_string(t.vcs_type);
          }
          break;
        case DestState::foreign:
          pt.conflict = "destination '" + t.destination +
                        "' exists but is not a " + to_string(t.vcs_type) +
                        " working copy";
          break;
      }
    }
    if (!pt.conflict) {
      if (pt.task.mode == FetchMode::checkout)
        ++plan.checkout_count;
      else
        ++plan.update_count;
    }
    plan.tasks.push_back(std::move(pt));
  }

  if (plan.update_count > 0 && !config.auto_update && !config.debug_only) {
    bool proceed = false;
    if (hooks.confirm_update) {
      proceed = hooks.confirm_update(plan.update_count);
    } else {
      detail::warn(hooks,
                   "cannot confirm updates in a non-interactive run; "
                   "re-run with --update to process them");
    }
    if (!proceed) {
      std::vector<PlannedTask> kept;
      for (auto& pt : plan.tasks) {
        if (!pt.conflict && pt.task.mode == FetchMode::update) {
          ++plan.skipped_updates;
          continue;
        }
        kept.push_back(std::move(pt));
      }
      plan.tasks = std::move(kept);
      plan.update_count = 0;
      if (plan.skipped_updates > 0)
        detail::emit(hooks, {RunEvent::Kind::note, "", {},
                             "skipping " +
                                 std::to_string(plan.skipped_updates) +
                                 " pending updates"});
    }
  }

  return plan;
}

/// Runs every planned task strictly in order. A failing task is recorded
/// and the run continues; every invocation lands in <root>/.crl/log and the
/// report carries each failure with the exact command that caused it.
inline FetchReport execute(const Plan& plan, BackendRegistry& registry,
                           const RunConfig& config, const EngineHooks& hooks) {
  auto t0 = std::chrono::steady_clock::now();
  FetchReport report;
  report.attempted = plan.tasks.size();

  std::filesystem::path run_root = config.root_override.value_or(".");
  detail::RunLog log(run_root);

  if (plan.tasks.empty())
    detail::warn(hooks, "the component lists produced nothing to do");

  std::map<std::size_t, bool> block_logged_in;
  std::map<std::size_t, FetchFailure> block_login_failure;

  auto fail = [&](const FetchTask& task, std::vector<std::string> argv,
                  std::string message) {
    report.failures.push_back({task.component_path, argv, message});
    detail::emit(hooks, {RunEvent::Kind::task_failed, task.component_path,
                         std::move(argv), std::move(message), task.mode});
  };

  for (const PlannedTask& pt : plan.tasks) {
    const FetchTask& task = pt.task;
    detail::emit(hooks, {RunEvent::Kind::task_started, task.component_path,
                         {}, "", task.mode});
    if (pt.conflict) {
      fail(task, {}, *pt.conflict);
      continue;
    }
    try {
      Backend& backend = registry.backend_for(task);
      backend.ensure_tool_available();

      if (auto it = block_login_failure.find(task.block_index);
          it != block_login_failure.end()) {
        fail(task, it->second.argv, it->second.tool_message);
        continue;
      }
      if (!block_logged_in[task.block_index]) {
        block_logged_in[task.block_index] = true;
        try {
          if (auto trace = login_if_needed(
                  plan.document.blocks[task.block_index], task.credentials,
                  backend)) {
            log.write(*trace);
            detail::emit(hooks, {RunEvent::Kind::command, task.component_path,
                                 trace->argv, "", task.mode});
          }
        } catch (const fetch_error& fe) {
          log.write(fe.trace());
          block_login_failure[task.block_index] = {task.component_path,
                                                   fe.trace().argv, fe.what()};
          fail(task, fe.trace().argv, fe.what());
          continue;
        }
      }

      CommandTrace trace = task.mode == FetchMode::checkout
                               ? backend.checkout(task)
                               : backend.update(task);
      log.write(trace);
      detail::emit(hooks, {RunEvent::Kind::command, task.component_path,
                           trace.argv, "", task.mode});
      if (!trace.output.empty())
        detail::emit(hooks, {RunEvent::Kind::command_output,
                             task.component_path, {}, trace.output,
                             task.mode});
      ++report.succeeded;
      detail::emit(hooks, {RunEvent::Kind::task_succeeded,
                           task.component_path, {}, "", task.mode});
    } catch (const fetch_error& fe) {
      log.write(fe.trace());
      detail::emit(hooks, {RunEvent::Kind::command, task.component_path,
                           fe.trace().argv, "", task.mode});
      std::string message = fe.trace().output.empty()
                                ? std::string(fe.what())
                                : fe.trace().output;
      fail(task, fe.trace().argv, std::move(message));
    } catch (const error& e) {
      fail(task, {}, e.what());
    }
  }

  auto t1 = std::chrono::steady_clock::now();
  report.elapsed_seconds =
      std::chrono::duration<double>(t1 - t0).count();

  std::string summary;
  if (report.failures.empty()) {
    summary = "All " + std::to_string(report.succeeded) +
              " components retrieved successfully.\n";
  } else {
    summary = std::to_string(report.failures.size()) + " of " +
              std::to_string(report.attempted) + " components failed:\n";
    for (const auto& f : report.failures) {
      summary += "  " + f.component_path;
      if (!f.argv.empty()) summary += "  (command: " + join_argv(f.argv) + ")";
      summary += "\n";
    }
  }
  summary +=
      "Time elapsed: " + detail::format_elapsed(report.elapsed_seconds) +
      " seconds";
  detail::emit(hooks, {RunEvent::Kind::summary, "", {}, summary});

  return report;
}

/// One whole run: reset authentication if asked, plan, then either print the
/// plan (--debug) or execute it. Returns the process exit code.
inline int run(const RunConfig& config, BackendRegistry& registry,
               const EngineHooks& hooks) {
  try {
    std::filesystem::path users = hooks.users_path.empty()
                                      ? UsersFile::default_path()
                                      : hooks.users_path;
    if (config.reset_auth_first) reset(users);

    Plan p = plan(config, hooks);

    if (config.debug_only) {
      for (const PlannedTask& pt : p.tasks) {
        std::string line;
        if (pt.conflict)
          line = "CONFLICT " + pt.task.component_path + " (" + *pt.conflict +
                 ")";
        else
          line = (pt.task.mode == FetchMode::checkout ? "CHECKOUT " : "UPDATE ") +
                 pt.task.component_path;
        detail::emit(hooks, {RunEvent::Kind::note, pt.task.component_path, {},
                             line, pt.task.mode});
      }
      detail::emit(hooks, {RunEvent::Kind::note, "", {},
                           "Total components: " +
                               std::to_string(p.tasks.size())});
      return kExitSuccess;
    }

    FetchReport report = execute(p, registry, config, hooks);
    return exit_code_for(report);
  } catch (const error& e) {
    detail::emit(hooks, {RunEvent::Kind::error_text, "", {}, e.what()});
    return kExitFatal;
  }
}

}  // namespace crl

#endif  // CRL_ENGINE_HPP
