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

#ifndef CRL_SUBPROCESS_HPP
#define CRL_SUBPROCESS_HPP

#include <fcntl.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace crl {

/// Record of one external invocation, kept verbatim for error reports and
/// the run log.
struct CommandTrace {
  std::vector<std::string> argv;
  std::string working_dir;  // empty means the inherited directory
  int exit_code = 0;
  std::string output;  // stdout and stderr, interleaved
};

inline std::string join_argv(const std::vector<std::string>& argv) {
  std::string out;
  for (const auto& a : argv) {
    if (!out.empty()) out += ' ';
    out += a;
  }
  return out;
}

/// Runs argv as a child process with stdout/stderr captured and stdin
/// inherited (retrieval tools may prompt for passwords themselves). Returns
/// the trace; exit_code is 127 when the tool could not be executed.
inline CommandTrace run_command(std::vector<std::string> argv,
                                const std::filesystem::path& cwd = {}) {
  CommandTrace trace;
  trace.argv = std::move(argv);
  trace.working_dir = cwd.string();

  int fds[2];
  if (::pipe(fds) != 0) {
    trace.exit_code = 127;
    trace.output = "pipe() failed";
    return trace;
  }

  pid_t pid = ::fork();
  if (pid < 0) {
    ::close(fds[0]);
    ::close(fds[1]);
    trace.exit_code = 127;
    trace.output = "fork() failed";
    return trace;
  }

  if (pid == 0) {
    ::close(fds[0]);
    if (!trace.working_dir.empty() &&
        ::chdir(trace.working_dir.c_str()) != 0)
      ::_exit(127);
    ::dup2(fds[1], STDOUT_FILENO);
    ::dup2(fds[1], STDERR_FILENO);
    ::close(fds[1]);
    std::vector<char*> cargv;
    cargv.reserve(trace.argv.size() + 1);
    for (auto& a : trace.argv) cargv.push_back(const_cast<char*>(a.c_str()));
    cargv.push_back(nullptr);
    ::execvp(cargv[0], cargv.data());
    ::_exit(127);
  }

  ::close(fds[1]);
  char buf[4096];
  ssize_t n;
  while ((n = ::read(fds[0], buf, sizeof buf)) > 0)
    trace.output.append(buf, static_cast<std::size_t>(n));
  ::close(fds[0]);

  int status = 0;
  ::waitpid(pid, &status, 0);
  if (WIFEXITED(status))
    trace.exit_code = WEXITSTATUS(status);
  else if (WIFSIGNALED(status))
    trace.exit_code = 128 + WTERMSIG(status);
  else
    trace.exit_code = 127;
  return trace;
}

/// Looks an executable up on PATH.
inline std::optional<std::filesystem::path> find_tool(std::string_view name) {
  const char* path = std::getenv("PATH");
  if (!path) return std::nullopt;
  std::string_view dirs(path);
  std::size_t pos = 0;
  while (pos <= dirs.size()) {
    auto colon = dirs.find(':', pos);
    auto dir = colon == std::string_view::npos ? dirs.substr(pos)
                                               : dirs.substr(pos, colon - pos);
    if (!dir.empty()) {
      std::filesystem::path candidate =
          std::filesystem::path(dir) / std::string(name);
      std::error_code ec;
      if (std::filesystem::is_regular_file(candidate, ec) &&
          ::access(candidate.c_str(), X_OK) == 0)
        return candidate;
    }
    if (colon == std::string_view::npos) break;
    pos = colon + 1;
  }
  return std::nullopt;
}

}  // namespace crl

#endif  // CRL_SUBPROCESS_HPP
