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

#ifndef CRL_CLI_HPP
#define CRL_CLI_HPP

#include <unistd.h>

#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "crl/engine.hpp"
#include "crl/errors.hpp"

namespace crl {

struct CliInvocation {
  RunConfig config;
  bool help = false;
  bool man = false;

  friend bool operator==(const CliInvocation&, const CliInvocation&) = default;
};

/// Maps the command line onto a RunConfig. Long flags accept both
/// `--flag value` and `--flag=value`; -v repeats to raise verbosity.
/// --help/--man are terminal and do not require a list argument.
inline CliInvocation parse_args(const std::vector<std::string>& args) {
  CliInvocation inv;
  bool no_more_flags = false;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (no_more_flags || a.empty() || a[0] != '-' || a == "-") {
      inv.config.list_sources.push_back(a);
      continue;
    }
    if (a == "--") {
      no_more_flags = true;
    } else if (a == "--help") {
      inv.help = true;
    } else if (a == "--man") {
      inv.man = true;
    } else if (a == "--verbose" || a == "-v") {
      if (inv.config.verbosity < 2) ++inv.config.verbosity;
    } else if (a == "--debug") {
      inv.config.debug_only = true;
    } else if (a == "--anonymous") {
      inv.config.anonymous = true;
    } else if (a == "--update") {
      inv.config.auto_update = true;
    } else if (a == "--reset-authentication") {
      inv.config.reset_auth_first = true;
    } else if (a == "--root") {
      if (i + 1 >= args.size())
        throw error(errc::missing_value, "--root requires a directory");
      inv.config.root_override = args[++i];
    } else if (a.rfind("--root=", 0) == 0) {
      inv.config.root_override = a.substr(7);
    } else {
      throw error(errc::unknown_flag, "unknown option '" + a + "'");
    }
  }
  if (!inv.help && !inv.man && inv.config.list_sources.empty())
    throw error(errc::no_list_given, "no component list given");
  return inv;
}

namespace detail {

inline std::string first_line(const std::string& s) {
  auto nl = s.find('\n');
  return nl == std::string::npos ? s : s.substr(0, nl);
}

}  // namespace detail

/// Renders one event at the given verbosity. Level 0 shows progress lines,
/// failures and the summary; level 1 adds each external command; level 2
/// adds the captured tool output. Higher levels print strict supersets.
inline void print_event(std::ostream& out, const RunEvent& ev, int verbosity) {
  using K = RunEvent::Kind;
  switch (ev.kind) {
    case K::task_started:
      out << (ev.mode == FetchMode::checkout ? "CHECKOUT " : "UPDATE ")
          << ev.component << "\n";
      break;
    case K::command:
      if (verbosity >= 1) out << "+ " << join_argv(ev.argv) << "\n";
      break;
    case K::command_output:
      if (verbosity >= 2) {
        out << ev.text;
        if (!ev.text.empty() && ev.text.back() != '\n') out << "\n";
      }
      break;
    case K::task_succeeded:
      break;
    case K::task_failed:
      out << "FAILED " << ev.component;
      if (!ev.text.empty()) out << ": " << detail::first_line(ev.text);
      out << "\n";
      break;
    case K::warning:
      out << "warning: " << ev.text << "\n";
      break;
    case K::note:
      out << ev.text << "\n";
      break;
    case K::error_text:
      out << "error: " << ev.text << "\n";
      break;
    case K::summary:
      out << "\n" << ev.text << "\n";
      break;
  }
}

inline std::string render_output(const std::vector<RunEvent>& events,
                                 int verbosity) {
  std::ostringstream out;
  for (const auto& ev : events) print_event(out, ev, verbosity);
  return out.str();
}

/// Reads a username from the attached streams. "-" selects anonymous
/// access. Throws prompt_unavailable when the input stream yields nothing.
inline std::string prompt_username(const std::string& auth_url,
                                   std::istream& in, std::ostream& out) {
  out << "Username for " << auth_url << " (enter '-' for anonymous): "
      << std::flush;
  std::string line;
  if (!std::getline(in, line))
    throw error(errc::prompt_unavailable,
                "no interactive terminal to prompt for a username");
  return line;
}

inline std::string usage_text() {
  return
      "usage: getcomponents [options] <component list>...\n"
      "\n"
      "Assembles a source tree from one or more CRL component lists.\n"
      "Lists may be local files or http/https/ftp URLs.\n"
      "\n"
      "options:\n"
      "  --help                  print this help and exit\n"
      "  --man                   print the full reference manual and exit\n"
      "  -v, --verbose           print each command as it runs; give twice\n"
      "                          to also show the commands' output\n"
      "  --debug                 print the list of components that would be\n"
      "                          checked out or updated, then exit\n"
      "  --anonymous             ignore stored credentials and use anonymous\n"
      "                          checkouts for all components\n"
      "  --update                skip the update prompt and process all\n"
      "                          pending updates\n"
      "  --root <dir>            check out into <dir> instead of the\n"
      "                          directory named by the component list\n"
      "  --reset-authentication  delete the stored users file before\n"
      "                          processing the component list\n";
}

/// Full CLI behavior behind the getcomponents binary.
inline int cli_main(int argc, char** argv, std::string_view man_text) {
  std::vector<std::string> args(argv + 1, argv + argc);
  CliInvocation inv;
  try {
    inv = parse_args(args);
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << "\n"
              << "try 'getcomponents --help'\n";
    return kExitFatal;
  }
  if (inv.help) {
    std::cout << usage_text();
    return kExitSuccess;
  }
  if (inv.man) {
    std::cout << man_text;
    return kExitSuccess;
  }

  const int verbosity = inv.config.verbosity;
  EngineHooks hooks;
  hooks.users_path = UsersFile::default_path();
  hooks.events = [verbosity](const RunEvent& ev) {
    bool to_stderr = ev.kind == RunEvent::Kind::error_text ||
                     ev.kind == RunEvent::Kind::warning;
    print_event(to_stderr ? std::cerr : std::cout, ev, verbosity);
  };
  if (::isatty(STDIN_FILENO)) {
    hooks.prompt_username =
        [](const std::string& url) -> std::optional<std::string> {
      try {
        return prompt_username(url, std::cin, std::cout);
      } catch (const error&) {
        return std::nullopt;
      }
    };
    hooks.confirm_update = [](std::size_t n) {
      std::cout << n
                << " components are already checked out. Update them? [y/n] "
                << std::flush;
      std::string line;
      if (!std::getline(std::cin, line)) return false;
      return !line.empty() && (line[0] == 'y' || line[0] == 'Y');
    };
  }

  BackendContext ctx{inv.config.root_override.value_or(".")};
  BackendRegistry registry = BackendRegistry::standard(ctx);
  return run(inv.config, registry, hooks);
}

}  // namespace crl

#endif  // CRL_CLI_HPP
