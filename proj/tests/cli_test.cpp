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

#include <algorithm>
#include <cstdlib>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "crl/cli.hpp"
#include "support/test_support.hpp"

using namespace crl;

namespace {

errc args_error_code(const std::vector<std::string>& args) {
  try {
    parse_args(args);
  } catch (const error& e) {
    return e.code();
  }
  FAIL("expected an argument error");
  return errc::unknown_flag;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

// every line of a (with multiplicity) appears in b
bool line_subset(const std::string& a, const std::string& b) {
  std::map<std::string, int> counts;
  for (const auto& l : lines_of(b)) ++counts[l];
  for (const auto& l : lines_of(a))
    if (--counts[l] < 0) return false;
  return true;
}

}  // namespace

TEST_CASE("flags map onto the run configuration") {
  auto inv = parse_args({"--anonymous", "list.th"});
  CHECK(inv.config.anonymous);
  CHECK(inv.config.list_sources == std::vector<std::string>{"list.th"});

  inv = parse_args({"--update", "--debug", "--reset-authentication", "a", "b"});
  CHECK(inv.config.auto_update);
  CHECK(inv.config.debug_only);
  CHECK(inv.config.reset_auth_first);
  CHECK(inv.config.list_sources == std::vector<std::string>{"a", "b"});

  inv = parse_args({"--root", "/co", "list.th"});
  CHECK(inv.config.root_override == "/co");
  inv = parse_args({"--root=/co", "list.th"});
  CHECK(inv.config.root_override == "/co");
}

TEST_CASE("repeated -v accumulates and caps at two") {
  CHECK(parse_args({"-v", "list.th"}).config.verbosity == 1);
  CHECK(parse_args({"-v", "-v", "list.th"}).config.verbosity == 2);
  CHECK(parse_args({"--verbose", "-v", "list.th"}).config.verbosity == 2);
  CHECK(parse_args({"-v", "-v", "-v", "list.th"}).config.verbosity == 2);
}

TEST_CASE("argument errors") {
  CHECK(args_error_code({"--root"}) == errc::missing_value);
  CHECK(args_error_code({"--frobnicate", "l"}) == errc::unknown_flag);
  CHECK(args_error_code({"-x", "l"}) == errc::unknown_flag);
  CHECK(args_error_code({}) == errc::no_list_given);
  CHECK(args_error_code({"--anonymous"}) == errc::no_list_given);
}

TEST_CASE("--help and --man are accepted without a list") {
  CHECK(parse_args({"--help"}).help);
  CHECK(parse_args({"--man"}).man);
}

TEST_CASE("everything after -- is positional") {
  auto inv = parse_args({"--", "--anonymous"});
  CHECK_FALSE(inv.config.anonymous);
  CHECK(inv.config.list_sources == std::vector<std::string>{"--anonymous"});
}

TEST_CASE("flag order does not matter") {
  std::vector<std::vector<std::string>> units = {
      {"--anonymous"}, {"--update"}, {"-v"}, {"--root", "/co"}, {"list.th"}};
  std::vector<std::size_t> idx{0, 1, 2, 3, 4};
  CliInvocation reference;
  bool first = true;
  do {
    std::vector<std::string> args;
    for (auto i : idx) args.insert(args.end(), units[i].begin(), units[i].end());
    CliInvocation inv = parse_args(args);
    if (first) {
      reference = inv;
      first = false;
    } else {
      REQUIRE(inv == reference);
    }
  } while (std::next_permutation(idx.begin(), idx.end()));
}

TEST_CASE("higher verbosity renders a line superset") {
  std::vector<RunEvent> events;
  events.push_back({RunEvent::Kind::task_started, "A/B", {}, "",
                    FetchMode::checkout});
  events.push_back({RunEvent::Kind::command, "A/B",
                    {"svn", "checkout", "url", "dest"}, "",
                    FetchMode::checkout});
  events.push_back({RunEvent::Kind::command_output, "A/B", {},
                    "Checked out revision 7.\n", FetchMode::checkout});
  events.push_back({RunEvent::Kind::task_succeeded, "A/B", {}, "",
                    FetchMode::checkout});
  events.push_back({RunEvent::Kind::task_started, "C/D", {}, "",
                    FetchMode::update});
  events.push_back({RunEvent::Kind::task_failed, "C/D",
                    {"git", "pull"}, "could not connect", FetchMode::update});
  events.push_back({RunEvent::Kind::warning, "", {}, "something odd"});
  events.push_back(
      {RunEvent::Kind::summary, "", {}, "1 of 2 components failed:\n  C/D"});

  std::string v0 = render_output(events, 0);
  std::string v1 = render_output(events, 1);
  std::string v2 = render_output(events, 2);

  CHECK(line_subset(v0, v1));
  CHECK(line_subset(v1, v2));
  CHECK(v0.find("CHECKOUT A/B") != std::string::npos);
  CHECK(v0.find("UPDATE C/D") != std::string::npos);
  CHECK(v0.find("FAILED C/D") != std::string::npos);
  CHECK(v0.find("+ svn checkout") == std::string::npos);
  CHECK(v1.find("+ svn checkout url dest") != std::string::npos);
  CHECK(v1.find("Checked out revision") == std::string::npos);
  CHECK(v2.find("Checked out revision 7.") != std::string::npos);
}

TEST_CASE("prompt_username returns the entered text verbatim") {
  std::istringstream in("carpetgit\n");
  std::ostringstream out;
  CHECK(prompt_username("https://auth.host/x", in, out) == "carpetgit");
  CHECK(out.str().find("https://auth.host/x") != std::string::npos);

  std::istringstream dash("-\n");
  CHECK(prompt_username("u", dash, out) == "-");

  std::istringstream empty;
  try {
    prompt_username("u", empty, out);
    FAIL("expected prompt_unavailable");
  } catch (const error& e) {
    CHECK(e.code() == errc::prompt_unavailable);
  }
}

TEST_CASE("usage text names every documented option") {
  std::string usage = usage_text();
  for (const char* flag :
       {"--help", "--man", "--verbose", "--debug", "--anonymous", "--update",
        "--root", "--reset-authentication"})
    CHECK(usage.find(flag) != std::string::npos);
}

TEST_CASE("the binary honors terminal flags and exit codes") {
  const char* bin = std::getenv("GETCOMPONENTS_BIN");
  bool bin_set = bin != nullptr && *bin != '\0';
  REQUIRE_MESSAGE(bin_set, "GETCOMPONENTS_BIN must point at the tool");

  auto help = run_command({bin, "--help"});
  CHECK(help.exit_code == 0);
  CHECK(help.output.find("usage: getcomponents") != std::string::npos);

  auto man = run_command({bin, "--man"});
  CHECK(man.exit_code == 0);
  CHECK(man.output.find("GETCOMPONENTS(1)") != std::string::npos);
  CHECK(man.output.find("--reset-authentication") != std::string::npos);
  // --man renders the manual shipped in docs/, one source of truth
  auto manual_path = test::fixtures_dir().parent_path().parent_path() /
                     "docs" / "getcomponents.md";
  if (std::filesystem::exists(manual_path))
    CHECK(man.output == test::read_file(manual_path));

  auto unknown = run_command({bin, "--frobnicate"});
  CHECK(unknown.exit_code == kExitFatal);

  auto nolist = run_command({bin});
  CHECK(nolist.exit_code == kExitFatal);

  test::TempDir tmp;
  test::write_file(tmp.path() / "bad.th", "!NOT_A_HEADER = 1\n");
  auto bad = run_command(
      {bin, "--root", (tmp.path() / "tree").string(),
       (tmp.path() / "bad.th").string()});
  CHECK(bad.exit_code == kExitFatal);
  CHECK(bad.output.find("bad.th:1") != std::string::npos);
}
