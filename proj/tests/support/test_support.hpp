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

#ifndef CRL_TEST_SUPPORT_HPP
#define CRL_TEST_SUPPORT_HPP

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "crl/parse.hpp"
#include "crl/resolve.hpp"

namespace crl::test {

namespace fs = std::filesystem;

/// Self-deleting scratch directory.
class TempDir {
 public:
  TempDir() {
    std::string tmpl =
        (fs::temp_directory_path() / "crl-test-XXXXXX").string();
    if (!::mkdtemp(tmpl.data())) throw std::runtime_error("mkdtemp failed");
    path_ = tmpl;
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

inline fs::path fixtures_dir() {
  if (const char* env = std::getenv("CRL_FIXTURES"); env && *env) return env;
  return "tests/fixtures";
}

inline std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

inline void write_file(const fs::path& p, const std::string& content) {
  fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

/// Relative file path -> content, walking root recursively. Directories
/// whose name appears in skip_names are pruned anywhere in the tree;
/// skip_top prunes entries of the root directory only.
inline std::map<std::string, std::string> tree_snapshot(
    const fs::path& root, const std::set<std::string>& skip_names = {},
    const std::set<std::string>& skip_top = {}) {
  std::map<std::string, std::string> out;
  if (!fs::exists(root)) return out;

  auto walk = [&](auto&& self, const fs::path& dir,
                  const std::string& rel) -> void {
    for (const auto& entry : fs::directory_iterator(dir)) {
      std::string name = entry.path().filename().string();
      if (skip_names.count(name)) continue;
      if (rel.empty() && skip_top.count(name)) continue;
      std::string child_rel = rel.empty() ? name : rel + "/" + name;
      if (entry.is_directory())
        self(self, entry.path(), child_rel);
      else
        out[child_rel] = read_file(entry.path());
    }
  };
  walk(walk, root, "");
  return out;
}

inline const std::set<std::string>& vcs_metadata_names() {
  static const std::set<std::string> names{".svn", ".git", ".hg",
                                           "_darcs", "CVS", ".crl"};
  return names;
}

/// Serializes a directive stream back to CRL text (used for the round-trip
/// property; the library itself never needs to write CRL).
inline std::string serialize_directives(const std::vector<RawDirective>& ds) {
  std::string out;
  for (const auto& d : ds) {
    switch (d.keyword) {
      case Keyword::define:
        out += "!DEFINE " + d.define_name + " = " + d.value + "\n";
        break;
      case Keyword::checkout:
        out += "!CHECKOUT =\n";
        for (const auto& p : d.checkout_paths) out += p + "\n";
        break;
      default:
        out += std::string("!") + keyword_text(d.keyword) + " = " + d.value +
               "\n";
        break;
    }
  }
  return out;
}

/// Semantic projection of a directive for equality checks that must ignore
/// line numbers.
struct DirectiveSig {
  Keyword keyword;
  std::string define_name;
  std::string value;
  std::vector<std::string> checkout_paths;

  friend bool operator==(const DirectiveSig&, const DirectiveSig&) = default;
};

inline std::vector<DirectiveSig> signatures(
    const std::vector<RawDirective>& ds) {
  std::vector<DirectiveSig> out;
  for (const auto& d : ds)
    out.push_back({d.keyword, d.define_name, d.value, d.checkout_paths});
  return out;
}

inline const std::vector<std::string>& et_svn_components() {
  static const std::vector<std::string> comps{
      "CactusArchive/ADM",       "CactusBase/Boundary",
      "CactusBase/CartGrid3D",   "CactusBase/CoordBase",
      "CactusBase/Fortran",      "CactusBase/IOASCII",
      "CactusBase/IOBasic",      "CactusBase/IOUtil",
      "CactusBase/InitBase",     "CactusBase/LocalInterp",
      "CactusBase/LocalReduce",  "CactusBase/SymBase",
      "CactusBase/Time"};
  return comps;
}

inline const std::vector<std::string>& et_git_components() {
  static const std::vector<std::string> comps{
      "McLachlan/ML_BSSN",           "McLachlan/ML_BSSN_Helper",
      "McLachlan/ML_BSSN_O2",        "McLachlan/ML_BSSN_O2_Helper",
      "McLachlan/ML_ADMConstraints", "McLachlan/ML_ADMQuantities"};
  return comps;
}

inline std::string second_segment(const std::string& comp) {
  return comp.substr(comp.find('/') + 1);
}

/// A local repository farm mirroring the Einstein Toolkit excerpt's shape:
/// 13 components behind an svn-style URL template and 6 components in one
/// distributed repository extracted via REPO_PATH. Everything is addressed
/// through mock:// URLs, so runs are hermetic.
struct MockFarm {
  fs::path root;
  fs::path list_path;
  std::string svn_template;
  std::string git_url;

  fs::path svn_fixture(const std::string& comp) const {
    return root / "svnrepo" / "arrangements" / comp / "trunk";
  }
  fs::path git_fixture(const std::string& comp) const {
    return root / "mclachlan" / second_segment(comp);
  }
};

inline MockFarm build_mock_farm(const fs::path& dir) {
  MockFarm farm;
  farm.root = dir;
  for (const auto& comp : et_svn_components()) {
    auto base = farm.svn_fixture(comp);
    write_file(base / "README", "component " + comp + "\n");
    write_file(base / "src" / "main.c",
               "/* " + comp + " */\nint main(void) { return 0; }\n");
  }
  write_file(dir / "mclachlan" / "NOTES",
             "repository-level file, not part of any component\n");
  for (const auto& comp : et_git_components()) {
    auto base = farm.git_fixture(comp);
    write_file(base / "README", "component " + comp + "\n");
    write_file(base / "schedule.ccl", "# schedule for " + comp + "\n");
  }
  farm.svn_template = "mock://" + (dir / "svnrepo").string() +
                      "/arrangements/$1/$2/trunk";
  farm.git_url = "mock://" + (dir / "mclachlan").string();

  std::string list;
  list += "!CRL_VERSION = 1.0\n\n";
  list += "!DEFINE ROOT = Cactus\n";
  list += "!DEFINE ARR  = $ROOT/arrangements\n\n";
  list += "!TARGET   = $ARR\n";
  list += "!TYPE     = svn\n";
  list += "!URL      = " + farm.svn_template + "\n";
  list += "!CHECKOUT =\n";
  for (const auto& comp : et_svn_components()) list += comp + "\n";
  list += "\n";
  list += "!TARGET   = $ARR\n";
  list += "!TYPE     = git\n";
  list += "!URL      = " + farm.git_url + "\n";
  list += "!REPO_PATH= $2\n";
  list += "!CHECKOUT =\n";
  for (const auto& comp : et_git_components()) list += comp + "\n";

  farm.list_path = dir / "einstein_mock.th";
  write_file(farm.list_path, list);
  return farm;
}

/// The tree a successful farm run must produce under <root>/Cactus, keyed
/// by path relative to the run root, with tool metadata ignored.
inline std::map<std::string, std::string> expected_farm_tree(
    const MockFarm& farm) {
  std::map<std::string, std::string> expected;
  auto add = [&](const fs::path& fixture, const std::string& comp) {
    for (auto& [rel, content] : tree_snapshot(fixture))
      expected["Cactus/arrangements/" + comp + "/" + rel] = content;
  };
  for (const auto& comp : et_svn_components())
    add(farm.svn_fixture(comp), comp);
  for (const auto& comp : et_git_components())
    add(farm.git_fixture(comp), comp);
  return expected;
}

/// Deterministic pseudo-random document generator for property tests.
class DocGen {
 public:
  explicit DocGen(unsigned seed) : gen_(seed) {}

  int below(int n) { return std::uniform_int_distribution<int>(0, n - 1)(gen_); }

  std::string name() {
    static const char* pool[] = {"Alpha", "beta9", "x_y",   "a.b",
                                 "Core-1", "z",     "Mod_2", "thorn"};
    return pool[below(8)];
  }

  std::string component_path() {
    std::string p = name();
    int extra = below(3);
    for (int i = 0; i < extra; ++i) p += "/" + name();
    return p;
  }

  std::vector<RawDirective> directives() {
    std::vector<RawDirective> ds;
    auto push = [&](Keyword k, std::string value, std::string def_name = {},
                    std::vector<std::string> paths = {}) {
      RawDirective d;
      d.keyword = k;
      d.value = std::move(value);
      d.define_name = std::move(def_name);
      d.checkout_paths = std::move(paths);
      ds.push_back(std::move(d));
    };
    push(Keyword::crl_version, "1.0");
    int defines = below(3);
    for (int i = 0; i < defines; ++i)
      push(Keyword::define, component_path(),
           "VAR" + std::to_string(i));
    int blocks = 1 + below(3);
    for (int b = 0; b < blocks; ++b) {
      push(Keyword::target, component_path());
      bool git = below(2) == 0;
      push(Keyword::type, git ? "git" : "svn");
      push(Keyword::url, "mock://fixtures/" + name());
      if (git && below(2) == 0) push(Keyword::repo_path, "$1");
      std::vector<std::string> paths;
      int n = 1 + below(4);
      for (int i = 0; i < n; ++i) paths.push_back(component_path());
      push(Keyword::checkout, "", "", std::move(paths));
    }
    return ds;
  }

 private:
  std::mt19937 gen_;
};

}  // namespace crl::test

#endif  // CRL_TEST_SUPPORT_HPP
