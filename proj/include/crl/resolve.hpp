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

#ifndef CRL_RESOLVE_HPP
#define CRL_RESOLVE_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "crl/errors.hpp"
#include "crl/location.hpp"
#include "crl/parse.hpp"
#include "crl/scan.hpp"

namespace crl {

/// Retrieval mechanisms a component block may name in !TYPE.
enum class VcsType { cvs, svn, git, darcs, hg, http, ftp };

inline const char* to_string(VcsType t) {
  switch (t) {
    case VcsType::cvs: return "cvs";
    case VcsType::svn: return "svn";
    case VcsType::git: return "git";
    case VcsType::darcs: return "darcs";
    case VcsType::hg: return "hg";
    case VcsType::http: return "http";
    case VcsType::ftp: return "ftp";
  }
  return "";
}

inline std::optional<VcsType> vcs_type_from(std::string_view s) {
  for (VcsType t : {VcsType::cvs, VcsType::svn, VcsType::git, VcsType::darcs,
                    VcsType::hg, VcsType::http, VcsType::ftp})
    if (s == to_string(t)) return t;
  return std::nullopt;
}

inline bool is_dvcs(VcsType t) { return t == VcsType::git || t == VcsType::hg; }
inline bool is_download(VcsType t) {
  return t == VcsType::http || t == VcsType::ftp;
}

/// One evaluated !DEFINE. Values are fully expanded at construction; they
/// never contain $VAR references.
struct Definition {
  std::string name;
  std::string value;

  friend bool operator==(const Definition&, const Definition&) = default;
};

/// One repository description plus the component paths checked out from it.
struct ComponentBlock {
  std::string target;
  VcsType vcs_type = VcsType::svn;
  Location url;
  std::optional<Location> auth_url;
  std::optional<std::string> anon_user;
  std::optional<std::string> anon_pass;
  std::optional<std::string> repo_path;
  std::optional<std::string> name_override;
  std::vector<std::string> checkouts;  // never empty
  std::string source_name;             // where the CHECKOUT appeared
  std::uint64_t line = 0;
};

/// A fully parsed, variable-expanded component list.
struct Document {
  std::string crl_version;
  std::vector<Definition> definitions;
  std::vector<ComponentBlock> blocks;
  std::vector<std::string> source_names;
};

/// How a task authenticates. cvs_anon carries the block's designated
/// anonymous username/password pair (CVS needs one even for anonymous use).
struct Credential {
  enum class Kind { anonymous, username, cvs_anon };
  Kind kind = Kind::anonymous;
  std::string user;
  std::string pass;

  static Credential anonymous() { return {}; }
  static Credential with_username(std::string u) {
    return {Kind::username, std::move(u), {}};
  }
  static Credential cvs_anonymous(std::string u, std::string p) {
    return {Kind::cvs_anon, std::move(u), std::move(p)};
  }

  friend bool operator==(const Credential&, const Credential&) = default;
};

enum class FetchMode { checkout, update };

/// One concrete, executable retrieval unit.
struct FetchTask {
  std::string component_path;  // as written in the CHECKOUT list
  std::string resolved_url;    // no '$' placeholders remain
  std::string destination;     // root/target/component, name override applied
  VcsType vcs_type = VcsType::svn;
  FetchMode mode = FetchMode::checkout;
  Credential credentials;
  std::optional<std::string> repo_extract;  // subpath within a dvcs clone
  std::size_t block_index = 0;
};

namespace detail {

inline bool is_digit(char c) { return c >= '0' && c <= '9'; }

/// Expands $VAR references against env. Positional $1, $2, ... are left
/// untouched; a '$' followed by anything else is a literal.
inline std::string expand_text(const std::string& in,
                               const std::map<std::string, std::string>& env,
                               const RawLine& origin) {
  std::string out;
  out.reserve(in.size());
  std::size_t i = 0;
  while (i < in.size()) {
    char c = in[i];
    if (c != '$') {
      out += c;
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    if (j < in.size() && is_digit(in[j])) {
      while (j < in.size() && is_digit(in[j])) ++j;
      out.append(in, i, j - i);  // positional, untouched
      i = j;
      continue;
    }
    if (j < in.size() && define_name_char(in[j], true)) {
      while (j < in.size() && define_name_char(in[j], false)) ++j;
      std::string name = in.substr(i + 1, j - i - 1);
      auto it = env.find(name);
      if (it == env.end())
        fail_at(errc::undefined_variable, "'$" + name + "' is not defined",
                origin);
      out += it->second;
      i = j;
      continue;
    }
    out += c;
    ++i;
  }
  return out;
}

inline std::vector<std::string> split_segments(std::string_view path) {
  std::vector<std::string> segs;
  std::size_t pos = 0;
  while (pos <= path.size()) {
    auto slash = path.find('/', pos);
    auto part = slash == std::string_view::npos ? path.substr(pos)
                                                : path.substr(pos, slash - pos);
    if (!part.empty()) segs.emplace_back(part);
    if (slash == std::string_view::npos) break;
    pos = slash + 1;
  }
  return segs;
}

inline std::string join_path(std::string_view a, std::string_view b) {
  while (!a.empty() && a.back() == '/') a.remove_suffix(1);
  while (!b.empty() && b.front() == '/') b.remove_prefix(1);
  if (a.empty()) return std::string(b);
  if (b.empty()) return std::string(a);
  return std::string(a) + "/" + std::string(b);
}

}  // namespace detail

struct ExpandResult {
  std::vector<Definition> definitions;
  std::vector<RawDirective> directives;
};

/// Evaluates every !DEFINE in order and substitutes $VAR references in all
/// subsequent directive values and checkout paths. Later definitions may use
/// earlier ones. Positional parameters pass through unchanged, so expanding
/// an already-expanded stream is the identity.
inline ExpandResult expand_defines(std::vector<RawDirective> directives) {
  std::map<std::string, std::string> env;
  std::vector<Definition> defs;
  for (auto& d : directives) {
    if (d.keyword == Keyword::define) {
      std::string value = detail::expand_text(d.value, env, d.origin);
      if (env.count(d.define_name))
        detail::fail_at(errc::duplicate_definition,
                        "'" + d.define_name + "' is already defined", d.origin);
      env.emplace(d.define_name, value);
      defs.push_back({d.define_name, value});
      d.value = std::move(value);
    } else if (d.keyword == Keyword::checkout) {
      for (auto& p : d.checkout_paths)
        p = detail::expand_text(p, env, d.origin);
    } else {
      d.value = detail::expand_text(d.value, env, d.origin);
    }
  }
  return {std::move(defs), std::move(directives)};
}

/// Groups the expanded directive stream into component blocks.
///
/// TARGET, TYPE and URL persist across blocks until reassigned. The optional
/// directives (AUTH_URL, ANON_USER, ANON_PASS, REPO_PATH, NAME) are dropped
/// when URL is reassigned unless they were themselves assigned since the last
/// CHECKOUT, so a block may order its directives freely while stale settings
/// cannot leak into the next repository. NAME applies to one CHECKOUT only.
inline Document assemble_blocks(const std::vector<RawDirective>& directives) {
  Document doc;

  std::optional<std::string> target;
  std::optional<VcsType> type;
  std::optional<Location> url;
  struct OptSlot {
    std::optional<std::string> value;
    bool fresh = false;  // assigned since the last CHECKOUT
  };
  OptSlot auth_url, anon_user, anon_pass, repo_path, name_override;
  auto optional_slots = [&] {
    return std::vector<OptSlot*>{&auth_url, &anon_user, &anon_pass, &repo_path,
                                 &name_override};
  };

  auto parse_loc_at = [](const std::string& value, const RawLine& origin) {
    try {
      return parse_location(value);
    } catch (const error& e) {
      throw error(e.code(), e.what(), origin.source_name, origin.line_number);
    }
  };

  for (const auto& d : directives) {
    switch (d.keyword) {
      case Keyword::crl_version:
        if (doc.crl_version.empty()) {
          if (d.value != "1.0")
            detail::fail_at(errc::unsupported_version,
                            "CRL version '" + d.value +
                                "' is not supported (expected 1.0)",
                            d.origin);
          doc.crl_version = d.value;
        } else if (d.value != doc.crl_version) {
          detail::fail_at(errc::version_mismatch,
                          "conflicting CRL versions '" + doc.crl_version +
                              "' and '" + d.value + "'",
                          d.origin);
        }
        break;
      case Keyword::define:
        doc.definitions.push_back({d.define_name, d.value});
        break;
      case Keyword::target:
        target = d.value;
        break;
      case Keyword::type: {
        auto t = vcs_type_from(d.value);
        if (!t)
          detail::fail_at(errc::invalid_type,
                          "'" + d.value + "' is not a supported type",
                          d.origin);
        type = *t;
        break;
      }
      case Keyword::url:
        // Reassigning the repository drops stale optional settings.
        for (OptSlot* slot : optional_slots())
          if (!slot->fresh) slot->value.reset();
        url = parse_loc_at(d.value, d.origin);
        break;
      case Keyword::auth_url:
        parse_loc_at(d.value, d.origin);  // validate now, keep the text
        auth_url = {d.value, true};
        break;
      case Keyword::anon_user:
        anon_user = {d.value, true};
        break;
      case Keyword::anon_pass:
        anon_pass = {d.value, true};
        break;
      case Keyword::repo_path:
        repo_path = {d.value, true};
        break;
      case Keyword::name:
        name_override = {d.value, true};
        break;
      case Keyword::checkout: {
        if (!url)
          detail::fail_at(errc::missing_required_directive,
                          "!CHECKOUT requires !URL", d.origin);
        if (!target)
          detail::fail_at(errc::missing_required_directive,
                          "!CHECKOUT requires !TARGET", d.origin);
        if (!type)
          detail::fail_at(errc::missing_required_directive,
                          "!CHECKOUT requires !TYPE", d.origin);
        if (anon_user.value && !anon_pass.value)
          detail::fail_at(errc::orphan_anon_pass,
                          "!ANON_PASS must be set if !ANON_USER is", d.origin);
        if ((anon_user.value || anon_pass.value) && *type != VcsType::cvs)
          detail::fail_at(errc::anon_credentials_non_cvs,
                          "!ANON_USER/!ANON_PASS apply to cvs blocks only",
                          d.origin);
        if (repo_path.value && !is_dvcs(*type))
          detail::fail_at(errc::repo_path_without_dvcs,
                          "!REPO_PATH applies to git or hg blocks only",
                          d.origin);
        if (name_override.value && d.checkout_paths.size() > 1)
          detail::fail_at(errc::ambiguous_name_override,
                          "!NAME cannot rename a multi-component checkout",
                          d.origin);

        ComponentBlock block;
        block.target = *target;
        block.vcs_type = *type;
        block.url = *url;
        if (auth_url.value)
          block.auth_url = parse_location(*auth_url.value);
        block.anon_user = anon_user.value;
        block.anon_pass = anon_pass.value;
        block.repo_path = repo_path.value;
        block.name_override = name_override.value;
        block.checkouts = d.checkout_paths;
        block.source_name = d.origin.source_name;
        block.line = d.origin.line_number;
        doc.blocks.push_back(std::move(block));

        name_override.value.reset();  // one CHECKOUT only
        for (OptSlot* slot : optional_slots()) slot->fresh = false;
        break;
      }
    }
  }

  if (doc.crl_version.empty())
    throw error(errc::missing_version_header,
                "document contains no !CRL_VERSION directive");
  return doc;
}

/// Replaces every $k in template_text with the k-th slash-separated segment
/// of component_path (1-based).
inline std::string substitute_positional(std::string_view template_text,
                                         std::string_view component_path) {
  auto segs = detail::split_segments(component_path);
  std::string out;
  out.reserve(template_text.size());
  std::size_t i = 0;
  while (i < template_text.size()) {
    char c = template_text[i];
    if (c != '$' || i + 1 >= template_text.size() ||
        !detail::is_digit(template_text[i + 1])) {
      out += c;
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    std::uint64_t k = 0;
    while (j < template_text.size() && detail::is_digit(template_text[j])) {
      k = k * 10 + static_cast<std::uint64_t>(template_text[j] - '0');
      ++j;
    }
    if (k == 0 || k > segs.size())
      throw error(errc::positional_out_of_range,
                  "$" + std::to_string(k) + " exceeds the segments of '" +
                      std::string(component_path) + "'");
    out += segs[k - 1];
    i = j;
  }
  return out;
}

/// Turns a document into one FetchTask per checkout path.
///
/// The resolved URL uses AUTH_URL when the block's credential is a username
/// and an AUTH_URL is present; otherwise the anonymous URL. Destinations are
/// (root_override or nothing) / target / component path, with the final
/// segment renamed when !NAME was given. block_credentials must supply one
/// entry per block (see the auth module); the anonymous flag forces every
/// block to its anonymous route regardless.
inline std::vector<FetchTask> resolve_tasks(
    const Document& doc, const std::optional<std::string>& root_override,
    bool anonymous, const std::vector<Credential>& block_credentials) {
  if (block_credentials.size() != doc.blocks.size())
    throw std::logic_error("resolve_tasks: one credential per block required");

  std::vector<FetchTask> tasks;
  for (std::size_t bi = 0; bi < doc.blocks.size(); ++bi) {
    const ComponentBlock& block = doc.blocks[bi];
    Credential decision =
        anonymous ? Credential::anonymous() : block_credentials[bi];
    bool authed = decision.kind == Credential::Kind::username;
    const Location& base =
        authed && block.auth_url ? *block.auth_url : block.url;

    for (const std::string& comp : block.checkouts) {
      auto contextual = [&](const error& e) {
        return error(e.code(),
                     std::string(e.what()) + " (component '" + comp + "')",
                     block.source_name, block.line);
      };

      FetchTask t;
      t.component_path = comp;
      t.vcs_type = block.vcs_type;
      t.block_index = bi;
      try {
        t.resolved_url = substitute_positional(base.text, comp);
        if (block.repo_path)
          t.repo_extract = substitute_positional(*block.repo_path, comp);
      } catch (const error& e) {
        throw contextual(e);
      }
      if (t.resolved_url.find('$') != std::string::npos)
        throw contextual(error(errc::unresolved_placeholder,
                               "resolved URL '" + t.resolved_url +
                                   "' still contains a '$' placeholder"));

      std::string comp_dest = comp;
      if (block.name_override) {
        auto segs = detail::split_segments(comp);
        segs.back() = *block.name_override;
        comp_dest.clear();
        for (const auto& s : segs)
          comp_dest = detail::join_path(comp_dest, s);
      }
      t.destination = detail::join_path(block.target, comp_dest);
      if (root_override) {
        bool absolute = !root_override->empty() && root_override->front() == '/';
        t.destination = detail::join_path(*root_override, t.destination);
        if (absolute && t.destination.front() != '/')
          t.destination = "/" + t.destination;
      }

      if (authed)
        t.credentials = decision;
      else if (block.anon_user)
        t.credentials =
            Credential::cvs_anonymous(*block.anon_user, *block.anon_pass);
      else
        t.credentials = Credential::anonymous();

      tasks.push_back(std::move(t));
    }
  }
  return tasks;
}

/// Concatenates documents in argument order. Definitions are file-scoped and
/// already expanded, so they are merely carried along for reference.
inline Document merge_documents(const std::vector<Document>& docs) {
  if (docs.empty()) throw std::logic_error("merge_documents: no documents");
  Document merged;
  merged.crl_version = docs.front().crl_version;
  for (const Document& d : docs) {
    if (d.crl_version != merged.crl_version)
      throw error(errc::version_mismatch,
                  "component lists use different CRL versions ('" +
                      merged.crl_version + "' vs '" + d.crl_version + "')");
    merged.definitions.insert(merged.definitions.end(), d.definitions.begin(),
                              d.definitions.end());
    merged.blocks.insert(merged.blocks.end(), d.blocks.begin(),
                         d.blocks.end());
    merged.source_names.insert(merged.source_names.end(),
                               d.source_names.begin(), d.source_names.end());
  }
  return merged;
}

/// Drops tasks whose destination repeats an earlier one. Two tasks writing
/// the same directory is the only physically conflicting duplication, so the
/// destination is the dedup key; the first occurrence wins.
inline std::vector<FetchTask> dedupe_tasks(std::vector<FetchTask> tasks) {
  std::unordered_set<std::string> seen;
  std::vector<FetchTask> out;
  out.reserve(tasks.size());
  for (auto& t : tasks)
    if (seen.insert(t.destination).second) out.push_back(std::move(t));
  return out;
}

/// Full front half of the pipeline: scan, parse, expand, assemble.
inline Document parse_crl(std::string_view text, std::string source_name) {
  auto lines = scan(text, source_name);
  auto directives = parse_document(lines);
  auto expanded = expand_defines(std::move(directives));
  Document doc = assemble_blocks(expanded.directives);
  doc.source_names = {std::move(source_name)};
  return doc;
}

}  // namespace crl

#endif  // CRL_RESOLVE_HPP
