// Copyright 2026 The nodescan Authors. All Rights Reserved.
//
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

#ifndef NODESCAN_CLI_HPP
#define NODESCAN_CLI_HPP

#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "nodescan/bom.hpp"
#include "nodescan/deps.hpp"
#include "nodescan/detector.hpp"
#include "nodescan/report.hpp"
#include "nodescan/vuln_kb.hpp"

// Subcommand implementations behind the `nodescan` executable. Each returns
// the process exit code and writes only to the streams it is given.
namespace nodescan::cli {

inline constexpr int kExitClean = 0;
inline constexpr int kExitVulnerable = 1;
inline constexpr int kExitError = 2;

enum class OutputFormat { kJson, kText };

struct ScanConfig {
  std::filesystem::path app_dir;
  std::filesystem::path kb_dir;
  bool include_dev = true;
  OutputFormat format = OutputFormat::kJson;
  std::optional<std::filesystem::path> output;
};

namespace detail {

inline void write_output(const std::string& text, const std::optional<std::filesystem::path>& output,
                         std::ostream& out) {
  if (!output) {
    out << text;
    return;
  }
  std::ofstream f(*output, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorCode::kIo, "cannot write " + output->string());
  f << text;
  if (!f) throw Error(ErrorCode::kIo, "failed writing " + output->string());
}

inline void print_warnings(std::ostream& err, const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) err << "warning: " << w << '\n';
}

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
  }
  return kExitError;
}

}  // namespace detail

inline Json scan_report_json(const BillOfMaterials& bom, bool include_dev, std::span<const Finding> findings,
                             std::span<const FeatureRow> table, const std::vector<std::string>& warnings) {
  Json j;
  j["application"] = {{"name", bom.app_name}, {"version", bom.app_version}};
  j["include_dev"] = include_dev;
  std::size_t counts[3] = {0, 0, 0};
  Json fs = Json::array();
  for (const auto& f : findings) {
    ++counts[static_cast<int>(f.status)];
    fs.push_back(to_json(f));
  }
  j["summary"] = {{"vulnerable", counts[0]}, {"fixed", counts[1]}, {"inconclusive", counts[2]}};
  j["findings"] = std::move(fs);
  Json rows = Json::array();
  for (const auto& r : table) rows.push_back(to_json(r));
  j["features"] = std::move(rows);
  j["warnings"] = warnings;
  return j;
}

inline int cmd_scan(const ScanConfig& config, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    std::error_code ec;
    if (!std::filesystem::is_directory(config.app_dir, ec)) {
      throw Error(ErrorCode::kIo, "application directory not found: " + config.app_dir.string());
    }
    if (!std::filesystem::is_directory(config.kb_dir, ec)) {
      throw Error(ErrorCode::kIo, "knowledge base directory not found: " + config.kb_dir.string());
    }
    BillOfMaterials bom = build_bom(config.app_dir);
    KbContents kb = kb_load(config.kb_dir);
    if (!config.include_dev) {
      std::erase_if(bom.dep_entries, [](const DependencyEntry& d) { return d.scope == Scope::kTest; });
    }
    const auto findings = detect(bom, kb.signatures);
    const auto table = tabulate_findings(findings);

    std::vector<std::string> warnings = bom.warnings;
    warnings.insert(warnings.end(), kb.warnings.begin(), kb.warnings.end());
    detail::print_warnings(err, warnings);

    std::string text;
    if (config.format == OutputFormat::kJson) {
      text = scan_report_json(bom, config.include_dev, findings, table, warnings).dump(2) + "\n";
    } else {
      std::ostringstream ss;
      ss << "Scan of " << bom.app_name << '@' << bom.app_version << ": " << bom.dep_entries.size()
         << " dependencies, " << kb.signatures.size() << " signatures\n\n";
      render_findings(ss, findings);
      ss << '\n';
      render_feature_table(ss, table);
      text = ss.str();
    }
    detail::write_output(text, config.output, out);
    const bool vulnerable = std::any_of(findings.begin(), findings.end(),
                                        [](const Finding& f) { return f.status == Status::kVulnerable; });
    return vulnerable ? kExitVulnerable : kExitClean;
  });
}

inline int cmd_bom(const std::filesystem::path& app_dir, const std::optional<std::filesystem::path>& output,
                   std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    const BillOfMaterials bom = build_bom(app_dir);
    detail::print_warnings(err, bom.warnings);
    detail::write_output(to_json(bom).dump(2) + "\n", output, out);
    return kExitClean;
  });
}

inline int cmd_deps(const std::filesystem::path& app_dir, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    const auto text = read_file(app_dir / "package.json");
    if (!text) throw Error(ErrorCode::kMissingManifest, "missing package.json in " + app_dir.string());
    const Manifest manifest = parse_manifest(*text);
    std::vector<std::string> warnings;
    const DependencyGraph g = classify(nodescan::detail::resolve_graph(app_dir, manifest, warnings), manifest);
    warnings.insert(warnings.end(), g.warnings.begin(), g.warnings.end());
    detail::print_warnings(err, warnings);
    out << to_json(g).dump(2) << '\n';
    return kExitClean;
  });
}

inline int cmd_kb_diff(const std::filesystem::path& before, const std::filesystem::path& after,
                       const std::string& package, OutputFormat format, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    const Fqn root = Fqn::root(package);
    const auto b = extract_package(before, root);
    const auto a = extract_package(after, root);
    const ConstructChanges changes = diff_constructs(b.constructs, a.constructs);
    if (changes.empty()) err << "warning: no code change detected\n";
    if (format == OutputFormat::kJson) {
      out << to_json(changes).dump(2) << '\n';
    } else {
      render_changes(out, package, changes);
    }
    return kExitClean;
  });
}

inline int cmd_kb_add(const std::string& vuln_id, const std::string& package, const std::filesystem::path& before,
                      const std::filesystem::path& after, const std::filesystem::path& kb_dir,
                      const std::string& provenance, bool overwrite, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    check_vuln_id(vuln_id);
    std::error_code ec;
    const auto target = kb_dir / (vuln_id + ".json");
    if (!overwrite && std::filesystem::exists(target, ec)) {
      throw Error(ErrorCode::kDuplicateVulnId, target.string() + " already exists (use --force to replace it)");
    }
    const VulnSignature sig = build_signature(vuln_id, package, before, after, provenance);
    const auto path = kb_save(sig, kb_dir);
    out << "wrote " << path.string() << '\n';
    render_changes(out, vuln_id, sig.changes);
    return kExitClean;
  });
}

inline int cmd_stats(const std::vector<std::filesystem::path>& bom_files, OutputFormat format, std::ostream& out,
                     std::ostream& err) {
  return detail::guarded(err, [&] {
    std::vector<BillOfMaterials> boms;
    for (const auto& f : bom_files) {
      const auto text = read_file(f);
      if (!text) throw Error(ErrorCode::kIo, "cannot read " + f.string());
      Json j;
      try {
        j = Json::parse(*text);
      } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::kMalformedJson, f.string() + ": malformed JSON at byte offset " + std::to_string(e.byte));
      }
      boms.push_back(bom_from_json(j));
    }
    const SummaryTable t = summarize(boms);
    if (format == OutputFormat::kJson) {
      out << to_json(t).dump(2) << '\n';
    } else {
      render_summary(out, t);
    }
    return kExitClean;
  });
}

}  // namespace nodescan::cli

#endif  // NODESCAN_CLI_HPP
