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

// nodescan: construct-level vulnerability scanner for Node.js applications.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nodescan/cli.hpp"

namespace {

using nodescan::cli::OutputFormat;

const std::map<std::string, OutputFormat> kFormats{{"json", OutputFormat::kJson}, {"text", OutputFormat::kText}};

}  // namespace

int main(int argc, char** argv) {
  namespace cli = nodescan::cli;
  CLI::App app{"Code-centric vulnerability detection for Node.js applications"};
  app.require_subcommand(1);

  // scan
  cli::ScanConfig scan;
  std::string scan_output;
  bool no_dev = false;
  auto* scan_cmd = app.add_subcommand("scan", "Build the BOM, match it against the knowledge base and report");
  scan_cmd->add_option("--app", scan.app_dir, "Application directory (holds package.json)")->required();
  scan_cmd->add_option("--kb", scan.kb_dir, "Knowledge base directory of <vuln_id>.json signatures")->required();
  scan_cmd->add_flag("--no-dev", no_dev, "Exclude test (devDependency-only) dependencies");
  scan_cmd->add_option("--format", scan.format, "json or text")
      ->transform(CLI::CheckedTransformer(kFormats, CLI::ignore_case));
  scan_cmd->add_option("-o,--output", scan_output, "Write the report here instead of stdout");

  // bom
  std::string bom_app;
  std::string bom_output;
  auto* bom_cmd = app.add_subcommand("bom", "Extract the bill of materials as JSON");
  bom_cmd->add_option("--app", bom_app, "Application directory")->required();
  bom_cmd->add_option("-o,--output", bom_output, "Write the BOM here instead of stdout");

  // deps
  std::string deps_app;
  auto* deps_cmd = app.add_subcommand("deps", "Print the classified dependency graph as JSON");
  deps_cmd->add_option("--app", deps_app, "Application directory")->required();

  // kb diff / kb add
  auto* kb_cmd = app.add_subcommand("kb", "Knowledge base maintenance");
  kb_cmd->require_subcommand(1);
  std::string before_dir;
  std::string after_dir;
  std::string package;
  OutputFormat diff_format = OutputFormat::kJson;
  auto* diff_cmd = kb_cmd->add_subcommand("diff", "Show construct changes between pre-fix and post-fix trees");
  diff_cmd->add_option("--before", before_dir, "Pre-fix package tree")->required();
  diff_cmd->add_option("--after", after_dir, "Post-fix package tree")->required();
  diff_cmd->add_option("--package", package, "Package name used as FQN root")->required();
  diff_cmd->add_option("--format", diff_format, "json or text")
      ->transform(CLI::CheckedTransformer(kFormats, CLI::ignore_case));

  std::string vuln_id;
  std::string kb_dir;
  std::string provenance;
  bool force = false;
  auto* add_cmd = kb_cmd->add_subcommand("add", "Build a signature and store it in the knowledge base");
  add_cmd->add_option("--id", vuln_id, "Vulnerability identifier, e.g. a CVE id")->required();
  add_cmd->add_option("--package", package, "Package name used as FQN root")->required();
  add_cmd->add_option("--before", before_dir, "Pre-fix package tree")->required();
  add_cmd->add_option("--after", after_dir, "Post-fix package tree")->required();
  add_cmd->add_option("--kb", kb_dir, "Knowledge base directory")->required();
  add_cmd->add_option("--provenance", provenance, "Fix commit references");
  add_cmd->add_flag("--force", force, "Replace an existing signature file");

  // stats
  std::vector<std::string> bom_files;
  OutputFormat stats_format = OutputFormat::kText;
  auto* stats_cmd = app.add_subcommand("stats", "Median/Min/Max/Q1/Q3/SD over saved BOM files");
  stats_cmd->add_option("boms", bom_files, "BOM JSON files")->required();
  stats_cmd->add_option("--format", stats_format, "json or text")
      ->transform(CLI::CheckedTransformer(kFormats, CLI::ignore_case));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cli::kExitError;
  }

  if (*scan_cmd) {
    scan.include_dev = !no_dev;
    if (!scan_output.empty()) scan.output = scan_output;
    return cli::cmd_scan(scan, std::cout, std::cerr);
  }
  if (*bom_cmd) {
    std::optional<std::filesystem::path> out;
    if (!bom_output.empty()) out = bom_output;
    return cli::cmd_bom(bom_app, out, std::cout, std::cerr);
  }
  if (*deps_cmd) return cli::cmd_deps(deps_app, std::cout, std::cerr);
  if (*diff_cmd) return cli::cmd_kb_diff(before_dir, after_dir, package, diff_format, std::cout, std::cerr);
  if (*add_cmd) {
    return cli::cmd_kb_add(vuln_id, package, before_dir, after_dir, kb_dir, provenance, force, std::cout, std::cerr);
  }
  if (*stats_cmd) {
    std::vector<std::filesystem::path> files(bom_files.begin(), bom_files.end());
    return cli::cmd_stats(files, stats_format, std::cout, std::cerr);
  }
  return cli::kExitError;
}
