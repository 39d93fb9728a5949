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

#ifndef NODESCAN_REPORT_HPP
#define NODESCAN_REPORT_HPP

#include <iomanip>
#include <ostream>
#include <sstream>
#include <span>
#include <string>
#include <vector>

#include "nodescan/bom.hpp"
#include "nodescan/detector.hpp"
#include "nodescan/vuln_kb.hpp"

namespace nodescan {

/// Shortest fixed rendering with at most two decimals ("464.5", "3", "2.14").
inline std::string format_number(double v) {
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(2) << v;
  std::string s = ss.str();
  while (!s.empty() && s.back() == '0') s.pop_back();
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s == "-0" ? "0" : s;
}

inline void render_summary(std::ostream& os, const SummaryTable& t) {
  bool any_undefined = false;
  auto block = [&](std::string_view title, const std::vector<SummaryRow>& rows) {
    os << std::left << std::setw(22) << title << std::right;
    for (const char* h : {"Median", "Min", "Max", "Q1", "Q3", "SD"}) os << std::setw(11) << h;
    os << '\n';
    for (const auto& r : rows) {
      const auto& d = r.dist;
      os << std::left << std::setw(22) << r.label << std::right;
      for (double v : {d.median, d.min, d.max, d.q1, d.q3}) os << std::setw(11) << format_number(v);
      os << std::setw(11) << (format_number(d.sd) + (d.sd_defined ? "" : "*")) << '\n';
      any_undefined = any_undefined || !d.sd_defined;
    }
  };
  block("# Constructs", t.constructs);
  os << '\n';
  block("# Dependencies", t.dependencies);
  if (any_undefined) os << "\n* single observation: standard deviation undefined, shown as 0\n";
}

inline Json to_json(const SummaryTable& t) {
  auto rows = [](const std::vector<SummaryRow>& rs) {
    Json arr = Json::array();
    for (const auto& r : rs) {
      Json j;
      j["label"] = r.label;
      j["n"] = r.dist.n;
      j["median"] = r.dist.median;
      j["min"] = r.dist.min;
      j["max"] = r.dist.max;
      j["q1"] = r.dist.q1;
      j["q3"] = r.dist.q3;
      j["sd"] = r.dist.sd;
      j["sd_defined"] = r.dist.sd_defined;
      arr.push_back(std::move(j));
    }
    return arr;
  };
  Json j;
  j["constructs"] = rows(t.constructs);
  j["dependencies"] = rows(t.dependencies);
  return j;
}

/// Added / Modified / Removed counts per construct type on one line.
inline void render_changes(std::ostream& os, std::string_view label, const ConstructChanges& ch) {
  const ChangeSummary s = count_changes(ch);
  os << std::left << std::setw(20) << label << std::setw(24) << ("Added: " + render_counts(s.added))
     << std::setw(28) << ("Modified: " + render_counts(s.modified)) << "Removed: " << render_counts(s.removed)
     << '\n';
}

inline void render_feature_table(std::ostream& os, std::span<const FeatureRow> rows) {
  os << std::left << std::setw(20) << "Vulnerability" << std::setw(20) << "Runtime" << "Test\n"
     << std::setw(20) << "" << std::setw(10) << "Direct" << std::setw(10) << "Trans." << std::setw(10) << "Direct"
     << "Trans.\n";
  FeatureRow total;
  for (const auto& r : rows) {
    os << std::setw(20) << r.vuln_id << std::setw(10) << r.runtime_direct << std::setw(10) << r.runtime_transitive
       << std::setw(10) << r.test_direct << r.test_transitive << '\n';
    total.runtime_direct += r.runtime_direct;
    total.runtime_transitive += r.runtime_transitive;
    total.test_direct += r.test_direct;
    total.test_transitive += r.test_transitive;
  }
  os << std::setw(20) << "Total" << std::setw(10) << total.runtime_direct << std::setw(10)
     << total.runtime_transitive << std::setw(10) << total.test_direct << total.test_transitive << '\n'
     << std::right;
}

inline void render_findings(std::ostream& os, std::span<const Finding> findings) {
  if (findings.empty()) {
    os << "No known vulnerable code found.\n";
    return;
  }
  for (const auto& f : findings) {
    const auto& d = f.dependency;
    os << f.vuln_id << "  " << to_string(f.status) << "  " << d.name << '@' << d.version << " (" << d.install_path
       << ") [" << to_string(d.scope) << ", " << to_string(d.depth) << "]\n";
    for (const auto& m : f.matches) {
      os << "    " << std::left << std::setw(11) << to_string(m.evidence) << std::setw(6) << to_string(m.type)
         << m.bom_fqn << std::right << '\n';
    }
  }
}

}  // namespace nodescan

#endif  // NODESCAN_REPORT_HPP
