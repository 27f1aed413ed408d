// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include "commands.hpp"
#include "wafersage/alignment.hpp"
#include "wafersage/errors.hpp"

namespace wafersage::cli {

namespace {

struct MeanRow {
  double overall = 0.0;
  double spatial = 0.0;
  double morphology = 0.0;
  double root_cause = 0.0;
  std::size_t count = 0;
};

std::string format_table(const std::map<std::string, MeanRow>& rows) {
  std::ostringstream out;
  out << std::left << std::setw(14) << "source" << std::right << std::setw(10) << "Overall"
      << std::setw(10) << "Spatial" << std::setw(10) << "Morph." << std::setw(10) << "Root"
      << "\n";
  out << std::fixed << std::setprecision(4);
  for (const auto& [name, row] : rows) {
    out << std::left << std::setw(14) << name << std::right << std::setw(10) << row.overall
        << std::setw(10) << row.spatial << std::setw(10) << row.morphology << std::setw(10)
        << row.root_cause << "\n";
  }
  return out.str();
}

}  // namespace

int run_report(const ReportArgs& args) {
  RunConfig config = args.common.resolve();
  if (args.eval_report.empty()) {
    std::cerr << "report: --eval is required\n";
    return kExitUsage;
  }

  std::map<std::string, MeanRow> table;
  std::map<std::string, double> rule_overall;  // id -> S, for the correlation
  {
    MeanRow rule;
    for (const auto& row : util::read_jsonl(args.eval_report)) {
      if (row.contains("error") || !row.contains("overall")) continue;
      const auto& dims = row.at("dimensions");
      rule.overall += row.at("overall").get<double>();
      rule.spatial += dims.at("spatial").at("score").get<double>();
      rule.morphology += dims.at("morphology").at("score").get<double>();
      rule.root_cause += dims.at("root_cause").at("score").get<double>();
      ++rule.count;
      rule_overall[row.at("id").get<std::string>()] = row.at("overall").get<double>();
    }
    if (rule.count > 0) {
      const double n = static_cast<double>(rule.count);
      rule.overall /= n;
      rule.spatial /= n;
      rule.morphology /= n;
      rule.root_cause /= n;
      table["rule-based"] = rule;
    }
  }

  std::map<std::string, double> judge_overall;
  if (!args.judge_report.empty()) {
    MeanRow judge;
    for (const auto& row : util::read_jsonl(args.judge_report)) {
      if (row.contains("error") || !row.contains("overall")) continue;
      judge.overall += row.at("overall").get<double>();
      judge.spatial += row.at("spatial").get<double>();
      judge.morphology += row.at("morphology").get<double>();
      judge.root_cause += row.at("root_cause").get<double>();
      ++judge.count;
      judge_overall[row.at("id").get<std::string>()] = row.at("overall").get<double>();
    }
    if (judge.count > 0) {
      const double n = static_cast<double>(judge.count);
      judge.overall /= n;
      judge.spatial /= n;
      judge.morphology /= n;
      judge.root_cause /= n;
      table["judge"] = judge;
    }
  }

  // items present on one side only
  std::vector<std::string> discrepancies;
  std::optional<double> rho;
  if (!args.judge_report.empty()) {
    std::vector<double> xs;
    std::vector<double> ys;
    for (const auto& [id, s] : rule_overall) {
      const auto it = judge_overall.find(id);
      if (it == judge_overall.end()) {
        discrepancies.push_back("rule-only: " + id);
      } else {
        xs.push_back(s);
        ys.push_back(it->second);
      }
    }
    for (const auto& [id, s] : judge_overall) {
      if (!rule_overall.count(id)) discrepancies.push_back("judge-only: " + id);
    }
    if (xs.size() >= 2) {
      try {
        rho = alignment::spearman(xs, ys);
      } catch (const DegenerateInputError&) {
        rho = std::nullopt;  // constant scores carry no rank signal
      }
    }
  }

  std::string text = format_table(table);
  if (rho) {
    std::ostringstream line;
    line << std::fixed << std::setprecision(4) << "spearman(rule, judge) = " << *rho << "\n";
    text += line.str();
  }
  if (!discrepancies.empty()) {
    text += "discrepancies:\n";
    for (const auto& d : discrepancies) text += "  " + d + "\n";
  }

  OutDirLock lock(config.out_dir);
  const auto header = make_header(config.eval, config.seed);
  util::write_file_atomic(std::filesystem::path(config.out_dir) / "report.txt", text);

  util::ordered_json j = util::ordered_json::object();
  j["header"] = header.at("header");
  util::ordered_json sources = util::ordered_json::object();
  for (const auto& [name, row] : table) {
    sources[name] = {{"overall", row.overall},
                     {"spatial", row.spatial},
                     {"morphology", row.morphology},
                     {"root_cause", row.root_cause},
                     {"items", row.count}};
  }
  j["sources"] = std::move(sources);
  if (rho) j["spearman_rule_judge"] = *rho;
  j["discrepancies"] = discrepancies;
  util::write_file_atomic(std::filesystem::path(config.out_dir) / "report.json",
                          j.dump(2) + "\n");

  std::cout << text;
  return kExitOk;
}

}  // namespace wafersage::cli
