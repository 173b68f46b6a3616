// Copyright 2026 The ecforge Authors.
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

#include "ecforge/eval.h"

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>

#include "ecforge/errors.h"
#include "ecforge/instruction.h"
#include "ecforge/strings.h"
#include "json.hpp"

namespace ecforge {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

MatchCounts CountMatches(const PairSet &gold, const PairSet &predicted) {
  MatchCounts counts;
  counts.gold = gold.size();
  counts.proposed = predicted.size();
  for (const Pair &pair : predicted) {
    if (gold.count(pair)) ++counts.correct;
  }
  return counts;
}

ordered_json PairsJson(const PairSet &pairs) {
  ordered_json out = ordered_json::array();
  for (const Pair &p : pairs) out.push_back({p.emotion, p.cause});
  return out;
}

PairSet PairsFromJson(const json &array) {
  PairSet out;
  for (const auto &p : array) out.insert({p.at(0).get<int>(), p.at(1).get<int>()});
  return out;
}

ordered_json CountsJson(const MatchCounts &c) {
  return {{"correct", c.correct}, {"proposed", c.proposed}, {"gold", c.gold}};
}

MatchCounts CountsFromJson(const json &j) {
  return {j.at("correct").get<size_t>(), j.at("proposed").get<size_t>(),
          j.at("gold").get<size_t>()};
}

std::string Percent(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", x * 100.0);
  return buf;
}

}  // namespace

MatchCounts MatchPairs(const PairSet &gold, const PairSet &predicted) {
  if (gold.empty()) throw PreconditionError("match_pairs: empty gold set");
  return CountMatches(gold, predicted);
}

double F1Score(double precision, double recall) {
  if (precision + recall == 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

Metrics Prf1(const MatchCounts &counts) {
  if (counts.gold == 0) throw PreconditionError("prf1: gold count is zero");
  Metrics m;
  m.precision = counts.proposed == 0
                    ? 0.0
                    : static_cast<double>(counts.correct) /
                          static_cast<double>(counts.proposed);
  m.recall =
      static_cast<double>(counts.correct) / static_cast<double>(counts.gold);
  m.f1 = F1Score(m.precision, m.recall);
  return m;
}

RunReport EvaluateRun(const Corpus &test,
                      const std::map<std::string, std::string> &predictions,
                      std::string run_id, std::string manifest_ref) {
  RunReport report;
  report.run_id = std::move(run_id);
  report.manifest_ref = std::move(manifest_ref);
  std::set<std::string> known;
  for (const Document &doc : test.documents) {
    known.insert(doc.doc_id);
    DocResult result;
    result.doc_id = doc.doc_id;
    result.gold = doc.gold_pairs;
    auto it = predictions.find(doc.doc_id);
    if (it == predictions.end()) {
      result.missing = true;
      result.no_match = true;
    } else {
      ParsedPairs parsed = ParsePairs(it->second);
      result.no_match = parsed.no_match;
      result.duplicates = parsed.duplicates;
      int n = static_cast<int>(doc.clauses.size());
      for (const Pair &p : parsed.pairs) {
        if (p.emotion < 1 || p.emotion > n || p.cause < 1 || p.cause > n) {
          ++result.filtered;
        } else {
          result.predicted.insert(p);
        }
      }
    }
    if (doc.gold_pairs.empty()) {
      report.anomalies.push_back("doc '" + doc.doc_id + "' has no gold pairs");
    }
    result.counts = CountMatches(result.gold, result.predicted);
    report.totals += result.counts;
    report.missing += result.missing;
    report.no_match += result.no_match;
    report.filtered += result.filtered;
    report.duplicates += result.duplicates;
    if (result.missing) {
      report.anomalies.push_back("doc '" + doc.doc_id +
                                 "' has no prediction");
    }
    report.per_doc.push_back(std::move(result));
  }
  for (const auto &[doc_id, output] : predictions) {
    if (!known.count(doc_id)) {
      report.anomalies.push_back("prediction for unknown doc '" + doc_id +
                                 "' ignored");
    }
  }
  if (report.totals.gold > 0) {
    report.metrics = Prf1(report.totals);
  } else {
    report.anomalies.push_back("test corpus has no gold pairs; metrics are 0");
  }
  return report;
}

std::map<std::string, std::string> ParsePredictions(std::string_view raw) {
  std::map<std::string, std::string> out;
  std::istringstream in{std::string(raw)};
  std::string line;
  int lineno = 0;
  std::vector<LineIssue> issues;
  while (std::getline(in, line)) {
    ++lineno;
    if (Trim(line).empty()) continue;
    json object = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (!object.is_object() || !object.contains("doc_id") ||
        !object["doc_id"].is_string() || !object.contains("output") ||
        !object["output"].is_string()) {
      issues.push_back({lineno, "malformed prediction: expected "
                                "{\"doc_id\": string, \"output\": string}"});
      continue;
    }
    std::string id = object["doc_id"].get<std::string>();
    if (!out.emplace(id, object["output"].get<std::string>()).second) {
      issues.push_back({lineno, "duplicate prediction for doc '" + id + "'"});
    }
  }
  if (!issues.empty()) {
    std::string message = "bad predictions file";
    for (const auto &i : issues) {
      message += "\n  line " + std::to_string(i.line) + ": " + i.reason;
    }
    throw DataError(message, std::move(issues));
  }
  return out;
}

std::string EmitPredictions(
    const std::vector<std::pair<std::string, std::string>> &predictions) {
  std::string out;
  for (const auto &[doc_id, output] : predictions) {
    ordered_json line;
    line["doc_id"] = doc_id;
    line["output"] = output;
    out += line.dump();
    out += '\n';
  }
  return out;
}

std::string ReportJson(const RunReport &report) {
  ordered_json out;
  out["run_id"] = report.run_id;
  out["ratio"] = report.ratio;
  out["manifest_ref"] = report.manifest_ref;
  out["matching"] = "exact (emotion, cause) pair match, micro-averaged";
  out["out_of_range_policy"] =
      "predicted pairs outside the clause range are filtered before counting";
  out["totals"] = CountsJson(report.totals);
  out["metrics"] = {{"precision", report.metrics.precision},
                    {"recall", report.metrics.recall},
                    {"f1", report.metrics.f1}};
  out["diagnostics"] = {{"missing", report.missing},
                        {"no_match", report.no_match},
                        {"filtered", report.filtered},
                        {"duplicates", report.duplicates}};
  out["anomalies"] = report.anomalies;
  ordered_json docs = ordered_json::array();
  for (const DocResult &d : report.per_doc) {
    ordered_json row;
    row["doc_id"] = d.doc_id;
    row["gold"] = PairsJson(d.gold);
    row["predicted"] = PairsJson(d.predicted);
    row["counts"] = CountsJson(d.counts);
    row["missing"] = d.missing;
    row["no_match"] = d.no_match;
    row["filtered"] = d.filtered;
    row["duplicates"] = d.duplicates;
    docs.push_back(std::move(row));
  }
  out["per_doc"] = std::move(docs);
  return out.dump(2) + "\n";
}

RunReport ParseReportJson(std::string_view raw) {
  try {
    json in = json::parse(raw);
    RunReport report;
    report.run_id = in.at("run_id").get<std::string>();
    report.ratio = in.value("ratio", "");
    report.manifest_ref = in.value("manifest_ref", "");
    report.totals = CountsFromJson(in.at("totals"));
    const json &m = in.at("metrics");
    report.metrics = {m.at("precision").get<double>(),
                      m.at("recall").get<double>(), m.at("f1").get<double>()};
    if (in.contains("diagnostics")) {
      const json &d = in["diagnostics"];
      report.missing = d.value("missing", size_t{0});
      report.no_match = d.value("no_match", size_t{0});
      report.filtered = d.value("filtered", size_t{0});
      report.duplicates = d.value("duplicates", size_t{0});
    }
    if (in.contains("anomalies")) {
      report.anomalies = in["anomalies"].get<std::vector<std::string>>();
    }
    for (const auto &row : in.value("per_doc", json::array())) {
      DocResult d;
      d.doc_id = row.at("doc_id").get<std::string>();
      d.gold = PairsFromJson(row.at("gold"));
      d.predicted = PairsFromJson(row.at("predicted"));
      d.counts = CountsFromJson(row.at("counts"));
      d.missing = row.value("missing", false);
      d.no_match = row.value("no_match", false);
      d.filtered = row.value("filtered", size_t{0});
      d.duplicates = row.value("duplicates", size_t{0});
      report.per_doc.push_back(std::move(d));
    }
    return report;
  } catch (const json::exception &e) {
    throw DataError(std::string("malformed run report: ") + e.what());
  }
}

std::string ReportSummary(const RunReport &report) {
  std::ostringstream out;
  out << "run " << report.run_id;
  if (!report.ratio.empty()) out << " (ratio " << report.ratio << ")";
  out << "\n";
  out << "  P " << Percent(report.metrics.precision) << "  R "
      << Percent(report.metrics.recall) << "  F1 "
      << Percent(report.metrics.f1) << "\n";
  out << "  correct " << report.totals.correct << "  proposed "
      << report.totals.proposed << "  gold " << report.totals.gold << "\n";
  out << "  documents " << report.per_doc.size() << "  missing "
      << report.missing << "  no-match " << report.no_match
      << "  filtered " << report.filtered << "  duplicates "
      << report.duplicates << "\n";
  for (const auto &a : report.anomalies) out << "  ! " << a << "\n";
  return out.str();
}

ComparisonTable CompareRuns(const std::vector<RunReport> &reports) {
  if (reports.empty()) throw PreconditionError("compare_runs: no reports");
  ComparisonTable table;
  for (const RunReport &r : reports) {
    table.rows.push_back({r.run_id, r.ratio, r.metrics, r.totals, false});
  }
  std::stable_sort(table.rows.begin(), table.rows.end(),
                   [](const ComparisonRow &a, const ComparisonRow &b) {
                     if (a.metrics.f1 != b.metrics.f1) {
                       return a.metrics.f1 > b.metrics.f1;
                     }
                     return a.run_id < b.run_id;
                   });
  double best = table.rows.front().metrics.f1;
  for (auto &row : table.rows) row.best = row.metrics.f1 == best;
  return table;
}

std::string ComparisonTable::ToText() const {
  size_t width = 3;
  for (const auto &row : rows) width = std::max(width, row.run_id.size());
  auto pad = [](std::string s, size_t w) {
    if (s.size() < w) s.append(w - s.size(), ' ');
    return s;
  };
  std::ostringstream out;
  out << pad("Run", width) << "  " << pad("Ratio", 6) << "  P(%)    R(%)    "
      << "F1(%)\n";
  for (const auto &row : rows) {
    out << pad(row.run_id, width) << "  "
        << pad(row.ratio.empty() ? "-" : row.ratio, 6) << "  "
        << pad(Percent(row.metrics.precision), 6) << "  "
        << pad(Percent(row.metrics.recall), 6) << "  "
        << Percent(row.metrics.f1) << (row.best ? " *" : "") << "\n";
  }
  return out.str();
}

std::string ComparisonTable::ToJson() const {
  ordered_json list = ordered_json::array();
  for (const auto &row : rows) {
    ordered_json r;
    r["run_id"] = row.run_id;
    r["ratio"] = row.ratio;
    r["precision"] = row.metrics.precision;
    r["recall"] = row.metrics.recall;
    r["f1"] = row.metrics.f1;
    r["totals"] = CountsJson(row.totals);
    r["best"] = row.best;
    list.push_back(std::move(r));
  }
  ordered_json out;
  out["rows"] = std::move(list);
  return out.dump(2) + "\n";
}

}  // namespace ecforge
