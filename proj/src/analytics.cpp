// Copyright 2026 The tutorkit Authors.
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
#include "tutorkit/analytics.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "tutorkit/error.hpp"
#include "tutorkit/rng.hpp"

namespace tutorkit::analytics {

using nlohmann::json;

namespace {
constexpr Condition kConditions[] = {Condition::Class, Condition::Human, Condition::ITS};
constexpr TestKind kTests[] = {TestKind::Pre, TestKind::Post, TestKind::Delayed};
}  // namespace

std::string_view conditionName(Condition c) {
  switch (c) {
    case Condition::Class: return "Class";
    case Condition::Human: return "Human";
    case Condition::ITS: return "ITS";
  }
  return "Class";
}

std::optional<Condition> conditionFromName(std::string_view name) {
  for (Condition c : kConditions)
    if (conditionName(c) == name) return c;
  return std::nullopt;
}

std::string_view testKindName(TestKind t) {
  switch (t) {
    case TestKind::Pre: return "Pre";
    case TestKind::Post: return "Post";
    case TestKind::Delayed: return "Delayed";
  }
  return "Pre";
}

std::optional<TestKind> testKindFromName(std::string_view name) {
  for (TestKind t : kTests)
    if (testKindName(t) == name) return t;
  return std::nullopt;
}

DescriptiveTable descriptives(const std::vector<ItemResponseRecord>& records) {
  std::map<CellKey, std::size_t> hits;
  DescriptiveTable table;
  for (const auto& r : records) {
    CellKey k{r.condition, r.test};
    table[k].n++;
    hits[k] += r.correct ? 1 : 0;
  }
  for (auto& [k, cell] : table) {
    const double n = static_cast<double>(cell.n);
    const double c = static_cast<double>(hits[k]);
    cell.proportion = c / n;
    if (cell.n >= 2) {
      const double ss = c * (1 - cell.proportion) * (1 - cell.proportion) +
                        (n - c) * cell.proportion * cell.proportion;
      cell.sd = std::sqrt(ss / (n - 1));
    }
  }
  return table;
}

double orToD(double oddsRatio, OrToDMode mode) {
  if (!(oddsRatio > 0.0) || !std::isfinite(oddsRatio))
    throw Error(ErrorCode::NonPositiveOR, "odds ratio must be positive and finite");
  const double lnOr = std::log(oddsRatio);
  return mode == OrToDMode::Probit ? lnOr / kProbitScale : lnOr * std::sqrt(3.0) / std::numbers::pi;
}

// ---- Design ----

namespace {

std::string conditionTerm(Condition c) { return "condition[" + std::string(conditionName(c)) + "]"; }
std::string testTerm(TestKind t) { return "test[" + std::string(testKindName(t)) + "]"; }

double termValue(const std::string& term, Condition c, TestKind t) {
  if (term == "(Intercept)") return 1.0;
  auto colon = term.find(':');
  if (colon != std::string::npos)
    return termValue(term.substr(0, colon), c, t) * termValue(term.substr(colon + 1), c, t);
  if (term == conditionTerm(c) || term == testTerm(t)) return 1.0;
  return 0.0;
}

std::vector<double> designRow(const std::vector<std::string>& terms, Condition c, TestKind t) {
  std::vector<double> row;
  row.reserve(terms.size());
  for (const auto& term : terms) row.push_back(termValue(term, c, t));
  return row;
}

double sigmoid(double eta) {
  return eta >= 0 ? 1.0 / (1.0 + std::exp(-eta)) : std::exp(eta) / (1.0 + std::exp(eta));
}

// log(1 + exp(eta)) without overflow.
double softplus(double eta) { return eta > 0 ? eta + std::log1p(std::exp(-eta)) : std::log1p(std::exp(eta)); }

}  // namespace

DesignMatrix buildDesign(const std::vector<ItemResponseRecord>& records, const std::string& formula) {
  const bool cond = formula == "condition" || formula == "condition+test" || formula == "condition*test";
  const bool test = formula == "test" || formula == "condition+test" || formula == "condition*test";
  const bool inter = formula == "condition*test";
  if (!cond && !test && formula != "1")
    throw Error(ErrorCode::InvalidArgument, "unsupported formula " + formula, "formula");

  std::vector<Condition> conds;
  std::vector<TestKind> tests;
  for (Condition c : kConditions)
    if (c != Condition::Class && std::any_of(records.begin(), records.end(),
                                             [&](const auto& r) { return r.condition == c; }))
      conds.push_back(c);
  for (TestKind t : kTests)
    if (t != TestKind::Pre &&
        std::any_of(records.begin(), records.end(), [&](const auto& r) { return r.test == t; }))
      tests.push_back(t);

  DesignMatrix d;
  d.terms.push_back("(Intercept)");
  if (cond)
    for (Condition c : conds) d.terms.push_back(conditionTerm(c));
  if (test)
    for (TestKind t : tests) d.terms.push_back(testTerm(t));
  if (inter)
    for (Condition c : conds)
      for (TestKind t : tests) d.terms.push_back(conditionTerm(c) + ":" + testTerm(t));
  for (const auto& r : records) {
    d.rows.push_back(designRow(d.terms, r.condition, r.test));
    d.y.push_back(r.correct ? 1.0 : 0.0);
  }
  return d;
}

double LogisticFit::coefficient(const std::string& term) const {
  for (std::size_t i = 0; i < terms.size(); ++i)
    if (terms[i] == term) return coefficients[i];
  throw Error(ErrorCode::InvalidArgument, "no term " + term, "term");
}

double logLikelihood(const DesignMatrix& design, const std::vector<double>& beta) {
  double ll = 0.0;
  for (std::size_t i = 0; i < design.rows.size(); ++i) {
    double eta = 0.0;
    for (std::size_t j = 0; j < beta.size(); ++j) eta += design.rows[i][j] * beta[j];
    ll += design.y[i] * eta - softplus(eta);
  }
  return ll;
}

LogisticFit fitLogistic(const DesignMatrix& design, const FitOptions& options) {
  const auto n = static_cast<Eigen::Index>(design.rows.size());
  const auto p = static_cast<Eigen::Index>(design.terms.size());
  if (n == 0) throw Error(ErrorCode::SingularDesign, "no records to fit");
  Eigen::MatrixXd X(n, p);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) X(i, j) = design.rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    y(i) = design.y[static_cast<std::size_t>(i)];
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  if (qr.rank() < p) throw Error(ErrorCode::SingularDesign, "design matrix is rank deficient");

  auto loglik = [&](const Eigen::VectorXd& b) {
    Eigen::VectorXd eta = X * b;
    double ll = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) ll += y(i) * eta(i) - softplus(eta(i));
    return ll;
  };

  LogisticFit fit;
  fit.terms = design.terms;
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  double ll = loglik(beta);
  fit.logLikelihoodHistory.push_back(ll);
  Eigen::MatrixXd H(p, p);

  for (int iter = 0;; ++iter) {
    Eigen::VectorXd eta = X * beta;
    Eigen::VectorXd mu(n), w(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      mu(i) = sigmoid(eta(i));
      w(i) = mu(i) * (1 - mu(i));
    }
    Eigen::VectorXd grad = X.transpose() * (y - mu);
    H = X.transpose() * w.asDiagonal() * X;
    fit.gradientMaxNorm = grad.cwiseAbs().maxCoeff();
    fit.iterations = iter;
    if (fit.gradientMaxNorm <= options.gradientTolerance) {
      fit.converged = true;
      break;
    }
    if (iter >= options.maxIterations) break;

    Eigen::LDLT<Eigen::MatrixXd> ldlt(H);
    Eigen::VectorXd step = ldlt.solve(grad);
    if (ldlt.info() != Eigen::Success || !step.allFinite())
      throw Error(ErrorCode::SingularDesign, "information matrix is singular");
    double scale = 1.0;
    Eigen::VectorXd next = beta + step;
    double nextLl = loglik(next);
    for (int h = 0; h < 50 && nextLl < ll; ++h) {
      scale *= 0.5;
      next = beta + scale * step;
      nextLl = loglik(next);
    }
    if (nextLl < ll) break;  // no ascent direction left at machine precision
    beta = next;
    ll = nextLl;
    fit.logLikelihoodHistory.push_back(ll);
    if (beta.norm() > options.separationNorm)
      throw Error(ErrorCode::Separation,
                  "coefficient norm " + std::to_string(beta.norm()) + " indicates separation after " +
                      std::to_string(iter + 1) + " iterations");
  }

  fit.logLikelihood = ll;
  fit.coefficients.assign(beta.data(), beta.data() + p);
  Eigen::MatrixXd cov = H.ldlt().solve(Eigen::MatrixXd::Identity(p, p));
  for (Eigen::Index j = 0; j < p; ++j) fit.standardErrors.push_back(std::sqrt(std::max(0.0, cov(j, j))));
  return fit;
}

LogisticFit fitLogistic(const std::vector<ItemResponseRecord>& records, const std::string& formula,
                        const FitOptions& options) {
  return fitLogistic(buildDesign(records, formula), options);
}

// ---- CSV ----

namespace {

std::string csvField(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

// RFC 4180 rows; quoted fields may contain separators and line breaks.
std::vector<std::vector<std::string>> parseCsv(const std::string& csv) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false, any = false;
  for (std::size_t i = 0; i < csv.size(); ++i) {
    char c = csv[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < csv.size() && csv[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < csv.size() && csv[i + 1] == '\n') ++i;
      if (any || !field.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
      }
      row.clear();
      field.clear();
      any = false;
    } else {
      field.push_back(c);
      any = true;
    }
  }
  if (quoted) throw Error(ErrorCode::SchemaViolation, "unterminated quoted field", "csv");
  if (any || !field.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

int parseInt(const std::string& s, const char* field) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size())
    throw Error(ErrorCode::SchemaViolation, "not an integer: " + s, field);
  return v;
}

}  // namespace

std::string recordsToCsv(const std::vector<ItemResponseRecord>& records) {
  std::string out = std::string(kCsvHeader) + "\n";
  for (const auto& r : records) {
    out += csvField(r.participant) + "," + csvField(r.item) + "," + std::string(conditionName(r.condition)) +
           "," + std::string(testKindName(r.test)) + "," + (r.correct ? "1" : "0") + "," +
           std::to_string(r.week) + "," + std::to_string(r.cycle) + "\n";
  }
  return out;
}

std::vector<ItemResponseRecord> recordsFromCsv(const std::string& csv) {
  auto rows = parseCsv(csv);
  if (rows.empty()) throw Error(ErrorCode::SchemaViolation, "missing CSV header", "csv");
  std::string header;
  for (std::size_t i = 0; i < rows[0].size(); ++i) header += (i ? "," : "") + rows[0][i];
  if (header != kCsvHeader) throw Error(ErrorCode::SchemaViolation, "unexpected CSV header " + header, "csv");
  std::vector<ItemResponseRecord> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& f = rows[i];
    if (f.size() != 7)
      throw Error(ErrorCode::SchemaViolation, "row " + std::to_string(i) + " has " + std::to_string(f.size()) +
                                                  " fields", "csv");
    auto cond = conditionFromName(f[2]);
    auto test = testKindFromName(f[3]);
    if (!cond) throw Error(ErrorCode::SchemaViolation, "unknown condition " + f[2], "condition");
    if (!test) throw Error(ErrorCode::SchemaViolation, "unknown test " + f[3], "test");
    if (f[4] != "0" && f[4] != "1") throw Error(ErrorCode::SchemaViolation, "correct must be 0 or 1", "correct");
    ItemResponseRecord r{f[0], f[1], *cond, *test, f[4] == "1", parseInt(f[5], "week"), parseInt(f[6], "cycle")};
    if (r.week < 0) throw Error(ErrorCode::SchemaViolation, "week must be non-negative", "week");
    out.push_back(std::move(r));
  }
  return out;
}

void exportRecords(const std::vector<ItemResponseRecord>& records, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << recordsToCsv(records);
  out.flush();
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path);
}

std::vector<ItemResponseRecord> importRecords(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return recordsFromCsv(ss.str());
}

// ---- Synthetic data ----

std::vector<ItemResponseRecord> syntheticRecords(const std::map<CellKey, double>& targets,
                                                 int participantsPerCell, int itemsPerParticipant,
                                                 std::uint64_t seed) {
  std::vector<ItemResponseRecord> out;
  std::uint64_t stream = 0;
  for (const auto& [key, p] : targets) {
    if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::OutOfRange, "target proportion outside [0,1]");
    const int n = participantsPerCell * itemsPerParticipant;
    const int hits = static_cast<int>(std::lround(p * n));
    std::vector<char> correct(static_cast<std::size_t>(n), 0);
    std::fill(correct.begin(), correct.begin() + hits, 1);
    Rng rng(mixSeed(seed, stream++));
    rng.shuffle(std::span<char>(correct));
    for (int i = 0; i < n; ++i) {
      const int who = i / itemsPerParticipant, what = i % itemsPerParticipant;
      ItemResponseRecord r;
      r.participant = std::string(conditionName(key.first)) + "-p" + std::to_string(who + 1);
      r.item = std::string(testKindName(key.second)) + "-i" + std::to_string(what + 1);
      r.condition = key.first;
      r.test = key.second;
      r.correct = correct[static_cast<std::size_t>(i)] != 0;
      r.week = key.second == TestKind::Delayed ? 3 : 1;
      r.cycle = 1;
      out.push_back(std::move(r));
    }
  }
  return out;
}

std::map<CellKey, double> studyTargets() {
  return {{{Condition::Class, TestKind::Pre}, .44},   {{Condition::Human, TestKind::Pre}, .43},
          {{Condition::ITS, TestKind::Pre}, .41},     {{Condition::Class, TestKind::Post}, .49},
          {{Condition::Human, TestKind::Post}, .63},  {{Condition::ITS, TestKind::Post}, .64},
          {{Condition::Class, TestKind::Delayed}, .40}, {{Condition::Human, TestKind::Delayed}, .56},
          {{Condition::ITS, TestKind::Delayed}, .55}};
}

// ---- Contrasts and report ----

std::vector<Contrast> contrasts(const LogisticFit& fit, const std::vector<ItemResponseRecord>& records,
                                OrToDMode mode) {
  const DescriptiveTable cells = descriptives(records);
  auto eta = [&](CellKey k) {
    auto row = designRow(fit.terms, k.first, k.second);
    double e = 0.0;
    for (std::size_t j = 0; j < row.size(); ++j) e += row[j] * fit.coefficients[j];
    return e;
  };
  std::vector<Contrast> out;
  auto add = [&](CellKey a, CellKey b) {
    if (!cells.count(a) || !cells.count(b)) return;
    Contrast c;
    c.a = a;
    c.b = b;
    c.label = std::string(conditionName(a.first)) + "/" + std::string(testKindName(a.second)) + " vs " +
              std::string(conditionName(b.first)) + "/" + std::string(testKindName(b.second));
    c.logOdds = eta(a) - eta(b);
    c.oddsRatio = std::exp(c.logOdds);
    c.d = orToD(c.oddsRatio, mode);
    out.push_back(std::move(c));
  };
  for (TestKind t : kTests) {
    add({Condition::ITS, t}, {Condition::Human, t});
    add({Condition::ITS, t}, {Condition::Class, t});
    add({Condition::Human, t}, {Condition::Class, t});
  }
  for (Condition c : kConditions) {
    add({c, TestKind::Post}, {c, TestKind::Pre});
    add({c, TestKind::Delayed}, {c, TestKind::Pre});
    add({c, TestKind::Delayed}, {c, TestKind::Post});
  }
  return out;
}

json analysisReport(const std::vector<ItemResponseRecord>& records, OrToDMode mode) {
  json report;
  report["records"] = records.size();
  report["conversion"] = mode == OrToDMode::Probit ? "ln(OR)/1.6" : "ln(OR)*sqrt(3)/pi";
  json desc = json::array();
  for (const auto& [k, cell] : descriptives(records))
    desc.push_back({{"condition", conditionName(k.first)},
                    {"test", testKindName(k.second)},
                    {"proportion", cell.proportion},
                    {"sd", cell.sd},
                    {"n", cell.n}});
  report["descriptives"] = desc;
  if (records.empty()) return report;

  std::optional<LogisticFit> fit;
  json errors = json::array();
  for (const char* formula : {"condition*test", "condition+test"}) {
    try {
      fit = fitLogistic(records, formula);
      report["formula"] = formula;
      break;
    } catch (const Error& e) {
      errors.push_back({{"formula", formula}, {"code", errorCodeName(e.code())}, {"message", e.what()}});
    }
  }
  if (!errors.empty()) report["fitErrors"] = errors;
  if (!fit) return report;
  json terms = json::array();
  for (std::size_t i = 0; i < fit->terms.size(); ++i)
    terms.push_back({{"term", fit->terms[i]},
                     {"estimate", fit->coefficients[i]},
                     {"se", fit->standardErrors[i]},
                     {"oddsRatio", std::exp(fit->coefficients[i])}});
  report["fit"] = {{"terms", terms},
                   {"logLikelihood", fit->logLikelihood},
                   {"converged", fit->converged},
                   {"iterations", fit->iterations},
                   {"gradientMaxNorm", fit->gradientMaxNorm}};
  json cs = json::array();
  for (const auto& c : contrasts(*fit, records, mode))
    cs.push_back({{"contrast", c.label}, {"logOdds", c.logOdds}, {"oddsRatio", c.oddsRatio}, {"d", c.d}});
  report["contrasts"] = cs;
  return report;
}

}  // namespace tutorkit::analytics
