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
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace tutorkit::analytics {

enum class Condition { Class, Human, ITS };
enum class TestKind { Pre, Post, Delayed };

std::string_view conditionName(Condition c);
std::optional<Condition> conditionFromName(std::string_view name);
std::string_view testKindName(TestKind t);
std::optional<TestKind> testKindFromName(std::string_view name);

struct ItemResponseRecord {
  std::string participant;
  std::string item;
  Condition condition = Condition::Class;
  TestKind test = TestKind::Pre;
  bool correct = false;
  int week = 0;
  int cycle = 0;

  bool operator==(const ItemResponseRecord&) const = default;
};

// ---- Descriptives ----

struct Cell {
  double proportion = 0.0;
  std::size_t n = 0;
  double sd = 0.0;  // sample standard deviation of the 0/1 outcomes; 0 for n < 2
};

using CellKey = std::pair<Condition, TestKind>;
using DescriptiveTable = std::map<CellKey, Cell>;

// Cells without records are absent.
DescriptiveTable descriptives(const std::vector<ItemResponseRecord>& records);

// ---- Effect sizes ----

enum class OrToDMode { Probit, Logistic };

inline constexpr double kProbitScale = 1.6;

// Probit: ln(OR) / 1.6. Logistic: ln(OR) * sqrt(3) / pi. Throws NonPositiveOR.
double orToD(double oddsRatio, OrToDMode mode = OrToDMode::Probit);

// ---- Logistic regression ----

struct DesignMatrix {
  std::vector<std::string> terms;
  std::vector<std::vector<double>> rows;
  std::vector<double> y;
};

// Treatment coding with Class and Pre as reference levels. formula is one of
// "1", "condition", "test", "condition+test", "condition*test". Only levels
// present in the records get columns. Throws InvalidArgument.
DesignMatrix buildDesign(const std::vector<ItemResponseRecord>& records, const std::string& formula);

struct LogisticFit {
  std::vector<std::string> terms;
  std::vector<double> coefficients;
  std::vector<double> standardErrors;
  double logLikelihood = 0.0;
  bool converged = false;
  int iterations = 0;
  double gradientMaxNorm = 0.0;
  std::vector<double> logLikelihoodHistory;  // starting point first

  double coefficient(const std::string& term) const;  // throws InvalidArgument
};

struct FitOptions {
  int maxIterations = 100;
  double gradientTolerance = 1e-8;
  double separationNorm = 30.0;
};

double logLikelihood(const DesignMatrix& design, const std::vector<double>& beta);

// Newton / IRLS with step halving. Throws SingularDesign when the design has
// deficient column rank and Separation when the coefficient norm exceeds
// options.separationNorm.
LogisticFit fitLogistic(const DesignMatrix& design, const FitOptions& options = {});
LogisticFit fitLogistic(const std::vector<ItemResponseRecord>& records,
                        const std::string& formula = "condition*test", const FitOptions& options = {});

// ---- Records I/O ----

inline constexpr const char* kCsvHeader = "participant,item,condition,test,correct,week,cycle";

std::string recordsToCsv(const std::vector<ItemResponseRecord>& records);
// Throws SchemaViolation on malformed rows.
std::vector<ItemResponseRecord> recordsFromCsv(const std::string& csv);
// Throws IoFailure.
void exportRecords(const std::vector<ItemResponseRecord>& records, const std::string& path);
std::vector<ItemResponseRecord> importRecords(const std::string& path);

// ---- Synthetic data and reports ----

// For every target cell, participants x items records with exactly
// round(p * n) correct, placed by a seeded shuffle.
std::vector<ItemResponseRecord> syntheticRecords(const std::map<CellKey, double>& targets,
                                                 int participantsPerCell, int itemsPerParticipant,
                                                 std::uint64_t seed);

// Test-by-condition proportions of the bundled study table.
std::map<CellKey, double> studyTargets();

struct Contrast {
  std::string label;
  CellKey a;
  CellKey b;
  double logOdds = 0.0;  // eta(a) - eta(b)
  double oddsRatio = 1.0;
  double d = 0.0;
};

// Pairwise cell contrasts from a condition*test fit: conditions within each
// test and tests within each condition.
std::vector<Contrast> contrasts(const LogisticFit& fit, const std::vector<ItemResponseRecord>& records,
                                OrToDMode mode = OrToDMode::Probit);

nlohmann::json analysisReport(const std::vector<ItemResponseRecord>& records,
                              OrToDMode mode = OrToDMode::Probit);

}  // namespace tutorkit::analytics
