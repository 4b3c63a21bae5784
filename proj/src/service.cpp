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
#include "tutorkit/service.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "tutorkit/rng.hpp"
#include "tutorkit/version.hpp"

namespace tutorkit::service {

namespace fs = std::filesystem;
using nlohmann::json;
using session::SessionState;

int httpStatus(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownTopic:
    case ErrorCode::UnknownSession:
    case ErrorCode::UnknownTest:
      return 404;
    case ErrorCode::SessionAlreadyOpen:
    case ErrorCode::Conflict:
      return 409;
    case ErrorCode::SessionComplete:
      return 410;
    case ErrorCode::Unauthorized:
      return 401;
    case ErrorCode::IllegalEventForPhase:
    case ErrorCode::UnknownSlot:
    case ErrorCode::SlotAlreadyFilled:
    case ErrorCode::UnknownBlank:
    case ErrorCode::UnknownItem:
    case ErrorCode::InsufficientItems:
    case ErrorCode::InvalidArgument:
    case ErrorCode::SchemaViolation:
    case ErrorCode::OutOfRange:
    case ErrorCode::NonPositiveOR:
      return 422;
    default:
      return 500;
  }
}

namespace {

ApiResponse jsonResponse(int status, const json& body) { return ApiResponse{status, body.dump(), "application/json"}; }

ApiResponse errorResponse(int status, std::string_view code, const std::string& message,
                          const std::string& field = {}) {
  json body{{"code", code}, {"message", message}};
  if (!field.empty()) body["field"] = field;
  return jsonResponse(status, body);
}

std::vector<std::string> splitPath(const std::string& path) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : path.substr(0, path.find('?'))) {
    if (c == '/') {
      if (!cur.empty()) parts.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) parts.push_back(std::move(cur));
  return parts;
}

std::string requireString(const json& body, const char* field) {
  if (!body.contains(field) || !body[field].is_string() || body[field].get<std::string>().empty())
    throw Error(ErrorCode::InvalidArgument, std::string(field) + " is required", field);
  return body[field].get<std::string>();
}

std::optional<std::uint64_t> optionalSeed(const json& body) {
  if (!body.contains("seed") || body["seed"].is_null()) return std::nullopt;
  const json& seed = body["seed"];
  if (seed.is_number_unsigned()) return seed.get<std::uint64_t>();
  if (seed.is_number_integer() && seed.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(seed.get<std::int64_t>());
  throw Error(ErrorCode::InvalidArgument, "seed must be a non-negative integer", "seed");
}

int optionalInt(const json& body, const char* field, int fallback) {
  if (!body.contains(field)) return fallback;
  if (!body[field].is_number_integer() || body[field].get<int>() < 0)
    throw Error(ErrorCode::InvalidArgument, std::string(field) + " must be a non-negative integer", field);
  return body[field].get<int>();
}

json clientQuestion(const curriculum::QuestionTemplate& q) {
  return {{"id", q.id}, {"kind", curriculum::questionKindName(q.kind)}, {"text", q.text}};
}

}  // namespace

json Service::clientTurn(const dialogue::TutorTurn& t) {
  json j{{"speech", t.speech},
         {"mediaReveals", t.mediaReveals},
         {"mediaDirective", dialogue::mediaDirectiveName(t.mediaDirective)},
         {"phase", phaseName(t.phaseHint)}};
  j["feedback"] = t.feedback ? json(dialogue::feedbackLevelName(*t.feedback)) : json(nullptr);
  j["solidarity"] = t.solidarity ? json(*t.solidarity) : json(nullptr);
  j["question"] = t.question ? clientQuestion(*t.question) : json(nullptr);
  return j;
}

json Service::sessionView(const SessionState& s, const curriculum::Topic& topic) {
  json view{{"sessionId", s.sessionId}, {"studentId", s.studentId}, {"topicId", s.topicId},
            {"phase", phaseName(s.phase)}, {"rounds", s.rounds}, {"mediaVisible", s.mediaVisible},
            {"complete", s.complete()}};
  auto pending = session::pendingQuestion(s, topic);
  view["pendingQuestion"] = pending ? clientQuestion(*pending) : json(nullptr);

  json payload = nullptr;
  if (const auto* map = s.currentMap()) {
    payload = tasks::skeletonMapClientJson(*map);
    payload["index"] = s.mapIndex;
    payload["count"] = s.maps.size();
  } else if (s.phase == Phase::Cloze && s.cloze) {
    payload = tasks::clozeClientJson(*s.cloze);
    json answered = json::array();
    for (const auto& [id, _] : s.clozeResponses) answered.push_back(id);
    payload["answered"] = answered;
  }
  view["taskPayload"] = payload;

  std::size_t covered = 0;
  for (const auto& id : s.initialAgenda)
    if (s.model.presumedCovered(id) || s.model.coverage(id) >= s.config.thresholds.mastery) ++covered;
  view["progress"] = s.initialAgenda.empty()
                         ? 1.0
                         : static_cast<double>(covered) / static_cast<double>(s.initialAgenda.size());
  view["wrapUp"] = s.config.softLimitMs > 0 && s.lastTimestamp - s.startedAt > s.config.softLimitMs;
  json turns = json::array();
  for (const auto& t : s.lastTurns) turns.push_back(clientTurn(t));
  view["lastTutorTurns"] = turns;
  return view;
}

json Service::clientTest(const testbank::AssembledTest& test) const {
  json items = json::array();
  for (const auto& id : test.items) {
    const testbank::TestItem* item = bank_.find(id);
    json options = json::array();
    for (int idx : testbank::presentedOrder(test, id)) options.push_back(item->options[static_cast<std::size_t>(idx)]);
    items.push_back({{"itemId", id}, {"stem", item->stem}, {"options", options}});
  }
  return {{"testId", test.testId}, {"kind", analytics::testKindName(test.kind)}, {"items", items}};
}

Service::Service(curriculum::Curriculum curriculum, dialogue::Resources resources, testbank::ItemBank bank,
                 ServiceOptions options)
    : curriculum_(std::move(curriculum)),
      resources_(std::move(resources)),
      bank_(std::move(bank)),
      options_(std::move(options)) {
  store_ = std::make_unique<session::SessionStore>(curriculum_, resources_, options_.store);
  if (options_.store.dataDir) {
    store_->recover();
    loadPersisted();
  }
}

Service::~Service() = default;

std::vector<analytics::ItemResponseRecord> Service::records() const {
  std::lock_guard lock(testsMutex_);
  return records_;
}

void Service::loadPersisted() {
  const fs::path root(*options_.store.dataDir);
  if (fs::exists(root / "tests.jsonl")) {
    std::ifstream in(root / "tests.jsonl");
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      json j = json::parse(line);
      TestEntry e;
      e.test = testbank::testFromJson(j.at("test"));
      const json& c = j.at("context");
      e.context.participant = c.at("participant").get<std::string>();
      e.context.condition = *analytics::conditionFromName(c.at("condition").get<std::string>());
      e.context.week = c.at("week").get<int>();
      e.context.cycle = c.at("cycle").get<int>();
      e.sessionId = j.value("sessionId", std::string());
      e.submitted = j.value("submitted", false);
      const std::string& id = e.test.testId;
      if (id.size() > 1 && id[0] == 't')
        testCounter_ = std::max<std::uint64_t>(testCounter_, std::strtoull(id.c_str() + 1, nullptr, 10));
      tests_[id] = std::move(e);
    }
  }
  if (fs::exists(root / "responses.csv")) records_ = analytics::importRecords((root / "responses.csv").string());
}

void Service::appendTestLine(const TestEntry& e) {
  if (!options_.store.dataDir) return;
  json line{{"test", testbank::testToJson(e.test)},
            {"context",
             {{"participant", e.context.participant},
              {"condition", analytics::conditionName(e.context.condition)},
              {"week", e.context.week},
              {"cycle", e.context.cycle}}},
            {"sessionId", e.sessionId},
            {"submitted", e.submitted}};
  std::ofstream out(fs::path(*options_.store.dataDir) / "tests.jsonl", std::ios::app);
  out << line.dump() << '\n';
  if (!out) throw Error(ErrorCode::IoFailure, "cannot append to tests.jsonl");
}

void Service::appendRecords(const std::vector<analytics::ItemResponseRecord>& records) {
  if (!options_.store.dataDir) return;
  const fs::path path = fs::path(*options_.store.dataDir) / "responses.csv";
  const bool fresh = !fs::exists(path);
  std::string csv = analytics::recordsToCsv(records);
  if (!fresh) csv = csv.substr(csv.find('\n') + 1);
  std::ofstream out(path, std::ios::app | std::ios::binary);
  out << csv;
  if (!out) throw Error(ErrorCode::IoFailure, "cannot append to responses.csv");
}

ApiResponse Service::get(const std::string& path) { return handle({"GET", path, "", {}}); }

ApiResponse Service::post(const std::string& path, const json& body) {
  return handle({"POST", path, body.dump(), {}});
}

ApiResponse Service::handle(const ApiRequest& request) {
  try {
    return route(request);
  } catch (const Error& e) {
    return errorResponse(httpStatus(e.code()), errorCodeName(e.code()), e.what(), e.field());
  } catch (const json::exception& e) {
    return errorResponse(400, errorCodeName(ErrorCode::InvalidArgument), std::string("malformed request: ") + e.what());
  } catch (const std::exception& e) {
    return errorResponse(500, "Internal", e.what());
  }
}

ApiResponse Service::route(const ApiRequest& req) {
  const auto parts = splitPath(req.path);
  if (parts.empty() || "/" + parts[0] != kApiPrefix) return errorResponse(404, "NotFound", "no such route " + req.path);
  const std::vector<std::string> p(parts.begin() + 1, parts.end());
  const bool get = req.method == "GET", post = req.method == "POST";

  if (p.size() == 1 && p[0] == "health" && get)
    return jsonResponse(200, {{"status", "ok"}, {"version", kVersion}});

  if (options_.apiToken) {
    auto it = req.headers.find(kTokenHeader);
    if (it == req.headers.end() || it->second != *options_.apiToken)
      throw Error(ErrorCode::Unauthorized, "missing or wrong API token", kTokenHeader);
  }

  json body = json::object();
  if (post && !req.body.empty()) {
    body = json::parse(req.body);
    if (!body.is_object()) throw Error(ErrorCode::InvalidArgument, "request body must be a JSON object");
  }

  auto notAllowed = [&] { return errorResponse(405, "MethodNotAllowed", req.method + " not allowed on " + req.path); };

  if (p.size() == 1 && p[0] == "topics") {
    if (!get) return notAllowed();
    json topics = json::array();
    for (const auto& t : curriculum_.topics)
      topics.push_back({{"id", t.id}, {"name", t.name}, {"conceptCount", t.concepts.size()}});
    return jsonResponse(200, {{"topics", topics}});
  }
  if (p.size() == 2 && p[0] == "topics") {
    if (!get) return notAllowed();
    const auto& t = curriculum_.topic(p[1]);
    json media = json::array();
    for (const auto& m : t.mediaAssets) media.push_back({{"id", m.id}, {"uri", m.uri}, {"caption", m.caption}});
    return jsonResponse(200, {{"id", t.id}, {"name", t.name}, {"preview", t.preview},
                              {"conceptCount", t.concepts.size()}, {"mediaAssets", media}});
  }
  if (p.size() == 1 && p[0] == "sessions") {
    if (!post) return notAllowed();
    return createSession(body);
  }
  if (p.size() >= 2 && p[0] == "sessions") {
    const std::string& id = p[1];
    if (p.size() == 2) {
      if (!get) return notAllowed();
      SessionState s = store_->get(id);
      return jsonResponse(200, sessionView(s, store_->topicOf(id)));
    }
    if (p.size() == 3 && p[2] == "turn") return post ? studentTurn(id, body) : notAllowed();
    if (p.size() == 3 && p[2] == "task") return post ? taskSubmission(id, body) : notAllowed();
    if (p.size() == 3 && p[2] == "test") {
      if (!post) return notAllowed();
      return submitTest(requireString(body, "testId"), body, id);
    }
    if (p.size() == 4 && p[2] == "tests" && p[3] == "assemble")
      return post ? assembleSessionTests(id, body) : notAllowed();
  }
  if (p.size() == 2 && p[0] == "tests" && p[1] == "delayed") return post ? assembleDelayed(body) : notAllowed();
  if (p.size() == 3 && p[0] == "tests" && p[2] == "submit")
    return post ? submitTest(p[1], body, std::nullopt) : notAllowed();
  if (p.size() == 2 && p[0] == "analytics" && p[1] == "export.csv") {
    if (!get) return notAllowed();
    return ApiResponse{200, analytics::recordsToCsv(records()), "text/csv"};
  }
  if (p.size() == 2 && p[0] == "analytics" && p[1] == "report") {
    if (!get) return notAllowed();
    return jsonResponse(200, analytics::analysisReport(records()));
  }
  return errorResponse(404, "NotFound", "no such route " + req.path);
}

ApiResponse Service::createSession(const json& body) {
  auto out = store_->start(requireString(body, "studentId"), requireString(body, "topicId"), optionalSeed(body));
  return jsonResponse(201, sessionView(out.state, store_->topicOf(out.state.sessionId)));
}

ApiResponse Service::studentTurn(const std::string& id, const json& body) {
  if (!body.contains("text") || !body["text"].is_string())
    throw Error(ErrorCode::InvalidArgument, "text is required", "text");
  auto out = store_->advance(id, session::StudentEvent::say(body["text"].get<std::string>()));
  json turns = json::array();
  for (const auto& t : out.turns) turns.push_back(clientTurn(t));
  return jsonResponse(200, {{"tutorTurns", turns}, {"view", sessionView(out.state, store_->topicOf(id))}});
}

ApiResponse Service::taskSubmission(const std::string& id, const json& body) {
  auto out = store_->advance(id, session::StudentEvent::submit(body));
  json turns = json::array();
  for (const auto& t : out.turns) turns.push_back(clientTurn(t));
  return jsonResponse(200, {{"result", out.taskResult},
                            {"tutorTurns", turns},
                            {"view", sessionView(out.state, store_->topicOf(id))}});
}

std::string Service::registerTest(testbank::AssembledTest test, testbank::ScoreContext context,
                                  const std::string& sessionId) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "t%06llu", static_cast<unsigned long long>(++testCounter_));
  test.testId = buf;
  TestEntry e{std::move(test), std::move(context), sessionId, false};
  appendTestLine(e);
  std::string id = e.test.testId;
  tests_[id] = std::move(e);
  return id;
}

ApiResponse Service::assembleSessionTests(const std::string& id, const json& body) {
  SessionState s = store_->get(id);
  const std::string untutored = requireString(body, "untutoredTopicId");
  const std::uint64_t seed = optionalSeed(body).value_or(mixSeed(fnv1a(id), 3));
  auto tests = testbank::assembleImmediateTests(bank_, s.topicId, untutored, seed);
  testbank::ScoreContext ctx{s.studentId, analytics::Condition::ITS, optionalInt(body, "week", 0),
                             optionalInt(body, "cycle", 0)};
  std::lock_guard lock(testsMutex_);
  const std::string pre = registerTest(tests.pre, ctx, id);
  const std::string post = registerTest(tests.post, ctx, id);
  return jsonResponse(201, {{"pre", clientTest(tests_.at(pre).test)}, {"post", clientTest(tests_.at(post).test)}});
}

ApiResponse Service::assembleDelayed(const json& body) {
  const std::string student = requireString(body, "studentId");
  if (!body.contains("topics") || !body["topics"].is_array())
    throw Error(ErrorCode::InvalidArgument, "topics must list the cycle's four topics", "topics");
  auto topics = body["topics"].get<std::vector<std::string>>();
  analytics::Condition condition = analytics::Condition::ITS;
  if (body.contains("condition")) {
    auto c = analytics::conditionFromName(body["condition"].get<std::string>());
    if (!c) throw Error(ErrorCode::InvalidArgument, "condition must be Class, Human or ITS", "condition");
    condition = *c;
  }
  testbank::ScoreContext ctx{student, condition, optionalInt(body, "week", 0), optionalInt(body, "cycle", 0)};

  std::lock_guard lock(testsMutex_);
  std::set<std::string> seen;
  for (const auto& [_, e] : tests_)
    if (e.context.participant == student && e.test.kind != analytics::TestKind::Delayed)
      seen.insert(e.test.items.begin(), e.test.items.end());
  const std::uint64_t seed = optionalSeed(body).value_or(mixSeed(fnv1a(student), tests_.size() + 5));
  auto test = testbank::assembleDelayedTest(bank_, topics, seen, seed);
  const std::string id = registerTest(std::move(test), ctx, {});
  return jsonResponse(201, clientTest(tests_.at(id).test));
}

ApiResponse Service::submitTest(const std::string& testId, const json& body,
                                const std::optional<std::string>& sessionId) {
  std::map<std::string, int> answers;
  if (body.contains("answers")) {
    if (!body["answers"].is_object()) throw Error(ErrorCode::InvalidArgument, "answers must be an object", "answers");
    for (const auto& [item, choice] : body["answers"].items()) {
      if (!choice.is_number_integer()) throw Error(ErrorCode::InvalidArgument, "choice must be an integer", item);
      answers[item] = choice.get<int>();
    }
  }
  std::lock_guard lock(testsMutex_);
  auto it = tests_.find(testId);
  if (it == tests_.end() || (sessionId && it->second.sessionId != *sessionId))
    throw Error(ErrorCode::UnknownTest, "unknown test " + testId, testId);
  TestEntry& e = it->second;
  if (e.submitted) throw Error(ErrorCode::Conflict, "test " + testId + " was already submitted", testId);
  auto scored = testbank::scoreTest(e.test, bank_, answers, e.context);
  e.submitted = true;
  appendTestLine(e);
  appendRecords(scored.records);
  records_.insert(records_.end(), scored.records.begin(), scored.records.end());
  return jsonResponse(200, {{"acknowledged", true}, {"testId", testId}, {"answered", answers.size()}});
}

}  // namespace tutorkit::service
