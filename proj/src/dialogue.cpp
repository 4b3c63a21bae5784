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
#include "tutorkit/dialogue.hpp"

#include <algorithm>
#include <array>
#include <sstream>

#include "tutorkit/error.hpp"
#include "tutorkit/text.hpp"

namespace tutorkit {

namespace {
constexpr std::array<std::pair<Phase, std::string_view>, 8> kPhaseNames{{
    {Phase::Lecture, "Lecture"},
    {Phase::Summary, "Summary"},
    {Phase::ConceptMaps1, "ConceptMaps1"},
    {Phase::Scaffolding1, "Scaffolding1"},
    {Phase::ConceptMaps2, "ConceptMaps2"},
    {Phase::Scaffolding2, "Scaffolding2"},
    {Phase::Cloze, "Cloze"},
    {Phase::Complete, "Complete"},
}};
}  // namespace

std::string_view phaseName(Phase phase) {
  for (const auto& [p, n] : kPhaseNames)
    if (p == phase) return n;
  return "Complete";
}

std::optional<Phase> phaseFromName(std::string_view name) {
  for (const auto& [p, n] : kPhaseNames)
    if (n == name) return p;
  return std::nullopt;
}

}  // namespace tutorkit

namespace tutorkit::dialogue {

using curriculum::QuestionKind;
using curriculum::QuestionTemplate;
using nlohmann::json;
using speechact::Kind;

std::string_view feedbackLevelName(FeedbackLevel level) {
  switch (level) {
    case FeedbackLevel::Negative: return "Negative";
    case FeedbackLevel::NegativeNeutral: return "NegativeNeutral";
    case FeedbackLevel::Neutral: return "Neutral";
    case FeedbackLevel::PositiveNeutral: return "PositiveNeutral";
    case FeedbackLevel::Positive: return "Positive";
  }
  return "Neutral";
}

namespace {

std::optional<FeedbackLevel> feedbackLevelFromName(std::string_view name) {
  for (auto l : {FeedbackLevel::Negative, FeedbackLevel::NegativeNeutral, FeedbackLevel::Neutral,
                 FeedbackLevel::PositiveNeutral, FeedbackLevel::Positive})
    if (feedbackLevelName(l) == name) return l;
  return std::nullopt;
}

}  // namespace

FeedbackLevel feedbackLevel(double score) {
  if (!(score >= 0.0 && score <= 1.0))
    throw Error(ErrorCode::OutOfRange, "score outside [0,1]: " + std::to_string(score));
  if (score < 0.2) return FeedbackLevel::Negative;
  if (score < 0.4) return FeedbackLevel::NegativeNeutral;
  if (score < 0.6) return FeedbackLevel::Neutral;
  if (score < 0.8) return FeedbackLevel::PositiveNeutral;
  return FeedbackLevel::Positive;
}

std::string_view mediaDirectiveName(MediaDirective d) {
  switch (d) {
    case MediaDirective::None: return "none";
    case MediaDirective::Clear: return "clear";
    case MediaDirective::Reset: return "reset";
  }
  return "none";
}

std::string TutorTurn::spokenText() const {
  std::string out;
  for (const auto& s : speech) {
    if (!out.empty()) out.push_back(' ');
    out += s;
  }
  if (solidarity) {
    if (!out.empty()) out.push_back(' ');
    out += *solidarity;
  }
  return out;
}

namespace {

json questionJson(const QuestionTemplate& q) {
  return {{"id", q.id},
          {"kind", curriculum::questionKindName(q.kind)},
          {"text", q.text},
          {"expectedAnswer", q.expectedAnswer},
          {"conceptId", q.conceptId},
          {"ordinal", q.ordinal}};
}

QuestionTemplate questionFromJson(const json& j) {
  QuestionTemplate q;
  q.id = j.at("id").get<std::string>();
  q.kind = *curriculum::questionKindFromName(j.at("kind").get<std::string>());
  q.text = j.at("text").get<std::string>();
  q.expectedAnswer = j.at("expectedAnswer").get<std::string>();
  q.conceptId = j.at("conceptId").get<std::string>();
  q.ordinal = j.at("ordinal").get<int>();
  return q;
}

}  // namespace

json tutorTurnToJson(const TutorTurn& turn) {
  json j{{"speech", turn.speech},
         {"mediaReveals", turn.mediaReveals},
         {"phaseHint", phaseName(turn.phaseHint)},
         {"mediaDirective", mediaDirectiveName(turn.mediaDirective)}};
  j["feedback"] = turn.feedback ? json(feedbackLevelName(*turn.feedback)) : json(nullptr);
  j["solidarity"] = turn.solidarity ? json(*turn.solidarity) : json(nullptr);
  j["question"] = turn.question ? questionJson(*turn.question) : json(nullptr);
  return j;
}

TutorTurn tutorTurnFromJson(const json& j) {
  TutorTurn t;
  t.speech = j.at("speech").get<std::vector<std::string>>();
  t.mediaReveals = j.at("mediaReveals").get<std::vector<std::string>>();
  t.phaseHint = *phaseFromName(j.at("phaseHint").get<std::string>());
  std::string d = j.at("mediaDirective").get<std::string>();
  t.mediaDirective = d == "clear" ? MediaDirective::Clear
                     : d == "reset" ? MediaDirective::Reset
                                    : MediaDirective::None;
  if (!j.at("feedback").is_null()) t.feedback = feedbackLevelFromName(j["feedback"].get<std::string>());
  if (!j.at("solidarity").is_null()) t.solidarity = j["solidarity"].get<std::string>();
  if (!j.at("question").is_null()) t.question = questionFromJson(j["question"]);
  return t;
}

Resources Resources::bundled() {
  std::vector<std::string> solidarity;
  std::istringstream in(readTextFile(resourcePath("solidarity.txt")));
  std::string line;
  while (std::getline(in, line))
    if (!line.empty() && line.front() != '#') solidarity.push_back(line);
  if (solidarity.empty())
    throw Error(ErrorCode::SchemaViolation, "solidarity list is empty", "solidarity.txt");
  return Resources{TemplateSet::fromFile(resourcePath("dialogue_templates.tsv")),
                   std::move(solidarity), speechact::Classifier::bundled()};
}

json memoryToJson(const Memory& m) {
  return {{"lastSpeech", m.lastSpeech},
          {"solidarityCursor", m.solidarityCursor},
          {"phraseCursor", m.phraseCursor}};
}

Memory memoryFromJson(const json& j) {
  return Memory{j.at("lastSpeech").get<std::vector<std::string>>(),
                j.at("solidarityCursor").get<std::size_t>(),
                j.at("phraseCursor").get<std::size_t>()};
}

std::string generatePreview(const curriculum::Concept& item, std::string_view topicName,
                            const TemplateSet& templates) {
  std::string focus = item.focus.empty() ? std::string(topicName) : item.focus;
  return fillTemplate(templates.pick("preview"), {{"focus", focus}});
}

namespace {

std::string statementFor(const Context& ctx) {
  if (ctx.current) return ctx.current->statement;
  if (ctx.topic) return ctx.topic->preview;
  return {};
}

void appendResume(TutorTurn& turn, const Context& ctx, const Resources& res) {
  if (!ctx.pending) return;
  turn.speech.push_back(fillTemplate(res.templates.pick("resume"), {{"question", ctx.pending->text}}));
  turn.question = ctx.pending;
}

}  // namespace

TutorTurn handleInitiative(const speechact::SpeechAct& act, const Context& ctx,
                           const Resources& res, Memory& memory) {
  TutorTurn turn;
  turn.phaseHint = ctx.phase;
  switch (act.kind) {
    case Kind::Answer:
      throw Error(ErrorCode::InvalidArgument, "answers are not initiatives");
    case Kind::RepeatRequest:
      turn.speech = memory.lastSpeech;
      turn.question = ctx.pending;
      break;
    case Kind::MetacognitiveDeficit:
      turn.speech.push_back(
          fillTemplate(res.templates.pick("reexplain"), {{"statement", statementFor(ctx)}}));
      appendResume(turn, ctx, res);
      break;
    case Kind::ClarificationQuestion:
      turn.speech.push_back(
          fillTemplate(res.templates.pick("clarify"), {{"statement", statementFor(ctx)}}));
      appendResume(turn, ctx, res);
      break;
    case Kind::Affirmation:
    case Kind::Negation:
      turn.speech.push_back(res.templates.pick("acknowledge", memory.phraseCursor++));
      appendResume(turn, ctx, res);
      break;
    case Kind::Other:
      if (ctx.pending) {
        turn.speech.push_back(
            fillTemplate(res.templates.pick("reprompt"), {{"question", ctx.pending->text}}));
        turn.question = ctx.pending;
      } else {
        turn.speech.push_back(res.templates.pick("reprompt_open"));
      }
      break;
  }
  return turn;
}

TutorTurn feedbackTurn(double score, Phase phase, const Resources& res, Memory& memory) {
  TutorTurn turn;
  turn.phaseHint = phase;
  FeedbackLevel level = feedbackLevel(score);
  turn.feedback = level;
  std::string key = "feedback." + std::string(feedbackLevelName(level));
  turn.speech.push_back(res.templates.pick(key, memory.phraseCursor++));
  if (level == FeedbackLevel::Negative)
    turn.solidarity = res.solidarity[memory.solidarityCursor++ % res.solidarity.size()];
  return turn;
}

double scoreAnswer(const QuestionTemplate& q, std::string_view utterance,
                   const speechact::SpeechAct& act) {
  if (auto yn = curriculum::yesNoClass(q.expectedAnswer);
      yn && (q.kind == QuestionKind::Verification || q.kind == QuestionKind::ComprehensionGauging)) {
    if (act.kind == Kind::Affirmation) return *yn == curriculum::YesNo::Yes ? 1.0 : 0.0;
    if (act.kind == Kind::Negation) return *yn == curriculum::YesNo::No ? 1.0 : 0.0;
    return 0.0;
  }
  if (act.kind == Kind::MetacognitiveDeficit) return 0.0;
  return text::assess(utterance, {q.expectedAnswer, text::contentKeywords(q.expectedAnswer)}).value;
}

bool consumesQuestion(Kind kind) {
  return kind == Kind::Answer || kind == Kind::Affirmation || kind == Kind::Negation ||
         kind == Kind::MetacognitiveDeficit;
}

// ---- Collaborative lecture ----

json lectureStateToJson(const LectureState& s) {
  return {{"previewed", s.previewed},
          {"block", s.block},
          {"segment", s.segment},
          {"awaiting", s.awaiting}};
}

LectureState lectureStateFromJson(const json& j) {
  return LectureState{j.at("previewed").get<bool>(), j.at("block").get<std::size_t>(),
                      j.at("segment").get<std::size_t>(), j.at("awaiting").get<bool>()};
}

bool lectureFinished(const LectureState& state, const curriculum::Topic& topic) {
  return state.previewed && !state.awaiting && state.block >= topic.lectureScript.size();
}

LectureResult lectureStep(const curriculum::Topic& topic, const LectureState& state,
                          const std::optional<std::string>& input, const Resources& res,
                          Memory& memory) {
  LectureResult out{state, {}, std::nullopt, std::nullopt};
  out.turn.phaseHint = Phase::Lecture;

  const curriculum::LectureStep* block =
      state.block < topic.lectureScript.size() ? &topic.lectureScript[state.block] : nullptr;
  Context ctx{Phase::Lecture, &topic, block ? topic.findConcept(block->conceptId) : nullptr,
              std::nullopt};
  if (state.awaiting && block) ctx.pending = block->question;

  if (input) {
    speechact::SpeechAct act = res.classifier.classify(*input);
    out.act = act;
    if (!state.awaiting || !consumesQuestion(act.kind)) {
      if (act.kind == Kind::Answer) act.kind = Kind::Other;
      out.turn = handleInitiative(act, ctx, res, memory);
      memory.lastSpeech = out.turn.speech;
      return out;
    }
    const QuestionTemplate& q = block->question;
    if (q.kind == QuestionKind::ComprehensionGauging) {
      // Gauging questions are not graded; a "no" or a stated gap earns a
      // second explanation.
      if (act.kind == Kind::Negation || act.kind == Kind::MetacognitiveDeficit) {
        out.turn.speech.push_back(
            fillTemplate(res.templates.pick("reexplain"), {{"statement", statementFor(ctx)}}));
      } else {
        out.turn.speech.push_back(res.templates.pick("acknowledge", memory.phraseCursor++));
      }
    } else {
      double score = scoreAnswer(q, *input, act);
      out.score = score;
      out.turn = feedbackTurn(score, Phase::Lecture, res, memory);
      if (act.kind == Kind::MetacognitiveDeficit)
        out.turn.speech.push_back(
            fillTemplate(res.templates.pick("reexplain"), {{"statement", statementFor(ctx)}}));
      else if (score < kMasteryThreshold)
        out.turn.speech.push_back(
            fillTemplate(res.templates.pick("lecture_answer"), {{"answer", q.expectedAnswer}}));
    }
    out.state.awaiting = false;
    out.state.block++;
    out.state.segment = 0;
    memory.lastSpeech = out.turn.speech;
    return out;
  }

  if (state.awaiting) {
    speechact::SpeechAct silent;
    out.turn = handleInitiative(silent, ctx, res, memory);
    memory.lastSpeech = out.turn.speech;
    return out;
  }

  if (!state.previewed) {
    out.turn.speech.push_back(topic.preview);
    out.state.previewed = true;
    memory.lastSpeech = out.turn.speech;
    return out;
  }

  if (!block) throw Error(ErrorCode::ScriptExhausted, "lecture script exhausted", topic.id);
  const auto& seg = block->segments.at(state.segment);
  out.turn.speech.push_back(seg.text);
  out.turn.mediaReveals = seg.reveals;
  if (state.segment + 1 == block->segments.size()) {
    out.turn.speech.push_back(block->question.text);
    out.turn.question = block->question;
    out.state.awaiting = true;
  } else {
    out.state.segment++;
  }
  memory.lastSpeech = out.turn.speech;
  return out;
}

// ---- Scaffolding ----

std::string_view cycleStepName(CycleStep step) {
  switch (step) {
    case CycleStep::AwaitPrompt: return "AwaitPrompt";
    case CycleStep::AwaitPromptAnswer: return "AwaitPromptAnswer";
    case CycleStep::AwaitVQ: return "AwaitVQ";
    case CycleStep::AwaitVQAnswer: return "AwaitVQAnswer";
    case CycleStep::Done: return "Done";
  }
  return "Done";
}

namespace {

CycleStep cycleStepFromName(std::string_view name) {
  for (auto s : {CycleStep::AwaitPrompt, CycleStep::AwaitPromptAnswer, CycleStep::AwaitVQ,
                 CycleStep::AwaitVQAnswer, CycleStep::Done})
    if (cycleStepName(s) == name) return s;
  throw Error(ErrorCode::SchemaViolation, "unknown cycle step " + std::string(name), "step");
}

json cycleToJson(const CycleState& c) {
  return {{"conceptId", c.conceptId},
          {"step", cycleStepName(c.step)},
          {"promptId", c.promptId},
          {"vqId", c.vqId},
          {"moves", c.moves}};
}

CycleState cycleFromJson(const json& j) {
  return CycleState{j.at("conceptId").get<std::string>(),
                    cycleStepFromName(j.at("step").get<std::string>()),
                    j.at("promptId").get<std::string>(), j.at("vqId").get<std::string>(),
                    j.at("moves").get<std::vector<std::string>>()};
}

Phase scaffoldPhase(const ScaffoldState& s) {
  return s.round >= 2 ? Phase::Scaffolding2 : Phase::Scaffolding1;
}

const QuestionTemplate& findById(const std::vector<QuestionTemplate>& qs, const std::string& id) {
  for (const auto& q : qs)
    if (q.id == id) return q;
  throw Error(ErrorCode::DanglingReference, "unknown question " + id, id);
}

}  // namespace

json scaffoldStateToJson(const ScaffoldState& s) {
  json finished = json::array();
  for (const auto& c : s.finishedCycles) finished.push_back(cycleToJson(c));
  return {{"round", s.round},
          {"agenda", s.agenda},
          {"cycle", s.cycle ? cycleToJson(*s.cycle) : json(nullptr)},
          {"revealed", s.revealed},
          {"finishedCycles", finished}};
}

ScaffoldState scaffoldStateFromJson(const json& j) {
  ScaffoldState s;
  s.round = j.at("round").get<int>();
  s.agenda = j.at("agenda").get<std::vector<std::string>>();
  if (!j.at("cycle").is_null()) s.cycle = cycleFromJson(j["cycle"]);
  s.revealed = j.at("revealed").get<std::vector<std::string>>();
  for (const auto& c : j.at("finishedCycles")) s.finishedCycles.push_back(cycleFromJson(c));
  return s;
}

bool scaffoldTutorToMove(const ScaffoldState& s) {
  if (!s.cycle || s.cycle->step == CycleStep::Done) return !s.agenda.empty();
  return s.cycle->step == CycleStep::AwaitPrompt || s.cycle->step == CycleStep::AwaitVQ;
}

bool scaffoldRoundFinished(const ScaffoldState& s) {
  return s.agenda.empty() && (!s.cycle || s.cycle->step == CycleStep::Done);
}

ScaffoldResult scaffoldStep(const curriculum::Topic& topic, const ScaffoldState& state,
                            const std::optional<std::string>& input,
                            const retrieval::DialogueBasis& basis,
                            const session::StudentModel& model, const Resources& res,
                            Memory& memory, const ScaffoldThresholds& th,
                            std::int64_t timestamp) {
  ScaffoldResult out{state, {}, model, std::nullopt, std::nullopt, {}};
  ScaffoldState& st = out.state;
  const Phase phase = scaffoldPhase(st);
  out.turn.phaseHint = phase;

  if (!st.cycle || st.cycle->step == CycleStep::Done) {
    if (st.cycle) {
      st.finishedCycles.push_back(*st.cycle);
      st.cycle.reset();
    }
    if (st.agenda.empty()) throw Error(ErrorCode::EmptyAgenda, "scaffold agenda is empty");
    std::vector<QuestionTemplate> candidates;
    for (const auto& id : st.agenda)
      for (const auto& q : topic.conceptById(id).prompts) candidates.push_back(q);
    const QuestionTemplate& chosen = retrieval::selectQuestion(candidates, model, basis);
    st.cycle = CycleState{chosen.conceptId, CycleStep::AwaitPrompt, chosen.id, {}, {}};
  }

  CycleState& cycle = *st.cycle;
  const curriculum::Concept& cpt = topic.conceptById(cycle.conceptId);
  Context ctx{phase, &topic, &cpt, std::nullopt};
  if (cycle.step == CycleStep::AwaitPromptAnswer)
    ctx.pending = findById(cpt.prompts, cycle.promptId);
  if (cycle.step == CycleStep::AwaitVQAnswer)
    ctx.pending = findById(cpt.verificationQuestions, cycle.vqId);

  auto finish = [&](TutorTurn turn) {
    memory.lastSpeech = turn.speech;
    out.turn = std::move(turn);
    return out;
  };

  switch (cycle.step) {
    case CycleStep::AwaitPrompt: {
      if (input) {
        speechact::SpeechAct act = res.classifier.classify(*input);
        out.act = act;
        if (act.kind == Kind::Answer) act.kind = Kind::Other;
        return finish(handleInitiative(act, ctx, res, memory));
      }
      const QuestionTemplate& q = findById(cpt.prompts, cycle.promptId);
      TutorTurn turn;
      turn.phaseHint = phase;
      if (!retrieval::inCommonGround(basis, cpt, th.commonGround))
        turn.speech.push_back(generatePreview(cpt, topic.name, res.templates));
      turn.speech.push_back(q.text);
      turn.question = q;
      cycle.step = CycleStep::AwaitPromptAnswer;
      cycle.moves.push_back("Prompt");
      return finish(std::move(turn));
    }
    case CycleStep::AwaitVQ: {
      if (input) {
        speechact::SpeechAct act = res.classifier.classify(*input);
        out.act = act;
        if (act.kind == Kind::Answer) act.kind = Kind::Other;
        return finish(handleInitiative(act, ctx, res, memory));
      }
      const QuestionTemplate& q =
          retrieval::selectQuestion(cpt.verificationQuestions, model, basis);
      cycle.vqId = q.id;
      TutorTurn turn;
      turn.phaseHint = phase;
      turn.speech.push_back(q.text);
      turn.question = q;
      cycle.step = CycleStep::AwaitVQAnswer;
      cycle.moves.push_back("VQ");
      return finish(std::move(turn));
    }
    case CycleStep::AwaitPromptAnswer:
    case CycleStep::AwaitVQAnswer: {
      speechact::SpeechAct act =
          input ? res.classifier.classify(*input) : speechact::SpeechAct{};
      if (input) out.act = act;
      if (!consumesQuestion(act.kind)) return finish(handleInitiative(act, ctx, res, memory));

      double score = scoreAnswer(*ctx.pending, input.value_or(""), act);
      out.score = score;
      out.assessedConceptId = cpt.id;
      out.model = session::coverageUpdate(out.model, cpt.id, score,
                                          session::EvidenceSource::Scaffold, th.summary, timestamp);
      TutorTurn turn = feedbackTurn(score, phase, res, memory);
      if (act.kind == Kind::MetacognitiveDeficit)
        turn.speech.push_back(
            fillTemplate(res.templates.pick("reexplain"), {{"statement", cpt.statement}}));
      cycle.moves.push_back("Feedback");

      bool mastered = out.model.coverage(cpt.id) >= th.mastery;
      if (mastered) {
        for (const auto& m : cpt.mediaRefs) {
          if (std::find(st.revealed.begin(), st.revealed.end(), m) == st.revealed.end()) {
            st.revealed.push_back(m);
            turn.mediaReveals.push_back(m);
          }
        }
      }
      if (cycle.step == CycleStep::AwaitPromptAnswer && score < th.mastery) {
        cycle.step = CycleStep::AwaitVQ;
      } else {
        cycle.step = CycleStep::Done;
        st.agenda.erase(std::remove(st.agenda.begin(), st.agenda.end(), cpt.id),
                        st.agenda.end());
      }
      return finish(std::move(turn));
    }
    case CycleStep::Done:
      break;
  }
  throw Error(ErrorCode::EmptyAgenda, "no open scaffold cycle");
}

}  // namespace tutorkit::dialogue
