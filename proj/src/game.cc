// Copyright 2026 The ddab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ddab/game.h"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

#include "ddab/error.h"
#include "ddab/qsets.h"
#include "ddab/version.h"
#include "json.hpp"

namespace ddab {

using nlohmann::json;

std::optional<int> CheckBreach(const RationalVector& x, const RationalVector& y) {
  if (x.size() != y.size()) throw ValidationError("dimension mismatch in breach check");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (y[i] > x[i]) return static_cast<int>(i);
  }
  return std::nullopt;
}

std::string PlayerName(Player p) { return p == Player::kDefender ? "defender" : "attacker"; }

std::string PhaseName(Phase p) {
  switch (p) {
    case Phase::kAwaitingAttackerInitial:
      return "awaiting-attacker-initial";
    case Phase::kAwaitingDefender:
      return "awaiting-defender";
    case Phase::kAwaitingAttacker:
      return "awaiting-attacker";
    case Phase::kFinished:
      return "evaluated";
  }
  return "evaluated";
}

std::string Outcome::Summary() const {
  switch (kind) {
    case Kind::kOngoing:
      return "ongoing";
    case Kind::kBreached:
      return "breached at node " + std::to_string(*node + 1) + " at t = " + std::to_string(time);
    case Kind::kDefended:
      return "defended through t = " + std::to_string(time);
    case Kind::kForfeit:
      return PlayerName(*winner == Player::kDefender ? Player::kAttacker : Player::kDefender) +
             " forfeited at t = " + std::to_string(time) + ": " + detail;
  }
  return "ongoing";
}

// ---------------------------------------------------------------------------
// Match

Match::Match(Graph g, Rational x_total, Rational y_total, std::optional<int> horizon)
    : graph_(std::move(g)),
      x_total_(std::move(x_total)),
      y_total_(std::move(y_total)),
      horizon_(horizon) {
  if (x_total_ < 0) throw ValidationError("nonnegativity: defender total is negative");
  if (y_total_ <= 0) throw ValidationError("attacker total must be positive");
  if (horizon_ && *horizon_ < 0) throw ValidationError("horizon must be nonnegative");
}

std::optional<Player> Match::ToMove() const {
  switch (phase_) {
    case Phase::kAwaitingAttackerInitial:
    case Phase::kAwaitingAttacker:
      return Player::kAttacker;
    case Phase::kAwaitingDefender:
      return Player::kDefender;
    case Phase::kFinished:
      return std::nullopt;
  }
  return std::nullopt;
}

const RationalVector& Match::AttackerAt(int time) const {
  auto it = attacker_by_time_.find(time);
  if (it == attacker_by_time_.end()) {
    throw ValidationError("no attacker state recorded for t = " + std::to_string(time));
  }
  return it->second;
}

std::optional<std::string> Match::Validate(Player player, const PlayerMove& move) const {
  if (phase_ == Phase::kFinished) return "turn: the match is over";
  if (ToMove() != player) return "turn: it is the " + PlayerName(*ToMove()) + "'s move";
  const int n = graph_.node_count();
  if (static_cast<int>(move.next.size()) != n) {
    return "dimension: allocation has " + std::to_string(move.next.size()) + " entries, graph has " +
           std::to_string(n) + " nodes";
  }
  for (int i = 0; i < n; ++i) {
    if (move.next[i] < 0) {
      return "nonnegativity: node " + std::to_string(i + 1) + " would hold " +
             ToString(move.next[i]);
    }
  }
  const Rational& total = player == Player::kDefender ? x_total_ : y_total_;
  if (Sum(move.next) != total) {
    return "column-sum: allocation totals " + ToString(Sum(move.next)) + " but the " +
           PlayerName(player) + " holds " + ToString(total);
  }
  const bool initial = (player == Player::kAttacker && phase_ == Phase::kAwaitingAttackerInitial) ||
                       (player == Player::kDefender && time_ == 0);
  if (initial) return std::nullopt;
  const RationalVector& prev = player == Player::kDefender ? x_ : y_;
  if (move.action) {
    if (auto why = move.action->ViolatedConstraint(graph_)) return *why;
    if (move.action->Apply(prev) != move.next) {
      return "reachability: the action does not produce the submitted allocation";
    }
    return std::nullopt;
  }
  try {
    ExtremeActionSet actions(graph_, kDefaultExtremeActionCap,
                             player == Player::kDefender ? ActionRole::kDefender
                                                         : ActionRole::kAttacker);
    ExtractAction(actions, prev, move.next);
  } catch (const InfeasibleError&) {
    return "reachability: " + ToString(move.next) + " is not reachable in one step from " +
           ToString(prev);
  }
  return std::nullopt;
}

std::optional<std::string> Match::Play(Player player, const PlayerMove& move) {
  if (auto why = Validate(player, move)) return why;
  TurnRecord rec;
  rec.time = time_;
  rec.player = player;
  rec.state = move.next;
  rec.action = move.action;
  rec.guarantee = move.guarantee;
  rec.subteams = move.subteams;
  const bool initial = (player == Player::kAttacker && phase_ == Phase::kAwaitingAttackerInitial) ||
                       (player == Player::kDefender && time_ == 0);
  if (!initial && !rec.action) {
    ExtremeActionSet actions(graph_, kDefaultExtremeActionCap,
                             player == Player::kDefender ? ActionRole::kDefender
                                                         : ActionRole::kAttacker);
    rec.action = ExtractAction(actions, player == Player::kDefender ? x_ : y_, move.next);
  }
  history_.push_back(std::move(rec));
  if (player == Player::kDefender) {
    x_ = move.next;
    phase_ = Phase::kAwaitingAttacker;
    return std::nullopt;
  }
  y_ = move.next;
  attacker_by_time_[time_] = y_;
  if (phase_ == Phase::kAwaitingAttackerInitial) {
    time_ = 0;
    phase_ = Phase::kAwaitingDefender;
    return std::nullopt;
  }
  if (auto node = CheckBreach(x_, y_)) {
    phase_ = Phase::kFinished;
    outcome_ = {Outcome::Kind::kBreached, Player::kAttacker, time_, *node, ""};
    return std::nullopt;
  }
  if (horizon_ && time_ >= *horizon_) {
    phase_ = Phase::kFinished;
    outcome_ = {Outcome::Kind::kDefended, Player::kDefender, time_, std::nullopt, ""};
    return std::nullopt;
  }
  ++time_;
  phase_ = Phase::kAwaitingDefender;
  return std::nullopt;
}

void Match::Forfeit(Player offender, const std::string& why) {
  phase_ = Phase::kFinished;
  outcome_ = {Outcome::Kind::kForfeit,
              offender == Player::kDefender ? Player::kAttacker : Player::kDefender, time_,
              std::nullopt, why};
}

// ---------------------------------------------------------------------------
// Policies

namespace {

std::optional<int> Remaining(const Match& m) {
  if (!m.horizon()) return std::nullopt;
  return *m.horizon() - m.time();
}

PlayerMove FromOutcome(const StrategyOutcome& o) {
  return {o.next, o.action, o.guarantee, std::nullopt};
}

// Worst (smallest) guarantee for an attacker combining per-node moves.
Guarantee Earliest(const Guarantee& a, const Guarantee& b) {
  using K = Guarantee::Kind;
  if (a.kind == K::kNone) return b;
  if (b.kind == K::kNone) return a;
  return a.k <= b.k ? a : b;
}

PlayerMove AttackerMove(const Strategist& s, const Match& m) {
  if (m.phase() == Phase::kAwaitingAttackerInitial) {
    return FromOutcome(s.AttackerInit(m.horizon()));
  }
  // Every occupied node routes its whole mass; for a concentrated attacker
  // this is exactly the single-node rule.
  const Graph& g = m.graph();
  const int n = g.node_count();
  const RationalVector& y = m.attacker();
  RationalVector next(n, 0);
  std::map<int, int> routes;
  std::optional<Guarantee> guarantee;
  for (int i = 0; i < n; ++i) {
    if (y[i] == 0) continue;
    StrategyOutcome o = s.AttackerFeedback(m.defender(), i, Remaining(m));
    routes[i] = *o.node;
    next[*o.node] += y[i];
    guarantee = guarantee ? Earliest(*guarantee, o.guarantee) : o.guarantee;
  }
  return {next, RoutingAction(g, routes, ActionRole::kAttacker), guarantee, std::nullopt};
}

std::optional<int> ConcentrationNode(const RationalVector& y) {
  std::optional<int> node;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] == 0) continue;
    if (node) return std::nullopt;
    node = static_cast<int>(i);
  }
  return node;
}

}  // namespace

PlayerMove EngineDefender::Act(const Match& m) {
  if (m.time() == 0) {
    auto [o, teams] = s_->DefenderInitGeneral(m.AttackerAt(-1), Remaining(m));
    teams_ = teams;
    PlayerMove mv = FromOutcome(o);
    mv.subteams = teams;
    return mv;
  }
  if (!teams_ || teams_->Combined() != m.defender()) {
    teams_.reset();
    return EngineHint(*s_, m);
  }
  auto [o, teams] = s_->DefenderFeedbackGeneral(*teams_, m.AttackerAt(m.time() - 2),
                                                m.AttackerAt(m.time() - 1), Remaining(m));
  teams_ = teams;
  PlayerMove mv = FromOutcome(o);
  mv.subteams = teams;
  return mv;
}

PlayerMove EngineAttacker::Act(const Match& m) { return AttackerMove(*s_, m); }

PlayerMove RecordedPolicy::Act(const Match&) {
  if (next_ >= moves_.size()) throw ValidationError("recorded policy has no more moves");
  return moves_[next_++];
}

PlayerMove EngineHint(const Strategist& s, const Match& m) {
  auto p = m.ToMove();
  if (!p) throw ValidationError("turn: the match is over");
  if (*p == Player::kAttacker) return AttackerMove(s, m);
  if (m.time() == 0) {
    auto [o, teams] = s.DefenderInitGeneral(m.AttackerAt(-1), Remaining(m));
    PlayerMove mv = FromOutcome(o);
    mv.subteams = teams;
    return mv;
  }
  const RationalVector& y = m.AttackerAt(m.time() - 1);
  if (auto node = ConcentrationNode(y)) {
    return FromOutcome(s.DefenderFeedbackNsp(m.defender(), *node, Remaining(m)));
  }
  // Without a subteam decomposition of the current allocation nothing is
  // certified; react to the heaviest attacker node.
  int heavy = 0;
  for (std::size_t i = 1; i < y.size(); ++i) {
    if (y[i] > y[heavy]) heavy = static_cast<int>(i);
  }
  PlayerMove mv = FromOutcome(s.DefenderFeedbackNsp(m.defender(), heavy, Remaining(m)));
  mv.guarantee = Guarantee::None();
  return mv;
}

GameTrace RunMatch(const Graph& g, const Rational& x_total, const Rational& y_total,
                   std::optional<int> horizon, Policy& defender, Policy& attacker,
                   const MatchOptions& options) {
  Match m(g, x_total, y_total, horizon);
  Outcome stopped;
  bool step_limit = false;
  while (m.phase() != Phase::kFinished) {
    if (!horizon && m.phase() == Phase::kAwaitingDefender && m.time() > options.max_steps) {
      step_limit = true;
      stopped = {Outcome::Kind::kDefended, Player::kDefender, m.time() - 1, std::nullopt,
                 "step limit reached"};
      break;
    }
    Player p = *m.ToMove();
    Policy& policy = p == Player::kDefender ? defender : attacker;
    PlayerMove mv;
    try {
      mv = policy.Act(m);
    } catch (const ValidationError& e) {
      m.Forfeit(p, e.what());
      break;
    } catch (const InfeasibleError& e) {
      m.Forfeit(p, e.what());
      break;
    }
    if (auto why = m.Play(p, mv)) m.Forfeit(p, *why);
  }
  GameTrace t;
  t.engine_version = kEngineVersion;
  t.graph_text = g.ToText();
  t.graph_digest = g.Digest();
  t.x_total = x_total;
  t.y_total = y_total;
  t.horizon = horizon;
  t.defender_policy = defender.id();
  t.attacker_policy = attacker.id();
  t.turns = m.history();
  t.outcome = step_limit ? stopped : m.outcome();
  return t;
}

// ---------------------------------------------------------------------------
// Trace serialization

namespace {

json VectorJson(const RationalVector& v) {
  json a = json::array();
  for (const auto& c : v) a.push_back(ToString(c));
  return a;
}

RationalVector VectorFromJson(const json& j) {
  RationalVector v;
  for (const auto& c : j) v.push_back(ParseRational(c.get<std::string>()));
  return v;
}

json MatrixJson(const TransitionMatrix& k) {
  json rows = json::array();
  for (const auto& r : k.Rows()) rows.push_back(VectorJson(r));
  return rows;
}

json GuaranteeJson(const Guarantee& g) {
  static const char* kinds[] = {"none", "finite", "indefinite"};
  return {{"kind", kinds[static_cast<int>(g.kind)]},
          {"k", g.k},
          {"at_least", g.at_least},
          {"text", g.ToString()}};
}

Guarantee GuaranteeFromJson(const json& j) {
  Guarantee g;
  const std::string kind = j.at("kind").get<std::string>();
  g.kind = kind == "finite"       ? Guarantee::Kind::kFinite
           : kind == "indefinite" ? Guarantee::Kind::kIndefinite
                                  : Guarantee::Kind::kNone;
  g.k = j.at("k").get<int>();
  g.at_least = j.at("at_least").get<bool>();
  return g;
}

json TurnJson(const TurnRecord& r) {
  json j = {{"type", "turn"},
            {"t", r.time},
            {"player", PlayerName(r.player)},
            {"state", VectorJson(r.state)}};
  j["action"] = r.action ? MatrixJson(*r.action) : json(nullptr);
  j["guarantee"] = r.guarantee ? GuaranteeJson(*r.guarantee) : json(nullptr);
  if (r.subteams) {
    json states = json::array();
    for (const auto& s : r.subteams->states) states.push_back(s ? VectorJson(*s) : json(nullptr));
    j["subteams"] = {{"weights", VectorJson(r.subteams->weights)},
                     {"states", states},
                     {"horizon_left", r.subteams->horizon_left}};
  } else {
    j["subteams"] = nullptr;
  }
  return j;
}

const char* OutcomeKindName(Outcome::Kind k) {
  switch (k) {
    case Outcome::Kind::kOngoing:
      return "ongoing";
    case Outcome::Kind::kBreached:
      return "breached";
    case Outcome::Kind::kDefended:
      return "defended";
    case Outcome::Kind::kForfeit:
      return "forfeit";
  }
  return "ongoing";
}

}  // namespace

json OutcomeJsonForTrace(const Outcome& o) {
  json j = {{"type", "outcome"}, {"result", OutcomeKindName(o.kind)}, {"t", o.time}};
  j["winner"] = o.winner ? json(PlayerName(*o.winner)) : json(nullptr);
  j["node"] = o.node ? json(*o.node + 1) : json(nullptr);
  j["detail"] = o.detail;
  j["summary"] = o.Summary();
  return j;
}

std::string GameTrace::ToJsonLines() const {
  std::ostringstream out;
  json header = {{"type", "header"},
                 {"engine_version", engine_version},
                 {"graph_digest", graph_digest},
                 {"graph", graph_text},
                 {"X", ToString(x_total)},
                 {"Y", ToString(y_total)},
                 {"defender_policy", defender_policy},
                 {"attacker_policy", attacker_policy}};
  header["T"] = horizon ? json(*horizon) : json("inf");
  out << header.dump() << '\n';
  for (const auto& r : turns) out << TurnJson(r).dump() << '\n';
  out << OutcomeJsonForTrace(outcome).dump() << '\n';
  return out.str();
}

GameTrace GameTrace::FromJsonLines(const std::string& text) {
  GameTrace t;
  std::istringstream in(text);
  std::string line;
  bool have_header = false, have_outcome = false;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw ValidationError("trace line " + std::to_string(n) + ": " + e.what());
    }
    try {
      const std::string type = j.at("type").get<std::string>();
      if (type == "header") {
        t.engine_version = j.at("engine_version").get<std::string>();
        t.graph_digest = j.at("graph_digest").get<std::string>();
        t.graph_text = j.at("graph").get<std::string>();
        t.x_total = ParseRational(j.at("X").get<std::string>());
        t.y_total = ParseRational(j.at("Y").get<std::string>());
        if (j.at("T").is_number()) t.horizon = j.at("T").get<int>();
        t.defender_policy = j.at("defender_policy").get<std::string>();
        t.attacker_policy = j.at("attacker_policy").get<std::string>();
        have_header = true;
      } else if (type == "turn") {
        TurnRecord r;
        r.time = j.at("t").get<int>();
        r.player = j.at("player").get<std::string>() == "defender" ? Player::kDefender
                                                                   : Player::kAttacker;
        r.state = VectorFromJson(j.at("state"));
        if (!j.at("action").is_null()) {
          std::vector<RationalVector> rows;
          for (const auto& row : j.at("action")) rows.push_back(VectorFromJson(row));
          r.action = TransitionMatrix::FromRows(
              rows, r.player == Player::kDefender ? ActionRole::kDefender : ActionRole::kAttacker);
        }
        if (!j.at("guarantee").is_null()) r.guarantee = GuaranteeFromJson(j.at("guarantee"));
        if (!j.at("subteams").is_null()) {
          SubteamDecomposition s;
          const json& sj = j.at("subteams");
          s.weights = VectorFromJson(sj.at("weights"));
          for (const auto& st : sj.at("states")) {
            s.states.push_back(st.is_null() ? std::nullopt
                                            : std::optional<RationalVector>(VectorFromJson(st)));
          }
          s.horizon_left = sj.at("horizon_left").get<int>();
          r.subteams = s;
        }
        t.turns.push_back(std::move(r));
      } else if (type == "outcome") {
        const std::string result = j.at("result").get<std::string>();
        t.outcome.kind = result == "breached"   ? Outcome::Kind::kBreached
                         : result == "defended" ? Outcome::Kind::kDefended
                         : result == "forfeit"  ? Outcome::Kind::kForfeit
                                                : Outcome::Kind::kOngoing;
        t.outcome.time = j.at("t").get<int>();
        if (!j.at("winner").is_null()) {
          t.outcome.winner = j.at("winner").get<std::string>() == "defender" ? Player::kDefender
                                                                             : Player::kAttacker;
        }
        if (!j.at("node").is_null()) t.outcome.node = j.at("node").get<int>() - 1;
        t.outcome.detail = j.at("detail").get<std::string>();
        have_outcome = true;
      } else {
        throw ValidationError("unknown record type '" + type + "'");
      }
    } catch (const json::exception& e) {
      throw ValidationError("trace line " + std::to_string(n) + ": " + e.what());
    }
  }
  if (!have_header || !have_outcome) throw ValidationError("trace lacks a header or outcome");
  return t;
}

std::optional<std::string> ReplayTrace(const GameTrace& trace, std::uint64_t cap) {
  Graph g = ParseGraph(trace.graph_text);
  if (g.Digest() != trace.graph_digest) return "graph digest mismatch";
  std::shared_ptr<Strategist> s;
  auto strategist = [&]() {
    if (!s) {
      QPropOptions opts;
      opts.horizon = trace.horizon;
      opts.extreme_action_cap = cap;
      auto q = std::make_shared<const QSetFamily>(QProp(g, opts));
      s = std::make_shared<Strategist>(q, trace.x_total, trace.y_total, cap);
    }
    return s;
  };
  auto make = [&](const std::string& id, Player p) -> std::unique_ptr<Policy> {
    if (id == "engine") {
      if (p == Player::kDefender) return std::make_unique<EngineDefender>(strategist());
      return std::make_unique<EngineAttacker>(strategist());
    }
    std::vector<PlayerMove> moves;
    for (const auto& r : trace.turns) {
      if (r.player == p) moves.push_back({r.state, r.action, r.guarantee, r.subteams});
    }
    return std::make_unique<RecordedPolicy>(id, std::move(moves));
  };
  auto d = make(trace.defender_policy, Player::kDefender);
  auto a = make(trace.attacker_policy, Player::kAttacker);
  GameTrace again = RunMatch(g, trace.x_total, trace.y_total, trace.horizon, *d, *a);
  again.engine_version = trace.engine_version;
  std::istringstream lhs(trace.ToJsonLines()), rhs(again.ToJsonLines());
  std::string l, r;
  int line = 0;
  while (true) {
    ++line;
    bool has_l = static_cast<bool>(std::getline(lhs, l));
    bool has_r = static_cast<bool>(std::getline(rhs, r));
    if (!has_l && !has_r) return std::nullopt;
    if (has_l != has_r || l != r) {
      return "record " + std::to_string(line) + " differs:\n  trace:  " + (has_l ? l : "<end>") +
             "\n  replay: " + (has_r ? r : "<end>");
    }
  }
}

// ---------------------------------------------------------------------------
// Oracle

Oracle::Oracle(Graph g, int x_total, int y_total, int horizon, bool attacker_no_split,
               std::uint64_t state_cap)
    : g_(std::move(g)),
      x_total_(x_total),
      y_total_(y_total),
      horizon_(horizon),
      no_split_(attacker_no_split),
      cap_(state_cap) {
  if (x_total < 0 || y_total <= 0 || horizon < 0) {
    throw ValidationError("oracle needs X >= 0, Y > 0 and T >= 0");
  }
}

std::vector<std::vector<int>> Oracle::Compositions(int n, int total) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(n, 0);
  std::function<void(int, int)> rec = [&](int pos, int rem) {
    if (pos == n - 1) {
      cur[pos] = rem;
      out.push_back(cur);
      return;
    }
    for (int a = 0; a <= rem; ++a) {
      cur[pos] = a;
      rec(pos + 1, rem - a);
    }
  };
  rec(0, total);
  return out;
}

const std::vector<std::vector<int>>& Oracle::Moves(const std::vector<int>& from, bool attacker) {
  const bool extreme = attacker && no_split_;
  auto key = std::make_pair(from, extreme);
  auto it = moves_.find(key);
  if (it != moves_.end()) return it->second;
  const int n = g_.node_count();
  std::set<std::vector<int>> images;
  std::vector<int> cur(n, 0);
  // Column by column: either the whole mass goes to one out-neighbor
  // (extreme) or every integer split along out-edges.
  std::function<void(int)> col = [&](int j) {
    if (j == n) {
      images.insert(cur);
      return;
    }
    const auto& out = g_.OutNeighbors(j);
    if (from[j] == 0) {
      col(j + 1);
      return;
    }
    if (extreme) {
      for (int to : out) {
        cur[to] += from[j];
        col(j + 1);
        cur[to] -= from[j];
      }
      return;
    }
    std::function<void(std::size_t, int)> split = [&](std::size_t t, int rem) {
      if (t + 1 == out.size()) {
        cur[out[t]] += rem;
        col(j + 1);
        cur[out[t]] -= rem;
        return;
      }
      for (int a = 0; a <= rem; ++a) {
        cur[out[t]] += a;
        split(t + 1, rem - a);
        cur[out[t]] -= a;
      }
    };
    split(0, from[j]);
  };
  col(0);
  return moves_.emplace(key, std::vector<std::vector<int>>(images.begin(), images.end()))
      .first->second;
}

bool Oracle::Defends(const std::vector<int>& x, const std::vector<int>& y, int moves) {
  std::vector<int> key = x;
  key.insert(key.end(), y.begin(), y.end());
  key.push_back(moves);
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;
  if (memo_.size() >= cap_) {
    throw CapExceededError("oracle state cap of " + std::to_string(cap_) + " exceeded");
  }
  bool ok = true;
  // Copy: recursive calls may grow the move cache.
  const std::vector<std::vector<int>> attacker = Moves(y, true);
  for (const auto& y2 : attacker) {
    bool safe = true;
    for (std::size_t i = 0; i < x.size() && safe; ++i) safe = x[i] >= y2[i];
    if (!safe) {
      ok = false;
      break;
    }
    if (moves == 1) continue;
    const std::vector<std::vector<int>> defender = Moves(x, false);
    bool any = false;
    for (const auto& x2 : defender) {
      if (Defends(x2, y2, moves - 1)) {
        any = true;
        break;
      }
    }
    if (!any) {
      ok = false;
      break;
    }
  }
  memo_.emplace(std::move(key), ok);
  return ok;
}

std::map<std::vector<int>, bool> Oracle::Solve() {
  const int n = g_.node_count();
  std::vector<std::vector<int>> starts;
  if (no_split_) {
    for (int i = 0; i < n; ++i) {
      std::vector<int> y(n, 0);
      y[i] = y_total_;
      starts.push_back(y);
    }
  } else {
    starts = Compositions(n, y_total_);
  }
  const auto placements = Compositions(n, x_total_);
  std::map<std::vector<int>, bool> result;
  for (const auto& y : starts) {
    bool win = false;
    for (const auto& x : placements) {
      if (Defends(x, y, horizon_ + 1)) {
        win = true;
        break;
      }
    }
    result[y] = win;
  }
  return result;
}

bool Oracle::DefenderWins() {
  for (const auto& [y, win] : Solve()) {
    if (!win) return false;
  }
  return true;
}

int OracleCrr(const Graph& g, int horizon, std::uint64_t state_cap) {
  int lo = 0;
  int hi = CrrBounds(g).second;  // the patrol bound always suffices
  while (lo < hi) {
    const int mid = (lo + hi) / 2;
    Oracle o(g, mid, 1, horizon, false, state_cap);
    if (o.DefenderWins()) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return lo;
}

}  // namespace ddab
