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

// Match execution over the turn timeline, breach detection, traces, and a
// brute-force backward-induction oracle for small integer instances.

#ifndef DDAB_GAME_H_
#define DDAB_GAME_H_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ddab/graph.h"
#include "ddab/rational.h"
#include "ddab/strategy.h"

namespace ddab {

// Smallest node where the attacker strictly outnumbers the defender.
std::optional<int> CheckBreach(const RationalVector& x, const RationalVector& y);

enum class Player { kDefender, kAttacker };
std::string PlayerName(Player p);

enum class Phase {
  kAwaitingAttackerInitial,  // t = -1: the attacker places y_{-1}
  kAwaitingDefender,
  kAwaitingAttacker,
  kFinished,
};
std::string PhaseName(Phase p);

struct Outcome {
  enum class Kind { kOngoing, kBreached, kDefended, kForfeit };
  Kind kind = Kind::kOngoing;
  std::optional<Player> winner;
  int time = 0;                   // breach / forfeit time, or T when defended
  std::optional<int> node;        // breach node
  std::string detail;             // forfeit diagnostic

  std::string Summary() const;
};

struct TurnRecord {
  int time = 0;
  Player player = Player::kDefender;
  RationalVector state;                    // allocation after the move
  std::optional<TransitionMatrix> action;  // absent for initial placements
  std::optional<Guarantee> guarantee;      // engine moves only
  std::optional<SubteamDecomposition> subteams;
};

// A move as submitted by a player: the next allocation, optionally with the
// action that realizes it.
struct PlayerMove {
  RationalVector next;
  std::optional<TransitionMatrix> action;
  std::optional<Guarantee> guarantee;
  std::optional<SubteamDecomposition> subteams;
};

// The authoritative match state. Moves are validated before they are
// applied; a rejected move leaves the state untouched.
class Match {
 public:
  // horizon: the last evaluated time step T; nullopt plays without end.
  Match(Graph g, Rational x_total, Rational y_total, std::optional<int> horizon);

  const Graph& graph() const { return graph_; }
  const Rational& x_total() const { return x_total_; }
  const Rational& y_total() const { return y_total_; }
  std::optional<int> horizon() const { return horizon_; }
  Phase phase() const { return phase_; }
  // Time step of the move awaited next (or of the last move when finished).
  int time() const { return time_; }
  const Outcome& outcome() const { return outcome_; }
  const std::vector<TurnRecord>& history() const { return history_; }
  std::optional<Player> ToMove() const;

  // Allocations after the last move of each player; empty before the first.
  const RationalVector& defender() const { return x_; }
  const RationalVector& attacker() const { return y_; }
  // Attacker allocation after its move at `time` (-1 is the placement).
  const RationalVector& AttackerAt(int time) const;

  // Returns the violated constraint on rejection, nullopt when applied.
  std::optional<std::string> Play(Player player, const PlayerMove& move);
  // Ends the match in favor of the opponent of `offender`.
  void Forfeit(Player offender, const std::string& why);

  // Describes why `move` is illegal for `player` right now.
  std::optional<std::string> Validate(Player player, const PlayerMove& move) const;

 private:
  Graph graph_;
  Rational x_total_;
  Rational y_total_;
  std::optional<int> horizon_;
  Phase phase_ = Phase::kAwaitingAttackerInitial;
  int time_ = -1;
  Outcome outcome_;
  RationalVector x_;
  RationalVector y_;
  std::map<int, RationalVector> attacker_by_time_;
  std::vector<TurnRecord> history_;
};

class Policy {
 public:
  virtual ~Policy() = default;
  virtual std::string id() const = 0;
  // Called whenever this player is to move.
  virtual PlayerMove Act(const Match& match) = 0;
};

// Alg. 6/7 defender (reduces to Alg. 2/3 against a concentrated attacker).
class EngineDefender : public Policy {
 public:
  explicit EngineDefender(std::shared_ptr<const Strategist> s) : s_(std::move(s)) {}
  std::string id() const override { return "engine"; }
  PlayerMove Act(const Match& match) override;

 private:
  std::shared_ptr<const Strategist> s_;
  std::optional<SubteamDecomposition> teams_;
};

// Alg. 4/5 no-splitting attacker.
class EngineAttacker : public Policy {
 public:
  explicit EngineAttacker(std::shared_ptr<const Strategist> s) : s_(std::move(s)) {}
  std::string id() const override { return "engine"; }
  PlayerMove Act(const Match& match) override;

 private:
  std::shared_ptr<const Strategist> s_;
};

// Plays back a fixed list of moves.
class RecordedPolicy : public Policy {
 public:
  RecordedPolicy(std::string id, std::vector<PlayerMove> moves)
      : id_(std::move(id)), moves_(std::move(moves)) {}
  std::string id() const override { return id_; }
  PlayerMove Act(const Match& match) override;

 private:
  std::string id_;
  std::vector<PlayerMove> moves_;
  std::size_t next_ = 0;
};

// Engine-side helpers shared with the service: the engine's recommended
// move for the player to move in `match`, computed from its history.
PlayerMove EngineHint(const Strategist& s, const Match& match);

struct GameTrace {
  std::string engine_version;
  std::string graph_text;
  std::string graph_digest;
  Rational x_total, y_total;
  std::optional<int> horizon;
  std::string defender_policy, attacker_policy;
  std::vector<TurnRecord> turns;
  Outcome outcome;

  // One JSON object per line: header, turns, outcome.
  std::string ToJsonLines() const;
  static GameTrace FromJsonLines(const std::string& text);
};

struct MatchOptions {
  // Steps played when the horizon is unbounded.
  int max_steps = 50;
};

GameTrace RunMatch(const Graph& g, const Rational& x_total, const Rational& y_total,
                   std::optional<int> horizon, Policy& defender, Policy& attacker,
                   const MatchOptions& options = {});

// Re-simulates a trace (engine policies recomputed, other policies fed the
// recorded moves) and reports the first difference, or nullopt when the
// replay is identical.
std::optional<std::string> ReplayTrace(const GameTrace& trace,
                                       std::uint64_t extreme_action_cap = kDefaultExtremeActionCap);

inline constexpr std::uint64_t kDefaultOracleStateCap = 5'000'000;

// Exhaustive integer-scale solver of the finite-horizon game.
class Oracle {
 public:
  Oracle(Graph g, int x_total, int y_total, int horizon, bool attacker_no_split,
         std::uint64_t state_cap = kDefaultOracleStateCap);

  // Whether the defender at x, facing attacker allocation y about to move,
  // survives `moves` more attacker moves (moves >= 1).
  bool Defends(const std::vector<int>& x, const std::vector<int>& y, int moves);
  // Per initial attacker allocation: true when the defender wins through T.
  std::map<std::vector<int>, bool> Solve();
  // True when the defender wins against every initial attacker allocation.
  bool DefenderWins();

  static std::vector<std::vector<int>> Compositions(int n, int total);
  std::size_t memo_size() const { return memo_.size(); }

 private:
  const std::vector<std::vector<int>>& Moves(const std::vector<int>& from, bool attacker);

  Graph g_;
  int x_total_, y_total_, horizon_;
  bool no_split_;
  std::uint64_t cap_;
  std::map<std::vector<int>, bool> memo_;
  std::map<std::pair<std::vector<int>, bool>, std::vector<std::vector<int>>> moves_;
};

// Smallest integer X at which the defender wins at Y = 1 through T.
int OracleCrr(const Graph& g, int horizon, std::uint64_t state_cap = kDefaultOracleStateCap);

}  // namespace ddab

#endif  // DDAB_GAME_H_
