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

#include "ddab/service.h"

#include <chrono>
#include <filesystem>
#include <fstream>

#include "ddab/error.h"
#include "ddab/version.h"
#include "httplib.h"

namespace ddab {

// ---------------------------------------------------------------------------
// Wire helpers

namespace {

Json IntegerToJson(const Integer& z) {
  if (z.fits_slong_p()) return Json(z.get_si());
  return Json(z.get_str());
}

Integer IntegerFromJson(const Json& j) {
  if (j.is_number_integer()) return Integer(std::to_string(j.get<long long>()));
  if (j.is_string()) return Integer(j.get<std::string>());
  throw ValidationError("expected an integer, got " + j.dump());
}

Json GuaranteeJson(const Guarantee& g) {
  std::string kind = g.kind == Guarantee::Kind::kNone      ? "none"
                     : g.kind == Guarantee::Kind::kFinite ? "finite"
                                                          : "indefinite";
  return {{"kind", kind}, {"k", g.k}, {"at_least", g.at_least}, {"text", g.ToString()}};
}

Json MatrixJson(const TransitionMatrix& k) {
  Json rows = Json::array();
  for (const auto& row : k.Rows()) rows.push_back(VectorToJson(row));
  return rows;
}

Json OutcomeJson(const Outcome& o) {
  static const char* kKinds[] = {"ongoing", "breached", "defended", "forfeit"};
  Json j = {{"kind", kKinds[static_cast<int>(o.kind)]}, {"time", o.time},
            {"summary", o.Summary()}};
  j["winner"] = o.winner ? Json(PlayerName(*o.winner)) : Json();
  j["node"] = o.node ? Json(*o.node + 1) : Json();
  if (!o.detail.empty()) j["detail"] = o.detail;
  return j;
}

Json TurnJson(const TurnRecord& t) {
  Json j = {{"time", t.time}, {"player", PlayerName(t.player)}, {"state", VectorToJson(t.state)}};
  j["action"] = t.action ? MatrixJson(*t.action) : Json();
  j["guarantee"] = t.guarantee ? GuaranteeJson(*t.guarantee) : Json();
  return j;
}

Player ParsePlayer(const Json& j) {
  if (j.is_string()) {
    if (j == "defender") return Player::kDefender;
    if (j == "attacker") return Player::kAttacker;
  }
  throw ValidationError("player must be \"defender\" or \"attacker\"");
}

std::optional<int> ParseHorizon(const Json& body) {
  if (!body.contains("T") || body["T"].is_null()) return std::nullopt;
  const Json& t = body["T"];
  if (t.is_string() && (t == "inf" || t == "infinity")) return std::nullopt;
  if (t.is_number_integer() && t.get<long long>() >= 0 && t.get<long long>() < 1'000'000) {
    return static_cast<int>(t.get<long long>());
  }
  throw ValidationError("T must be a nonnegative integer or \"inf\"");
}

Player Other(Player p) { return p == Player::kDefender ? Player::kAttacker : Player::kDefender; }

}  // namespace

Json RationalToJson(const Rational& r) {
  return {{"num", IntegerToJson(r.get_num())},
          {"den", IntegerToJson(r.get_den())},
          {"decimal", ToDecimal(r)}};
}

Json VectorToJson(const RationalVector& v) {
  Json a = Json::array();
  for (const auto& r : v) a.push_back(RationalToJson(r));
  return a;
}

Rational RationalFromJson(const Json& j) {
  if (j.is_object()) {
    if (!j.contains("num") || !j.contains("den")) {
      throw ValidationError("rational object needs \"num\" and \"den\"");
    }
    Integer den = IntegerFromJson(j["den"]);
    if (den == 0) throw ValidationError("rational with zero denominator");
    return Fraction(IntegerFromJson(j["num"]), den);
  }
  if (j.is_string()) return ParseRational(j.get<std::string>());
  if (j.is_number()) return ParseRational(j.dump());
  throw ValidationError("expected a rational, got " + j.dump());
}

RationalVector VectorFromJson(const Json& j) {
  if (!j.is_array()) throw ValidationError("expected an array of rationals");
  RationalVector v;
  for (const auto& e : j) v.push_back(RationalFromJson(e));
  return v;
}

// ---------------------------------------------------------------------------
// QSetCache

std::shared_ptr<const QSetFamily> QSetCache::Get(const Graph& g, std::optional<int> horizon) {
  Key key{g.Digest(), horizon ? *horizon : -1};
  {
    std::shared_lock lock(mu_);
    auto it = families_.find(key);
    if (it != families_.end()) return it->second;
  }
  QPropOptions opts = base_;
  opts.horizon = horizon;
  auto family = std::make_shared<const QSetFamily>(QProp(g, opts));
  std::unique_lock lock(mu_);
  return families_.emplace(key, std::move(family)).first->second;
}

std::shared_ptr<const QSetFamily> QSetCache::Find(const std::string& digest) const {
  std::shared_lock lock(mu_);
  std::shared_ptr<const QSetFamily> best;
  for (auto it = families_.lower_bound({digest, -1});
       it != families_.end() && it->first.first == digest; ++it) {
    if (!best || it->second->computed_horizon() > best->computed_horizon()) best = it->second;
  }
  return best;
}

std::size_t QSetCache::Evict(const std::string& digest) {
  std::unique_lock lock(mu_);
  std::size_t removed = 0;
  for (auto it = families_.lower_bound({digest, -1});
       it != families_.end() && it->first.first == digest;) {
    it = families_.erase(it);
    ++removed;
  }
  return removed;
}

std::size_t QSetCache::size() const {
  std::shared_lock lock(mu_);
  return families_.size();
}

// ---------------------------------------------------------------------------
// MatchService

struct MatchService::Session {
  std::string id;
  Match match;
  Player human;
  std::shared_ptr<const Strategist> strategist;
  std::unique_ptr<Policy> engine;
  std::vector<Json> events;
  mutable std::mutex mu;
  mutable std::condition_variable cv;

  Session(std::string id_in, Match m, Player h) : id(std::move(id_in)), match(std::move(m)), human(h) {}
};

MatchService::MatchService(ServiceOptions options)
    : options_(std::move(options)), cache_(options_.qprop) {
  if (options_.event_log_dir) std::filesystem::create_directories(*options_.event_log_dir);
}

MatchService::~MatchService() { Shutdown(); }

void MatchService::Shutdown() {
  stopping_ = true;
  std::shared_lock lock(mu_);
  for (auto& [id, s] : sessions_) s->cv.notify_all();
}

std::shared_ptr<MatchService::Session> MatchService::Lookup(const std::string& id) const {
  std::shared_lock lock(mu_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw ServiceError(404, "no match with id " + id);
  return it->second;
}

Json MatchService::StateLocked(const Session& s) const {
  const Match& m = s.match;
  const Graph& g = m.graph();
  Json edges = Json::array();
  for (const auto& e : g.edges()) edges.push_back({e.from + 1, e.to + 1});
  Json history = Json::array();
  for (const auto& t : m.history()) history.push_back(TurnJson(t));
  auto to_move = m.ToMove();
  Json j = {{"id", s.id},
            {"engine_version", kEngineVersion},
            {"graph_digest", g.Digest()},
            {"nodes", g.node_count()},
            {"edges", edges},
            {"X", RationalToJson(m.x_total())},
            {"Y", RationalToJson(m.y_total())},
            {"T", m.horizon() ? Json(*m.horizon()) : Json("inf")},
            {"human", PlayerName(s.human)},
            {"engine", PlayerName(Other(s.human))},
            {"phase", PhaseName(m.phase())},
            {"time", m.time()},
            {"to_move", to_move ? Json(PlayerName(*to_move)) : Json()},
            {"defender", VectorToJson(m.defender())},
            {"attacker", VectorToJson(m.attacker())},
            {"outcome", OutcomeJson(m.outcome())},
            {"history", history}};
  return j;
}

void MatchService::EmitLocked(Session& s, const std::string& type) {
  Json event = {{"seq", s.events.size()}, {"type", type}, {"state", StateLocked(s)}};
  if (options_.event_log_dir) {
    std::ofstream log(std::filesystem::path(*options_.event_log_dir) / (s.id + ".events.jsonl"),
                      std::ios::app);
    log << event.dump() << "\n";
  }
  s.events.push_back(std::move(event));
  s.cv.notify_all();
}

void MatchService::RunEngineLocked(Session& s) {
  const Player engine = Other(s.human);
  while (s.match.phase() != Phase::kFinished && s.match.ToMove() == engine) {
    PlayerMove mv;
    try {
      mv = s.engine->Act(s.match);
    } catch (const Error& e) {
      s.match.Forfeit(engine, e.what());
      break;
    }
    if (auto why = s.match.Play(engine, mv)) s.match.Forfeit(engine, *why);
    EmitLocked(s, "move");
  }
  if (s.match.phase() == Phase::kFinished) EmitLocked(s, "finished");
}

Json MatchService::CreateMatch(const Json& body) {
  if (!body.is_object()) throw ServiceError(400, "request body must be a JSON object");
  try {
    for (const char* field : {"graph", "X", "Y", "human"}) {
      if (!body.contains(field)) throw ValidationError(std::string("missing field \"") + field + "\"");
    }
    if (!body["graph"].is_string()) throw ValidationError("graph must be graph-file text");
    Graph g = ParseGraph(body["graph"].get<std::string>());
    Rational x = RationalFromJson(body["X"]);
    Rational y = RationalFromJson(body["Y"]);
    std::optional<int> horizon = ParseHorizon(body);
    Player human = ParsePlayer(body["human"]);
    auto family = cache_.Get(g, horizon);
    auto strategist = std::make_shared<const Strategist>(family, x, y, options_.extreme_action_cap);
    std::shared_ptr<Session> s;
    {
      std::unique_lock lock(mu_);
      std::string id = "m" + std::to_string(next_id_++);
      s = std::make_shared<Session>(id, Match(g, x, y, horizon), human);
      sessions_.emplace(id, s);
      graph_text_.emplace(g.Digest(), g.ToText());
    }
    std::lock_guard lock(s->mu);
    s->strategist = strategist;
    if (human == Player::kDefender) {
      s->engine = std::make_unique<EngineAttacker>(strategist);
    } else {
      s->engine = std::make_unique<EngineDefender>(strategist);
    }
    EmitLocked(*s, "created");
    RunEngineLocked(*s);
    return StateLocked(*s);
  } catch (const Error& e) {
    throw ServiceError(e.kind() == ErrorKind::kCapExceeded ? 413 : 400, e.what());
  }
}

Json MatchService::GetMatch(const std::string& id) const {
  auto s = Lookup(id);
  std::lock_guard lock(s->mu);
  return StateLocked(*s);
}

Json MatchService::SubmitMove(const std::string& id, const Json& body) {
  auto s = Lookup(id);
  std::lock_guard lock(s->mu);
  Match& m = s->match;
  if (!body.is_object()) throw ServiceError(400, "request body must be a JSON object");
  PlayerMove mv;
  Player player = s->human;
  try {
    if (body.contains("player")) player = ParsePlayer(body["player"]);
    if (player != s->human) {
      throw ServiceError(409, "turn: the " + PlayerName(player) + " is played by the engine");
    }
    if (m.phase() == Phase::kFinished) throw ServiceError(409, "turn: the match is over");
    if (m.ToMove() != player) {
      throw ServiceError(409, "turn: it is the " + PlayerName(*m.ToMove()) + "'s move");
    }
    if (body.contains("next")) {
      mv.next = VectorFromJson(body["next"]);
    } else if (body.contains("flows")) {
      const bool initial = m.phase() == Phase::kAwaitingAttackerInitial ||
                           (player == Player::kDefender && m.time() == 0);
      if (initial) throw ValidationError("initial placements are given as \"next\"");
      const Graph& g = m.graph();
      const int n = g.node_count();
      const RationalVector& prev = player == Player::kDefender ? m.defender() : m.attacker();
      RationalVector moved(n, 0);
      TransitionMatrix k(n, player == Player::kDefender ? ActionRole::kDefender
                                                        : ActionRole::kAttacker);
      for (const auto& f : body["flows"]) {
        if (!f.is_object() || !f.contains("from") || !f.contains("to") || !f.contains("amount") ||
            !f["from"].is_number_integer() || !f["to"].is_number_integer()) {
          throw ValidationError("each flow needs integer \"from\", \"to\" and an \"amount\"");
        }
        const int from = f["from"].get<int>() - 1, to = f["to"].get<int>() - 1;
        if (from < 0 || from >= n || to < 0 || to >= n) {
          throw ValidationError("dimension: flow endpoint out of range");
        }
        Rational amount = RationalFromJson(f["amount"]);
        if (amount < 0) throw ValidationError("nonnegativity: negative flow amount");
        if (amount == 0) continue;
        if (!g.HasEdge(from, to)) {
          throw ValidationError("adjacency: no edge " + std::to_string(from + 1) + " -> " +
                                std::to_string(to + 1) + "; resources move one edge per step");
        }
        if (prev[from] == 0) {
          throw ValidationError("nonnegativity: node " + std::to_string(from + 1) +
                                " holds nothing to move");
        }
        k.at(to, from) += amount / prev[from];
        moved[from] += amount;
      }
      for (int j = 0; j < n; ++j) {
        if (moved[j] > prev[j]) {
          throw ValidationError("column-sum: flows out of node " + std::to_string(j + 1) +
                                " total " + ToString(moved[j]) + " but it holds " +
                                ToString(prev[j]));
        }
        if (prev[j] == 0) {
          k.at(g.HasEdge(j, j) ? j : g.OutNeighbors(j).front(), j) = 1;
        } else if (moved[j] < prev[j]) {
          if (!g.HasEdge(j, j)) {
            throw ValidationError("adjacency: node " + std::to_string(j + 1) +
                                  " has no self-loop, so all of its " + ToString(prev[j]) +
                                  " must leave");
          }
          k.at(j, j) += (prev[j] - moved[j]) / prev[j];
        }
      }
      mv.next = k.Apply(prev);
      mv.action = k;
    } else {
      throw ValidationError("move needs \"next\" or \"flows\"");
    }
  } catch (const ValidationError& e) {
    throw ServiceError(422, e.what());
  }
  if (auto why = m.Play(player, mv)) throw ServiceError(422, *why);
  EmitLocked(*s, "move");
  RunEngineLocked(*s);
  return StateLocked(*s);
}

namespace {

std::optional<int> ConcentratedAt(const RationalVector& y) {
  std::optional<int> node;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] == 0) continue;
    if (node) return std::nullopt;
    node = static_cast<int>(i);
  }
  return node;
}

}  // namespace

Json MatchService::GetHints(const std::string& id) const {
  auto s = Lookup(id);
  std::lock_guard lock(s->mu);
  const Match& m = s->match;
  const Strategist& st = *s->strategist;
  const Graph& g = m.graph();
  const int n = g.node_count();
  Json h = {{"id", s->id}, {"time", m.time()}};
  auto to_move = m.ToMove();
  if (!to_move) {
    h["pending"] = Json();
    h["outcome"] = OutcomeJson(m.outcome());
    return h;
  }
  h["pending"] = PlayerName(*to_move);
  std::optional<int> remaining;
  if (m.horizon()) remaining = *m.horizon() - m.time();
  auto [top, truncated] = st.Ceiling(remaining);
  PlayerMove rec;
  try {
    rec = EngineHint(st, m);
  } catch (const Error& e) {
    h["error"] = e.what();
    return h;
  }
  h["recommended"] = {{"next", VectorToJson(rec.next)}};
  if (rec.guarantee) h["recommended"]["guarantee"] = GuaranteeJson(*rec.guarantee);
  Json warnings = Json::array();

  if (*to_move == Player::kDefender) {
    const RationalVector& y = m.attacker();
    Json options = Json::array();
    std::optional<int> best;
    if (auto node = ConcentratedAt(y)) {
      Polyhedron reach;
      if (m.time() > 0) reach = ReachPoint(st.defender_actions(), m.defender());
      for (int k = top; k >= 0; --k) {
        bool ok = m.time() == 0 ? Beta(st.qsets(), k, *node) * st.y_total() <= st.x_total()
                                : !reach.Intersect(st.ScaledQ(*node, k)).IsEmpty();
        options.push_back({{"k", k}, {"available", ok}});
        if (ok && !best) best = k;
      }
    }
    h["options"] = options;
    const bool indefinite = rec.guarantee && rec.guarantee->kind == Guarantee::Kind::kIndefinite;
    h["indefinite_available"] = indefinite;
    h["best_guarantee"] = rec.guarantee ? GuaranteeJson(*rec.guarantee) : Json();
    if (rec.guarantee && rec.guarantee->kind == Guarantee::Kind::kNone) {
      warnings.push_back("no safe option: the attacker can force a breach");
    }
    // Nodes the recommended allocation leaves open to a concentrated hop.
    for (int j = 0; j < n; ++j) {
      Rational arriving = 0;
      for (int i : g.InNeighbors(j)) arriving += y[i];
      if (arriving > 0 && rec.next[j] < std::min(arriving, st.y_total())) {
        warnings.push_back("node " + std::to_string(j + 1) + " would hold " +
                           ToString(rec.next[j]) + " while up to " + ToString(arriving) +
                           " attacker units can arrive");
      }
    }
  } else {
    Json candidates = Json::array();
    bool immediate = false;
    if (m.phase() == Phase::kAwaitingAttackerInitial) {
      for (int i = 0; i < n; ++i) {
        Json c = {{"node", i + 1}, {"breach_within", Json()}};
        for (int k = 0; k <= top; ++k) {
          if (Beta(st.qsets(), k, i) * st.y_total() > st.x_total()) {
            c["breach_within"] = k;
            break;
          }
        }
        candidates.push_back(c);
      }
    } else if (auto node = ConcentratedAt(m.attacker())) {
      const RationalVector& x = m.defender();
      Polyhedron reach = ReachPoint(st.defender_actions(), x);
      for (int j : g.OutNeighbors(*node)) {
        Json c = {{"node", j + 1}, {"breach_within", Json()}};
        if (x[j] < st.y_total()) {
          c["breach_within"] = 0;
          immediate = true;
        } else {
          for (int k = 1; k <= top; ++k) {
            if (reach.Intersect(st.ScaledQ(j, k - 1)).IsEmpty()) {
              c["breach_within"] = k;
              break;
            }
          }
        }
        candidates.push_back(c);
      }
    }
    h["candidates"] = candidates;
    h["immediate_breach_available"] = immediate;
    if (immediate) warnings.push_back("immediate breach available");
  }
  h["warnings"] = warnings;
  return h;
}

GameTrace MatchService::Trace(const std::string& id) const {
  auto s = Lookup(id);
  std::lock_guard lock(s->mu);
  const Match& m = s->match;
  GameTrace t;
  t.engine_version = kEngineVersion;
  t.graph_text = m.graph().ToText();
  t.graph_digest = m.graph().Digest();
  t.x_total = m.x_total();
  t.y_total = m.y_total();
  t.horizon = m.horizon();
  t.defender_policy = s->human == Player::kDefender ? "human" : "engine";
  t.attacker_policy = s->human == Player::kAttacker ? "human" : "engine";
  t.turns = m.history();
  t.outcome = m.outcome();
  return t;
}

Json MatchService::GraphQSets(const std::string& digest, int node, int k) const {
  auto family = cache_.Find(digest);
  if (!family) throw ServiceError(404, "no cached safe sets for graph " + digest);
  const int n = family->node_count();
  if (node < 1 || node > n) throw ServiceError(400, "node must be in 1.." + std::to_string(n));
  if (k < 0) throw ServiceError(400, "k must be nonnegative");
  if (!family->Has(k)) {
    throw ServiceError(404, "k = " + std::to_string(k) + " was not computed (deepest " +
                                std::to_string(family->computed_horizon()) + ")");
  }
  const Polyhedron& p = family->At(node - 1, k);
  Json vertices = Json::array(), rays = Json::array();
  const Generators& gen = p.generators();
  for (const auto& v : gen.vertices) vertices.push_back(VectorToJson(v));
  for (const auto& r : gen.rays) rays.push_back(VectorToJson(r));
  return {{"graph_digest", digest},
          {"engine_version", kEngineVersion},
          {"node", node},
          {"k", k},
          {"effective_k", family->EffectiveHorizon(k)},
          {"k_infinity", family->k_infinity() ? Json(*family->k_infinity()) : Json()},
          {"beta", RationalToJson(Beta(*family, k, node - 1))},
          {"vertices", vertices},
          {"rays", rays}};
}

std::size_t MatchService::EvictGraph(const std::string& digest) { return cache_.Evict(digest); }

std::vector<Json> MatchService::WaitEvents(const std::string& id, std::size_t seen,
                                           int timeout_ms, bool* finished) const {
  auto s = Lookup(id);
  std::unique_lock lock(s->mu);
  s->cv.wait_for(lock, std::chrono::milliseconds(timeout_ms), [&] {
    return stopping_ || s->events.size() > seen;
  });
  std::vector<Json> out;
  for (std::size_t i = seen; i < s->events.size(); ++i) out.push_back(s->events[i]);
  if (finished) {
    *finished = stopping_ || (s->match.phase() == Phase::kFinished && seen + out.size() ==
                                                                           s->events.size());
  }
  return out;
}

// ---------------------------------------------------------------------------
// HTTP

struct HttpServer::Impl {
  MatchService& service;
  httplib::Server server;
  explicit Impl(MatchService& s) : service(s) {}
};

namespace {

void Reply(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

template <typename F>
void Guarded(httplib::Response& res, F&& f) {
  try {
    f();
  } catch (const ServiceError& e) {
    Reply(res, e.status(), {{"error", e.what()}});
  } catch (const Json::exception& e) {
    Reply(res, 400, {{"error", std::string("malformed JSON: ") + e.what()}});
  } catch (const Error& e) {
    Reply(res, 400, {{"error", e.what()}});
  }
}

Json ParseBody(const httplib::Request& req) {
  try {
    return Json::parse(req.body);
  } catch (const Json::exception& e) {
    throw ServiceError(400, std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace

HttpServer::HttpServer(MatchService& service) : impl_(std::make_unique<Impl>(service)) {
  auto& svr = impl_->server;
  MatchService& svc = impl_->service;
  svr.Get("/health", [](const httplib::Request&, httplib::Response& res) {
    Reply(res, 200, {{"status", "ok"}, {"engine_version", kEngineVersion}});
  });
  svr.Post("/matches", [&svc](const httplib::Request& req, httplib::Response& res) {
    Guarded(res, [&] { Reply(res, 201, svc.CreateMatch(ParseBody(req))); });
  });
  svr.Get(R"(/matches/([^/]+))", [&svc](const httplib::Request& req, httplib::Response& res) {
    Guarded(res, [&] { Reply(res, 200, svc.GetMatch(req.matches[1])); });
  });
  svr.Post(R"(/matches/([^/]+)/moves)",
           [&svc](const httplib::Request& req, httplib::Response& res) {
             Guarded(res, [&] { Reply(res, 200, svc.SubmitMove(req.matches[1], ParseBody(req))); });
           });
  svr.Get(R"(/matches/([^/]+)/hints)", [&svc](const httplib::Request& req, httplib::Response& res) {
    Guarded(res, [&] { Reply(res, 200, svc.GetHints(req.matches[1])); });
  });
  svr.Get(R"(/matches/([^/]+)/trace)", [&svc](const httplib::Request& req, httplib::Response& res) {
    Guarded(res, [&] {
      res.status = 200;
      res.set_content(svc.Trace(req.matches[1]).ToJsonLines(), "application/x-ndjson");
    });
  });
  svr.Get(R"(/matches/([^/]+)/events)",
          [&svc](const httplib::Request& req, httplib::Response& res) {
            const std::string id = req.matches[1];
            Guarded(res, [&] {
              svc.GetMatch(id);  // 404 before the stream starts
              auto seen = std::make_shared<std::size_t>(0);
              res.set_chunked_content_provider(
                  "text/event-stream", [&svc, id, seen](std::size_t, httplib::DataSink& sink) {
                    bool finished = false;
                    auto events = svc.WaitEvents(id, *seen, 1000, &finished);
                    for (const auto& e : events) {
                      std::string chunk = "event: " + e["type"].get<std::string>() +
                                          "\ndata: " + e.dump() + "\n\n";
                      if (!sink.write(chunk.data(), chunk.size())) return false;
                      ++*seen;
                    }
                    if (finished) {
                      sink.done();
                    } else if (events.empty()) {
                      static const std::string kKeepAlive = ": keep-alive\n\n";
                      if (!sink.write(kKeepAlive.data(), kKeepAlive.size())) return false;
                    }
                    return true;
                  });
            });
          });
  svr.Get(R"(/graphs/([0-9a-f]+)/qsets)",
          [&svc](const httplib::Request& req, httplib::Response& res) {
            Guarded(res, [&] {
              if (!req.has_param("node") || !req.has_param("k")) {
                throw ServiceError(400, "query needs node and k");
              }
              int node = 0, k = 0;
              try {
                node = std::stoi(req.get_param_value("node"));
                k = std::stoi(req.get_param_value("k"));
              } catch (const std::exception&) {
                throw ServiceError(400, "node and k must be integers");
              }
              Reply(res, 200, svc.GraphQSets(req.matches[1], node, k));
            });
          });
  svr.Delete(R"(/graphs/([0-9a-f]+)/qsets)",
             [&svc](const httplib::Request& req, httplib::Response& res) {
               Reply(res, 200, {{"evicted", svc.EvictGraph(req.matches[1])}});
             });
}

HttpServer::~HttpServer() { Stop(); }

bool HttpServer::Listen(const std::string& host, int port) {
  return impl_->server.listen(host, port);
}

int HttpServer::BindToAnyPort(const std::string& host) {
  return impl_->server.bind_to_any_port(host);
}

bool HttpServer::ListenAfterBind() { return impl_->server.listen_after_bind(); }

void HttpServer::Stop() {
  impl_->service.Shutdown();
  impl_->server.stop();
}

bool HttpServer::IsRunning() const { return impl_->server.is_running(); }

}  // namespace ddab
