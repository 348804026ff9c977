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

#ifndef DDAB_SERVICE_H_
#define DDAB_SERVICE_H_

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <utility>
#include <vector>

#include "ddab/game.h"
#include "ddab/graph.h"
#include "ddab/qsets.h"
#include "ddab/rational.h"
#include "ddab/strategy.h"
#include "json.hpp"

namespace ddab {

using Json = nlohmann::json;

// Wire form of a rational: {"num": p, "den": q, "decimal": "..."}. Numerator
// and denominator are JSON integers when they fit in 64 bits and decimal
// strings otherwise.
Json RationalToJson(const Rational& r);
Json VectorToJson(const RationalVector& v);
// Accepts the wire object, a string ("7/2", "3.5") or a JSON number.
Rational RationalFromJson(const Json& j);
RationalVector VectorFromJson(const Json& j);

// Safe-set families keyed by (graph digest, horizon). Lookups take a shared
// lock; a miss computes the family outside the lock and the first insert
// wins.
class QSetCache {
 public:
  explicit QSetCache(QPropOptions base = {}) : base_(std::move(base)) {}

  std::shared_ptr<const QSetFamily> Get(const Graph& g, std::optional<int> horizon);
  // Any cached family for the digest, preferring the deepest one.
  std::shared_ptr<const QSetFamily> Find(const std::string& digest) const;
  // Drops every family for the digest; returns how many were removed.
  std::size_t Evict(const std::string& digest);
  std::size_t size() const;

 private:
  using Key = std::pair<std::string, int>;  // horizon -1 means unbounded
  QPropOptions base_;
  mutable std::shared_mutex mu_;
  std::map<Key, std::shared_ptr<const QSetFamily>> families_;
};

// Failures carry an HTTP status alongside the message.
class ServiceError : public std::runtime_error {
 public:
  ServiceError(int status, const std::string& what)
      : std::runtime_error(what), status_(status) {}
  int status() const { return status_; }

 private:
  int status_;
};

struct ServiceOptions {
  std::uint64_t extreme_action_cap = kDefaultExtremeActionCap;
  QPropOptions qprop;
  // When set, every session appends its events to <dir>/<id>.events.jsonl.
  std::optional<std::string> event_log_dir;
};

// Human-versus-engine matches. Each session has one writer at a time (its
// own mutex); readers of the public state and hints take the same lock
// briefly and never mutate anything.
class MatchService {
 public:
  explicit MatchService(ServiceOptions options = {});
  ~MatchService();

  // Body: {"graph": "<graph file text>", "X": r, "Y": r, "T": int|"inf"|null,
  //        "human": "defender"|"attacker"}.
  Json CreateMatch(const Json& body);
  Json GetMatch(const std::string& id) const;
  // Body: {"next": [r...]} or {"flows": [{"from": i, "to": j, "amount": r}]}
  // with 1-based node labels; "player" is optional. Rejections raise
  // ServiceError(422) naming the violated constraint.
  Json SubmitMove(const std::string& id, const Json& body);
  Json GetHints(const std::string& id) const;
  // The session as a replayable trace.
  GameTrace Trace(const std::string& id) const;
  Json GraphQSets(const std::string& digest, int node, int k) const;
  std::size_t EvictGraph(const std::string& digest);

  // Blocks until the session has more than `seen` events, the match ends,
  // the timeout passes or Shutdown() is called; returns the new events.
  std::vector<Json> WaitEvents(const std::string& id, std::size_t seen, int timeout_ms,
                               bool* finished) const;
  void Shutdown();

  const QSetCache& cache() const { return cache_; }

 private:
  struct Session;
  std::shared_ptr<Session> Lookup(const std::string& id) const;
  Json StateLocked(const Session& s) const;
  void RunEngineLocked(Session& s);
  void EmitLocked(Session& s, const std::string& type);

  ServiceOptions options_;
  QSetCache cache_;
  mutable std::shared_mutex mu_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::map<std::string, std::string> graph_text_;  // digest -> canonical text
  std::uint64_t next_id_ = 1;
  std::atomic<bool> stopping_{false};
};

// Serves the HTTP API until the process is interrupted or Stop() is called
// on the returned handle from another thread.
class HttpServer {
 public:
  explicit HttpServer(MatchService& service);
  ~HttpServer();
  // Binds and serves; returns false when the address cannot be bound.
  bool Listen(const std::string& host, int port);
  // Binds to an ephemeral port; returns it, or -1 on failure. Call
  // ListenAfterBind() to serve.
  int BindToAnyPort(const std::string& host);
  bool ListenAfterBind();
  void Stop();
  bool IsRunning() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace ddab

#endif  // DDAB_SERVICE_H_
