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

// Command-line entry point: safe-set computation, resource ratios,
// simulation with engine or scripted policies, verification sweeps, trace
// replay and the match service.

#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ddab/error.h"
#include "ddab/game.h"
#include "ddab/qsets.h"
#include "ddab/service.h"
#include "ddab/verify.h"
#include "ddab/version.h"
#include "json.hpp"

namespace ddab {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kExitValidation = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitCap = 4;
constexpr int kExitVerification = 5;

struct RunConfig {
  std::string graph_path;
  std::string x = "1";
  std::string y = "1";
  std::string t = "inf";
  std::string out;
  std::uint64_t seed = 1;
  std::uint64_t max_extreme_actions = kDefaultExtremeActionCap;
  std::uint64_t max_oracle_states = kDefaultOracleStateCap;
  int max_iterations = 64;
  std::string policy_defender = "engine";
  std::string policy_attacker = "engine";
  std::string trace_path;
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string event_log_dir;
  int verify_max_nodes = 3;
  int verify_samples = 20;
  int verify_max_x = 4;
  int verify_max_t = 4;
};

std::optional<int> ParseHorizonFlag(const std::string& t) {
  if (t == "inf" || t == "infinity") return std::nullopt;
  try {
    std::size_t used = 0;
    const int v = std::stoi(t, &used);
    if (used == t.size() && v >= 0) return v;
  } catch (const std::exception&) {
  }
  throw ValidationError("--T must be a nonnegative integer or \"inf\", got \"" + t + "\"");
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Writes through a temporary sibling and renames, so readers never see a
// partial file.
void WriteAtomically(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    out << content;
    if (!out) throw ValidationError("cannot write " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string Provenance(const Graph& g) {
  return std::string("# ") + kEngineVersion + " graph " + g.Digest() + "\n";
}

Graph LoadConfiguredGraph(const RunConfig& cfg) {
  if (cfg.graph_path.empty()) throw ValidationError("--graph is required");
  return LoadGraphFile(cfg.graph_path);
}

QPropOptions QOptions(const RunConfig& cfg, std::optional<int> horizon) {
  QPropOptions o;
  o.horizon = horizon;
  o.max_iterations = cfg.max_iterations;
  o.extreme_action_cap = cfg.max_extreme_actions;
  return o;
}

// ---------------------------------------------------------------------------
// Scripted policies: a subprocess reading one state record per line on
// stdin and answering with one turn record per line on stdout.

class ScriptPolicy : public Policy {
 public:
  ScriptPolicy(const std::string& path, Player side, const GameTrace& header, std::uint64_t seed)
      : path_(path), side_(side) {
    int to_child[2], from_child[2];
    if (pipe(to_child) != 0 || pipe(from_child) != 0) {
      throw ValidationError("cannot create pipes for script " + path);
    }
    pid_ = fork();
    if (pid_ < 0) throw ValidationError("cannot start script " + path);
    if (pid_ == 0) {
      dup2(to_child[0], STDIN_FILENO);
      dup2(from_child[1], STDOUT_FILENO);
      close(to_child[0]);
      close(to_child[1]);
      close(from_child[0]);
      close(from_child[1]);
      setenv("DDAB_SEED", std::to_string(seed).c_str(), 1);
      setenv("DDAB_ROLE", PlayerName(side).c_str(), 1);
      execl(path.c_str(), path.c_str(), static_cast<char*>(nullptr));
      _exit(127);
    }
    close(to_child[0]);
    close(from_child[1]);
    in_ = fdopen(to_child[1], "w");
    out_ = fdopen(from_child[0], "r");
    // The header line of the trace format announces the instance.
    std::string text = header.ToJsonLines();
    Send(text.substr(0, text.find('\n')));
  }

  ~ScriptPolicy() override {
    if (in_) fclose(in_);
    if (out_) fclose(out_);
    if (pid_ > 0) waitpid(pid_, nullptr, 0);
  }

  std::string id() const override { return "script:" + path_; }

  PlayerMove Act(const Match& m) override {
    json state = {{"type", "state"},
                  {"t", m.time()},
                  {"player", PlayerName(side_)},
                  {"phase", PhaseName(m.phase())}};
    json x = json::array(), y = json::array();
    for (const auto& v : m.defender()) x.push_back(ToString(v));
    for (const auto& v : m.attacker()) y.push_back(ToString(v));
    state["defender"] = x;
    state["attacker"] = y;
    Send(state.dump());
    std::string line = Receive();
    json reply;
    try {
      reply = json::parse(line);
    } catch (const json::exception& e) {
      throw ValidationError("script " + path_ + " sent malformed JSON: " + e.what());
    }
    if (!reply.is_object() || !reply.contains("state")) {
      throw ValidationError("script " + path_ + " reply lacks \"state\"");
    }
    PlayerMove mv;
    mv.next = VectorFromJson(reply["state"]);
    if (reply.contains("action") && !reply["action"].is_null()) {
      std::vector<RationalVector> rows;
      for (const auto& r : reply["action"]) rows.push_back(VectorFromJson(r));
      mv.action = TransitionMatrix::FromRows(
          rows, side_ == Player::kDefender ? ActionRole::kDefender : ActionRole::kAttacker);
    }
    return mv;
  }

  void Finish(const std::string& outcome_line) {
    Send(outcome_line);
    fclose(in_);
    in_ = nullptr;
  }

 private:
  void Send(const std::string& line) {
    if (!in_ || fputs((line + "\n").c_str(), in_) < 0 || fflush(in_) != 0) {
      throw ValidationError("script " + path_ + " closed its input");
    }
  }

  std::string Receive() {
    std::string line;
    int c;
    while ((c = fgetc(out_)) != EOF && c != '\n') line.push_back(static_cast<char>(c));
    if (line.empty() && c == EOF) throw ValidationError("script " + path_ + " ended without a move");
    return line;
  }

  std::string path_;
  Player side_;
  pid_t pid_ = -1;
  FILE* in_ = nullptr;
  FILE* out_ = nullptr;
};

// ---------------------------------------------------------------------------
// Commands

int CmdQsets(const RunConfig& cfg) {
  Graph g = LoadConfiguredGraph(cfg);
  QSetFamily q = QProp(g, QOptions(cfg, ParseHorizonFlag(cfg.t)));
  CrrReport r = Crr(q);
  const fs::path out = cfg.out.empty() ? fs::path("qsets_" + g.Digest()) : fs::path(cfg.out);
  fs::path staging = out;
  staging += ".partial";
  fs::remove_all(staging);
  WriteQSetDump(q, r, staging.string(), kEngineVersion);
  fs::create_directories(out);
  for (const auto& entry : fs::directory_iterator(staging)) {
    fs::rename(entry.path(), out / entry.path().filename());
  }
  fs::remove_all(staging);
  std::cout << kEngineVersion << " graph " << g.Digest() << "\n";
  std::cout << "computed horizon " << q.computed_horizon() << ", k_inf "
            << (q.k_infinity() ? std::to_string(*q.k_infinity()) : "not reached") << "\n";
  std::cout << "alpha_inf " << (r.alpha_infinity ? ToString(*r.alpha_infinity) : "not reached")
            << "\n";
  std::cout << "wrote " << out.string() << "\n";
  return 0;
}

int CmdCrr(const RunConfig& cfg) {
  Graph g = LoadConfiguredGraph(cfg);
  const auto horizon = ParseHorizonFlag(cfg.t);
  QSetFamily q = QProp(g, QOptions(cfg, horizon));
  CrrReport r = Crr(q);
  std::ostringstream table;
  table << Provenance(g) << "k\talpha\talpha_decimal";
  for (int i = 0; i < g.node_count(); ++i) table << "\tbeta_" << (i + 1);
  table << "\n";
  for (std::size_t k = 0; k < r.alpha.size(); ++k) {
    table << k << "\t" << ToString(r.alpha[k]) << "\t" << ToDecimal(r.alpha[k]);
    for (const auto& b : r.beta[k]) table << "\t" << ToString(b);
    table << "\n";
  }
  std::cout << kEngineVersion << " graph " << g.Digest() << "\n";
  std::cout << "bounds " << r.lower_bound << " <= alpha <= " << r.upper_bound << "\n";
  std::cout << "alpha_k";
  for (const auto& a : r.alpha) std::cout << " " << ToString(a);
  std::cout << "\n";
  if (horizon) {
    const int k = std::min(*horizon, q.computed_horizon());
    std::cout << "alpha_" << *horizon << " " << ToString(r.alpha[q.EffectiveHorizon(k)]) << "\n";
  }
  std::cout << "k_inf " << (r.k_infinity ? std::to_string(*r.k_infinity) : "not reached")
            << "\n";
  std::cout << "alpha_inf " << (r.alpha_infinity ? ToString(*r.alpha_infinity) : "not reached")
            << "\n";
  if (!cfg.out.empty()) {
    WriteAtomically(fs::path(cfg.out) / "crr.tsv", table.str());
    std::cout << "wrote " << (fs::path(cfg.out) / "crr.tsv").string() << "\n";
  }
  return 0;
}

std::unique_ptr<Policy> MakePolicy(const std::string& spec, Player side,
                                   const std::shared_ptr<const Strategist>& s,
                                   const GameTrace& header, std::uint64_t seed) {
  if (spec == "engine") {
    if (side == Player::kDefender) return std::make_unique<EngineDefender>(s);
    return std::make_unique<EngineAttacker>(s);
  }
  if (spec.rfind("script:", 0) == 0) {
    return std::make_unique<ScriptPolicy>(spec.substr(7), side, header, seed);
  }
  throw ValidationError("policy must be \"engine\" or \"script:<path>\", got \"" + spec + "\"");
}

int CmdSimulate(const RunConfig& cfg) {
  Graph g = LoadConfiguredGraph(cfg);
  const Rational x = ParseRational(cfg.x);
  const Rational y = ParseRational(cfg.y);
  const auto horizon = ParseHorizonFlag(cfg.t);
  auto q = std::make_shared<const QSetFamily>(QProp(g, QOptions(cfg, horizon)));
  auto s = std::make_shared<const Strategist>(q, x, y, cfg.max_extreme_actions);
  GameTrace header;
  header.engine_version = kEngineVersion;
  header.graph_text = g.ToText();
  header.graph_digest = g.Digest();
  header.x_total = x;
  header.y_total = y;
  header.horizon = horizon;
  header.defender_policy = cfg.policy_defender;
  header.attacker_policy = cfg.policy_attacker;
  auto defender = MakePolicy(cfg.policy_defender, Player::kDefender, s, header, cfg.seed);
  auto attacker = MakePolicy(cfg.policy_attacker, Player::kAttacker, s, header, cfg.seed);
  GameTrace trace = RunMatch(g, x, y, horizon, *defender, *attacker);
  const std::string text = trace.ToJsonLines();
  const std::string outcome_line = text.substr(text.rfind('\n', text.size() - 2) + 1);
  for (Policy* p : {defender.get(), attacker.get()}) {
    if (auto* script = dynamic_cast<ScriptPolicy*>(p)) script->Finish(outcome_line.substr(0, outcome_line.size() - 1));
  }
  std::cout << kEngineVersion << " graph " << g.Digest() << "\n";
  for (const auto& t : trace.turns) {
    std::cout << "t=" << t.time << " " << PlayerName(t.player) << " " << ToString(t.state);
    if (t.guarantee) std::cout << " guarantee " << t.guarantee->ToString();
    std::cout << "\n";
  }
  std::cout << trace.outcome.Summary() << "\n";
  if (!cfg.out.empty()) {
    WriteAtomically(fs::path(cfg.out) / "trace.jsonl", text);
    std::cout << "wrote " << (fs::path(cfg.out) / "trace.jsonl").string() << "\n";
  }
  return 0;
}

void PrintCheck(const CheckResult& c) {
  std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n" << std::flush;
}

int CmdVerify(const RunConfig& cfg) {
  std::cout << kEngineVersion << " verify seed " << cfg.seed << "\n";
  std::vector<CheckResult> results;
  std::vector<Graph> graphs;
  if (!cfg.graph_path.empty()) {
    graphs.push_back(LoadConfiguredGraph(cfg));
    std::cout << "graph " << graphs.front().Digest() << "\n";
  } else {
    for (int n = 1; n <= cfg.verify_max_nodes; ++n) {
      auto all = EnumerateStronglyConnected(n);
      graphs.insert(graphs.end(), all.begin(), all.end());
    }
    std::mt19937_64 rng(cfg.seed);
    for (int i = 0; i < cfg.verify_samples; ++i) {
      graphs.push_back(RandomStronglyConnected(rng, cfg.verify_max_nodes + 1));
    }
  }
  OracleSweepOptions o;
  o.max_x = cfg.verify_max_x;
  o.max_t = cfg.verify_max_t;
  o.oracle_state_cap = cfg.max_oracle_states;
  o.extreme_action_cap = cfg.max_extreme_actions;
  OracleSweepResult sweep = OracleSweep(graphs, o);
  results = {sweep.engine_vs_oracle, sweep.membership, sweep.no_split, sweep.monotone};
  results.push_back(QSetInvariants(graphs));
  results.push_back(Superposition(graphs, 2, 20, cfg.seed));
  if (cfg.graph_path.empty()) {
    results.push_back(ReverseActionRoundTrip(500, cfg.seed));
    results.push_back(OverallActionIdentity(200, cfg.seed));
    results.push_back(DegenerateRegime(50, 6, cfg.seed));
  }
  bool ok = true;
  for (const auto& r : results) {
    PrintCheck(r);
    ok = ok && r.pass;
  }
  if (!cfg.out.empty()) {
    json report = {{"engine_version", kEngineVersion}, {"seed", cfg.seed}, {"checks", json::array()}};
    if (!cfg.graph_path.empty()) report["graph_digest"] = graphs.front().Digest();
    for (const auto& r : results) {
      report["checks"].push_back(
          {{"name", r.name}, {"pass", r.pass}, {"instances", r.instances}, {"detail", r.detail}});
    }
    WriteAtomically(fs::path(cfg.out) / "verify.json", report.dump(2) + "\n");
  }
  return ok ? 0 : kExitVerification;
}

int CmdReplay(const RunConfig& cfg) {
  if (cfg.trace_path.empty()) throw ValidationError("--trace is required");
  GameTrace trace = GameTrace::FromJsonLines(ReadFile(cfg.trace_path));
  std::cout << kEngineVersion << " graph " << trace.graph_digest << "\n";
  if (auto diff = ReplayTrace(trace, cfg.max_extreme_actions)) {
    std::cout << "replay differs: " << *diff << "\n";
    return kExitVerification;
  }
  std::cout << "replay identical (" << trace.turns.size() << " turns, "
            << trace.outcome.Summary() << ")\n";
  return 0;
}

int CmdServe(const RunConfig& cfg) {
  ServiceOptions o;
  o.extreme_action_cap = cfg.max_extreme_actions;
  o.qprop.max_iterations = cfg.max_iterations;
  o.qprop.extreme_action_cap = cfg.max_extreme_actions;
  if (!cfg.event_log_dir.empty()) o.event_log_dir = cfg.event_log_dir;
  MatchService service(o);
  HttpServer server(service);
  std::cout << kEngineVersion << " serving on http://" << cfg.host << ":" << cfg.port << "\n"
            << std::flush;
  if (!server.Listen(cfg.host, cfg.port)) {
    throw ValidationError("cannot listen on " + cfg.host + ":" + std::to_string(cfg.port));
  }
  return 0;
}

int ExitCode(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kValidation:
      return kExitValidation;
    case ErrorKind::kInfeasible:
      return kExitInfeasible;
    case ErrorKind::kCapExceeded:
      return kExitCap;
    case ErrorKind::kVerification:
      return kExitVerification;
  }
  return kExitValidation;
}

int Main(int argc, char** argv) {
  CLI::App app{"Dynamic defender-attacker Blotto games on directed graphs"};
  app.set_version_flag("--version", std::string(kEngineVersion));
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_graph = [&](CLI::App* c, bool required) {
    auto* opt = c->add_option("--graph", cfg.graph_path, "graph file (nodes N / edge j i)");
    if (required) opt->required();
  };
  auto add_caps = [&](CLI::App* c) {
    c->add_option("--max-extreme-actions", cfg.max_extreme_actions,
                  "cap on enumerated extreme actions");
    c->add_option("--max-oracle-states", cfg.max_oracle_states, "cap on oracle memo states");
    c->add_option("--max-iterations", cfg.max_iterations, "safe-set propagation iterations");
  };

  auto* qsets = app.add_subcommand("qsets", "compute and dump the safe-set family");
  add_graph(qsets, true);
  qsets->add_option("--T", cfg.t, "horizon (integer or inf)");
  qsets->add_option("--out", cfg.out, "output directory");
  add_caps(qsets);

  auto* crr = app.add_subcommand("crr", "critical resource ratio and its sequence");
  add_graph(crr, true);
  crr->add_option("--T", cfg.t, "horizon (integer or inf)");
  crr->add_option("--out", cfg.out, "directory for crr.tsv");
  add_caps(crr);

  auto* simulate = app.add_subcommand("simulate", "play one match and write its trace");
  add_graph(simulate, true);
  simulate->add_option("--X", cfg.x, "defender total (p/q or decimal)");
  simulate->add_option("--Y", cfg.y, "attacker total (p/q or decimal)");
  simulate->add_option("--T", cfg.t, "horizon (integer or inf)");
  simulate->add_option("--out", cfg.out, "directory for trace.jsonl");
  simulate->add_option("--seed", cfg.seed, "seed passed to script policies");
  simulate->add_option("--policy-defender", cfg.policy_defender, "engine | script:<path>");
  simulate->add_option("--policy-attacker", cfg.policy_attacker, "engine | script:<path>");
  add_caps(simulate);

  auto* verify = app.add_subcommand("verify", "oracle cross-checks and invariant suites");
  add_graph(verify, false);
  verify->add_option("--out", cfg.out, "directory for verify.json");
  verify->add_option("--seed", cfg.seed, "seed for sampled graphs and actions");
  verify->add_option("--max-nodes", cfg.verify_max_nodes, "exhaustive sweep size");
  verify->add_option("--samples", cfg.verify_samples, "sampled graphs one node larger");
  verify->add_option("--max-x", cfg.verify_max_x, "largest integer defender total");
  verify->add_option("--max-t", cfg.verify_max_t, "largest horizon");
  add_caps(verify);

  auto* replay = app.add_subcommand("replay", "re-simulate a trace and compare bit-exactly");
  replay->add_option("--trace", cfg.trace_path, "trace.jsonl")->required();
  add_caps(replay);

  auto* serve = app.add_subcommand("serve", "run the HTTP match service");
  serve->add_option("--host", cfg.host, "bind address");
  serve->add_option("--port", cfg.port, "port");
  serve->add_option("--event-log-dir", cfg.event_log_dir, "append-only session logs");
  add_caps(serve);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (*qsets) return CmdQsets(cfg);
    if (*crr) return CmdCrr(cfg);
    if (*simulate) return CmdSimulate(cfg);
    if (*verify) return CmdVerify(cfg);
    if (*replay) return CmdReplay(cfg);
    if (*serve) return CmdServe(cfg);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return ExitCode(e.kind());
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return 0;
}

}  // namespace
}  // namespace ddab

int main(int argc, char** argv) { return ddab::Main(argc, argv); }
