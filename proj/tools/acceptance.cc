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

// Acceptance report: one PASS/FAIL line per primary criterion. Exits
// nonzero when any criterion fails.

#include <chrono>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "ddab/error.h"
#include "ddab/game.h"
#include "ddab/qsets.h"
#include "ddab/verify.h"

#ifndef DDAB_DATA_DIR
#define DDAB_DATA_DIR "data"
#endif

namespace ddab {
namespace {

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

Graph Load(const std::string& name) {
  return LoadGraphFile(std::string(DDAB_DATA_DIR) + "/graphs/" + name);
}

struct Line {
  std::string name;
  bool pass = true;
  std::vector<std::string> notes;

  void Expect(bool ok, const std::string& what) {
    notes.push_back(std::string(ok ? "" : "MISMATCH ") + what);
    pass = pass && ok;
  }
  std::string Text() const {
    std::ostringstream s;
    s << (pass ? "PASS " : "FAIL ") << name << ":";
    for (std::size_t i = 0; i < notes.size(); ++i) s << (i ? "; " : " ") << notes[i];
    return s.str();
  }
};

Line TopologyStudy() {
  Line line{"CRR topology study (ring 1, +chord 5, +loop on 4 -> 7, +loop on 3 -> 3)"};
  struct Case {
    const char* file;
    const char* label;
    Rational expected;
  };
  for (const Case& c : {Case{"ring5.txt", "ring", 1}, Case{"ring5_chord.txt", "chord", 5},
                        Case{"ring5_chord_loop4.txt", "chord+loop4", 7},
                        Case{"ring5_chord_loop3.txt", "chord+loop3", 3}}) {
    auto start = Clock::now();
    QSetFamily q = QProp(Load(c.file));
    CrrReport r = Crr(q);
    const double secs = Seconds(start);
    std::ostringstream s;
    s << c.label << " alpha_inf="
      << (r.alpha_infinity ? ToString(*r.alpha_infinity) : std::string("not reached"))
      << " (expected " << ToString(c.expected) << ", " << secs << " s)";
    line.Expect(r.alpha_infinity && *r.alpha_infinity == c.expected && secs < 10, s.str());
  }
  return line;
}

Line NonInteger() {
  Line line{"non-integer ratio on the six-node graph (alpha_2 = 7/2; alpha_inf = 4 at k_inf = 6)"};
  Graph g = Load("fig8.txt");
  QSetFamily q = QProp(g);
  CrrReport r = Crr(q);
  line.Expect(r.alpha.size() > 2 && r.alpha[2] == Fraction(7, 2),
              "alpha_2=" + (r.alpha.size() > 2 ? ToString(r.alpha[2]) : std::string("?")));
  line.Expect(r.beta.size() > 2 && r.beta[2][2] == Fraction(7, 2),
              "beta_2 at node 3=" + (r.beta.size() > 2 ? ToString(r.beta[2][2]) : std::string("?")));
  line.Expect(r.alpha_infinity && *r.alpha_infinity == 4,
              "alpha_inf=" + (r.alpha_infinity ? ToString(*r.alpha_infinity)
                                               : std::string("not reached")));
  line.Expect(r.k_infinity && *r.k_infinity == 6,
              "k_inf=" + (r.k_infinity ? std::to_string(*r.k_infinity) : std::string("not reached")));
  return line;
}

Line QSetVertices() {
  Line line{"Q_4 at node 1 on the three-node graph, slice at total 3"};
  QSetFamily q = QProp(Load("fig6.txt"));
  Polyhedron slice = q.At(0, 4).Intersect(Polyhedron::Simplex(3, 3));
  const auto& v = slice.generators().vertices;
  std::string listed;
  for (const auto& p : v) listed += ToString(p);
  line.Expect(v == std::vector<RationalVector>{{0, 0, 3}, {0, 2, 1}, {1, 0, 2}, {1, 1, 1}},
              "vertices " + listed);
  return line;
}

TransitionMatrix Matrix(const std::vector<std::vector<std::string>>& rows) {
  std::vector<RationalVector> r;
  for (const auto& row : rows) {
    RationalVector v;
    for (const auto& c : row) v.push_back(ParseRational(c));
    r.push_back(v);
  }
  return TransitionMatrix::FromRows(r);
}

Line GameTrees() {
  Line line{"two-step game trees and defender actions (a)-(c)"};
  Graph g = Load("fig8.txt");
  QPropOptions opts;
  opts.horizon = 2;
  auto q = std::make_shared<const QSetFamily>(QProp(g, opts));
  for (const Rational& x : {Rational(3), Fraction(7, 2)}) {
    auto s = std::make_shared<const Strategist>(q, x, 1);
    EngineDefender d(s);
    EngineAttacker a(s);
    GameTrace t = RunMatch(g, x, 1, 2, d, a);
    const bool opens_at_3 = !t.turns.empty() && t.turns.front().state == RationalVector{0, 0, 1, 0, 0, 0};
    if (x == 3) {
      line.Expect(opens_at_3 && t.outcome.kind == Outcome::Kind::kBreached && t.outcome.time == 2,
                  "X=3: attacker opens at node " + std::string(opens_at_3 ? "3" : "?") + ", " +
                      t.outcome.Summary());
    } else {
      line.Expect(opens_at_3 && t.outcome.kind == Outcome::Kind::kDefended && t.outcome.time == 2,
                  "X=7/2: " + t.outcome.Summary());
    }
  }
  const TransitionMatrix a = Matrix({{"0", "0", "0", "1", "0", "1"},
                                     {"0", "0", "1/2", "0", "0", "0"},
                                     {"1", "0", "1/2", "0", "0", "0"},
                                     {"0", "0", "0", "0", "0", "0"},
                                     {"0", "0", "0", "0", "1", "0"},
                                     {"0", "1", "0", "0", "0", "0"}});
  const TransitionMatrix b = Matrix({{"0", "0", "0", "0", "0", "1"},
                                     {"0", "0", "0", "0", "0", "0"},
                                     {"0", "0", "1", "0", "0", "0"},
                                     {"0", "0", "0", "0", "0", "0"},
                                     {"0", "0", "0", "1", "1", "0"},
                                     {"1", "1", "0", "0", "0", "0"}});
  const TransitionMatrix c = Matrix({{"0", "0", "0", "0", "0", "0"},
                                     {"0", "0", "0", "0", "1", "0"},
                                     {"1", "0", "1", "0", "0", "0"},
                                     {"0", "0", "0", "0", "0", "0"},
                                     {"0", "0", "0", "1", "0", "1"},
                                     {"0", "1", "0", "0", "0", "0"}});
  const RationalVector x0 = {0, 1, 1, 0, 1, Fraction(1, 2)};
  const RationalVector x1 = {Fraction(1, 2), Fraction(1, 2), Fraction(1, 2), 0, 1, 1};
  const RationalVector x2b = {1, 0, Fraction(1, 2), 0, 1, 1};
  struct Step {
    const char* label;
    const TransitionMatrix* k;
    RationalVector from, to;
    int attacker_at;
  };
  for (const Step& st : {Step{"(a)", &a, x0, x1, 1}, Step{"(b)", &b, x1, x2b, 5},
                         Step{"(c)", &c, x1, x0, 4}}) {
    const bool admissible = st.k->IsAdmissible(g);
    const bool maps = st.k->Apply(st.from) == st.to;
    const bool required = RequiredSet(g, [&] {
                            RationalVector y(6, 0);
                            y[st.attacker_at] = 1;
                            return y;
                          }()).Contains(st.to);
    line.Expect(admissible && maps && required,
                std::string(st.label) + (admissible ? " admissible" : " NOT admissible") +
                    (maps ? ", maps " : ", does not map ") + ToString(st.from) + " to " +
                    ToString(st.to) + (required ? ", lands in the required set" : ""));
  }
  return line;
}

Line Degenerate() {
  Line line{"degenerate regime: X = d_max*Y - eps loses at t = 0, X = d_max*Y does not"};
  CheckResult r = DegenerateRegime(50, 6, 2026);
  line.Expect(r.pass, r.detail);
  return line;
}

Line OracleEquivalence() {
  Line line{"oracle equivalence (all N <= 3 plus 20 sampled N = 4; X <= 4, Y = 1, T <= 4)"};
  auto start = Clock::now();
  std::vector<Graph> graphs;
  for (int n = 1; n <= 3; ++n) {
    auto all = EnumerateStronglyConnected(n);
    graphs.insert(graphs.end(), all.begin(), all.end());
  }
  std::mt19937_64 rng(2026);
  for (int i = 0; i < 20; ++i) graphs.push_back(RandomStronglyConnected(rng, 4));
  OracleSweepResult r = OracleSweep(graphs, {});
  for (const CheckResult* c : {&r.engine_vs_oracle, &r.membership, &r.no_split, &r.monotone}) {
    line.Expect(c->pass, c->name + " (" + c->detail + ")");
  }
  const double secs = Seconds(start);
  line.Expect(secs <= 600, std::to_string(graphs.size()) + " graphs in " + std::to_string(secs) + " s");
  return line;
}

Line Invariants() {
  Line line{"invariant suites"};
  std::vector<Graph> graphs;
  for (const char* name : {"fig6.txt", "fig8.txt", "ring5.txt", "ring5_chord.txt",
                           "ring5_chord_loop3.txt", "ring5_chord_loop4.txt", "complete3.txt"}) {
    graphs.push_back(Load(name));
  }
  std::mt19937_64 rng(7);
  for (int i = 0; i < 10; ++i) graphs.push_back(RandomStronglyConnected(rng, 3 + i % 2));
  for (const CheckResult& c :
       {QSetInvariants(graphs), ReverseActionRoundTrip(500, 11), OverallActionIdentity(200, 12),
        Superposition(graphs, 3, 20, 13)}) {
    line.Expect(c.pass, c.name + " (" + c.detail + ")");
  }
  return line;
}

int Main() {
  std::vector<std::function<Line()>> criteria = {TopologyStudy, NonInteger,        QSetVertices,
                                                 GameTrees,     Degenerate,        OracleEquivalence,
                                                 Invariants};
  bool all = true;
  for (const auto& run : criteria) {
    Line line;
    try {
      line = run();
    } catch (const std::exception& e) {
      line.pass = false;
      line.name = "criterion raised";
      line.notes.push_back(e.what());
    }
    std::cout << line.Text() << "\n" << std::flush;
    all = all && line.pass;
  }
  return all ? 0 : 1;
}

}  // namespace
}  // namespace ddab

int main() { return ddab::Main(); }
