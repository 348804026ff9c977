#!/usr/bin/env python3
# Copyright 2026 The ddab Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Example script policy: a concentrated attacker hopping to random neighbors.

Reads the header record, then one state record per line on stdin, and writes
one turn record per line on stdout. The seed comes from DDAB_SEED.
"""

import json
import os
import random
import sys
from fractions import Fraction


def main():
  rng = random.Random(int(os.environ.get("DDAB_SEED", "1")))
  header = json.loads(sys.stdin.readline())
  n = 0
  out = {}
  for line in header["graph"].splitlines():
    parts = line.split()
    if parts[:1] == ["nodes"]:
      n = int(parts[1])
      out = {i: [] for i in range(n)}
    elif parts[:1] == ["edge"]:
      out[int(parts[1]) - 1].append(int(parts[2]) - 1)
  y_total = Fraction(header["Y"])
  for line in sys.stdin:
    record = json.loads(line)
    if record.get("type") != "state":
      break
    attacker = [Fraction(v) for v in record["attacker"]]
    if not attacker:
      node = rng.randrange(n)
    else:
      here = max(range(n), key=lambda i: attacker[i])
      node = rng.choice(out[here])
    state = ["0"] * n
    state[node] = str(y_total)
    print(json.dumps({"type": "turn", "state": state}), flush=True)


if __name__ == "__main__":
  main()
