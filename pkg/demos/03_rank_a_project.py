"""
Ranking the POUs of a small project
===================================

Builds a three-POU mini project on disk, runs the whole pipeline over
the directory, and prints the ranked report table plus the group
medians the relative values are scaled against.
"""

import tempfile
from pathlib import Path

from poumetrics import METRIC_KEYS, analyze_paths, fmt4, render_table

CONVEYOR = """\
PROGRAM Conveyor
  VAR
    speed : INT;
    target : INT;
    jam : BOOL;
    state : INT;
  END_VAR

  CASE state OF
    0: speed := 0;
    1, 2:
      IF speed < target THEN
        speed := speed + 5;
      END_IF;
    3: speed := target;
  ELSE
    state := 0;
  END_CASE;
  IF jam THEN
    speed := 0;
    state := 0;
  END_IF;
END_PROGRAM
"""

BLINKER = """\
FUNCTION_BLOCK Blinker
  VAR_INPUT
    enable : BOOL;
  END_VAR
  VAR_OUTPUT
    lamp : BOOL;
  END_VAR
  VAR
    tick : INT;
  END_VAR

  IF enable THEN
    tick := tick + 1;
  END_IF;
  lamp := (tick MOD 2) = 0;
END_FUNCTION_BLOCK
"""

CLAMP = """\
FUNCTION Clamp : INT
  VAR_INPUT
    x : INT;
    lo : INT;
    hi : INT;
  END_VAR

  Clamp := x;
  IF x < lo THEN
    Clamp := lo;
  END_IF;
  IF x > hi THEN
    Clamp := hi;
  END_IF;
END_FUNCTION
"""

with tempfile.TemporaryDirectory() as workdir:
    root = Path(workdir)
    (root / "conveyor.st").write_text(CONVEYOR)
    (root / "blinker.st").write_text(BLINKER)
    (root / "clamp.st").write_text(CLAMP)

    run = analyze_paths([str(root)])

for warning in run.warnings:
    print(warning.render())

# The table lists the most complex POU first, the natural reading
# order when hunting refactoring candidates.
print(render_table(run))
print()
for group in run.stats:
    print("group %r over %d POUs, medians:" % (group.label, group.size))
    for key, value in zip(METRIC_KEYS, group.medians):
        print("  %-16s %s" % (key, fmt4(value)))
