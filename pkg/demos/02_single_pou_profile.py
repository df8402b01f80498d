"""
The six-metric profile of one POU
=================================

Parses a complete function block held inline as a string and prints its
raw complexity vector, one line per metric with the ingredients that
produced it.
"""

from poumetrics import StSource, compute_vector, parse_st_pou

SOURCE = """\
FUNCTION_BLOCK Debounce
  VAR_INPUT
    raw : BOOL;
    limit : INT;
  END_VAR
  VAR_OUTPUT
    stable : BOOL;
  END_VAR
  VAR
    count : INT;
  END_VAR

  IF raw THEN
    count := count + 1;
  ELSE
    count := 0;
  END_IF;
  IF count >= limit THEN
    stable := TRUE;
  END_IF;
END_FUNCTION_BLOCK
"""

pou, warnings = parse_st_pou(StSource(path="<inline>", text=SOURCE))
for w in warnings:
    print(w.render())

vec = compute_vector(pou)

print("POU:", pou.name, "(%s, %s)" % (pou.kind.name, pou.language.name))
print()
print("m1 program length  :", vec.program_length, "(all operator and operand occurrences)")
print("m2 cyclomatic      :", vec.cyclomatic, "(decision points + 1)")
print("m3 information flow:", vec.fifo, "(fan-in x fan-out)")
print("m4 vocabulary      :", vec.vocabulary, "(distinct operators + distinct operands)")
print("m5 difficulty      :", vec.difficulty, "(n1/2 x N2/n2, an exact fraction)")
print("m6 data structure  :", vec.data_structure, "(weighted declared variables)")
print()
print("decision spans:")
for span in pou.body.decision_spans:
    print("  line %d: %s" % (span.ref.line, span.kind))
