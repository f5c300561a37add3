"""
Total functions: graph colouring in FASP
========================================

A many-sorted program where ``clr`` must pick a colour for every node.
Its embedding into FLP adds one choice rule per function; all three
solving routes give the same colourings.
"""

from funasp import corpus_path, embed, fasp_answer_sets, fasp_ground, format_state, load
from funasp.ast import format_rule
from funasp.faspc import project
from funasp.htsem import equilibrium_models
from funasp.lpcore import translated_models

for name in ("colour3.fasp", "colour2.fasp"):
    prog = load(corpus_path(name)).fasp
    flp = embed(prog)
    print(f"{name}: embedding")
    for r in flp.rules:
        print("  ", format_rule(r))

    by_reduct = [format_state(s) for s in fasp_answer_sets(fasp_ground(prog))]
    by_oracle = sorted(format_state(project(s, prog)) for s in equilibrium_models(flp))
    by_translation = sorted(format_state(project(s, prog)) for s in translated_models(flp))
    print(f"  {len(by_reduct)} colourings")
    for line in by_reduct:
        print("    ", line)
    assert by_reduct == by_oracle == by_translation
