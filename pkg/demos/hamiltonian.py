"""
From functions to relations: Hamiltonian cycles
===============================================

A successor function ``next`` is chosen among the outgoing arcs of each
node. Flattening turns it into a ``holds_next`` relation with a uniqueness
constraint, giving an ordinary normal logic program.
"""

from funasp import corpus_path, equilibrium_models, format_state, load, parse_flp, translated_models
from funasp.flatten import translate_program, translate_theory

ham = load(corpus_path("ham.flp")).program

# the intermediate theory: choice heads still carry  a | not a
print("intermediate theory:")
for r in translate_theory(ham):
    print("  ", r)

# the normal program, ready for any ASP grounder
print("normal program:")
print(translate_program(ham))

# solve on a denser graph, once directly and once through the normal program
rules = open(corpus_path("ham.flp")).read().split("node(0)")[0]
facts = "".join(f"node({i}).\n" for i in range(4))
facts += "".join(f"arc({a},{b}).\n" for a in range(4) for b in range(4) if a != b)
k4 = parse_flp(rules + facts).program

direct = equilibrium_models(k4)
flat = translated_models(k4)
print(f"complete digraph on 4 nodes: {len(direct)} cycles through 0")
for s in direct:
    print("  ", " ".join(e for e in format_state(s).split() if e.startswith("next")))
assert direct == flat
