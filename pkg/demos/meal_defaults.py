"""
Partial functions and defaults: the meal program
================================================

Two 0-ary evaluable functions, ``first`` and ``second``. Fish follows
pasta unless it is friday; on fridays the second course repeats the first.
"""

from funasp import corpus_path, equilibrium_models, format_state, load, parse_flp, translated_models
from funasp.expand import expand_program
from funasp.ast import format_formula

meal = load(corpus_path("meal.flp")).program

# the rules after eliminating := and the definedness guards
for formula in expand_program(meal):
    print("  ", format_formula(formula))

# with first := pasta there is exactly one model
print("models:", [format_state(s) for s in equilibrium_models(meal)])

# drop the fact: nothing is derived, both functions stay undefined
bare = load(corpus_path("meal_nofact.flp")).program
print("without first:", [format_state(s) for s in equilibrium_models(bare)])

# on a friday the second course copies the first one
friday = parse_flp(open(corpus_path("meal.flp")).read() + "friday.\n").program
print("on friday:", [format_state(s) for s in equilibrium_models(friday)])

# a default value that a later rule may override
default = "#evaluable dessert.\ndessert := fruit :- not dessert # fruit.\n"
print("default:", [format_state(s) for s in equilibrium_models(parse_flp(default).program)])
override = default + "dessert := cake :- friday.\nfriday.\n"
print("overridden:", [format_state(s) for s in equilibrium_models(parse_flp(override).program)])

# the flattened normal program reaches the same models
assert translated_models(friday) == equilibrium_models(friday)
