"""Small builders shared by the test modules."""

from funasp.ast import App, Const, Eq, Pred, Var
from funasp.htsem import all_interpretations, is_model


def c(name):
    return Const(name)


def v(name):
    return Var(name)


def f(name, *args):
    return App(name, tuple(args))


def eq(a, b):
    return Eq(a, b)


def p(name, *args):
    return Pred(name, tuple(args))


def ht_equivalent(th1, th2, signature, interpretations=None):
    """First interpretation separating the theories, or None."""
    for i in interpretations if interpretations is not None else all_interpretations(signature):
        if is_model(i, th1) != is_model(i, th2):
            return i
    return None
