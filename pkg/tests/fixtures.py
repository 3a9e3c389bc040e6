"""Loaders for the bundled example systems."""

import os
from functools import lru_cache

from conftest import MODELS
from fixcheck.dsl import parse_model, parse_system
from fixcheck.liftings import (build_behavioural_diagram, build_termination_diagram,
                               build_wasserstein_diagram)


@lru_cache(maxsize=None)
def system(name):
    with open(os.path.join(MODELS, name)) as fh:
        return parse_system(fh.read(), name.rsplit(".", 1)[1], name)


@lru_cache(maxsize=None)
def model(name):
    with open(os.path.join(MODELS, name)) as fh:
        return parse_model(fh.read(), name)


def termination():
    sf = system("termination.mc")
    return build_termination_diagram(sf.system), sf.candidates["ones"], sf.candidates["muT"]


def metric(name):
    sf = system(name)
    if name.endswith(".nts"):
        return build_wasserstein_diagram(sf.system), sf
    return build_behavioural_diagram(sf.system), sf


# f(p) = max(a(q), 2), f(q) = a(p) on {0..5}; fixpoints are the constants 2..5
TOY = """
algebra chain 5
set Y = { p, q }
set YY = Y + Y
map sw : Y -> Y { p: q, q: p }
map c : Y -> M { p: 2 }
rel rho : YY <-> Y { (inl(p), p), (inr(p), p), (inl(q), q), (inr(q), q) }
block R = reindex sw
block C = const c
block J = maxrel rho
diagram f = dup Y ; (R | (end Y ; C)) ; J
valuation four : Y { *: 4 }
valuation two : Y { *: 2 }
valuation one : Y { *: 1 }
"""


def toy():
    m = parse_model(TOY, "toy")
    return m.diagram("f"), m
