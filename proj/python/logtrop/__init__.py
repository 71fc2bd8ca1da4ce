"""Tropical moduli of curves, piecewise polynomials and log CohFT checks.

Values are plain JSON-shaped dicts and lists in the same format the
``logtrop`` command line tool reads and writes. Integers inside them are
decimal strings. Markings are numbered from 1.
"""

import json

from . import _core
from ._core import LogtropError

__all__ = [
    "LogtropError",
    "enumerate_graphs",
    "validate_graph",
    "glue_graphs",
    "glue_loop",
    "forget_leg",
    "build_moduli",
    "length_class",
    "boundary_class",
    "add",
    "multiply",
    "exp_truncated",
    "equivalent",
    "pullback_glue",
    "pullback_loop",
    "pullback_forget",
    "dr_polynomial",
    "validate_class",
    "balanced_slopes",
    "div_cone",
    "div_square",
    "node_monoid",
    "check_axioms",
    "check_minimality",
    "pp_dimensions",
    "chow_ring",
    "probe_orthant",
    "star_subdivision",
]


def _enc(value):
    return json.dumps(value)


def _dec(text):
    return json.loads(text)


def enumerate_graphs(g, n):
    return _dec(_core.enumerate_graphs(g, n))


def validate_graph(graph):
    return _dec(_core.validate_graph(_enc(graph)))


def glue_graphs(first, p, second, q):
    return _dec(_core.glue_graphs(_enc(first), p, _enc(second), q))


def glue_loop(graph, p, q):
    return _dec(_core.glue_loop(_enc(graph), p, q))


def forget_leg(graph, leg):
    return _dec(_core.forget_leg(_enc(graph), leg))


def build_moduli(g, n, pointed=True):
    return _dec(_core.build_moduli(g, n, pointed))


def length_class(g, n, i):
    return _dec(_core.length_class(g, n, i))


def boundary_class(g, n, delta):
    return _dec(_core.boundary_class(g, n, _enc(delta)))


def add(a, b):
    return _dec(_core.add(_enc(a), _enc(b)))


def multiply(a, b):
    return _dec(_core.multiply(_enc(a), _enc(b)))


def exp_truncated(x, max_degree):
    return _dec(_core.exp_truncated(_enc(x), max_degree))


def equivalent(a, b):
    return _core.equivalent(_enc(a), _enc(b))


def pullback_glue(g1, n1, g2, n2, cls):
    """Pullback along M(g1,n1+1) x M(g2,n2+1) -> M(g1+g2,n1+n2)."""
    return _dec(_core.pullback_glue(g1, n1, g2, n2, _enc(cls)))


def pullback_loop(g, n, cls):
    """Pullback along M(g-1,n+2) -> M(g,n)."""
    return _dec(_core.pullback_loop(g, n, _enc(cls)))


def pullback_forget(g, n, cls):
    """Pullback along M(g,n+1) -> M(g,n) forgetting the last leg."""
    return _dec(_core.pullback_forget(g, n, _enc(cls)))


def dr_polynomial(g, n, a, L=None, P=None):
    """Returns (class, warnings)."""
    value, warnings = _core.dr_polynomial(
        g, n, list(a), None if L is None else _enc(L), None if P is None else _enc(P)
    )
    return _dec(value), warnings


def validate_class(cls):
    return _dec(_core.validate_class(_enc(cls)))


def balanced_slopes(graph, a, bound):
    return _dec(_core.balanced_slopes(_enc(graph), list(a), bound))


def div_cone(graph, a, slopes):
    return _dec(_core.div_cone(_enc(graph), list(a), list(slopes)))


def div_square(g1, n1, g2, n2, a, bound):
    return _dec(_core.div_square(g1, n1, g2, n2, list(a), bound))


def node_monoid(k, l1, l2):
    return _dec(_core.node_monoid(k, list(l1), list(l2)))


def check_axioms(spec, axioms, max_g, max_n):
    return _dec(_core.check_axioms(_enc(spec), list(axioms), max_g, max_n))


def check_minimality(cls):
    return _dec(_core.check_minimality(_enc(cls)))


def pp_dimensions(fan, max_degree):
    return _core.pp_dimensions(_enc(fan), max_degree)


def chow_ring(fan):
    return _dec(_core.chow_ring(_enc(fan)))


def probe_orthant(rank, rays, max_degree):
    return _dec(_core.probe_orthant(rank, [list(r) for r in rays], max_degree))


def star_subdivision(fan, ray):
    return _dec(_core.star_subdivision(_enc(fan), list(ray)))
