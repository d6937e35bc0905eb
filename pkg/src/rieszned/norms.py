"""T-conditional norms and the inequalities they satisfy.

``norm(f, T, p)`` is a vector in the range of ``T``: ``T|f|`` for ``p = 1``,
``sqrt(T f^2)`` for ``p = 2`` and the blockwise maximum of ``|f|`` for
``p = inf`` (the least block-constant majorant of ``|f|``).
"""
from __future__ import annotations

import numpy as np

from .errors import IncompatibleOperators, SpaceMismatch
from .lattice import CondExpOperator, is_compatible
from .report import Report, SlackTracker, combine
from .sampling import random_block_constant

P_VALUES = (1, 2, np.inf)
HOLDER_PAIRS = ((1, np.inf), (2, 2))


def parse_p(p) -> float:
    if isinstance(p, str):
        key = p.strip().lower()
        if key in ("inf", "infinity", "oo"):
            return np.inf
        p = float(key)
    p = float(p)
    if p not in (1.0, 2.0, np.inf):
        raise ValueError(f"p must be one of 1, 2, inf (got {p})")
    return p


def p_label(p) -> str:
    p = parse_p(p)
    return "inf" if np.isinf(p) else str(int(p))


def norm(f, T: CondExpOperator, p=2) -> np.ndarray:
    p = parse_p(p)
    f = T.space.check(f)
    if p == 1:
        return T(np.abs(f))
    if p == 2:
        return np.sqrt(np.maximum(T(f * f), 0.0))
    return T.block_max(np.abs(f))


def _same_space(T: CondExpOperator, *vs):
    return [T.space.check(v) for v in vs]


def verify_norm_axioms(T: CondExpOperator, trials: int = 100, seed=0) -> list[Report]:
    """Definiteness, R(T)-homogeneity and the triangle inequality, for each p.

    Random ``f, g`` and block-constant ``r`` are drawn from ``seed``; in every
    other trial some ``T``-blocks of ``f`` are zeroed so definiteness is
    exercised on both sides of the equivalence.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    n = T.space.size
    reports = []
    trackers = {
        (ax, p): SlackTracker(f"norm.{ax}[p={p_label(p)}]")
        for ax in ("definiteness", "homogeneity", "triangle")
        for p in P_VALUES
    }
    for t in range(trials):
        f = rng.normal(size=n) * rng.uniform(0.1, 5.0)
        g = rng.normal(size=n) * rng.uniform(0.1, 5.0)
        if t % 2 == 1:
            killed = rng.random(T.n_blocks) < 0.5
            f = f * T.broadcast(~killed)
        r = random_block_constant(rng, T, scale=3.0)
        zero_blocks = T.broadcast(
            [not np.any(f[list(b)] != 0.0) for b in T.partition.blocks]
        ).astype(bool)
        for p in P_VALUES:
            nf = norm(f, T, p)
            where = {"trial": t}
            # norm vanishes exactly on the blocks where f does
            tr = trackers[("definiteness", p)]
            tr.update(nf[zero_blocks], np.zeros(int(zero_blocks.sum())), where)
            if np.any(nf[~zero_blocks] <= 0.0):
                tr.fail(where)
            lhs = norm(r * g, T, p)
            rhs = np.abs(r) * norm(g, T, p)
            dev = np.abs(lhs - rhs)
            trackers[("homogeneity", p)].update(dev, np.zeros_like(dev), where)
            trackers[("triangle", p)].update(
                norm(f + g, T, p), nf + norm(g, T, p), where
            )
    for tr in trackers.values():
        reports.append(tr.report())
    return reports


def verify_holder(f, g, T: CondExpOperator, pq=(2, 2)) -> Report:
    """``||fg||_{T,1} <= ||f||_{T,p} ||g||_{T,q}`` for ``(p, q)`` in {(1,inf), (2,2)}."""
    p, q = (parse_p(x) for x in pq)
    if (p, q) not in HOLDER_PAIRS:
        raise ValueError(f"Hölder pair must be (1, inf) or (2, 2), got {pq}")
    f, g = _same_space(T, f, g)
    if f.shape != g.shape:
        raise SpaceMismatch("f and g have different shapes")
    tr = SlackTracker(f"holder[{p_label(p)},{p_label(q)}]")
    lhs = norm(f * g, T, 1)
    rhs = norm(f, T, p) * norm(g, T, q)
    tr.update(lhs, rhs)
    rep = tr.report()
    rep.slack = rhs - lhs
    return rep


def verify_lyapunov(f, T: CondExpOperator) -> Report:
    """``||f||_{T,1} <= ||f||_{T,2} <= ||f||_{T,inf}``."""
    (f,) = _same_space(T, f)
    n1, n2, ninf = norm(f, T, 1), norm(f, T, 2), norm(f, T, np.inf)
    tr = SlackTracker("lyapunov")
    tr.update(n1, n2, {"step": "1<=2"})
    tr.update(n2, ninf, {"step": "2<=inf"})
    rep = tr.report()
    rep.slack = np.minimum(n2 - n1, ninf - n2)
    return rep


def verify_jensen(S: CondExpOperator, T: CondExpOperator, f, p=2) -> Report:
    """``||Sf||_{T,p} <= ||f||_{T,p}`` for ``S`` compatible with ``T``."""
    if not is_compatible(S, T):
        raise IncompatibleOperators("S is not compatible with T (ST = TS = T fails)")
    p = parse_p(p)
    (f,) = _same_space(T, f)
    lhs = norm(S(f), T, p)
    rhs = norm(f, T, p)
    tr = SlackTracker(f"jensen[p={p_label(p)}]")
    tr.update(lhs, rhs)
    rep = tr.report()
    rep.slack = rhs - lhs
    return rep


def sweep_inequalities(T: CondExpOperator, compatible, trials: int, seed=0) -> Report:
    """Hölder (both pairs), Lyapunov and Jensen on random vectors.

    ``compatible`` is a list of operators compatible with ``T`` used for the
    Jensen contraction.
    """
    rng = np.random.default_rng(seed)
    n = T.space.size
    parts: dict[str, list[Report]] = {}
    for t in range(trials):
        f = rng.normal(size=n) * rng.uniform(0.1, 5.0)
        g = rng.normal(size=n) * rng.uniform(0.1, 5.0)
        for pq in HOLDER_PAIRS:
            r = verify_holder(f, g, T, pq)
            parts.setdefault(r.property, []).append(r)
        r = verify_lyapunov(f, T)
        parts.setdefault(r.property, []).append(r)
        for S in compatible:
            for p in P_VALUES:
                r = verify_jensen(S, T, f, p)
                parts.setdefault(r.property, []).append(r)
    return combine("norm.inequalities", [combine(k, v) for k, v in parts.items()])
