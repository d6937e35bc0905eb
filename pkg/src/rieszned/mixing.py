"""T-conditional strong (alpha) and uniform (phi) mixing coefficients.

Both are suprema over band projections that commute with the operators
involved. In the finite model ``B(S)`` is the set of indicators of unions of
``S``-blocks, so the suprema are exact maxima over ``2^b`` projections. The
value is a vector in the range of ``T`` (one number per ``T``-block).
"""
from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np

from .errors import CapExceeded, IncompatibleOperators, NotInRangeOfV, WindowTooSmall
from .lattice import BandProjection, CondExpOperator, is_compatible
from .norms import norm
from .report import Report, SlackTracker

if TYPE_CHECKING:
    from .process import FamilyOperators

DEFAULT_CAP = 12
_ROW_CHUNK = 1024


def _indicator_matrix(S: CondExpOperator, cap: int) -> np.ndarray:
    b = S.n_blocks
    if b > cap:
        raise CapExceeded(b, cap)
    bits = (np.arange(1 << b)[:, None] >> np.arange(b)[None, :]) & 1
    return bits.astype(float) @ S.partition.membership


def enumerate_band_projections(S: CondExpOperator, cap: int = DEFAULT_CAP) -> list[BandProjection]:
    """All ``2^b`` projections in ``B(S)``; row ``k`` of the bitmask picks blocks."""
    return [BandProjection(row) for row in _indicator_matrix(S, cap)]


def _require_compatible(T: CondExpOperator, *ops: CondExpOperator):
    for S in ops:
        if not is_compatible(S, T):
            raise IncompatibleOperators(
                "mixing coefficients need operators compatible with T"
            )


def alpha(U: CondExpOperator, V: CondExpOperator, T: CondExpOperator, cap: int = DEFAULT_CAP) -> np.ndarray:
    """``sup |T(PQe) - TPe * TQe|`` over ``P`` in ``B(U)``, ``Q`` in ``B(V)``."""
    _require_compatible(T, U, V)
    P = _indicator_matrix(U, cap)
    Q = _indicator_matrix(V, cap)
    w = T.space.w
    out = np.zeros(T.space.size)
    for block in T.partition.blocks:
        idx = list(block)
        wn = w[idx] / w[idx].sum()
        # Only the restriction of P and Q to this T-block matters here, and
        # the max over a multiset equals the max over its distinct rows.
        pc = np.unique(P[:, idx], axis=0)
        qc = np.unique(Q[:, idx], axis=0)
        tq = qc @ wn
        best = 0.0
        for lo in range(0, len(pc), _ROW_CHUNK):
            rows = pc[lo : lo + _ROW_CHUNK]
            joint = (rows * wn) @ qc.T
            dev = np.abs(joint - np.outer(rows @ wn, tq))
            best = max(best, float(dev.max()))
        out[idx] = best
    return out


def phi(U: CondExpOperator, V: CondExpOperator, T: CondExpOperator, cap: int = DEFAULT_CAP) -> np.ndarray:
    """``sup ||UQe - TQe||_{T,inf}`` over ``Q`` in ``B(V)``."""
    _require_compatible(T, U, V)
    Q = _indicator_matrix(V, cap)
    dev = T.block_max(np.abs(U(Q) - T(Q)))
    return dev.max(axis=0)


def alpha_brute(U, V, T, cap: int = DEFAULT_CAP) -> np.ndarray:
    """Pair-by-pair evaluation of ``alpha`` over whole-space projections.

    Slow; kept as an independent check of :func:`alpha`.
    """
    _require_compatible(T, U, V)
    best = np.zeros(T.space.size)
    e = T.space.e
    Qs = enumerate_band_projections(V, cap)
    for P in enumerate_band_projections(U, cap):
        tp = T(P(e))
        for Q in Qs:
            val = np.abs(T(P(Q(e))) - tp * T(Q(e)))
            best = np.maximum(best, val)
    return best


def verify_strong_mixing_inequality(U, V, T, f, cap: int = DEFAULT_CAP, alpha_value=None) -> Report:
    """``||Uf - Tf||_{T,1} <= 4 alpha_T(U,V) ||f||_{T,inf}`` for ``f`` in ``R(V)``."""
    _require_compatible(T, U, V)
    f = T.space.check(f)
    if not V.in_range(f):
        raise NotInRangeOfV("f must be constant on the blocks of V")
    a = alpha(U, V, T, cap) if alpha_value is None else np.asarray(alpha_value)
    tr = SlackTracker("mixing.strong_inequality")
    tr.update(norm(U(f) - T(f), T, 1), 4.0 * a * norm(f, T, np.inf))
    return tr.report()


def verify_uniform_mixing_inequality(U, V, T, f, cap: int = DEFAULT_CAP, phi_value=None) -> Report:
    """``||Uf-Tf||_{T,1} <= ||Uf-Tf||_{T,inf} <= 2 phi_T(U,V) ||f||_{T,inf}``."""
    _require_compatible(T, U, V)
    f = T.space.check(f)
    if not V.in_range(f):
        raise NotInRangeOfV("f must be constant on the blocks of V")
    ph = phi(U, V, T, cap) if phi_value is None else np.asarray(phi_value)
    diff = U(f) - T(f)
    sup = norm(diff, T, np.inf)
    tr = SlackTracker("mixing.uniform_inequality")
    tr.update(norm(diff, T, 1), sup, {"step": "1<=inf"})
    tr.update(sup, 2.0 * ph * norm(f, T, np.inf), {"step": "inf<=2phi"})
    return tr.report()


class SequenceMixing:
    """Windowed sequence coefficients ``alpha_{T,m}`` and ``phi_{T,m}``.

    The past ``T_{-inf}^n`` and future ``T_{n+m}^inf`` of the family are its
    window tails; the sup over ``n`` runs over the window. Values for repeated
    operator pairs are computed once.
    """

    def __init__(self, family: "FamilyOperators", cap: int = DEFAULT_CAP):
        self.family = family
        self.cap = cap
        self._pairs: dict = {}

    def _pair(self, U, V):
        key = (U.partition, V.partition)
        if key not in self._pairs:
            T = self.family.base
            self._pairs[key] = (alpha(U, V, T, self.cap), phi(U, V, T, self.cap))
        return self._pairs[key]

    def coefficients(self, m: int) -> tuple[np.ndarray, np.ndarray]:
        fam = self.family
        if m < 0 or m > fam.stop - fam.start:
            raise WindowTooSmall(
                f"gap {m} does not fit the window [{fam.start}, {fam.stop}]"
            )
        a = np.zeros(fam.base.space.size)
        ph = np.zeros_like(a)
        for n in range(fam.start, fam.stop + 1):
            pa, pp = self._pair(fam.past(n), fam.future(n + m))
            a = np.maximum(a, pa)
            ph = np.maximum(ph, pp)
        return a, ph


def sequence_alpha(family: "FamilyOperators", m: int, cap: int = DEFAULT_CAP) -> np.ndarray:
    return SequenceMixing(family, cap).coefficients(m)[0]


def sequence_phi(family: "FamilyOperators", m: int, cap: int = DEFAULT_CAP) -> np.ndarray:
    return SequenceMixing(family, cap).coefficients(m)[1]
