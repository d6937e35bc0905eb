"""T-conditional AR(1) processes ``f_n = theta f_{n-1} + eps_n`` and their NED bound.

``theta`` lies in the range of ``T`` with ``|theta| < 1`` everywhere, the noise
has ``T eps_n = 0`` and ``f_0 = 0``. On the family generated by the noise the
process is NED in ``L^2(T)`` with ``d_n = g`` (a bound on ``||eps_n||_{T,2}``)
and ``xi_m = |theta|^{m+1} / (e - |theta|)``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    IncompatibleOperators,
    NotContractive,
    OperatorsNotNested,
    ThetaNotContractive,
    ThetaNotInRangeOfT,
)
from .lattice import CondExpOperator, is_compatible
from .norms import norm, parse_p
from .process import (
    FamilyOperators,
    NedCertificate,
    ProcessWindow,
    check_mean_zero,
    generated_family,
)
from .report import Report, SlackTracker
from .sampling import random_block_constant

THETA_MAX = 1.0 - 1e-6


def center_noise(raw: ProcessWindow, T: CondExpOperator) -> ProcessWindow:
    """``eps_n = raw_n - T raw_n``."""
    vals = T.space.check(raw.values)
    return ProcessWindow(raw.start, vals - T(vals))


def random_noise(
    T: CondExpOperator,
    steps: int,
    seed=0,
    scale: float = 1.0,
    levels: int | None = None,
    start: int = 1,
) -> ProcessWindow:
    """Seeded centred noise.

    Raw values are uniform on ``[-scale, scale]``, or drawn from ``levels``
    equally spaced points of that interval when ``levels`` is given (coarse
    noise keeps the generated partitions coarse), and then centred with ``T``.
    """
    rng = np.random.default_rng(seed)
    shape = (steps, T.space.size)
    if levels is None:
        raw = rng.uniform(-scale, scale, size=shape)
    else:
        grid = np.linspace(-scale, scale, levels)
        raw = grid[rng.integers(0, levels, size=shape)]
    return center_noise(ProcessWindow(start, raw), T)


@dataclass(frozen=True, eq=False)
class Ar1Instance:
    theta: np.ndarray
    noise: ProcessWindow
    process: ProcessWindow
    g_bound: np.ndarray
    T: CondExpOperator

    def family(self) -> FamilyOperators:
        return generated_family(self.noise, self.T)


def _check_theta(theta, T: CondExpOperator) -> np.ndarray:
    theta = np.broadcast_to(np.asarray(theta, dtype=float), (T.space.size,)).copy()
    if not T.in_range(theta):
        raise ThetaNotInRangeOfT("theta must be constant on the blocks of T")
    if np.max(np.abs(theta)) > THETA_MAX:
        raise ThetaNotContractive(f"max |theta| = {np.max(np.abs(theta))} is not below 1")
    return theta


def closed_form(theta: np.ndarray, noise: ProcessWindow) -> np.ndarray:
    """``f_n = sum_{i<n} theta^i eps_{n-i}`` as a per-atom convolution."""
    steps = len(noise)
    out = np.empty_like(noise.values)
    for a in range(noise.atoms):
        powers = theta[a] ** np.arange(steps)
        out[:, a] = np.convolve(noise.values[:, a], powers)[:steps]
    return out


def generate_ar1(theta, noise: ProcessWindow, T: CondExpOperator) -> Ar1Instance:
    """Run the recursion from ``f_0 = 0``; the noise window must start at 1."""
    theta = _check_theta(theta, T)
    T.space.check(noise.values)
    check_mean_zero(noise, T)
    if noise.start != 1:
        raise ValueError("AR(1) noise is indexed from 1")
    vals = np.empty_like(noise.values)
    prev = np.zeros(noise.atoms)
    for k, eps in enumerate(noise.values):
        prev = theta * prev + eps
        vals[k] = prev
    closed = closed_form(theta, noise)
    scale = 1.0 + float(np.max(np.abs(vals)))
    if np.max(np.abs(closed - vals)) > 1e-9 * scale:
        raise AssertionError("recursion and closed form disagree")
    g = norm(noise.values, T, 2).max(axis=0)
    return Ar1Instance(theta, noise, ProcessWindow(1, vals), g, T)


def ar1_ned_certificate(inst: Ar1Instance, p=2, gaps: int | None = None) -> NedCertificate:
    """Closed-form NED certificate.

    For ``p = 2``: ``d_n = g`` with ``g = max_n ||eps_n||_{T,2}``. Projection
    optimality is specific to ``L^2``; for ``p`` in {1, inf} the tail is only
    within a factor 2 of the defect, so ``d_n = 2 max_n ||eps_n||_{T,p}``.
    In all cases ``xi_m = |theta|^{m+1} / (e - |theta|)``.
    """
    p = parse_p(p)
    steps = len(inst.process)
    gaps = steps if gaps is None else gaps
    a = np.abs(inst.theta)
    xi = np.stack([a ** (m + 1) / (1.0 - a) for m in range(gaps)])
    if p == 2:
        g = inst.g_bound
    else:
        g = 2.0 * norm(inst.noise.values, inst.T, p).max(axis=0)
    d = np.broadcast_to(g, (steps, inst.process.atoms))
    return NedCertificate(p, inst.process.start, d, xi)


def tail_bound(inst: Ar1Instance, n: int, m: int) -> np.ndarray:
    """``||f_n - sum_{i<=m} theta^i eps_{n-i}||_{T,2}``, the truncation error.

    The truncated sum lies in ``R(T_{n-m}^{n+m})``, so this dominates the defect.
    """
    fn = inst.process[n]
    partial = np.zeros_like(fn)
    for i in range(0, min(m, n - 1) + 1):
        partial += inst.theta**i * inst.noise[n - i]
    return norm(fn - partial, inst.T, 2)


def _check_contractive(theta) -> np.ndarray:
    theta = np.asarray(theta, dtype=float)
    if np.any(theta < 0) or np.max(theta) >= 1.0:
        raise NotContractive("need 0 <= theta with every component below 1")
    return theta


def geometric_sum(theta, terms: int) -> tuple[np.ndarray, np.ndarray]:
    """``(sum_{i=0}^{terms} theta^i, e / (e - theta))``."""
    theta = _check_contractive(theta)
    partial = np.zeros_like(theta)
    power = np.ones_like(theta)
    for _ in range(terms + 1):
        partial = partial + power
        power = power * theta
    return partial, 1.0 / (1.0 - theta)


def power_decay_check(theta, tolerance: float) -> int:
    """Smallest ``m >= 1`` with ``max theta^m <= tolerance``."""
    theta = _check_contractive(theta)
    if tolerance <= 0:
        raise ValueError("tolerance must be positive")
    power = np.ones_like(theta)
    m = 0
    while True:
        nxt = power * theta
        if np.any(nxt > power):
            raise AssertionError("powers of theta are not decreasing")
        power = nxt
        m += 1
        if float(power.max()) <= tolerance:
            return m


def verify_projection_optimality(f, S: CondExpOperator, T: CondExpOperator, trials: int = 50, seed=0) -> Report:
    """``Sf`` minimises ``||f - g||_{T,2}`` over block-constant ``g`` in ``R(S)``.

    Also checks ``||f-g||^2 = T(f-Sf)^2 + T(Sf-g)^2`` (the cross term vanishes).
    ``g = Sf`` itself is always among the trials.
    """
    if not is_compatible(S, T):
        raise IncompatibleOperators("S must be compatible with T")
    f = T.space.check(f)
    rng = np.random.default_rng(seed)
    sf = S(f)
    best = T((f - sf) ** 2)
    tr = SlackTracker("projection_optimality")
    dec = SlackTracker("projection_decomposition")
    scale = 1.0 + float(np.max(np.abs(f)))
    for t in range(trials):
        g = sf if t == 0 else random_block_constant(rng, S, scale)
        total = T((f - g) ** 2)
        tr.update(best, total, {"trial": t})
        gap = np.abs(total - (best + T((sf - g) ** 2)))
        cross = np.abs(T((f - sf) * (sf - g)))
        dec.update(np.maximum(gap, cross), np.zeros_like(gap), {"trial": t})
    rep = tr.report()
    rep.parts = [dec.report()]
    rep.passed = rep.passed and rep.parts[0].passed
    return rep


def verify_averaging_pull(U: CondExpOperator, V: CondExpOperator, g, h) -> Report:
    """``U(g * Vh) = Vh * Ug`` when ``VU = UV = V``."""
    if not is_compatible(U, V):
        raise OperatorsNotNested("need VU = UV = V (U's partition must refine V's)")
    g = U.space.check(g)
    h = U.space.check(h)
    lhs = U(g * V(h))
    rhs = V(h) * U(g)
    dev = np.abs(lhs - rhs)
    tr = SlackTracker("averaging_pull")
    tr.update(dev, np.zeros_like(dev))
    return tr.report()
