"""Processes on a finite index window, operator families, NED and mixingales.

A process is a :class:`ProcessWindow`: vectors ``f_n`` for ``n`` in
``[start, stop]``. Objects indexed by all integers are realised on the window:

* ``T_i^j`` with ``i`` or ``j`` outside the window uses the clamped indices,
  and an empty interval gives the base operator ``T``;
* the tails ``T_{-inf}^n`` and ``T_n^inf`` are ``T_start^n`` and ``T_n^stop``.

Clamping keeps the nesting ``R(T_{i+1}^j) <= R(T_i^j) <= R(T_i^{j+1})``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce
from typing import Any, Sequence

import numpy as np

from .errors import (
    CertificateRejected,
    IncompatibleOperators,
    IndexOutOfWindow,
    MissingBounds,
    NonZeroConditionalMean,
    NotAFiltration,
    RangeNotNested,
    ShapeMismatch,
    SpaceMismatch,
    ValidationError,
    WindowOverflow,
)
from .lattice import CondExpOperator, Partition, is_compatible
from .mixing import DEFAULT_CAP, SequenceMixing
from .norms import norm, p_label, parse_p
from .report import Report, SlackTracker, combine

MEAN_ZERO_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class ProcessWindow:
    start: int
    values: np.ndarray

    def __post_init__(self):
        vals = np.array(self.values, dtype=float)
        if vals.ndim != 2 or vals.shape[0] == 0:
            raise ShapeMismatch("a process window needs a (steps, atoms) array")
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "start", int(self.start))

    @classmethod
    def from_vectors(cls, start: int, vectors: Sequence) -> "ProcessWindow":
        return cls(start, np.stack([np.asarray(v, dtype=float) for v in vectors]))

    @property
    def stop(self) -> int:
        return self.start + len(self.values) - 1

    @property
    def atoms(self) -> int:
        return self.values.shape[1]

    def __len__(self) -> int:
        return len(self.values)

    def indices(self) -> range:
        return range(self.start, self.stop + 1)

    def __getitem__(self, n: int) -> np.ndarray:
        if not self.start <= n <= self.stop:
            raise IndexOutOfWindow(f"index {n} outside [{self.start}, {self.stop}]")
        return self.values[n - self.start]

    def shifted(self, s: int) -> "ProcessWindow":
        """The process ``n -> f_{n+s}`` on ``[start, stop - s]``."""
        if s < 0 or s >= len(self):
            raise WindowOverflow(f"shift {s} leaves nothing of a {len(self)}-step window")
        return ProcessWindow(self.start, self.values[s:])

    def __add__(self, other: "ProcessWindow") -> "ProcessWindow":
        _same_window(self, other)
        return ProcessWindow(self.start, self.values + other.values)

    def __mul__(self, other: "ProcessWindow") -> "ProcessWindow":
        _same_window(self, other)
        return ProcessWindow(self.start, self.values * other.values)


def _same_window(a: ProcessWindow, b: ProcessWindow):
    if a.start != b.start or a.values.shape != b.values.shape:
        raise ShapeMismatch(
            f"windows differ: [{a.start},{a.stop}]x{a.atoms} vs [{b.start},{b.stop}]x{b.atoms}"
        )


class Filtration:
    """Increasing operators ``F_n``; below the window ``F_n = T``, above it ``F_stop``."""

    def __init__(self, base: CondExpOperator, start: int, ops: Sequence[CondExpOperator]):
        self.base = base
        self.start = start
        self.ops = list(ops)

    @property
    def stop(self) -> int:
        return self.start + len(self.ops) - 1

    def at(self, n: int) -> CondExpOperator:
        if n < self.start:
            return self.base
        return self.ops[min(n, self.stop) - self.start]

    def check(self):
        prev = self.base
        for k, op in enumerate(self.ops):
            if op.space != self.base.space:
                raise NotAFiltration("filtration member on another space")
            if not is_compatible(op, self.base):
                raise NotAFiltration(f"F_{self.start + k} is not compatible with T")
            if not op.partition.refines(prev.partition):
                raise NotAFiltration(f"F_{self.start + k} does not extend its predecessor")
            prev = op


class FamilyOperators:
    """Two-parameter family ``T_i^j`` on a window, stored as partitions."""

    def __init__(self, base: CondExpOperator, start: int, stop: int, partitions: dict):
        self.base = base
        self.start = start
        self.stop = stop
        self.partitions = partitions
        self._ops: dict[Partition, CondExpOperator] = {base.partition: base}

    @property
    def space(self):
        return self.base.space

    def partition(self, i: int, j: int) -> Partition:
        i, j = max(i, self.start), min(j, self.stop)
        if i > j:
            return self.base.partition
        return self.partitions[(i, j)]

    def op(self, i: int, j: int) -> CondExpOperator:
        part = self.partition(i, j)
        S = self._ops.get(part)
        if S is None:
            S = CondExpOperator(self.base.space, part)
            self._ops[part] = S
        return S

    def past(self, n: int) -> CondExpOperator:
        return self.op(self.start, n)

    def future(self, n: int) -> CondExpOperator:
        return self.op(n, self.stop)

    def filtration(self) -> Filtration:
        return Filtration(
            self.base, self.start, [self.past(n) for n in range(self.start, self.stop + 1)]
        )

    def check_nesting(self) -> bool:
        base = self.base.partition
        for i in range(self.start, self.stop + 1):
            for j in range(i, self.stop + 1):
                p = self.partition(i, j)
                if not p.refines(base):
                    return False
                if not p.refines(self.partition(i + 1, j)):
                    return False
                if not self.partition(i, j + 1).refines(p):
                    return False
        return True


def constant_family(T: CondExpOperator, start: int, stop: int) -> FamilyOperators:
    parts = {(i, j): T.partition for i in range(start, stop + 1) for j in range(i, stop + 1)}
    return FamilyOperators(T, start, stop, parts)


def generated_family(noise, T: CondExpOperator) -> FamilyOperators:
    """``R(T_i^j)`` generated by ``R(T)`` and the noise vectors at times ``i..j``.

    ``noise`` is a window or a list of windows sharing one index range; with
    several, ``T_i^j`` sees all of them. Atoms share a block of ``T_i^j`` iff
    they share a ``T``-block and every noise value in the range.
    """
    windows = [noise] if isinstance(noise, ProcessWindow) else list(noise)
    if not windows:
        raise ValueError("need at least one noise window")
    first = windows[0]
    for w in windows:
        if w.atoms != T.space.size:
            raise SpaceMismatch("noise does not live on T's space")
        _same_window(first, w)
    levels = [
        reduce(Partition.join, [Partition.level_sets(w[r]) for w in windows])
        for r in first.indices()
    ]
    parts = {}
    for i in first.indices():
        p = T.partition
        for j in range(i, first.stop + 1):
            p = p.join(levels[j - first.start])
            parts[(i, j)] = p
    return FamilyOperators(T, first.start, first.stop, parts)


@dataclass(frozen=True, eq=False)
class NedCertificate:
    """Bounds ``||f_n - T_{n-m}^{n+m} f_n||_{T,p} <= d_n * xi_m``.

    ``d`` has one row per window index, ``xi`` one row per gap ``m = 0, 1, ...``.
    """

    p: float
    start: int
    d: np.ndarray
    xi: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "p", parse_p(self.p))
        for name in ("d", "xi"):
            arr = np.array(getattr(self, name), dtype=float)
            if arr.ndim != 2:
                raise ShapeMismatch(f"{name} must be a 2-d array")
            if np.any(arr < 0):
                raise ValidationError(f"{name} must be nonnegative")
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)
        if self.d.shape[1] != self.xi.shape[1]:
            raise ShapeMismatch("d and xi disagree on the atom count")

    @property
    def gaps(self) -> int:
        return len(self.xi)

    def bound(self, n: int, m: int) -> np.ndarray:
        return self.d[n - self.start] * self.xi[m]

    def decays(self, tol: float = 1e-3) -> bool:
        """Running-min envelope of ``xi`` ends below ``tol``."""
        env = np.minimum.accumulate(self.xi, axis=0)
        return float(env[-1].max()) <= tol


@dataclass(frozen=True, eq=False)
class MixingaleCertificate:
    """Bounds ``c_n * phi_m`` for both mixingale conditions; ``phi`` non-increasing."""

    p: float
    start: int
    c: np.ndarray
    phi: np.ndarray
    info: dict[str, Any] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "p", parse_p(self.p))
        c = np.array(self.c, dtype=float)
        ph = np.array(self.phi, dtype=float)
        if c.ndim != 2 or ph.ndim != 2 or c.shape[1] != ph.shape[1]:
            raise ShapeMismatch("c and phi must be 2-d with matching atom counts")
        if np.any(c < 0) or np.any(ph < 0):
            raise ValidationError("c and phi must be nonnegative")
        ph = np.minimum.accumulate(ph, axis=0)
        c.flags.writeable = False
        ph.flags.writeable = False
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "phi", ph)


def ned_defect(f: ProcessWindow, family: FamilyOperators, n: int, m: int, p=2) -> np.ndarray:
    fn = f[n]
    return norm(fn - family.op(n - m, n + m)(fn), family.base, p)


def defect_grid(f: ProcessWindow, family: FamilyOperators, gaps: int, p=2) -> np.ndarray:
    """Defects for every window index and ``m < gaps``: shape ``(steps, gaps, atoms)``."""
    out = np.empty((len(f), gaps, f.atoms))
    for a, n in enumerate(f.indices()):
        for m in range(gaps):
            out[a, m] = ned_defect(f, family, n, m, p)
    return out


def _check_cert_shape(f: ProcessWindow, start: int, rows: np.ndarray, what: str):
    if start != f.start or rows.shape != f.values.shape:
        raise ShapeMismatch(
            f"{what} covers [{start}, {start + len(rows) - 1}]x{rows.shape[1]}, "
            f"process covers [{f.start}, {f.stop}]x{f.atoms}"
        )


def verify_ned(f: ProcessWindow, family: FamilyOperators, cert: NedCertificate, p=None) -> Report:
    """Check ``defect(n, m) <= d_n xi_m`` at every window index and certified gap.

    ``p`` overrides the certificate's exponent (a certificate valid at ``p``
    stays valid at every smaller exponent).
    """
    _check_cert_shape(f, cert.start, cert.d, "certificate")
    T = family.base
    if not T.in_range(cert.xi):
        raise ValidationError("xi must be constant on the blocks of T")
    p = cert.p if p is None else parse_p(p)
    tr = SlackTracker(f"ned[p={p_label(p)}]")
    for n in f.indices():
        for m in range(cert.gaps):
            tr.update(ned_defect(f, family, n, m, p), cert.bound(n, m), {"n": n, "m": m})
    rep = tr.report()
    if rep.location is not None:
        rep.location["block"] = int(T.partition.labels[rep.location["atom"]])
    return rep


def defect_rows(f: ProcessWindow, family: FamilyOperators, cert: NedCertificate, p=None) -> list[dict]:
    """Per ``(n, m, T-block)`` rows: defect, smallest bound in the block, slack."""
    T = family.base
    p = cert.p if p is None else parse_p(p)
    rows = []
    for n in f.indices():
        for m in range(cert.gaps):
            dfc = ned_defect(f, family, n, m, p)
            bnd = cert.bound(n, m)
            for k, b in enumerate(T.partition.blocks):
                idx = list(b)
                lo = float(bnd[idx].min())
                val = float(dfc[idx].max())
                rows.append({"n": n, "m": m, "block": k, "defect": val, "bound": lo, "slack": lo - val})
    return rows


def _common_gaps(a: NedCertificate, b: NedCertificate) -> int:
    return min(a.gaps, b.gaps)


def ned_sum_certificate(cert_f: NedCertificate, cert_g: NedCertificate) -> NedCertificate:
    """``d = d^f v d^g``, ``xi = xi^f + xi^g``, at exponent ``min(p, q)``."""
    if cert_f.start != cert_g.start or cert_f.d.shape != cert_g.d.shape:
        raise ShapeMismatch("certificates cover different windows")
    g = _common_gaps(cert_f, cert_g)
    return NedCertificate(
        p=min(cert_f.p, cert_g.p),
        start=cert_f.start,
        d=np.maximum(cert_f.d, cert_g.d),
        xi=cert_f.xi[:g] + cert_g.xi[:g],
    )


def ned_product_certificate(
    cert_f: NedCertificate,
    cert_g: NedCertificate,
    f: ProcessWindow | None = None,
    g: ProcessWindow | None = None,
    T: CondExpOperator | None = None,
    r_g=None,
    h=None,
) -> NedCertificate:
    """Certificate for ``(f_n g_n)``.

    Two rules are available, picked from the exponents:

    * ``g`` certified in ``L^inf``: ``d_n = r_n ||f_n||_{T,p} v d^f_n h_n v d^f_n r_n``
      at exponent ``p`` of ``f``. Here ``r_n >= d^g_n`` and ``h_n >= |g_n|`` are
      block-constant; by default they are the blockwise maxima of ``d^g_n``
      and ``|g_n|``.
    * both certified in ``L^2``: ``d_n = d^g_n ||f_n||_{T,2} v d^f_n ||g_n||_{T,2} v d^f_n d^g_n``
      at exponent 1.

    In both, ``xi = xi^f + xi^g + xi^f xi^g``.
    """
    if cert_f.start != cert_g.start or cert_f.d.shape != cert_g.d.shape:
        raise ShapeMismatch("certificates cover different windows")
    if np.isinf(cert_f.p) and not np.isinf(cert_g.p):
        # the product commutes; r_g and h always describe the L^inf factor
        cert_f, cert_g, f, g = cert_g, cert_f, g, f
    if T is None:
        raise MissingBounds("the base operator T is required")
    k = _common_gaps(cert_f, cert_g)
    xf, xg = cert_f.xi[:k], cert_g.xi[:k]
    xi = xf + xg + xf * xg
    if np.isinf(cert_g.p):
        if f is None:
            raise MissingBounds("norms of f_n are needed; pass the f process")
        if h is None:
            if g is None:
                raise MissingBounds("need h_n >= |g_n| or the g process")
            h = T.block_max(np.abs(g.values))
        if r_g is None:
            r_g = T.block_max(cert_g.d)
        h = np.broadcast_to(np.asarray(h, dtype=float), cert_f.d.shape)
        r_g = np.broadcast_to(np.asarray(r_g, dtype=float), cert_f.d.shape)
        if not (T.in_range(h) and T.in_range(r_g)):
            raise ValidationError("h and r_g must be constant on the blocks of T")
        if np.any(r_g < cert_g.d - 1e-12):
            raise ValidationError("r_g must dominate d^g")
        fn = norm(f.values, T, cert_f.p)
        d = np.maximum.reduce([r_g * fn, cert_f.d * h, cert_f.d * r_g])
        return NedCertificate(cert_f.p, cert_f.start, d, xi)
    if cert_f.p == 2 and cert_g.p == 2:
        if f is None or g is None:
            raise MissingBounds("L^2 norms of f_n and g_n are needed")
        d = np.maximum.reduce(
            [cert_g.d * norm(f.values, T, 2), cert_f.d * norm(g.values, T, 2), cert_f.d * cert_g.d]
        )
        return NedCertificate(1, cert_f.start, d, xi)
    raise ValueError(
        f"no product rule for exponents ({p_label(cert_f.p)}, {p_label(cert_g.p)}); "
        "need (p, inf) or (2, 2)"
    )


def ned_shift_certificate(
    cert: NedCertificate,
    shift: int,
    f: ProcessWindow | None = None,
    T: CondExpOperator | None = None,
    rule: str = "bounded",
) -> NedCertificate:
    """Certificate for ``n -> f_{n+shift}`` on the same family.

    For gaps ``k >= shift`` the window ``[n-k, n+k]`` contains
    ``[n+shift-(k-shift), n+shift+(k-shift)]``, so the factor-2 projection
    bound gives ``2 d_{n+shift} xi_{k-shift}``. For ``k < shift`` the window
    misses ``n+shift`` and only ``2 ||f_{n+shift}||_{T,p}`` is available; the
    default ``rule="bounded"`` folds that in as
    ``d'_n = 2 (d_{n+shift} v ||f_{n+shift}||_{T,p})`` with ``xi'_k = e v xi_0``.

    ``rule="literal"`` uses ``d'_n = 2 d_{n+shift}`` with ``xi'_k = xi_1`` for
    ``k <= shift``; it can fail for ``0 < k < shift``.
    """
    steps = len(cert.d)
    if shift < 0 or shift >= steps:
        raise WindowOverflow(f"shift {shift} leaves nothing of a {steps}-step window")
    if cert.gaps < 2 and shift > 0:
        raise WindowOverflow("need at least two certified gaps")
    d_sh = cert.d[shift:]
    ks = np.arange(cert.gaps)
    if rule == "literal":
        xi = np.stack([cert.xi[1] if k <= shift and shift > 0 else cert.xi[k - shift] for k in ks])
        return NedCertificate(cert.p, cert.start, 2.0 * d_sh, xi)
    if rule != "bounded":
        raise ValueError(f"unknown shift rule {rule!r}")
    if shift == 0:
        return NedCertificate(cert.p, cert.start, 2.0 * d_sh, cert.xi)
    if f is None or T is None:
        raise MissingBounds("shifting by more than 0 needs the process and T")
    if len(f) != steps or f.start != cert.start:
        raise ShapeMismatch("process and certificate windows differ")
    fn = norm(f.values[shift:], T, cert.p)
    head = np.maximum(1.0, cert.xi[0])
    xi = np.stack([head if k < shift else cert.xi[k - shift] for k in ks])
    return NedCertificate(cert.p, cert.start, 2.0 * np.maximum(d_sh, fn), xi)


def verify_two_sided_projection_bound(f, U: CondExpOperator, V: CondExpOperator, T: CondExpOperator, p=2) -> Report:
    """``||f - Vf||_{T,p} <= 2 ||f - Uf||_{T,p}`` when ``R(U)`` is inside ``R(V)``."""
    for S in (U, V):
        if not is_compatible(S, T):
            raise IncompatibleOperators("U and V must be compatible with T")
    if not V.partition.refines(U.partition):
        raise RangeNotNested("R(U) must be contained in R(V)")
    f = T.space.check(f)
    p = parse_p(p)
    tr = SlackTracker(f"two_sided_projection[p={p_label(p)}]")
    lhs = norm(f - V(f), T, p)
    rhs = 2.0 * norm(f - U(f), T, p)
    tr.update(lhs, rhs)
    rep = tr.report()
    rep.slack = rhs - lhs
    rep.details["factor_one_slack"] = float(np.min(rhs / 2.0 - lhs))
    return rep


def check_mean_zero(f: ProcessWindow, T: CondExpOperator):
    for n in f.indices():
        fn = f[n]
        if np.max(np.abs(T(fn))) > MEAN_ZERO_TOL * (1.0 + np.max(np.abs(fn))):
            raise NonZeroConditionalMean(f"T f_{n} is not zero")


def verify_mixingale(f: ProcessWindow, filtration: Filtration, cert: MixingaleCertificate) -> Report:
    """Both mixingale conditions at every window index and certified gap.

    (i)  ``||F_{n-m} f_n||_{T,p} <= c_n phi_m``
    (ii) ``||f_n - F_{n+m} f_n||_{T,p} <= c_n phi_{m+1}``

    The stricter variant of (ii) with ``phi_{m+2}`` is reported as an extra,
    informational part; it does not affect ``passed``.
    """
    filtration.check()
    _check_cert_shape(f, cert.start, cert.c, "mixingale certificate")
    T = filtration.base
    if not T.in_range(cert.phi):
        raise ValidationError("phi must be constant on the blocks of T")
    p = cert.p
    gaps = len(cert.phi)
    lag = SlackTracker(f"mixingale.i[p={p_label(p)}]")
    lead = SlackTracker(f"mixingale.ii[p={p_label(p)}]")
    lead2 = SlackTracker(f"mixingale.ii_phi_m+2[p={p_label(p)}]")
    for n in f.indices():
        fn = f[n]
        cn = cert.c[n - cert.start]
        for m in range(gaps):
            where = {"n": n, "m": m}
            lag.update(norm(filtration.at(n - m)(fn), T, p), cn * cert.phi[m], where)
            if m + 1 < gaps:
                resid = norm(fn - filtration.at(n + m)(fn), T, p)
                lead.update(resid, cn * cert.phi[m + 1], where)
                if m + 2 < gaps:
                    lead2.update(resid, cn * cert.phi[m + 2], where)
    rep = combine(f"mixingale[p={p_label(p)}]", [lag.report(), lead.report()])
    extra = lead2.report(informational=True)
    rep.parts.append(extra)
    return rep


def mixingale_from_ned(
    f: ProcessWindow,
    family: FamilyOperators,
    cert: NedCertificate,
    cap: int = DEFAULT_CAP,
    max_m: int | None = None,
) -> MixingaleCertificate:
    """Mixingale bounds for a bounded, T-conditionally centred NED process.

    With ``k = floor(m/2)``: ``c_n = d_n v ||f_n||_{T,inf}`` and
    ``phi_m = 2 (xi_k + min(2 alpha_{T,k}, phi_{T,k}))``, made non-increasing.
    The filtration is ``T_start^n``. The result is checked with
    :func:`verify_mixingale` before it is returned.
    """
    T = family.base
    _check_cert_shape(f, cert.start, cert.d, "certificate")
    check_mean_zero(f, T)
    steps = len(f)
    top = steps if max_m is None else max_m
    top = min(top, 2 * cert.gaps - 1, 2 * (family.stop - family.start) + 1)
    c = np.maximum(cert.d, norm(f.values, T, np.inf))
    seq = SequenceMixing(family, cap)
    coeffs = [seq.coefficients(k) for k in range(top // 2 + 1)]
    raw = np.stack(
        [2.0 * (cert.xi[m // 2] + np.minimum(2.0 * coeffs[m // 2][0], coeffs[m // 2][1])) for m in range(top + 1)]
    )
    out = MixingaleCertificate(
        p=1,
        start=cert.start,
        c=c,
        phi=raw,
        info={
            "alpha": np.stack([a for a, _ in coeffs]),
            "phi_mixing": np.stack([b for _, b in coeffs]),
            "phi_raw": raw,
        },
    )
    rep = verify_mixingale(f, family.filtration(), out)
    if not rep.passed:
        raise CertificateRejected("constructed mixingale bounds do not hold", rep)
    out.info["report"] = rep
    return out


def t_uniform_profile(f: ProcessWindow, T: CondExpOperator, c_grid) -> list[np.ndarray]:
    """For each level ``c``: ``max_n T(1_{|f_n| > c} |f_n|)``."""
    c_grid = [float(c) for c in c_grid]
    if any(c <= 0 for c in c_grid) or any(b <= a for a, b in zip(c_grid, c_grid[1:])):
        raise ValueError("c_grid must be positive and increasing")
    a = np.abs(f.values)
    return [T(np.where(a > c, a, 0.0)).max(axis=0) for c in c_grid]


def cesaro_norm(f: ProcessWindow, T: CondExpOperator, n: int, m: int) -> np.ndarray:
    """``T |(1/m) sum_{i=n+1}^{n+m} f_i|``."""
    if m < 1:
        raise ValueError("m must be >= 1")
    if n + 1 < f.start or n + m > f.stop:
        raise WindowOverflow(f"indices {n + 1}..{n + m} leave [{f.start}, {f.stop}]")
    lo = n + 1 - f.start
    avg = f.values[lo : lo + m].mean(axis=0)
    return T(np.abs(avg))


def lln_check(
    f: ProcessWindow,
    T: CondExpOperator,
    schedule: Sequence[int],
    ratio_bound: float,
    final_bound: float,
    n: int | None = None,
) -> Report:
    """Decay of ``max T|mean(f_{n+1..n+m})|`` along an increasing schedule of ``m``.

    Passes iff the value at the last ``m`` is at most ``final_bound`` and the
    geometric mean of successive ratios is at most ``ratio_bound``. Whether
    every step decreases is reported in ``details["monotone"]``.
    """
    schedule = [int(m) for m in schedule]
    if not schedule or any(b <= a for a, b in zip(schedule, schedule[1:])):
        raise ValueError("schedule must be a nonempty increasing list")
    if n is None:
        n = f.start - 1
    values = [float(cesaro_norm(f, T, n, m).max()) for m in schedule]
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = [b / a if a > 0 else (0.0 if b == 0 else np.inf) for a, b in zip(values, values[1:])]
    if ratios:
        gm = float(np.exp(np.mean(np.log(np.maximum(ratios, 1e-300)))))
    else:
        gm = 0.0
    if all(v == 0.0 for v in values):
        gm = 0.0
    slack_final = final_bound - values[-1]
    slack_ratio = ratio_bound - gm
    worst = min(slack_final, slack_ratio)
    return Report(
        property="lln",
        trials=len(schedule),
        worst_slack=worst,
        passed=slack_final >= 0 and slack_ratio >= 0,
        details={
            "schedule": schedule,
            "values": values,
            "ratios": ratios,
            "geometric_mean_ratio": gm,
            "monotone": all(b < a for a, b in zip(values, values[1:])) or all(v == 0.0 for v in values),
        },
    )
