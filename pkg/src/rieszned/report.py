"""Inequality-verification reports.

Every verifier in the package compares a left-hand side against a right-hand
side componentwise and reports ``slack = rhs - lhs``. A report fails when the
worst slack drops below ``-tolerance``, where the tolerance is ``REL_TOL``
scaled by the largest magnitude seen on either side.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

REL_TOL = 1e-9


def tolerance(*arrays) -> float:
    scale = 1.0
    for a in arrays:
        a = np.asarray(a, dtype=float)
        if a.size:
            scale = max(scale, float(np.max(np.abs(a))))
    return REL_TOL * scale


@dataclass
class Report:
    property: str
    trials: int
    worst_slack: float
    passed: bool
    tolerance: float = REL_TOL
    location: dict[str, Any] | None = None
    details: dict[str, Any] = field(default_factory=dict)
    slack: np.ndarray | None = field(default=None, repr=False)
    parts: list["Report"] = field(default_factory=list, repr=False)

    def __bool__(self) -> bool:
        return self.passed

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "property": self.property,
            "trials": int(self.trials),
            "worst_slack": float(self.worst_slack),
            "pass": bool(self.passed),
        }
        if self.location is not None:
            out["location"] = {k: _plain(v) for k, v in self.location.items()}
        if self.details:
            out["details"] = {k: _plain(v) for k, v in self.details.items()}
        if self.parts:
            out["parts"] = [p.to_dict() for p in self.parts]
        return out


def _plain(v):
    if isinstance(v, np.ndarray):
        return [_plain(x) for x in v.tolist()]
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, np.floating):
        return float(v)
    return v


class SlackTracker:
    """Accumulates ``rhs - lhs`` over many evaluations and keeps the worst one.

    ``where`` passed to :meth:`update` is stored for the worst evaluation, with
    ``atom`` (and ``lhs``/``rhs`` at that atom) filled in.
    """

    def __init__(self, name: str):
        self.name = name
        self.trials = 0
        self.worst = np.inf
        self.tol = REL_TOL
        self.location: dict[str, Any] | None = None
        self._failed = False

    def update(self, lhs, rhs, where: dict[str, Any] | None = None) -> float:
        lhs = np.asarray(lhs, dtype=float)
        rhs = np.asarray(rhs, dtype=float)
        lhs, rhs = np.broadcast_arrays(lhs, rhs)
        self.trials += 1
        tol = tolerance(lhs, rhs)
        slack = rhs - lhs
        if slack.size == 0:
            return np.inf
        k = int(np.argmin(slack))
        s = float(slack.flat[k])
        if s < -tol:
            self._failed = True
        if s < self.worst:
            self.worst = s
            self.tol = tol
            loc = dict(where or {})
            if slack.ndim:
                loc["atom"] = int(np.unravel_index(k, slack.shape)[-1])
            loc["lhs"] = float(lhs.flat[k])
            loc["rhs"] = float(rhs.flat[k])
            self.location = loc
        return s

    def fail(self, where: dict[str, Any] | None = None, slack: float = -1.0):
        """Record a hard failure that is not expressible as an inequality."""
        self.trials += 1
        self._failed = True
        if slack < self.worst:
            self.worst = slack
            self.location = dict(where or {})

    def report(self, **details) -> Report:
        worst = float(self.worst) if np.isfinite(self.worst) else 0.0
        return Report(
            property=self.name,
            trials=self.trials,
            worst_slack=worst,
            passed=(not self._failed) and self.trials > 0,
            tolerance=self.tol,
            location=self.location,
            details=details,
        )


def combine(name: str, parts: list[Report], **details) -> Report:
    """A report that passes iff every part passes; worst slack is the minimum."""
    if not parts:
        return Report(name, 0, 0.0, False, details=details)
    worst = min(parts, key=lambda r: r.worst_slack)
    return Report(
        property=name,
        trials=sum(p.trials for p in parts),
        worst_slack=worst.worst_slack,
        passed=all(p.passed for p in parts),
        tolerance=worst.tolerance,
        location=worst.location,
        details=details,
        parts=list(parts),
    )
