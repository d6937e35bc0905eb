"""Instance, scenario and certificate files; CSV report writers.

Instance files are JSON::

    {"atoms": [names], "weights": [reals],
     "partitions": {name: [[atom indices]]}, "vectors": {name: [reals]}}

Serialization is byte-deterministic (sorted keys, fixed indentation, floats
in shortest round-trip form), so ``serialize(parse(text)) == text`` for any
file this module wrote.
"""
from __future__ import annotations

import csv
import io as _io
import json
import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Mapping

import numpy as np

from .errors import LimitExceeded, ParseError, ValidationError
from .lattice import ATOM_SOFT_LIMIT, Partition, SampleSpace, cond_exp, global_mean, make_space
from .norms import p_label, parse_p
from .process import MixingaleCertificate, NedCertificate
from .sampling import random_partition, random_refinement

INSTANCE_KEYS = ("atoms", "weights", "partitions", "vectors")
VERIFICATION_COLUMNS = ("suite", "property", "instance", "n", "m", "block", "lhs", "rhs", "slack", "pass")
MIXING_COLUMNS = ("instance", "m", "kind", "block", "value")
DEFECT_COLUMNS = ("n", "m", "block", "defect", "bound", "slack")


@dataclass
class Instance:
    space: SampleSpace
    partitions: dict[str, Partition] = field(default_factory=dict)
    vectors: dict[str, np.ndarray] = field(default_factory=dict)

    def operator(self, name: str | None):
        """Conditional expectation for a named partition; ``None`` is the global mean."""
        if name is None:
            return global_mean(self.space)
        if name not in self.partitions:
            raise ValidationError(f"instance has no partition {name!r}")
        return cond_exp(self.space, self.partitions[name])


_NON_FINITE = re.compile(r'(?<![\w"])-?(NaN|Infinity)(?![\w"])')


class _NonFinite(Exception):
    pass


def _reject_constant(token: str):
    raise _NonFinite(token)


def load_json(text: str) -> Any:
    """``json.loads`` that rejects NaN/Infinity and reports the failing line."""
    try:
        return json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno) from None
    except _NonFinite as exc:
        hit = _NON_FINITE.search(text)
        line = text.count("\n", 0, hit.start()) + 1 if hit else None
        raise ParseError(f"non-finite number {exc} is not allowed", line=line) from None


def _read(path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None


def _real(x, where: str) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise ParseError(f"expected a number, got {type(x).__name__}", field=where)
    x = float(x)
    if not math.isfinite(x):
        raise ParseError("non-finite number", field=where)
    return x


def _reals(xs, where: str) -> list[float]:
    if not isinstance(xs, list):
        raise ParseError("expected a list of numbers", field=where)
    return [_real(x, f"{where}[{i}]") for i, x in enumerate(xs)]


def _index(x, where: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise ParseError("atom indices must be integers", field=where)
    return x


def instance_from_obj(obj: Any) -> Instance:
    if not isinstance(obj, dict):
        raise ParseError("top level must be a JSON object")
    unknown = sorted(set(obj) - set(INSTANCE_KEYS))
    if unknown:
        raise ParseError("unknown key", field=unknown[0])
    for key in ("atoms", "weights"):
        if key not in obj:
            raise ParseError("missing required key", field=key)
    atoms = obj["atoms"]
    if not isinstance(atoms, list) or not all(isinstance(a, str) for a in atoms):
        raise ParseError("atoms must be a list of strings", field="atoms")
    weights = _reals(obj["weights"], "weights")
    space = SampleSpace(tuple(atoms), tuple(weights))
    parts_obj = obj.get("partitions", {})
    if not isinstance(parts_obj, dict):
        raise ParseError("partitions must be an object", field="partitions")
    partitions = {}
    for name, blocks in parts_obj.items():
        where = f"partitions.{name}"
        if not isinstance(blocks, list) or not all(isinstance(b, list) for b in blocks):
            raise ParseError("a partition is a list of blocks", field=where)
        idx = [[_index(i, where) for i in b] for b in blocks]
        try:
            partitions[name] = Partition(tuple(tuple(b) for b in idx), space.size)
        except ValidationError as exc:
            raise type(exc)(f"{where}: {exc}") from None
    vec_obj = obj.get("vectors", {})
    if not isinstance(vec_obj, dict):
        raise ParseError("vectors must be an object", field="vectors")
    vectors = {}
    for name, vals in vec_obj.items():
        v = _reals(vals, f"vectors.{name}")
        if len(v) != space.size:
            raise ParseError(f"expected {space.size} entries, got {len(v)}", field=f"vectors.{name}")
        vectors[name] = np.array(v)
    return Instance(space, partitions, vectors)


def parse_instance(path) -> Instance:
    return instance_from_obj(load_json(_read(path)))


def instance_to_obj(inst: Instance) -> dict:
    return {
        "atoms": list(inst.space.atoms),
        "weights": [float(w) for w in inst.space.weights],
        "partitions": {k: p.to_lists() for k, p in inst.partitions.items()},
        "vectors": {k: [float(x) for x in v] for k, v in inst.vectors.items()},
    }


def dumps(obj: Any) -> str:
    """Deterministic JSON text with a trailing newline."""
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n"


def serialize_instance(inst: Instance) -> str:
    return dumps(instance_to_obj(inst))


def generate_random_instance(seed: int, atoms: int, partition_count: int) -> Instance:
    """Random weights in ``[0.1, 1]`` and ``partition_count`` partitions.

    The first partition ``T`` is coarse. Each later one refines ``T`` and is,
    at random, either a refinement of its predecessor (nested) or an
    independent refinement of ``T`` (typically crossing). Names run
    ``T, U, V, P3, P4, ...``. One random vector ``f`` is included.
    """
    if atoms < 1:
        raise ValidationError("atoms must be >= 1")
    if atoms > ATOM_SOFT_LIMIT:
        raise LimitExceeded(f"{atoms} atoms exceeds the limit of {ATOM_SOFT_LIMIT}")
    if partition_count < 0:
        raise ValidationError("partition_count must be >= 0")
    rng = np.random.default_rng(seed)
    w = rng.uniform(0.1, 1.0, size=atoms)
    space = make_space(atoms, [float(x) for x in w])
    names = ["T", "U", "V"] + [f"P{k}" for k in range(3, partition_count)]
    parts: dict[str, Partition] = {}
    prev = None
    for k in range(partition_count):
        if k == 0:
            p = random_partition(rng, atoms, int(rng.integers(1, min(3, atoms) + 1)))
        elif prev is not None and rng.random() < 0.5:
            p = random_refinement(rng, prev)
        else:
            p = random_refinement(rng, parts["T"])
        parts[names[k]] = p
        prev = p
    f = rng.normal(size=atoms)
    return Instance(space, parts, {"f": f})


@dataclass(frozen=True)
class Ar1Scenario:
    theta: tuple[float, ...]
    steps: int
    noise_seed: int
    noise_scale: float = 1.0
    noise_levels: int | None = None
    weights: tuple[float, ...] | None = None
    T: tuple[tuple[int, ...], ...] | None = None

    @property
    def atoms(self) -> int:
        if self.weights is not None:
            return len(self.weights)
        return len(self.theta) if len(self.theta) > 1 else 8

    def space(self) -> SampleSpace:
        if self.weights is None:
            return make_space(self.atoms, [1.0] * self.atoms)
        return make_space(self.atoms, list(self.weights))

    def base(self):
        sp = self.space()
        if self.T is None:
            return global_mean(sp)
        return cond_exp(sp, [list(b) for b in self.T])

    def theta_vector(self) -> np.ndarray:
        th = np.asarray(self.theta, dtype=float)
        if th.size == 1:
            return np.full(self.atoms, th[0])
        if th.size != self.atoms:
            raise ValidationError(f"theta has {th.size} entries for {self.atoms} atoms")
        return th


SCENARIO_KEYS = ("theta", "steps", "noise_seed", "noise_scale", "noise_levels", "weights", "T")


def scenario_from_obj(obj: Any) -> Ar1Scenario:
    if not isinstance(obj, dict):
        raise ParseError("top level must be a JSON object")
    unknown = sorted(set(obj) - set(SCENARIO_KEYS))
    if unknown:
        raise ParseError("unknown key", field=unknown[0])
    for key in ("theta", "steps", "noise_seed"):
        if key not in obj:
            raise ParseError("missing required key", field=key)
    theta = obj["theta"]
    theta = _reals(theta if isinstance(theta, list) else [theta], "theta")
    steps = obj["steps"]
    if isinstance(steps, bool) or not isinstance(steps, int) or steps < 2:
        raise ParseError("steps must be an integer >= 2", field="steps")
    seed = obj["noise_seed"]
    if isinstance(seed, bool) or not isinstance(seed, int) or seed < 0:
        raise ParseError("noise_seed must be a nonnegative integer", field="noise_seed")
    scale = _real(obj.get("noise_scale", 1.0), "noise_scale")
    if scale <= 0:
        raise ParseError("noise_scale must be positive", field="noise_scale")
    levels = obj.get("noise_levels")
    if levels is not None and (isinstance(levels, bool) or not isinstance(levels, int) or levels < 2):
        raise ParseError("noise_levels must be an integer >= 2", field="noise_levels")
    weights = obj.get("weights")
    if weights is not None:
        weights = tuple(_reals(weights, "weights"))
    blocks = obj.get("T")
    if blocks is not None:
        if not isinstance(blocks, list) or not all(isinstance(b, list) for b in blocks):
            raise ParseError("T is a list of blocks", field="T")
        blocks = tuple(tuple(_index(i, "T") for i in b) for b in blocks)
    return Ar1Scenario(tuple(theta), steps, seed, scale, levels, weights, blocks)


def parse_scenario(path) -> Ar1Scenario:
    return scenario_from_obj(load_json(_read(path)))


def ned_certificate_to_obj(cert: NedCertificate) -> dict:
    p = p_label(cert.p)
    return {
        "p": p if p == "inf" else int(p),
        "start": cert.start,
        "d": cert.d.tolist(),
        "xi": cert.xi.tolist(),
    }


def _matrix(obj, key: str) -> np.ndarray:
    rows = obj.get(key)
    if not isinstance(rows, list) or not rows:
        raise ParseError("expected a nonempty list of rows", field=key)
    return np.array([_reals(r, f"{key}[{i}]") for i, r in enumerate(rows)])


def _p_field(obj) -> float:
    if "p" not in obj:
        raise ParseError("missing required key", field="p")
    try:
        return parse_p(obj["p"])
    except (TypeError, ValueError):
        raise ParseError("p must be 1, 2 or \"inf\"", field="p") from None


def _start_field(obj) -> int:
    start = obj.get("start", 1)
    if isinstance(start, bool) or not isinstance(start, int):
        raise ParseError("start must be an integer", field="start")
    return start


def ned_certificate_from_obj(obj: Any) -> NedCertificate:
    if not isinstance(obj, dict):
        raise ParseError("top level must be a JSON object")
    return NedCertificate(_p_field(obj), _start_field(obj), _matrix(obj, "d"), _matrix(obj, "xi"))


def mixingale_certificate_to_obj(cert: MixingaleCertificate) -> dict:
    p = p_label(cert.p)
    return {
        "p": p if p == "inf" else int(p),
        "start": cert.start,
        "c": cert.c.tolist(),
        "phi": cert.phi.tolist(),
    }


def mixingale_certificate_from_obj(obj: Any) -> MixingaleCertificate:
    if not isinstance(obj, dict):
        raise ParseError("top level must be a JSON object")
    return MixingaleCertificate(_p_field(obj), _start_field(obj), _matrix(obj, "c"), _matrix(obj, "phi"))


def format_cell(v) -> str:
    """Shortest round-trip text for floats; plain text for everything else."""
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def write_csv(rows: Iterable[Mapping[str, Any]], columns: Iterable[str]) -> str:
    columns = list(columns)
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_cell(row.get(c)) for c in columns])
    return buf.getvalue()
