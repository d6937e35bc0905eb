"""Regenerate the JSON fixtures under fixtures/ (deterministic, byte-stable)."""
from pathlib import Path

import numpy as np

from rieszned.io import Instance, dumps, serialize_instance
from rieszned.lattice import Partition, make_space, uniform_space

OUT = Path(__file__).resolve().parents[1] / "fixtures"


def part(blocks, size):
    return Partition(tuple(tuple(b) for b in blocks), size)


def main():
    OUT.mkdir(exist_ok=True)
    sp4 = uniform_space(4)
    files = {
        "mixing_4atom.json": Instance(
            sp4,
            {"T": part([[0, 1, 2, 3]], 4), "U": part([[0, 1], [2, 3]], 4), "V": part([[0], [1, 2, 3]], 4)},
            {"f": np.array([1.0, 2.0, 3.0, 4.0])},
        ),
        "mixing_independent.json": Instance(
            sp4,
            {"T": part([[0, 1, 2, 3]], 4), "U": part([[0, 1], [2, 3]], 4), "V": part([[0, 2], [1, 3]], 4)},
        ),
        "minimal_1atom.json": Instance(make_space(1, [1.0]), {"T": part([[0]], 1)}),
        # ||f - Vf||_{T,inf} exceeds ||f - Uf||_{T,inf}: the factor 2 cannot drop to 1
        "two_sided_factor_one.json": Instance(
            make_space(3, [0.01, 0.09, 0.9]),
            {"T": part([[0, 1, 2]], 3), "U": part([[0, 1, 2]], 3), "V": part([[0, 1], [2]], 3)},
            {"f": np.array([0.0, 1.0, 0.5])},
        ),
    }
    for name, inst in files.items():
        (OUT / name).write_text(serialize_instance(inst), encoding="utf-8")
    scenarios = {
        "ar1_theta05.json": {"theta": [0.5], "steps": 64, "noise_seed": 7, "noise_scale": 1.0},
        "ar1_coarse.json": {
            "theta": [0.5], "steps": 12, "noise_seed": 3, "noise_scale": 1.0,
            "noise_levels": 2, "weights": [1.0] * 8,
            "T": [list(range(4)), list(range(4, 8))],
        },
    }
    for name, obj in scenarios.items():
        (OUT / name).write_text(dumps(obj), encoding="utf-8")
    # found by scripts/shift_rule_search.py
    shift = {
        "scenario": {
            "theta": [0.5], "steps": 4, "noise_seed": 1, "noise_scale": 1.0,
            "noise_levels": 2, "weights": [1.0] * 4,
        },
        "shift": 2,
        "n": 1,
        "m": 0,
    }
    (OUT / "shift_literal_counterexample.json").write_text(dumps(shift), encoding="utf-8")


if __name__ == "__main__":
    main()
