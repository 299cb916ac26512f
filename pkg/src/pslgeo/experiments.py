"""Desk-scale experiments comparing word and geometric distances.

Each experiment returns an ExperimentReport whose rows form a stable CSV
schema (documented per experiment) and whose summary holds the fitted or
extremal constants.  Reports are deterministic: random trials derive from
an explicit seed and rows are keyed by trial index.
"""

from __future__ import annotations

import io
import math
import random
from dataclasses import dataclass, field

from .exactmat import ExactMatrix, GeneratorSet, log_operator_norm, mat_inv, psl_canonicalize
from .spd import base_point, geometric_distance
from .words import Word, bfs_ball, short_word


@dataclass
class ExperimentReport:
    """Named table of measurements plus extremal summary values."""

    name: str
    columns: tuple
    rows: list
    summary: dict = field(default_factory=dict)
    seed: int = None

    def __post_init__(self):
        if not self.rows:
            raise ValueError("reports need at least one row")
        for row in self.rows:
            for v in row:
                if isinstance(v, float) and not math.isfinite(v):
                    raise ValueError("report values must be finite")

    def to_csv(self) -> str:
        out = io.StringIO()
        out.write(",".join(self.columns) + "\n")
        for row in self.rows:
            out.write(",".join(_csv_cell(v) for v in row) + "\n")
        return out.getvalue()

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "seed": self.seed,
            "columns": list(self.columns),
            "rows": [list(r) for r in self.rows],
            "summary": self.summary,
        }

    def write_csv(self, path: str):
        with open(path, "w") as fh:
            fh.write(self.to_csv())


def _csv_cell(v) -> str:
    if isinstance(v, float):
        return format(v, ".12g")
    return str(v)


def _u_power(n: int) -> ExactMatrix:
    return ExactMatrix([[1, n], [0, 1]])


def _geometric_samples(n_max: int):
    ns = set()
    n = 2
    while n <= n_max:
        ns.add(n)
        n *= 2
    p = 10
    while p <= n_max:
        ns.add(p)
        p *= 10
    ns.add(n_max)
    return sorted(ns)


def experiment_d2(n_max: int) -> ExperimentReport:
    """Word vs geometric distance along the translation orbit u^n, d = 2.

    Columns: n, word, geometric, ratio.  The word column is the exact
    search value for n <= 12 (which equals n) and the closed form n
    beyond; n runs over a geometric sample of {2..n_max}.  The summary
    records the ratio at the ends of the range: it diverges, witnessing
    that the two distances are not equivalent.
    """
    if n_max < 4:
        raise ValueError("need n_max >= 4")
    gens = GeneratorSet.sigma(2)
    base = base_point(2)
    one = psl_canonicalize(ExactMatrix.identity(2))
    search_cap = min(n_max, 12)
    ball = bfs_ball(gens, search_cap)
    rows = []
    ratios = []
    for n in _geometric_samples(n_max):
        gamma = psl_canonicalize(_u_power(n))
        if n <= 12:
            word = ball[gamma]
            assert word == n
        else:
            word = n
        geo = geometric_distance(one, gamma, base)
        rows.append((n, word, geo, word / geo))
        ratios.append(word / geo)
    summary = {
        "ratio_first": ratios[0],
        "ratio_last": ratios[-1],
        "ratio_max": max(ratios),
        "diverging": ratios[-1] > ratios[0],
    }
    return ExperimentReport("d2-parabolic-orbit", ("n", "word", "geometric", "ratio"), rows, summary)


def experiment_d3(trials: int, gen_len: int, seed: int = 0) -> ExperimentReport:
    """Short words vs geometric distance for random elements of SL(3,Z).

    Columns: trial, log_norm, word_length, geometric, length_over_lognorm,
    geometric_over_length.  Every constructed word is re-evaluated exactly;
    a mismatch aborts the experiment.  The summary holds the extremal
    ratios (the measured equivalence constants).
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    gens = GeneratorSet.sigma(3)
    base = base_point(3)
    one = psl_canonicalize(ExactMatrix.identity(3))
    rng = random.Random(seed)
    rows = []
    for trial in range(trials):
        gamma = ExactMatrix.identity(3)
        for _ in range(gen_len):
            g = rng.choice(gens.elements).rep
            if rng.random() < 0.5:
                g = mat_inv(g)
            gamma = gamma * g
        if gamma.is_identity():
            continue
        word = short_word(gamma, gens)
        assert word.evaluate(gens) == gamma, "constructed word failed exact evaluation"
        log_norm = log_operator_norm(gamma)
        geo = geometric_distance(one, psl_canonicalize(gamma), base)
        denom = max(math.log(2.0), log_norm)
        rows.append((trial, log_norm, len(word), geo, len(word) / denom, geo / max(1, len(word))))
    summary = {
        "k_hat": max(r[4] for r in rows),
        "c1_hat": max(r[5] for r in rows),
        "trials": len(rows),
    }
    report = ExperimentReport(
        "d3-short-words",
        ("trial", "log_norm", "word_length", "geometric", "length_over_lognorm", "geometric_over_length"),
        rows, summary, seed=seed)
    return report


def experiment_lattice(k_max: int) -> ExperimentReport:
    """The square-lattice translation group of the Euclidean plane, where
    the unit-square tiles are compact and the two distances are equivalent.

    Columns: k, l, geometric, word, ratio.  For the translation by (k, l)
    the geometric distance is sqrt(k^2 + l^2) and the word distance is
    |k| + |l|; the ratio lies in [1, sqrt 2] exactly, with the maximum on
    the diagonal.
    """
    if k_max < 1:
        raise ValueError("need k_max >= 1")
    rows = []
    worst = (1.0, (1, 0))
    for k in range(-k_max, k_max + 1):
        for l in range(-k_max, k_max + 1):
            if k == 0 and l == 0:
                continue
            word = abs(k) + abs(l)
            # exact bracket: (|k|+|l|)^2 lies between k^2+l^2 and 2(k^2+l^2)
            assert k * k + l * l <= word * word <= 2 * (k * k + l * l)
            geo = math.hypot(k, l)
            ratio = word / geo
            rows.append((k, l, geo, word, ratio))
            if ratio > worst[0]:
                worst = (ratio, (k, l))
    summary = {
        "ratio_min": min(r[4] for r in rows),
        "ratio_max": worst[0],
        "ratio_max_at": list(worst[1]),
        "sqrt2": math.sqrt(2.0),
    }
    return ExperimentReport("lattice-grid", ("k", "l", "geometric", "word", "ratio"), rows, summary)
