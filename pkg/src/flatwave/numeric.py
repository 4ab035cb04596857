"""Monte Carlo evaluation of the defining integral, for tiny graphs.

With ``eta_i = -t_i`` and ``t_i ~ Exponential(X_i)`` the factor
``prod exp(X_i eta_i)`` is the sampling density up to ``prod X_i``, so

    psi = E[ prod_e P_e(eta) ] / prod_i X_i.

Samples are drawn in fixed-size batches, each from its own Philox stream
spawned from the seed, and merged in batch order.  The result depends only on
``(graph, point, samples, seed)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .algebra import eval_rational
from .graph import Graph, GraphSizeError
from .wavefunction import PsiResult

MAX_NUMERIC_VERTICES = 4
MIN_SAMPLES = 10_000
BATCH = 1 << 16


@dataclass(frozen=True)
class NumericPoint:
    x: dict[int, float]
    y: dict[str, float]

    def __post_init__(self):
        for label, v in list(self.x.items()) + list(self.y.items()):
            if not (v > 0 and math.isfinite(v)):
                raise ValueError(f"energy for {label} must be positive and finite, got {v}")

    @classmethod
    def uniform(cls, g: Graph, x: float = 1.0, y: float = 1.0) -> NumericPoint:
        return cls({i: x for i in range(1, g.n + 1)}, {e: y for e in g.edge_ids})

    def check(self, g: Graph) -> None:
        if set(self.x) != set(range(1, g.n + 1)):
            raise ValueError(f"need X values for vertices 1..{g.n}")
        if set(self.y) != set(g.edge_ids):
            raise ValueError(f"need Y values for edges {', '.join(g.edge_ids)}")

    def exact(self, g: Graph) -> list[Fraction]:
        """The point in ring order, each float read as its shortest decimal."""
        self.check(g)
        return [Fraction(repr(self.x[i])) for i in range(1, g.n + 1)] + \
               [Fraction(repr(self.y[e])) for e in g.edge_ids]


@dataclass(frozen=True)
class McEstimate:
    mean: float
    std_error: float
    samples: int
    seed: int


def propagator(y, eta_i, eta_j):
    """Bulk-to-bulk propagator, vectorized; ``Theta(0) = 1/2``."""
    d = np.subtract(eta_i, eta_j)
    step = np.heaviside(d, 0.5) + np.heaviside(-d, 0.5)
    return (np.exp(-y * np.abs(d)) * step - np.exp(y * np.add(eta_i, eta_j))) / (2 * y)


def _batch_sizes(samples: int) -> list[int]:
    full, rest = divmod(samples, BATCH)
    return [BATCH] * full + ([rest] if rest else [])


def mc_psi(g: Graph, p: NumericPoint, samples: int = 1_000_000, seed: int = 0) -> McEstimate:
    if g.n > MAX_NUMERIC_VERTICES:
        raise GraphSizeError(f"the numeric oracle handles at most {MAX_NUMERIC_VERTICES} vertices")
    if samples < MIN_SAMPLES:
        raise ValueError(f"need at least {MIN_SAMPLES} samples")
    p.check(g)
    rates = np.array([p.x[i] for i in range(1, g.n + 1)], dtype=float)
    weight = 1.0 / float(np.prod(rates))
    sizes = _batch_sizes(samples)
    streams = np.random.SeedSequence(seed).spawn(len(sizes))
    count, mean, m2 = 0, 0.0, 0.0
    for size, ss in zip(sizes, streams):
        rng = np.random.Generator(np.random.Philox(ss))
        eta = -rng.exponential(1.0 / rates, size=(size, g.n))
        f = np.full(size, weight)
        for e in g.edges:
            f *= propagator(p.y[e.id], eta[:, e.u - 1], eta[:, e.v - 1])
        # Chan's pairwise update
        b_mean = float(f.mean())
        b_m2 = float(((f - b_mean) ** 2).sum())
        total = count + size
        delta = b_mean - mean
        mean += delta * size / total
        m2 += b_m2 + delta * delta * count * size / total
        count = total
    std = math.sqrt(m2 / (count - 1))
    return McEstimate(mean, std / math.sqrt(count), count, seed)


@dataclass(frozen=True)
class NumericReport:
    estimate: McEstimate
    exact: Fraction
    sigmas: float
    relative: float
    max_sigmas: float
    max_relative: float

    @property
    def within_sigmas(self) -> bool:
        return self.sigmas <= self.max_sigmas

    @property
    def within_relative(self) -> bool:
        return self.relative <= self.max_relative

    @property
    def passed(self) -> bool:
        """Either tolerance suffices."""
        return self.within_sigmas or self.within_relative

    def describe(self) -> str:
        verdict = "pass" if self.passed else "FAIL"
        return (f"{verdict}: mc={self.estimate.mean:.6g} +- {self.estimate.std_error:.2g} "
                f"exact={float(self.exact):.6g} ({self.exact}) "
                f"deviation={self.sigmas:.2f} sigma, {100 * self.relative:.3f}%")


def compare(g: Graph, p: NumericPoint, psi: PsiResult, samples: int = 1_000_000, seed: int = 0,
            max_sigmas: float = 4.0, max_relative: float = 0.02) -> NumericReport:
    exact = eval_rational(psi.value, p.exact(g))
    est = mc_psi(g, p, samples, seed)
    diff = abs(est.mean - float(exact))
    # a zero-variance estimator still carries float rounding
    noise = max(est.std_error, 1e-12 * abs(float(exact)))
    sigmas = diff / noise if noise > 0 else (0.0 if diff == 0 else math.inf)
    relative = diff / abs(float(exact)) if exact else math.inf
    return NumericReport(est, exact, sigmas, relative, max_sigmas, max_relative)
