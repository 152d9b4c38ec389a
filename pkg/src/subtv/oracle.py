"""Brute-force exact ground truth for desk-scale instances.

Everything here is computed in exact rational arithmetic so that the
statistical tests can anchor their tolerances on values with zero numeric
error.  Reals appear only when callers compare against estimator output.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .core import Bits, Condition
from .errors import DimensionMismatch, ZeroMassPrefix
from .posets import ENUM_CAP, Poset, enumerate_extensions, extension_to_bits


@dataclass(frozen=True)
class ExactDistribution:
    """A distribution over free-bit encodings with exact rational masses."""

    support: dict[Bits, Fraction]
    n: int

    def mass(self, x: Bits) -> Fraction:
        return self.support.get(tuple(x), Fraction(0))


def _greedy_step_products(p: Poset, order: tuple[int, ...], weights: Sequence[Fraction]) -> Fraction:
    mask = (1 << p.k) - 1
    prob = Fraction(1)
    for e in order:
        minimals = p.minimal_in(mask)
        if len(minimals) > 1:
            prob *= weights[e] / sum(weights[m] for m in minimals)
        mask ^= 1 << e
    return prob


def _exact_weights(weights: Sequence) -> list[Fraction]:
    out = []
    for w in weights:
        if isinstance(w, float):
            out.append(Fraction(*w.as_integer_ratio()))
        else:
            out.append(Fraction(w))
    return out


def exact_distribution(
    p: Poset,
    kind: str,
    weights: Optional[Sequence] = None,
    cap: int = ENUM_CAP,
    free_map=None,
) -> ExactDistribution:
    """The exact output distribution of a synthetic extension sampler.

    kind 'uniform': mass 1/|extensions| per extension.  kind 'biased': the
    product of greedy step ratios per extension, for the given positive
    per-element weights.  Pass the original poset's free_map to encode the
    distribution of a conditioned poset on the full coordinate set.
    """
    exts = enumerate_extensions(p, cap)
    fm = free_map if free_map is not None else p.free_map
    if kind == "uniform":
        total = Fraction(1, len(exts))
        support = {extension_to_bits(e, fm): total for e in exts}
    elif kind == "biased":
        if weights is None:
            raise ValueError("biased distribution needs weights")
        ws = _exact_weights(weights)
        if len(ws) != p.k or any(w <= 0 for w in ws):
            raise ValueError(f"need {p.k} positive weights")
        support = {
            extension_to_bits(e, fm): _greedy_step_products(p, e.order, ws) for e in exts
        }
    else:
        raise ValueError(f"unknown sampler kind {kind!r}")
    assert sum(support.values()) == 1
    return ExactDistribution(support=support, n=fm.n)


def exact_tv(p_dist: ExactDistribution, q_dist: ExactDistribution) -> Fraction:
    """Total variation distance as the sum of positive pointwise deviations."""
    if p_dist.n != q_dist.n:
        raise DimensionMismatch(f"dimensions differ: {p_dist.n} vs {q_dist.n}")
    points = set(p_dist.support) | set(q_dist.support)
    return sum(
        (max(Fraction(0), p_dist.mass(x) - q_dist.mass(x)) for x in points),
        Fraction(0),
    )


def exact_marginal(dist: ExactDistribution, prefix: Condition, coord: int) -> Fraction:
    """Exact Pr[bit coord == 1 | prefix] under dist."""
    total = Fraction(0)
    ones = Fraction(0)
    for x, mass in dist.support.items():
        if prefix.agrees(x):
            total += mass
            if x[coord] == 1:
                ones += mass
    if total == 0:
        raise ZeroMassPrefix("prefix has zero mass under the distribution")
    return ones / total


def conditioned(dist: ExactDistribution, prefix: Condition) -> ExactDistribution:
    """dist restricted to the strings agreeing with the prefix, renormalized."""
    kept = {x: m for x, m in dist.support.items() if prefix.agrees(x) and m > 0}
    total = sum(kept.values(), Fraction(0))
    if total == 0:
        raise ZeroMassPrefix("prefix has zero mass under the distribution")
    return ExactDistribution({x: m / total for x, m in kept.items()}, dist.n)
