"""Clustering validity indices on similarity-derived distances, plus the
adjusted Rand index for evaluating partitions against ground truth."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ElementMismatchError, InvalidInputError, UndefinedIndexError

DUNN_INTER = ("I1", "I2", "I3")
DUNN_INTRA = ("J1", "J2")


@dataclass(eq=False)
class DistanceMatrix:
    """Symmetric dissimilarities keyed by unordered id pairs; d(a, a) = 0."""

    _entries: dict

    def d(self, a, b) -> float:
        if a == b:
            return 0.0
        key = (a, b) if (a, b) in self._entries else (b, a)
        return self._entries[key]

    @property
    def ids(self):
        seen = set()
        for a, b in self._entries:
            seen.add(a)
            seen.add(b)
        return sorted(seen)


def distances_from_similarity(matrix) -> DistanceMatrix:
    """d = 1 - rho, floored at 0 (rho can dip below 0 with penalties)."""
    return DistanceMatrix(
        {pair: max(0.0, 1.0 - matrix.rho(*pair)) for pair in matrix.pairs()}
    )


def silhouette(groups, dist: DistanceMatrix) -> float:
    """Mean silhouette width; elements in singleton groups score 0."""
    groups = [list(g) for g in groups]
    if len(groups) < 2:
        raise UndefinedIndexError("silhouette needs at least 2 groups")
    scores = []
    for gi, group in enumerate(groups):
        for x in group:
            if len(group) == 1:
                scores.append(0.0)
                continue
            a = float(np.mean([dist.d(x, y) for y in group if y != x]))
            b = min(
                float(np.mean([dist.d(x, y) for y in other]))
                for gj, other in enumerate(groups)
                if gj != gi
            )
            top = max(a, b)
            scores.append(0.0 if top == 0.0 else (b - a) / top)
    return float(np.mean(scores))


def _inter_distance(ga, gb, dist, variant):
    values = [dist.d(x, y) for x in ga for y in gb]
    if variant == "I1":
        return min(values)
    if variant == "I2":
        return max(values)
    if variant == "I3":
        return float(np.mean(values))
    raise InvalidInputError(f"unknown inter-cluster distance: {variant!r}")


def _intra_distance(group, dist, variant):
    group = list(group)
    if len(group) < 2:
        return 0.0
    values = [
        dist.d(group[i], group[j])
        for i in range(len(group))
        for j in range(i + 1, len(group))
    ]
    if variant == "J1":
        return max(values)
    if variant == "J2":
        return float(np.mean(values))
    raise InvalidInputError(f"unknown intra-cluster distance: {variant!r}")


def dunn(groups, dist: DistanceMatrix, inter: str = "I1", intra: str = "J1") -> float:
    """Minimum between-group distance over maximum within-group spread.

    A zero denominator (all groups singletons or zero-diameter) returns the
    infinite-index sentinel float('inf').
    """
    groups = [list(g) for g in groups]
    if len(groups) < 2:
        raise UndefinedIndexError("Dunn index needs at least 2 groups")
    numer = min(
        _inter_distance(groups[i], groups[j], dist, inter)
        for i in range(len(groups))
        for j in range(i + 1, len(groups))
    )
    denom = max(_intra_distance(g, dist, intra) for g in groups)
    if denom == 0.0:
        return float("inf")
    return numer / denom


def adjusted_rand(p_groups, q_groups) -> float:
    """Chance-corrected agreement between two partitions of the same elements."""
    p_groups = [set(g) for g in p_groups]
    q_groups = [set(g) for g in q_groups]
    universe_p = set().union(*p_groups) if p_groups else set()
    universe_q = set().union(*q_groups) if q_groups else set()
    if universe_p != universe_q:
        raise ElementMismatchError("partitions cover different element sets")
    if sum(len(g) for g in p_groups) != len(universe_p) or (
        sum(len(g) for g in q_groups) != len(universe_q)
    ):
        raise InvalidInputError("partitions must consist of disjoint groups")

    def comb2(n):
        return n * (n - 1) / 2.0

    pair_sum = 0.0
    for gp in p_groups:
        for gq in q_groups:
            pair_sum += comb2(len(gp & gq))
    a = sum(comb2(len(g)) for g in p_groups)
    b = sum(comb2(len(g)) for g in q_groups)
    total = comb2(len(universe_p))
    expected = a * b / total if total > 0 else 0.0
    maximum = (a + b) / 2.0
    if abs(maximum - expected) < 1e-15:
        return 1.0  # both partitions trivial and identical in structure
    return float((pair_sum - expected) / (maximum - expected))


def index_function(name: str, inter: str = "I1", intra: str = "J1"):
    """The configured clustering index as a callable (groups, dist) -> value."""
    if name == "silhouette":
        return silhouette
    if name == "dunn":
        if inter not in DUNN_INTER or intra not in DUNN_INTRA:
            raise InvalidInputError(f"unknown Dunn variant ({inter}, {intra})")
        return lambda groups, dist: dunn(groups, dist, inter=inter, intra=intra)
    raise InvalidInputError(f"unknown clustering index: {name!r}")
