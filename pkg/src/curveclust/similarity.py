"""Pairwise penalized similarity: correlation of aligned curves minus the
time-variation penalty, symmetrized over direction, with matrix-level caching.

One warp is stored per unordered pair; reading the pair in the opposite order
swaps the warp's forward and inverse splines, so the cached similarity is
symmetric by construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .curves import Curve
from .errors import InvalidInputError
from .products import center_inner, centered_norm, corr  # re-exported: spec surface
from .warping import (
    DEFAULT_OPTIMIZER,
    DEFAULT_SPLINES,
    OptimizerSettings,
    RhoParts,
    Warping,
    optimize_warping,
    rho_parts,
)

__all__ = [
    "center_inner",
    "centered_norm",
    "corr",
    "SimilarityEntry",
    "SimilarityMatrix",
    "PairCache",
    "rho_given_psi",
    "similarity",
    "similarity_matrix",
]


@dataclass(eq=False)
class SimilarityEntry:
    """Cached similarity of an unordered pair, with the maximizing warp
    (aligning the first curve to the second) and its parts."""

    rho: float
    warp: Warping
    penalty_fwd: float
    penalty_inv: float
    r_fwd: float
    r_inv: float

    def swapped(self) -> "SimilarityEntry":
        return SimilarityEntry(
            rho=self.rho,
            warp=self.warp.swapped(),
            penalty_fwd=self.penalty_inv,
            penalty_inv=self.penalty_fwd,
            r_fwd=self.r_inv,
            r_inv=self.r_fwd,
        )


def _entry_from_parts(parts: RhoParts, warp: Warping) -> SimilarityEntry:
    return SimilarityEntry(
        rho=parts.rho,
        warp=warp,
        penalty_fwd=parts.penalty_fwd,
        penalty_inv=parts.penalty_inv,
        r_fwd=parts.r_fwd,
        r_inv=parts.r_inv,
    )


def rho_given_psi(f: Curve, g: Curve, psi: Warping, lambda0: float) -> SimilarityEntry:
    """Penalized similarity of f and g at a fixed warp (no optimization)."""
    return _entry_from_parts(rho_parts(f, g, psi, lambda0), psi)


def similarity(
    f: Curve,
    g: Curve,
    lambda0: float,
    opts: OptimizerSettings = DEFAULT_OPTIMIZER,
    settings=DEFAULT_SPLINES,
) -> SimilarityEntry:
    """Maximized penalized similarity, delegating to the warp optimizer."""
    warp, parts = optimize_warping(f, g, lambda0, opts=opts, settings=settings)
    return _entry_from_parts(parts, warp)


class PairCache:
    """Content-addressed store of pair entries, shared across matrix rebuilds.

    Keys include curve content, the penalty parameter and optimizer settings, so
    entries survive combination/updating passes for curves that did not change.
    """

    def __init__(self):
        self._store: dict = {}

    @staticmethod
    def _key(f: Curve, g: Curve, lambda0: float, opts, settings) -> tuple:
        a, b = sorted((f.content_key, g.content_key))
        return (a, b, float(lambda0), opts, settings)

    def get(
        self, f: Curve, g: Curve, lambda0: float, opts, settings
    ) -> Optional[SimilarityEntry]:
        entry = self._store.get(self._key(f, g, lambda0, opts, settings))
        if entry is None:
            return None
        stored_first, _ = entry
        if stored_first == f.content_key:
            return entry[1]
        return entry[1].swapped()

    def put(self, f: Curve, g: Curve, lambda0: float, opts, settings, entry: SimilarityEntry):
        self._store[self._key(f, g, lambda0, opts, settings)] = (f.content_key, entry)

    def __len__(self) -> int:
        return len(self._store)


class SimilarityMatrix:
    """Similarity entries for all unordered pairs of a curve collection."""

    def __init__(self, entries: dict, ids: list):
        self._entries = entries
        self.ids = list(ids)

    def entry(self, a, b) -> SimilarityEntry:
        if a == b:
            raise InvalidInputError("no self-similarity entries")
        if (a, b) in self._entries:
            return self._entries[(a, b)]
        return self._entries[(b, a)].swapped()

    def rho(self, a, b) -> float:
        key = (a, b) if (a, b) in self._entries else (b, a)
        return self._entries[key].rho

    def warp(self, a, b) -> Warping:
        """The warp aligning curve a to curve b."""
        return self.entry(a, b).warp

    def values(self) -> list:
        return [e.rho for _, e in sorted(self._entries.items())]

    def mean_rho(self) -> float:
        return float(np.mean(self.values()))

    def pairs(self):
        return sorted(self._entries.keys())

    def __len__(self) -> int:
        return len(self._entries)


def similarity_matrix(
    curves,
    lambda0: float,
    opts: OptimizerSettings = DEFAULT_OPTIMIZER,
    settings=DEFAULT_SPLINES,
    cache: Optional[PairCache] = None,
) -> SimilarityMatrix:
    """Compute (or fetch from cache) entries for every unordered pair."""
    curves = sorted(curves, key=lambda c: c.id)
    if len(curves) < 2:
        raise InvalidInputError("need at least 2 curves for a similarity matrix")
    entries = {}
    for i, f in enumerate(curves):
        for g in curves[i + 1 :]:
            entry = (
                cache.get(f, g, lambda0, opts, settings) if cache is not None else None
            )
            if entry is None:
                entry = similarity(f, g, lambda0, opts=opts, settings=settings)
                if cache is not None:
                    cache.put(f, g, lambda0, opts, settings, entry)
            entries[(f.id, g.id)] = entry
    return SimilarityMatrix(entries, [c.id for c in curves])
