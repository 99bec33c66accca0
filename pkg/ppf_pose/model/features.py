# (C) Copyright IBM 2026
#
# This code is licensed under the Apache License, Version 2.0. You may
# obtain a copy of this license in the LICENSE.txt file in the root directory
# of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
#
# Any modifications or derivative works of this code must retain this
# copyright notice, and modified files need to carry a notice indicating
# that they have been altered from the originals.

"""Point pair features, their quantisation and the packed table key."""

import itertools
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from typeguard import typechecked

# Pairs closer than this (mm) have no defined direction.
MIN_PAIR_DISTANCE = 1e-9

# Per-dimension offsets of the 16 candidate keys; row 0 is the base key.
_COMBOS = np.array(list(itertools.product((0, 1), repeat=4)), dtype=np.int64)


class PPFError(ValueError):
    pass


class PPF(NamedTuple):
    dist: float
    angle_n1_d: float
    angle_n2_d: float
    angle_n1_n2: float


class PPFKey(NamedTuple):
    b_dist: int
    b1: int
    b2: int
    b3: int


@dataclass(frozen=True)
class QuantizationParams:
    """Bin layout of the 4D table. `d_max` defaults to the model diameter at build time."""

    d_max: float | None = None
    n_dist_bins: int = 20
    n_angle_bins: int = 15
    noise_fraction: float = 0.2

    def __post_init__(self) -> None:
        if self.d_max is not None and not self.d_max > 0:
            raise ValueError(f"d_max must be > 0, got {self.d_max}")
        if self.n_dist_bins < 1 or self.n_angle_bins < 1:
            raise ValueError("bin counts must be >= 1")
        if not 0 <= self.noise_fraction < 0.5:
            raise ValueError(
                f"noise_fraction must be in [0, 0.5), got {self.noise_fraction}"
            )
        if self.n_dist_bins * self.n_angle_bins**3 > 2**32:
            raise ValueError("bin counts do not fit a 32-bit key")

    @property
    def dist_step(self) -> float:
        return self._require_d_max() / self.n_dist_bins

    @property
    def angle_step(self) -> float:
        return math.pi / self.n_angle_bins

    @property
    def bin_counts(self) -> np.ndarray:
        a = self.n_angle_bins
        return np.array([self.n_dist_bins, a, a, a], dtype=np.int64)

    @property
    def ranges(self) -> np.ndarray:
        return np.array([self._require_d_max(), np.pi, np.pi, np.pi])

    def _require_d_max(self) -> float:
        if self.d_max is None:
            raise PPFError("quantization has no d_max yet")
        return self.d_max


# ------------------------------------------------------------------------------------------------------
# Features
# ------------------------------------------------------------------------------------------------------


def compute_ppf_batch(
    p1: np.ndarray, n1: np.ndarray, p2: np.ndarray, n2: np.ndarray
) -> np.ndarray:
    """(N,4) rows of (dist, ∠(n1,d), ∠(n2,d), ∠(n1,n2)), d = p2 - p1.

    Coincident pairs get distance 0 and zero angles to d; callers drop them.
    """
    d = np.asarray(p2, dtype=np.float64) - np.asarray(p1, dtype=np.float64)
    dist = np.sqrt(np.einsum("ij,ij->i", d, d))
    unit = np.divide(d, dist[:, None], out=np.zeros_like(d), where=dist[:, None] > 0)
    out = np.empty((len(d), 4))
    out[:, 0] = dist
    out[:, 1] = np.arccos(np.clip(np.einsum("ij,ij->i", n1, unit), -1.0, 1.0))
    out[:, 2] = np.arccos(np.clip(np.einsum("ij,ij->i", n2, unit), -1.0, 1.0))
    out[:, 3] = np.arccos(np.clip(np.einsum("ij,ij->i", n1, n2), -1.0, 1.0))
    out[dist <= MIN_PAIR_DISTANCE, 1:3] = 0.0
    return out


@typechecked
def compute_ppf(p1: np.ndarray, n1: np.ndarray, p2: np.ndarray, n2: np.ndarray) -> PPF:
    """The asymmetric feature of the ordered pair (p1, p2)."""
    p1, n1, p2, n2 = (np.reshape(v, (1, 3)) for v in (p1, n1, p2, n2))
    row = compute_ppf_batch(p1, n1, p2, n2)[0]
    if row[0] <= MIN_PAIR_DISTANCE:
        raise PPFError("cannot compute a point pair feature for coincident points")
    return PPF(*(float(v) for v in row))


# ------------------------------------------------------------------------------------------------------
# Quantisation
# ------------------------------------------------------------------------------------------------------


def _scaled(features: np.ndarray, q: QuantizationParams) -> np.ndarray:
    return np.asarray(features, dtype=np.float64) * q.bin_counts / q.ranges


def discretize_batch(features: np.ndarray, q: QuantizationParams) -> np.ndarray:
    """(N,4) int64 bins floor(value · bins / range), clamped into range."""
    scaled = _scaled(features, q)
    return np.clip(np.floor(scaled).astype(np.int64), 0, q.bin_counts - 1)


@typechecked
def discretize(f: PPF, q: QuantizationParams) -> PPFKey:
    return PPFKey(*(int(b) for b in discretize_batch(np.array([f]), q)[0]))


def pack_keys(bins: np.ndarray, q: QuantizationParams) -> np.ndarray:
    """b_dist·a³ + b1·a² + b2·a + b3 as uint32."""
    b = np.asarray(bins, dtype=np.int64)
    a = q.n_angle_bins
    return (((b[..., 0] * a + b[..., 1]) * a + b[..., 2]) * a + b[..., 3]).astype(np.uint32)


def unpack_keys(packed: np.ndarray, q: QuantizationParams) -> np.ndarray:
    rest = np.asarray(packed, dtype=np.int64)
    a = q.n_angle_bins
    out = np.empty(rest.shape + (4,), dtype=np.int64)
    for dim in (3, 2, 1):
        out[..., dim] = rest % a
        rest = rest // a
    out[..., 0] = rest
    return out


@typechecked
def pack_key(key: PPFKey, q: QuantizationParams) -> int:
    return int(pack_keys(np.array(key), q))


@typechecked
def unpack_key(packed: int, q: QuantizationParams) -> PPFKey:
    return PPFKey(*(int(b) for b in unpack_keys(np.array(packed), q)))


def _neighbor_offsets(
    features: np.ndarray, q: QuantizationParams
) -> tuple[np.ndarray, np.ndarray]:
    """Base bins and, per dimension, the single adjacent bin worth voting for (-1, 0 or +1)."""
    bins = discretize_batch(features, q)
    position = _scaled(features, q) - bins
    nf = q.noise_fraction
    offsets = np.zeros_like(bins)
    offsets[(position < nf) & (bins > 0)] = -1
    offsets[(1.0 - position < nf) & (bins < q.bin_counts - 1)] = 1
    return bins, offsets


def neighbor_key_batch(
    features: np.ndarray, q: QuantizationParams
) -> tuple[np.ndarray, np.ndarray]:
    """Packed candidate keys (N,16) and a validity mask; column 0 is always the base key."""
    bins, offsets = _neighbor_offsets(features, q)
    candidates = bins[:, None, :] + _COMBOS[None, :, :] * offsets[:, None, :]
    valid = ~np.any((_COMBOS[None, :, :] == 1) & (offsets[:, None, :] == 0), axis=2)
    return pack_keys(candidates, q), valid


@typechecked
def neighbor_keys(f: PPF, q: QuantizationParams) -> set[PPFKey]:
    """The base key plus the adjacent keys whose boundary lies within noise reach."""
    bins, offsets = _neighbor_offsets(np.array([f]), q)
    per_dim = [
        sorted({int(b), int(b + o)}) for b, o in zip(bins[0].tolist(), offsets[0].tolist())
    ]
    return {PPFKey(*combo) for combo in itertools.product(*per_dim)}


@typechecked
def neighbor_keys_full(f: PPF, q: QuantizationParams) -> set[PPFKey]:
    """Every in-range key within one bin in every dimension (up to 81)."""
    bins = discretize_batch(np.array([f]), q)[0]
    per_dim = [
        [b + o for o in (-1, 0, 1) if 0 <= b + o < n]
        for b, n in zip(bins.tolist(), q.bin_counts.tolist())
    ]
    return {PPFKey(*combo) for combo in itertools.product(*per_dim)}
