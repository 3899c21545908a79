"""Tensor-train parameterization of an unnormalized sampling distribution.

A distribution over d-dimensional multi-indices is stored as a chain of
three-way cores, core k shaped (R_k, N_k, R_{k+1}) with boundary ranks 1.
Point evaluation, marginalization, exact conditional sampling, and analytic
log-likelihood gradients each cost O(d N R^2) or less, so the object scales
to grids far beyond enumeration.

Two sampling schemes share the sequential-conditional machinery:

* sample draws with probability proportional to the tensor entry itself
  (suffix sums from right_marginals supply the exact univariate
  conditionals).
* sample_squared draws with probability proportional to the squared entry
  (suffix Gram matrices supply the conditionals).  Squaring sharpens the
  contrast between high- and low-mass regions and keeps every index
  reachable even after ascent drives some core entries through zero, which
  is what the optimizer needs to concentrate within a small budget.

Gradient ascent on the cores can push entries negative.  No positivity
constraint is enforced; instead the linear sampler clamps negative
conditional weights to zero, and either sampler falls back to a uniform
draw on a vanished conditional (counted in the diagnostics dict).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

INIT_FLOOR = 1e-6
VALUE_FLOOR = 1e-12

CHECKPOINT_MAGIC = "tt-checkpoint 1"


@dataclass
class TTDistribution:
    """Chained three-way cores; mutated in place only by ascent_step."""

    cores: list[np.ndarray]

    def __post_init__(self) -> None:
        if not self.cores:
            raise ValueError("tensor train needs at least one core")
        for k, core in enumerate(self.cores):
            if core.ndim != 3:
                raise ValueError(f"core {k} must be three-way, got shape {core.shape}")
        if self.cores[0].shape[0] != 1 or self.cores[-1].shape[2] != 1:
            raise ValueError("boundary ranks must be 1")
        for k in range(len(self.cores) - 1):
            if self.cores[k].shape[2] != self.cores[k + 1].shape[0]:
                raise ValueError(f"rank mismatch between cores {k} and {k + 1}")

    @property
    def d(self) -> int:
        return len(self.cores)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(core.shape[1] for core in self.cores)

    @property
    def ranks(self) -> tuple[int, ...]:
        return tuple(core.shape[0] for core in self.cores) + (1,)


def random_tt(d: int, n_nodes: int, rank: int, rng: np.random.Generator) -> TTDistribution:
    """Fresh positive TT with entries drawn uniformly from [INIT_FLOOR, 1)."""
    if d < 1 or n_nodes < 2 or rank < 1:
        raise ValueError(f"invalid tensor-train shape d={d}, N={n_nodes}, R={rank}")
    cores = []
    for k in range(d):
        left = 1 if k == 0 else rank
        right = 1 if k == d - 1 else rank
        cores.append(INIT_FLOOR + (1.0 - INIT_FLOOR) * rng.random((left, n_nodes, right)))
    return TTDistribution(cores)


def _check_index(t: TTDistribution, idx: Sequence[int]) -> tuple[int, ...]:
    if len(idx) != t.d:
        raise ValueError(f"multi-index length {len(idx)} does not match dimension {t.d}")
    out = tuple(int(i) for i in idx)
    for k, (i, n) in enumerate(zip(out, t.shape)):
        if not 0 <= i < n:
            raise ValueError(f"index {i} out of range [0, {n}) in axis {k}")
    return out


def tt_value(t: TTDistribution, idx: Sequence[int]) -> float:
    """Entry of the represented tensor at one multi-index."""
    idx = _check_index(t, idx)
    vec = t.cores[0][:, idx[0], :]
    for k in range(1, t.d):
        vec = vec @ t.cores[k][:, idx[k], :]
    return float(vec[0, 0])


def right_marginals(t: TTDistribution) -> list[np.ndarray]:
    """Suffix sums: entry k is the core-k..end tensor summed over its indices.

    Returned list has d+1 vectors; the last is the scalar [1], the first is
    the total mass of the tensor (length-1 vector, boundary rank).
    """
    z = [np.ones(1)] * (t.d + 1)
    for k in range(t.d - 1, -1, -1):
        z[k] = t.cores[k].sum(axis=1) @ z[k + 1]
    return z


def total_mass(t: TTDistribution) -> float:
    return float(right_marginals(t)[0][0])


def sample(
    t: TTDistribution,
    rng: np.random.Generator,
    marginals: list[np.ndarray] | None = None,
    diagnostics: dict[str, int] | None = None,
) -> tuple[int, ...]:
    """Draw one multi-index by sequential univariate conditionals.

    At step k the unnormalized conditional over the N_k nodes is
    phi @ core_k[:, i, :] @ suffix, with the left interface phi rescaled by
    its max-abs entry after each draw to dodge under/overflow.  Negative
    weights are clamped to zero; an all-zero conditional falls back to a
    uniform draw and bumps diagnostics["uniform_fallbacks"].
    """
    if marginals is None:
        marginals = right_marginals(t)
    phi = np.ones(1)
    out = []
    for k in range(t.d):
        weights = np.einsum("r,rns,s->n", phi, t.cores[k], marginals[k + 1])
        weights = np.clip(weights, 0.0, None)
        mass = weights.sum()
        if mass <= 0.0:
            if diagnostics is not None:
                diagnostics["uniform_fallbacks"] = diagnostics.get("uniform_fallbacks", 0) + 1
            weights = np.full(weights.size, 1.0)
            mass = float(weights.size)
        i = int(rng.choice(weights.size, p=weights / mass))
        out.append(i)
        phi = phi @ t.cores[k][:, i, :]
        peak = np.max(np.abs(phi))
        if peak > 0.0:
            phi = phi / peak
    return tuple(out)


def sample_batch(
    t: TTDistribution, count: int, rng: np.random.Generator
) -> tuple[list[tuple[int, ...]], dict[str, int]]:
    """Draw count multi-indices sharing one marginal sweep; returns diagnostics."""
    if count < 1:
        raise ValueError(f"sample count must be >= 1, got {count}")
    marginals = right_marginals(t)
    diagnostics: dict[str, int] = {}
    draws = [sample(t, rng, marginals, diagnostics) for _ in range(count)]
    return draws, diagnostics


def suffix_grams(t: TTDistribution) -> list[np.ndarray]:
    """Suffix Gram matrices of the core chain, right to left.

    Entry k is M_k = sum_i G_k[:,i,:] M_{k+1} G_k[:,i,:]^T, so
    phi M_k phi^T is the squared-entry mass of the suffix tensor weighted by
    the left interface phi.  Each level is rescaled by its max-abs entry;
    only weight ratios matter downstream and the rescaling keeps long chains
    away from float under/overflow.
    """
    grams = [np.ones((1, 1))] * (t.d + 1)
    for k in range(t.d - 1, -1, -1):
        m = np.einsum("rns,st,qnt->rq", t.cores[k], grams[k + 1], t.cores[k])
        peak = np.max(np.abs(m))
        if peak > 0.0:
            m = m / peak
        grams[k] = m
    return grams


def sample_squared(
    t: TTDistribution,
    rng: np.random.Generator,
    grams: list[np.ndarray] | None = None,
    diagnostics: dict[str, int] | None = None,
) -> tuple[int, ...]:
    """Draw one multi-index with probability proportional to the squared entry.

    At step k the unnormalized conditional for node i is the quadratic form
    v_i M_{k+1} v_i^T with v_i = phi @ core_k[:, i, :], which is nonnegative
    up to roundoff whatever the sign pattern of the cores.  An all-zero
    conditional falls back to a uniform draw and bumps
    diagnostics["uniform_fallbacks"].
    """
    if grams is None:
        grams = suffix_grams(t)
    phi = np.ones(1)
    out = []
    for k in range(t.d):
        vecs = np.einsum("r,rns->ns", phi, t.cores[k])
        weights = np.einsum("ns,st,nt->n", vecs, grams[k + 1], vecs)
        weights = np.clip(weights, 0.0, None)
        mass = weights.sum()
        if mass <= 0.0:
            if diagnostics is not None:
                diagnostics["uniform_fallbacks"] = diagnostics.get("uniform_fallbacks", 0) + 1
            weights = np.full(weights.size, 1.0)
            mass = float(weights.size)
        i = int(rng.choice(weights.size, p=weights / mass))
        out.append(i)
        phi = vecs[i]
        peak = np.max(np.abs(phi))
        if peak > 0.0:
            phi = phi / peak
    return tuple(out)


def sample_squared_batch(
    t: TTDistribution, count: int, rng: np.random.Generator
) -> tuple[list[tuple[int, ...]], dict[str, int]]:
    """Draw count squared-scheme multi-indices sharing one Gram sweep."""
    if count < 1:
        raise ValueError(f"sample count must be >= 1, got {count}")
    grams = suffix_grams(t)
    diagnostics: dict[str, int] = {}
    draws = [sample_squared(t, rng, grams, diagnostics) for _ in range(count)]
    return draws, diagnostics


def _interfaces(t: TTDistribution, idx: tuple[int, ...]) -> tuple[list[np.ndarray], list[np.ndarray], float]:
    """Prefix and suffix chain products of the chosen slices, plus the value."""
    pre = [np.ones(1)]
    for k in range(t.d):
        pre.append(pre[k] @ t.cores[k][:, idx[k], :])
    suf = [np.ones(1)] * (t.d + 1)
    for k in range(t.d - 1, -1, -1):
        suf[k] = t.cores[k][:, idx[k], :] @ suf[k + 1]
    return pre, suf, float(pre[t.d][0])


def log_value_grad(t: TTDistribution, idx: Sequence[int]) -> list[np.ndarray]:
    """Gradient of ln(tensor value at idx) with respect to every core entry.

    Core k's gradient is zero except at slice idx[k], where it equals the
    outer product of the prefix and suffix interfaces divided by the value.
    """
    idx = _check_index(t, idx)
    pre, suf, value = _interfaces(t, idx)
    if value <= 0.0:
        raise ValueError(f"tensor value {value} at {idx} is not positive; log-gradient undefined")
    grads = []
    for k, core in enumerate(t.cores):
        g = np.zeros_like(core)
        g[:, idx[k], :] = np.outer(pre[k], suf[k + 1]) / value
        grads.append(g)
    return grads


def ascent_step(
    t: TTDistribution,
    batch: Sequence[Sequence[int]],
    learning_rate: float,
    step_count: int,
) -> dict[str, int]:
    """In-place gradient ascent on the summed log-likelihood of the batch.

    Runs step_count rounds; each round recomputes the gradient of
    sum_i ln P[batch_i] against the current cores and adds learning_rate
    times it.  Repeated indices in the batch count once per occurrence.  A
    value driven to <= 0 mid-ascent is clamped to VALUE_FLOOR for the
    division and counted in the returned diagnostics.
    """
    if not batch:
        raise ValueError("ascent batch must be non-empty")
    if learning_rate < 0.0:
        raise ValueError(f"learning rate must be >= 0, got {learning_rate}")
    checked = [_check_index(t, idx) for idx in batch]
    diagnostics = {"clamped_values": 0}
    for _ in range(step_count):
        accum = [np.zeros_like(core) for core in t.cores]
        for idx in checked:
            pre, suf, value = _interfaces(t, idx)
            if value <= 0.0:
                value = VALUE_FLOOR
                diagnostics["clamped_values"] += 1
            for k in range(t.d):
                accum[k][:, idx[k], :] += np.outer(pre[k], suf[k + 1]) / value
        for k in range(t.d):
            t.cores[k] += learning_rate * accum[k]
    return diagnostics


def save_tt_text(t: TTDistribution, path: str) -> None:
    """Textual checkpoint: header, shapes, then row-major core entries.

    Floats are written with repr so a load round-trips bit-exactly.
    """
    lines = [CHECKPOINT_MAGIC, f"d {t.d}"]
    lines.append("shape " + " ".join(str(n) for n in t.shape))
    lines.append("ranks " + " ".join(str(r) for r in t.ranks))
    for k, core in enumerate(t.cores):
        lines.append(f"core {k}")
        lines.append(" ".join(repr(float(x)) for x in core.ravel()))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def load_tt_text(path: str) -> TTDistribution:
    with open(path) as fh:
        lines = [line.strip() for line in fh if line.strip()]
    if not lines or lines[0] != CHECKPOINT_MAGIC:
        raise ValueError("not a tensor-train checkpoint file")
    d = int(lines[1].split()[1])
    shape = [int(x) for x in lines[2].split()[1:]]
    ranks = [int(x) for x in lines[3].split()[1:]]
    if len(shape) != d or len(ranks) != d + 1:
        raise ValueError("inconsistent checkpoint header")
    cores = []
    row = 4
    for k in range(d):
        if lines[row] != f"core {k}":
            raise ValueError(f"expected 'core {k}' at checkpoint line {row + 1}")
        entries = np.array([float(x) for x in lines[row + 1].split()])
        cores.append(entries.reshape(ranks[k], shape[k], ranks[k + 1]))
        row += 2
    return TTDistribution(cores)
