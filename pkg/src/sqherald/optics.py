"""Balanced beam splitter on truncated two-mode states and the photon-pair
statistics it induces.

Convention: U = exp[theta (a^dag b - a b^dag)] with theta = pi/4, so
U a^dag U^dag = (a^dag - b^dag)/sqrt(2) and a single photon pair splits as

    |2, 0>  ->  (1/2)|2, 0> - (1/sqrt 2)|1, 1> + (1/2)|0, 2>.

U conserves total photon number, so it decomposes into one orthogonal
block per total N; blocks are built once per cutoff and cached.
"""
from __future__ import annotations

import dataclasses
import functools
import math

import numpy as np
import scipy.linalg
import scipy.sparse
from scipy.sparse.linalg import expm_multiply

from . import sources
from .fockspace import (
    SingleModeState,
    Truncation,
    TruncationError,
    TwoModeState,
)

BALANCED_ANGLE = math.pi / 4.0


class ZeroHeraldError(ZeroDivisionError):
    """Conditioning on a herald outcome that has zero probability."""


@functools.lru_cache(maxsize=16)
def _blocks(dim: int, theta: float) -> tuple[np.ndarray, ...]:
    """Orthogonal beam-splitter blocks, one per total photon number N < dim.

    Block N acts on the basis |k, N-k>, k = 0..N, with generator
    G[k+1, k] = theta sqrt((k+1)(N-k)) and G[k-1, k] = -theta sqrt(k(N-k+1)).
    The generator is real antisymmetric, so expm gives an exactly
    orthogonal matrix.
    """
    out = []
    for total in range(dim):
        k = np.arange(total)
        lower = theta * np.sqrt((k + 1.0) * (total - k))
        gen = np.diag(lower, k=-1) - np.diag(lower, k=1)
        block = scipy.linalg.expm(gen) if total else np.ones((1, 1))
        block.setflags(write=False)
        out.append(block)
    return tuple(out)


@dataclasses.dataclass(frozen=True)
class BeamSplitterUnitary:
    """Number-conserving two-mode unitary stored as per-total-N blocks."""

    blocks: tuple[np.ndarray, ...]
    truncation: Truncation
    theta: float

    def block(self, total: int) -> np.ndarray:
        return self.blocks[total]


def beam_splitter(trunc: Truncation, theta: float = BALANCED_ANGLE) -> BeamSplitterUnitary:
    return BeamSplitterUnitary(_blocks(trunc.dim, theta), trunc, theta)


def apply_beam_splitter(state: TwoModeState, theta: float = BALANCED_ANGLE) -> TwoModeState:
    """Apply the beam splitter to an arbitrary two-mode state.

    Anti-diagonals with total photon number >= dim cannot be represented
    and are dropped; the lost mass shows up as a norm deficit on the
    output, mirroring how the cutoff treats every other operation.
    """
    d = state.dim
    blocks = _blocks(d, theta)
    rows = np.arange(d)
    out = np.zeros((d, d), dtype=complex)
    for total in range(d):
        k = rows[: total + 1]
        out[k, total - k] = blocks[total] @ state.amps[k, total - k]
    return TwoModeState(out, state.truncation)


def split(state: SingleModeState, theta: float = BALANCED_ANGLE) -> TwoModeState:
    """Send `state` into port a of the beam splitter with vacuum in port b.

    Cheaper than apply_beam_splitter on a tensor product: the input only
    populates basis states |N, 0>, so each block contributes one column.
    """
    norm = state.norm_sq()
    if norm > 1.0 + 1e-9 or 1.0 - norm > state.truncation.tail_tol:
        raise ValueError(f"input must be normalized up to the tail tolerance, |psi|^2 = {norm}")
    d = state.dim
    blocks = _blocks(d, theta)
    out = np.zeros((d, d), dtype=complex)
    rows = np.arange(d)
    for total in range(d):
        amp = state.amps[total]
        if amp != 0.0:
            k = rows[: total + 1]
            out[k, total - k] = blocks[total][:, total] * amp
    return TwoModeState(out, state.truncation)


@dataclasses.dataclass(frozen=True)
class JointDistribution:
    """Joint photon-number probabilities p[n_a, n_b] plus truncation deficit.

    deficit = 1 - sum(p); constructors guarantee it stays below the
    truncation's tail tolerance.
    """

    p: np.ndarray
    deficit: float
    truncation: Truncation

    def __post_init__(self):
        d = self.truncation.dim
        if np.shape(self.p) != (d, d):
            raise ValueError("p must be dim x dim")
        arr = np.array(self.p, dtype=float)
        arr.setflags(write=False)
        object.__setattr__(self, "p", arr)
        if self.deficit > self.truncation.tail_tol:
            raise TruncationError("joint distribution lost too much mass", self.deficit)


def joint_probability(state: TwoModeState) -> JointDistribution:
    p = state.joint_distribution()
    deficit = 1.0 - float(np.sum(p))
    return JointDistribution(p, deficit, state.truncation)


def conditional_single_photon(dist: JointDistribution) -> float:
    """P(n_b = 1 | n_a = 1): the single-photon fraction of the heralded mode."""
    row = dist.p[1, :]
    total = float(np.sum(row))
    if total == 0.0:
        raise ZeroHeraldError("herald outcome n_a = 1 has zero probability")
    return float(row[1]) / total


def tmss_joint_probability(r: float, trunc: Truncation) -> JointDistribution:
    """Joint distribution of the two-mode squeezed vacuum benchmark."""
    return joint_probability(sources.two_mode_squeezed_vacuum(r, trunc))


def _two_mode_squeeze_generator(dim: int) -> scipy.sparse.csr_matrix:
    """Sparse generator of S_ab(s) = exp[s (ab - a^dag b^dag)] at s = 1."""
    coeff_rows = []
    coeff_cols = []
    coeff_vals = []
    # ab |n_a, n_b> = sqrt(n_a n_b) |n_a - 1, n_b - 1>
    for na in range(1, dim):
        for nb in range(1, dim):
            src = na * dim + nb
            dst = (na - 1) * dim + (nb - 1)
            val = math.sqrt(na * nb)
            coeff_rows.append(dst)
            coeff_cols.append(src)
            coeff_vals.append(val)
            # minus the adjoint entry
            coeff_rows.append(src)
            coeff_cols.append(dst)
            coeff_vals.append(-val)
    return scipy.sparse.csr_matrix(
        (coeff_vals, (coeff_rows, coeff_cols)), shape=(dim * dim, dim * dim)
    )


def two_mode_squeeze_apply(s: float, state: TwoModeState) -> TwoModeState:
    """Apply S_ab(s) = exp[s (ab - a^dag b^dag)] via a sparse Krylov product.

    Reference path for decomposition checks; the production splitter never
    needs it.
    """
    gen = _two_mode_squeeze_generator(state.dim)
    vec = expm_multiply(s * gen, state.amps.ravel())
    return TwoModeState(vec.reshape(state.dim, state.dim), state.truncation)


def split_via_squeezer_decomposition(r: float, trunc: Truncation) -> TwoModeState:
    """Split squeezed vacuum using the squeezer identity instead of blocks:

        U (S_a(r)|0,0>) = S_ab(-r/2) S_a(r/2) S_b(r/2) |0, 0>

    with the sign conventions fixed above.  Amplitudes agree with split()
    to machine precision on photon totals well below the cutoff; near the
    cutoff the two paths truncate differently (split() drops whole totals
    >= dim, this path keeps the square grid), so compare probability
    tables, or amplitudes on totals < dim/2.
    """
    half = sources.squeezed_vacuum(r / 2.0, trunc)
    product = np.outer(half.amps, half.amps)
    return two_mode_squeeze_apply(-r / 2.0, TwoModeState(product, trunc))


def tmss_schmidt_check(r: float, trunc: Truncation) -> TwoModeState:
    """S_ab(r)|0,0> built the same sparse way, for comparing probability
    tables against two_mode_squeezed_vacuum."""
    vac = np.zeros((trunc.dim, trunc.dim), dtype=complex)
    vac[0, 0] = 1.0
    return two_mode_squeeze_apply(r, TwoModeState(vac, trunc))
