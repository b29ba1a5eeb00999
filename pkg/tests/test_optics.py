"""Unit tests for the balanced beam splitter and pair statistics."""

import math

import numpy as np
import pytest

from sqherald import fockspace as fs
from sqherald import optics, sources


def binomial_column(total: int) -> np.ndarray:
    """Closed-form splitter output for |total, 0>: the amplitude on
    |k, total-k> is (-1)^(total-k) sqrt(C(total, k)) / 2^(total/2)."""
    out = np.zeros(total + 1)
    for k in range(total + 1):
        out[k] = (-1) ** (total - k) * math.sqrt(
            math.comb(total, k) / 2.0**total
        )
    return out


def test_split_fock_states_match_binomial_closed_form():
    trunc = fs.Truncation(12)
    for total in (0, 1, 2, 3, 5, 8):
        st = optics.split(fs.fock_state(total, trunc))
        assert np.max(np.abs(st.amps.imag)) == 0.0
        block = np.array(
            [st.amps[na, total - na].real for na in range(total + 1)]
        )
        assert np.max(np.abs(block - binomial_column(total))) < 1e-14


def test_split_two_photon_example():
    st = optics.split(fs.fock_state(2, fs.Truncation(8)))
    assert st.amps[2, 0].real == pytest.approx(0.5, abs=1e-14)
    assert st.amps[0, 2].real == pytest.approx(0.5, abs=1e-14)
    assert st.amps[1, 1].real == pytest.approx(-1.0 / math.sqrt(2.0), abs=1e-14)
    dist = st.joint_distribution()
    assert dist[2, 0] == pytest.approx(0.25, abs=1e-14)
    assert dist[1, 1] == pytest.approx(0.5, abs=1e-14)


def test_split_vacuum_is_identity():
    st = optics.split(fs.vacuum_state(fs.Truncation(6)))
    assert st.amps[0, 0] == 1.0
    assert st.norm_sq() == 1.0


def test_blocks_are_orthogonal():
    trunc = fs.Truncation(24)
    bs = optics.beam_splitter(trunc)
    for total in range(trunc.dim - 1):
        block = bs.block(total)
        gram = block.T @ block - np.eye(total + 1)
        assert np.max(np.abs(gram)) < 1e-10


def test_total_photon_number_is_conserved():
    trunc = fs.Truncation(24)
    rng = np.random.default_rng(20260814)
    amps = rng.normal(size=trunc.dim) + 1j * rng.normal(size=trunc.dim)
    amps /= np.linalg.norm(amps)
    st = fs.SingleModeState(amps, trunc)
    out = optics.split(st)
    dist = out.joint_distribution()
    totals = np.add.outer(np.arange(trunc.dim), np.arange(trunc.dim))
    for total in range(trunc.dim):
        block_mass = dist[totals == total].sum()
        assert abs(block_mass - abs(amps[total]) ** 2) < 1e-14


def test_split_output_is_symmetric_in_probability():
    st = optics.split(sources.squeezed_vacuum(0.725, fs.Truncation(48)))
    dist = st.joint_distribution()
    assert np.max(np.abs(dist - dist.T)) < 1e-16


def test_parity_selection_rules():
    trunc = fs.Truncation(48)
    totals = np.add.outer(np.arange(trunc.dim), np.arange(trunc.dim))
    minus = optics.split(sources.squeezed_cat(0.725, -1, trunc))
    assert np.max(np.abs(minus.amps[totals % 4 != 2])) < 1e-14
    plus = optics.split(sources.squeezed_cat(0.725, +1, trunc))
    assert np.max(np.abs(plus.amps[totals % 4 != 0])) < 1e-14


def test_joint_probability_benchmark_values():
    trunc = fs.Truncation(64)
    minus = optics.joint_probability(
        optics.split(sources.squeezed_cat(0.725, -1, trunc))
    )
    assert minus.p[1, 1] == pytest.approx(0.453, abs=5e-4)
    assert minus.p[1, 5] == pytest.approx(7.85e-3, abs=5e-5)
    for nb in (0, 2, 3, 4):
        assert minus.p[1, nb] < 1e-12
    squeezed = optics.joint_probability(
        optics.split(sources.squeezed_vacuum(0.725, trunc))
    )
    assert squeezed.p[1, 1] == pytest.approx(7.54e-2, abs=5e-5)


def test_conditional_single_photon_benchmark_values():
    trunc = fs.Truncation(64)

    def conditional(state):
        return optics.conditional_single_photon(
            optics.joint_probability(optics.split(state))
        )

    assert conditional(sources.squeezed_cat(0.725, -1, trunc)) == pytest.approx(
        0.983, abs=5e-4
    )
    assert conditional(sources.squeezed_vacuum(0.725, trunc)) == pytest.approx(
        0.859, abs=5e-4
    )
    assert conditional(sources.squeezed_cat(1.146, -1, trunc)) == pytest.approx(
        0.9488, abs=5e-4
    )


def test_minus_cat_pair_probability_approaches_half():
    trunc = fs.Truncation(32)
    dist = optics.joint_probability(
        optics.split(sources.squeezed_cat(0.01, -1, trunc))
    )
    assert dist.p[1, 1] == pytest.approx(0.5, abs=1e-3)


def test_conditional_raises_on_empty_herald_row():
    dist = optics.joint_probability(
        optics.split(fs.vacuum_state(fs.Truncation(16)))
    )
    with pytest.raises(optics.ZeroHeraldError):
        optics.conditional_single_photon(dist)


def test_joint_distribution_deficit_accounting():
    trunc = fs.Truncation(16)
    dist = optics.joint_probability(optics.split(fs.fock_state(3, trunc)))
    assert abs(dist.p.sum() + dist.deficit - 1.0) < 1e-12
    lossy = np.zeros((16, 16), dtype=complex)
    lossy[0, 0] = math.sqrt(0.7)
    with pytest.raises(fs.TruncationError):
        optics.joint_probability(fs.TwoModeState(lossy, trunc))


def test_tmss_joint_probability_form():
    trunc = fs.Truncation(64)
    dist = optics.tmss_joint_probability(0.881, trunc)
    assert dist.p[1, 1] == pytest.approx(0.25, abs=1e-6)
    off = dist.p - np.diag(np.diag(dist.p))
    assert off.sum() < 1e-14
    row1 = dist.p[1, :]
    assert row1[1] > 0.0
    assert np.max(np.abs(np.delete(row1, 1))) == 0.0
    assert optics.conditional_single_photon(dist) == 1.0
    trivial = optics.tmss_joint_probability(0.0, fs.Truncation(8))
    assert trivial.p[0, 0] == 1.0


def test_pair_dominance_over_benchmark_on_spot_grid():
    for r in np.linspace(0.05, 2.0, 25):
        trunc = fs.default_truncation(float(r))
        minus = optics.joint_probability(
            optics.split(sources.squeezed_cat(float(r), -1, trunc))
        )
        tmss = optics.tmss_joint_probability(float(r), trunc)
        assert minus.p[1, 1] > tmss.p[1, 1]
        squeezed = optics.joint_probability(
            optics.split(sources.squeezed_vacuum(float(r), trunc))
        )
        assert optics.conditional_single_photon(minus) >= optics.conditional_single_photon(
            squeezed
        )


def test_decomposition_path_agrees_with_direct_unitary():
    r = 0.725
    trunc = fs.Truncation(48)
    direct = optics.split(sources.squeezed_vacuum(r, trunc))
    decomposed = optics.split_via_squeezer_decomposition(r, trunc)
    prob_gap = np.abs(
        decomposed.joint_distribution() - direct.joint_distribution()
    )
    assert prob_gap.max() < 1e-8
    totals = np.add.outer(np.arange(trunc.dim), np.arange(trunc.dim))
    low = totals < trunc.dim // 2
    amp_gap = np.abs(decomposed.amps - direct.amps)
    assert amp_gap[low].max() < 1e-12


def test_two_mode_squeeze_reproduces_schmidt_diagonal():
    r = 0.9
    trunc = fs.Truncation(48)
    evolved = optics.tmss_schmidt_check(r, trunc)
    target = sources.two_mode_squeezed_vacuum(r, trunc)
    gap = np.abs(evolved.joint_distribution() - target.joint_distribution())
    assert gap.max() < 1e-10


def test_opposite_squeezers_through_splitter_give_tmss_probabilities():
    r = 0.9
    trunc = fs.Truncation(64)
    product = fs.tensor(
        sources.squeezed_vacuum(r, trunc), sources.squeezed_vacuum(-r, trunc)
    )
    out = optics.apply_beam_splitter(product)
    window = 28
    target = sources.two_mode_squeezed_vacuum(r, trunc)
    gap = np.abs(
        out.joint_distribution()[:window, :window]
        - target.joint_distribution()[:window, :window]
    )
    assert gap.max() < 1e-12


def test_split_requires_normalized_input():
    trunc = fs.Truncation(8)
    bad = fs.SingleModeState(np.full(8, 0.1, dtype=complex), trunc)
    with pytest.raises(ValueError):
        optics.split(bad)
