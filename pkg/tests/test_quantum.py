import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ebcsim.bits import BitString, derive_rng
from ebcsim.quantum.dense import (H, DenseState, apply_unitary, bb84_state, depolarize, fidelity,
                                  outcome_distribution, pure_trace_distance, random_density_matrix,
                                  register_to_dense, single_qubit_op, trace_distance,
                                  uhlmann_purifications)
from ebcsim.quantum.symbolic import (Flip, MeasureAndResend, Replace, apply_depolarizing,
                                     corrupt_positions, measure_and_collapse, measure_in_basis,
                                     merge, prepare_bb84)

KET0 = DenseState.from_vector([1, 0])
KET1 = DenseState.from_vector([0, 1])
PLUS = DenseState.from_vector([1, 1])
MINUS = DenseState.from_vector([1, -1])


def test_prepare_examples():
    assert trace_distance(register_to_dense(prepare_bb84("0", "0")), KET0) < 1e-12
    assert trace_distance(register_to_dense(prepare_bb84("1", "1")), MINUS) < 1e-12
    rng = derive_rng(0)
    for _ in range(20):
        u, th = (BitString(rng.integers(0, 2, 6)) for _ in range(2))
        assert measure_in_basis(prepare_bb84(u, th), th, rng) == u


def test_wrong_basis_is_uniform():
    reg = prepare_bb84("0" * 100_000, "0" * 100_000)
    freq = measure_in_basis(reg, "1" * 100_000, derive_rng(1)).weight() / 100_000
    assert 0.49 <= freq <= 0.51


def test_flips_propagate():
    rng = derive_rng(2)
    y, z, th = (BitString(rng.integers(0, 2, 10)) for _ in range(3))
    reg = corrupt_positions(prepare_bb84(y ^ z, th), [3, 7], Flip())
    y_hat = measure_in_basis(reg, th, rng) ^ z
    assert np.flatnonzero((y_hat ^ y).bits).tolist() == [3, 7]


def test_depolarizing_examples():
    rng = derive_rng(3)
    reg = prepare_bb84("0101", "0011")
    assert apply_depolarizing(reg, 0.0, rng).same_state(reg)
    n = 100_000
    full = apply_depolarizing(prepare_bb84("0" * n, "1" * n), 1.0, rng)
    flip = measure_in_basis(full, "1" * n, rng).weight() / n
    assert 0.49 <= flip <= 0.51
    n, eps = 10_000, 0.1
    part = apply_depolarizing(prepare_bb84("0" * n, "0" * n), eps, rng)
    # a non-identity Pauli hits 3 eps / 4 of the qubits
    frac = (part.pauli != 0).mean()
    sigma = np.sqrt(0.75 * eps * (1 - 0.75 * eps) / n)
    assert abs(frac - 0.75 * eps) <= 3 * sigma
    # but Z leaves a basis-0 state alone, so only eps / 2 change physically
    changed = part.corrupted_mask().mean()
    assert abs(changed - eps / 2) <= 3 * np.sqrt(eps / 2 / n)


@pytest.mark.parametrize("basis", [0, 1])
def test_depolarizing_independent_of_basis(basis):
    n, eps = 50_000, 0.2
    rng = derive_rng(10 + basis)
    reg = apply_depolarizing(prepare_bb84("0" * n, str(basis) * n), eps, rng)
    flip = measure_in_basis(reg, str(basis) * n, rng).weight() / n
    assert abs(flip - eps / 2) <= 3 * np.sqrt(eps / 2 / n)


def test_corrupt_positions_ops():
    rng = derive_rng(4)
    reg = prepare_bb84("0110", "0101")
    assert corrupt_positions(reg, [], Flip()).same_state(reg)
    rep = corrupt_positions(reg, [1], Replace(0, 1))
    assert measure_in_basis(rep, "0101", rng).to_str()[1] == "0"
    same = corrupt_positions(reg, [0, 1, 2, 3], MeasureAndResend([0, 1, 0, 1]), rng)
    for _ in range(20):
        assert measure_in_basis(same, "0101", rng).to_str() == "0110"


def test_same_basis_measurement_idempotent():
    rng = derive_rng(5)
    reg = prepare_bb84("0110", "0101")
    out1, collapsed = measure_and_collapse(reg, "1100", rng)
    for _ in range(10):
        assert measure_and_collapse(collapsed, "1100", rng)[0] == out1


def test_merge_rejects_duplicates():
    a = prepare_bb84("01", "00", positions=[0, 1])
    with pytest.raises(ValueError):
        merge([a, a])


def _flip_op(bases):
    return [np.array([[0, 1], [1, 0]]) if b == 0 else np.diag([1, -1]) for b in bases]


@settings(max_examples=8, deadline=None)
@given(st.integers(0, 2**31))
def test_symbolic_dense_agreement(s):
    rng = derive_rng(s)
    q, trials, eps = 3, 10_000, 0.3
    u, th, meas = (rng.integers(0, 2, q) for _ in range(3))
    # dense: flip qubit 0 in its own basis, depolarize qubit 2
    dense = bb84_state(u, th)
    dense = apply_unitary(dense, single_qubit_op(_flip_op([th[0]])[0].astype(complex), 0, q))
    dense = depolarize(dense, 2, eps)
    expect = outcome_distribution(dense, meas)
    # symbolic: the same attack, sampled
    reg = prepare_bb84(u, th)
    reg = corrupt_positions(reg, [0], Flip())
    # many copies laid end to end, sampled in one pass
    copies = trials
    uu = np.tile(reg.cur_bit, copies)
    bb = np.tile(reg.cur_basis, copies)
    big = prepare_bb84(uu, bb)
    dep_positions = np.arange(copies) * q + 2
    dep = apply_depolarizing(big.select_positions(dep_positions), eps, rng)
    rest = big.select_positions(np.setdiff1d(np.arange(copies * q), dep_positions))
    out = measure_in_basis(merge([dep, rest]), np.tile(meas, copies), rng).bits.reshape(copies, q)
    idx = out @ (1 << np.arange(q - 1, -1, -1))
    freq = np.bincount(idx, minlength=2 ** q) / copies
    sigma = np.sqrt(expect * (1 - expect) / copies)
    assert np.all(np.abs(freq - expect) <= 3 * sigma + 1e-3)


def test_trace_distance_examples():
    assert trace_distance(KET0, KET0) == pytest.approx(0, abs=1e-12)
    assert trace_distance(KET0, KET1) == pytest.approx(1)
    assert trace_distance(KET0, PLUS) == pytest.approx(np.sqrt(2) / 2, abs=1e-5)
    with pytest.raises(ValueError):
        trace_distance(KET0, bb84_state([0, 0], [0, 0]))


def test_uhlmann_examples():
    psi, phi = uhlmann_purifications(KET0, KET0)
    assert abs(np.vdot(psi, phi)) == pytest.approx(1)
    assert pure_trace_distance(psi, phi) == pytest.approx(0, abs=1e-7)
    psi, phi = uhlmann_purifications(KET0, PLUS)
    assert abs(np.vdot(psi, phi)) == pytest.approx(1 / np.sqrt(2), abs=1e-9)
    assert fidelity(KET0, PLUS) == pytest.approx(1 / np.sqrt(2), abs=1e-9)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**31), st.integers(1, 2))
def test_fuchs_van_de_graaf(s, q):
    rng = derive_rng(s)
    rho, sigma = random_density_matrix(q, rng), random_density_matrix(q, rng)
    f, d = fidelity(rho, sigma), trace_distance(rho, sigma)
    assert 1 - f <= d + 1e-9
    assert d <= np.sqrt(max(0.0, 1 - f * f)) + 1e-9


def test_dense_validation():
    with pytest.raises(ValueError):
        DenseState(np.diag([0.7, 0.7]))
    with pytest.raises(ValueError):
        DenseState(np.diag([1.2, -0.2]))
    with pytest.raises(ValueError):
        DenseState(np.eye(2 ** 13) / 2 ** 13, validate=False)


def test_hadamard_matches_bb84_state():
    plus = apply_unitary(KET0, H)
    assert trace_distance(plus, bb84_state([0], [1])) < 1e-12
