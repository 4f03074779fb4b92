"""Quadratic Hamiltonians, covariance matrices, and quasifree control.

The exact tests pin the T normalization through the single-mode number
operator and cross-validate the block formula against an independent
fermionic assembly (creation/annihilation products, exact arithmetic)
and against the dense Fock oracle.  Covariance machinery is checked
against dense density-matrix traces.
"""

import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracle_dense as od
from scipy.linalg import expm

from fermilie.coeffs import QQ, QQi
from fermilie.families import annihilation, creation, identity_op
from fermilie.fock import dense, vacuum_index
from fermilie.ops import SparseOperator, commutator
from fermilie.quasifree import (
    T_to_ham,
    T_to_op,
    axis_stabilizer_basis,
    canonical_form,
    convert_CDEF_to_AB,
    evolve_covariance,
    ham_skew_operator,
    ham_to_T,
    is_pure,
    matrix_from_json,
    matrix_to_json,
    op_to_T,
    pfaffian,
    quad_commutator,
    quadratic_ham,
    quasifree_pure_controllable,
    random_pure_covariance,
    random_special_orthogonal,
    same_orbit,
    singular_values,
    so_matrix_basis,
    spectra_csv,
    tensor_square_controllable,
    vacuum_covariance,
    wick_expectation,
)

J2 = np.array([[0.0, 1.0], [-1.0, 0.0]])


def rq(rng):
    return QQ(int(rng.integers(-3, 4)), int(rng.integers(1, 4)))


def random_rational_ham(d, seed):
    rng = np.random.default_rng(seed)
    A = np.empty((d, d), dtype=object)
    B = np.empty((d, d), dtype=object)
    for p in range(d):
        A[p, p] = QQi(rq(rng), 0)
        B[p, p] = QQi(0)
        for q in range(p + 1, d):
            A[p, q] = QQi(rq(rng), rq(rng))
            A[q, p] = A[p, q].conj()
            B[p, q] = QQi(rq(rng), rq(rng))
            B[q, p] = -B[p, q]
    return quadratic_ham(A, B)


def random_float_ham(d, seed):
    rng = np.random.default_rng(seed)
    M = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    A = (M + M.conj().T) / 2
    N = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    B = (N - N.T) / 2
    return quadratic_ham(A, B)


def fermionic_assembly(h):
    """-iH built the slow way, from creation/annihilation products."""
    d = h.d
    half = QQi(QQ(1, 2))
    acc = SparseOperator("majorana", d, "exact")
    ident = identity_op("majorana", d)
    for p in range(1, d + 1):
        for q in range(1, d + 1):
            a = h.A[p - 1, q - 1]
            b = h.B[p - 1, q - 1]
            acc = acc + (creation(p, d) @ annihilation(q, d)).scale(a)
            if p == q:
                acc = acc - ident.scale(a * half)
            acc = acc + (creation(p, d) @ creation(q, d)).scale(b * half)
            acc = acc - (annihilation(p, d) @ annihilation(q, d)).scale(
                b.conj() * half
            )
    return acc.times_i().scale(-1)


def to_float(T):
    return np.array([[float(x) for x in row] for row in T])


# -- the T correspondence ------------------------------------------------


def test_single_mode_number_op_pins_normalization():
    h = quadratic_ham([[1]], [[0]])
    T = ham_to_T(h)
    assert h.field == "exact"
    assert T[0, 1] == QQ(1, 2) and T[1, 0] == QQ(-1, 2)
    op = ham_skew_operator(h)
    assert dict(op.terms) == {0b11: QQi(QQ(-1, 2))}


@pytest.mark.parametrize("d,seed", [(1, 0), (2, 1), (3, 2), (4, 3)])
def test_T_roundtrip_exact(d, seed):
    h = random_rational_ham(d, seed)
    T = ham_to_T(h)
    assert T.dtype == object
    for k in range(2 * d):
        for l in range(2 * d):
            assert T[k, l] == -T[l, k]
    h2 = T_to_ham(T)
    assert h2.field == "exact"
    for p in range(d):
        for q in range(d):
            assert h2.A[p, q] == h.A[p, q]
            assert h2.B[p, q] == h.B[p, q]


@pytest.mark.parametrize("d,seed", [(2, 4), (5, 5)])
def test_T_roundtrip_float(d, seed):
    h = random_float_ham(d, seed)
    T = ham_to_T(h)
    assert T.dtype == np.float64
    assert np.max(np.abs(T + T.T)) < 1e-14
    h2 = T_to_ham(T)
    assert np.max(np.abs(np.asarray(h2.A) - np.asarray(h.A))) < 1e-12
    assert np.max(np.abs(np.asarray(h2.B) - np.asarray(h.B))) < 1e-12


@pytest.mark.parametrize("d,seed", [(1, 6), (2, 7), (3, 8)])
def test_block_formula_matches_fermionic_assembly(d, seed):
    h = random_rational_ham(d, seed)
    assert ham_skew_operator(h) == fermionic_assembly(h)


def test_dense_hamiltonian_matches_oracle():
    d = 2
    h = random_rational_ham(d, 9)
    A = np.array([[complex(x) for x in row] for row in h.A])
    B = np.array([[complex(x) for x in row] for row in h.B])
    want = -1j * od.quadratic_hamiltonian(A, B, d)
    assert np.max(np.abs(dense(ham_skew_operator(h)) - want)) < 1e-12


def test_bracket_transport():
    h1 = random_rational_ham(3, 10)
    h2 = random_rational_ham(3, 11)
    hc = quad_commutator(h1, h2)
    T1, T2 = ham_to_T(h1), ham_to_T(h2)
    Tc = ham_to_T(hc)
    want = np.dot(T1, T2) - np.dot(T2, T1)
    for k in range(6):
        for l in range(6):
            assert Tc[k, l] == want[k, l]
    lhs = ham_skew_operator(hc).scale(-2)
    rhs = commutator(ham_skew_operator(h1), ham_skew_operator(h2))
    assert lhs == rhs


def test_op_to_T_inverts_both_directions():
    h = random_rational_ham(3, 12)
    T = ham_to_T(h)
    T2 = op_to_T(ham_skew_operator(h))
    for k in range(6):
        for l in range(6):
            assert T2[k, l] == T[k, l]
    op = T_to_op(T)
    T3 = op_to_T(op)
    for k in range(6):
        for l in range(6):
            assert T3[k, l] == T[k, l]


def test_op_to_T_rejects_bad_operators():
    d = 2
    quartic = SparseOperator("majorana", d)
    quartic._accum(0b1111, QQi(1))
    with pytest.raises(ValueError):
        op_to_T(quartic)
    ident = identity_op("majorana", d)
    with pytest.raises(ValueError):
        op_to_T(ident)
    imag = SparseOperator("majorana", d)
    imag._accum(0b11, QQi(0, 1))
    with pytest.raises(ValueError):
        op_to_T(imag)
    pauli = SparseOperator("pauli", d)
    pauli._accum(0b11, QQi(1))
    with pytest.raises(ValueError):
        op_to_T(pauli)


def test_quadratic_ham_validation():
    with pytest.raises(ValueError):
        quadratic_ham([[0, 1], [0, 0]], np.zeros((2, 2)))
    with pytest.raises(ValueError):
        quadratic_ham(np.zeros((2, 2)), [[0, 1], [1, 0]])
    with pytest.raises(ValueError):
        quadratic_ham(np.zeros((2, 2)), np.zeros((3, 3)))
    with pytest.raises(ValueError):
        quadratic_ham(np.zeros((0, 0)), np.zeros((0, 0)))
    with pytest.raises(ValueError):
        ham_to_T(quadratic_ham([[1j]], [[0]]))  # 1x1 A with 1j is not hermitian


def test_T_validation():
    with pytest.raises(ValueError):
        T_to_ham(np.zeros((3, 3)))
    with pytest.raises(ValueError):
        T_to_ham(np.array([[0.0, 1.0], [1.0, 0.0]]))


# -- the redundant four-matrix form --------------------------------------


def test_convert_CDEF_number_operator():
    zero = [[0]]
    h = convert_CDEF_to_AB(zero, [[QQ(-1, 2)]], [[QQ(1, 2)]], zero)
    assert h.field == "exact"
    assert h.A[0, 0] == QQi(1)
    assert h.B[0, 0] == QQi(0)


def test_convert_CDEF_zero():
    z = np.zeros((3, 3), dtype=int)
    h = convert_CDEF_to_AB(z, z, z, z)
    assert all(h.A[p, q] == QQi(0) for p in range(3) for q in range(3))
    assert all(h.B[p, q] == QQi(0) for p in range(3) for q in range(3))


def test_convert_CDEF_matches_direct_assembly():
    d = 2
    h0 = random_float_ham(d, 13)
    A = np.asarray(h0.A, dtype=complex)
    B = np.asarray(h0.B, dtype=complex)
    E = A / 2
    D = -E.T
    C = -B.conj() / 2
    F = C.conj().T
    h = convert_CDEF_to_AB(C, D, E, F)
    assert np.max(np.abs(np.asarray(h.A) - A)) < 1e-12
    assert np.max(np.abs(np.asarray(h.B) - B)) < 1e-12
    N = 1 << d
    direct = np.zeros((N, N), dtype=complex)
    for p in range(1, d + 1):
        for q in range(1, d + 1):
            cp, cq = od.creation_matrix(p, d), od.creation_matrix(q, d)
            ap, aq = od.annihilation_matrix(p, d), od.annihilation_matrix(q, d)
            direct += C[p - 1, q - 1] * ap @ aq
            direct += D[p - 1, q - 1] * ap @ cq
            direct += E[p - 1, q - 1] * cp @ aq
            direct += F[p - 1, q - 1] * cp @ cq
    want = od.quadratic_hamiltonian(A, B, d)
    assert np.max(np.abs(direct - want)) < 1e-12


def test_convert_CDEF_rejects_violations():
    z = np.zeros((2, 2))
    bad = np.array([[0.0, 1.0], [0.0, 0.0]])
    with pytest.raises(ValueError):
        convert_CDEF_to_AB(bad, z, z, z)
    with pytest.raises(ValueError):
        convert_CDEF_to_AB(z, bad, z, z)
    with pytest.raises(ValueError):
        convert_CDEF_to_AB(z, z, z, np.zeros((3, 3)))


# -- covariance matrices --------------------------------------------------


def test_vacuum_and_purity():
    G = vacuum_covariance(3)
    assert is_pure(G)
    assert np.allclose(singular_values(G), 1.0)
    assert not is_pure(np.zeros((6, 6)))
    cf = canonical_form(G)
    assert np.allclose(cf.nu, 1.0)
    assert cf.last_block_sign == 1


def test_random_pure_covariance_on_vacuum_orbit():
    G = random_pure_covariance(4, seed=14)
    assert is_pure(G)
    assert same_orbit(G, vacuum_covariance(4))


def test_canonical_form_recovers_spectrum():
    nus = [0.9, 0.5, 0.2]
    form0 = np.zeros((6, 6))
    for j, nu in enumerate(nus):
        form0[2 * j: 2 * j + 2, 2 * j: 2 * j + 2] = nu * J2
    O = random_special_orthogonal(6, seed=15)
    G = O @ form0 @ O.T
    cf = canonical_form(G)
    assert np.allclose(cf.nu, nus, atol=1e-10)
    assert cf.last_block_sign == 1
    assert np.allclose(cf.O @ cf.O.T, np.eye(6), atol=1e-12)
    assert np.linalg.det(cf.O) == pytest.approx(1.0)
    assert np.max(np.abs(cf.O @ G @ cf.O.T - cf.form)) < 1e-10


def test_canonical_form_zero_matrix():
    cf = canonical_form(np.zeros((4, 4)))
    assert np.allclose(cf.nu, 0.0)
    assert np.allclose(cf.form, 0.0)
    assert np.linalg.det(cf.O) == pytest.approx(1.0)


def test_canonical_form_zero_modes():
    form0 = np.zeros((6, 6))
    form0[0:2, 0:2] = 0.8 * J2
    O = random_special_orthogonal(6, seed=16)
    cf = canonical_form(O @ form0 @ O.T)
    assert np.allclose(cf.nu, [0.8, 0.0, 0.0], atol=1e-10)
    assert cf.last_block_sign == 1


def test_canonical_form_negative_pfaffian():
    form0 = np.zeros((4, 4))
    form0[0:2, 0:2] = 0.9 * J2
    form0[2:4, 2:4] = -0.5 * J2
    O = random_special_orthogonal(4, seed=3)
    G = O @ form0 @ O.T
    cf = canonical_form(G)
    assert np.allclose(cf.nu, [0.9, 0.5], atol=1e-10)
    assert cf.last_block_sign == -1
    assert np.linalg.det(cf.O) == pytest.approx(1.0)
    assert np.max(np.abs(cf.O @ G @ cf.O.T - cf.form)) < 1e-10


def test_covariance_validation():
    with pytest.raises(ValueError):
        is_pure(np.zeros((3, 3)))
    with pytest.raises(ValueError):
        is_pure(np.array([[0.0, 1.0], [1.0, 0.0]]))
    with pytest.raises(ValueError):
        is_pure(2.0 * vacuum_covariance(2))


# -- the quadratic flow ----------------------------------------------------


def test_evolve_identity_and_orbit_preservation():
    G = random_pure_covariance(3, seed=17)
    T = to_float(ham_to_T(random_rational_ham(3, 18)))
    assert np.allclose(evolve_covariance(G, T, 0.0), G)
    Gt = evolve_covariance(G, T, 1.7)
    assert same_orbit(G, Gt)
    assert is_pure(Gt)
    with pytest.raises(ValueError):
        evolve_covariance(G, np.zeros((4, 4)), 1.0)


def test_evolve_matches_dense_heisenberg_flow():
    d = 2
    h = random_rational_ham(d, 11)
    X = dense(ham_skew_operator(h))
    rho0 = np.zeros((4, 4), dtype=complex)
    rho0[vacuum_index(d), vacuum_index(d)] = 1.0
    s = 0.37
    U = expm(s * X)
    rho = U @ rho0 @ U.conj().T
    G_pkg = evolve_covariance(vacuum_covariance(d), to_float(ham_to_T(h)), 2 * s)
    assert np.max(np.abs(od.covariance_of_state(rho, d) - G_pkg)) < 1e-12


def test_same_orbit_cases():
    G1 = random_pure_covariance(3, seed=19)
    G2 = random_pure_covariance(3, seed=20)
    assert same_orbit(G1, G2)
    assert not same_orbit(G1, np.zeros((6, 6)))
    O = random_special_orthogonal(6, seed=21)
    mixed = 0.5 * vacuum_covariance(3)
    assert same_orbit(mixed, O @ mixed @ O.T)
    with pytest.raises(ValueError):
        same_orbit(G1, vacuum_covariance(2))


# -- Wick expectations ------------------------------------------------------


def test_wick_two_point_and_identities():
    G = random_pure_covariance(3, seed=22)
    for p in range(1, 7):
        assert wick_expectation(G, (p, p)) == pytest.approx(1.0)
        for q in range(p + 1, 7):
            assert wick_expectation(G, (p, q)) == pytest.approx(
                -1j * G[p - 1, q - 1]
            )
            assert wick_expectation(G, (q, p)) == pytest.approx(
                1j * G[p - 1, q - 1]
            )
    assert wick_expectation(G, (1, 2, 3)) == 0
    assert wick_expectation(G, ()) == pytest.approx(1.0)
    assert wick_expectation(G, (2, 3, 3, 2)) == pytest.approx(1.0)


def test_wick_matches_dense_traces():
    d = 2
    h = random_rational_ham(d, 11)
    X = dense(ham_skew_operator(h))
    rho0 = np.zeros((4, 4), dtype=complex)
    rho0[vacuum_index(d), vacuum_index(d)] = 1.0
    s = 0.37
    U = expm(s * X)
    rho = U @ rho0 @ U.conj().T
    G = evolve_covariance(vacuum_covariance(d), to_float(ham_to_T(h)), 2 * s)
    words = [(1, 2), (1, 4), (1, 2, 3, 4), (1, 3, 2, 4), (2, 4, 3, 1),
             (1, 2, 2, 3), (4, 3, 2, 1)]
    for w in words:
        M = np.eye(4, dtype=complex)
        for i in w:
            M = M @ od.majorana_matrix(i, d)
        assert wick_expectation(G, w) == pytest.approx(
            complex(np.trace(rho @ M)), abs=1e-12
        )


def test_wick_full_word_is_pfaffian():
    G = random_pure_covariance(3, seed=23)
    full = wick_expectation(G, tuple(range(1, 7)))
    assert full == pytest.approx(pfaffian(-1j * G))


_WICK_G = random_pure_covariance(3, seed=2)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(1, 6), max_size=6), st.integers(1, 6))
def test_wick_reversal_conjugates_and_squares_cancel(word, k):
    val = wick_expectation(_WICK_G, word)
    rev = wick_expectation(_WICK_G, list(reversed(word)))
    assert rev == pytest.approx(np.conj(val), abs=1e-10)
    padded = wick_expectation(_WICK_G, [k, k] + word)
    assert padded == pytest.approx(val, abs=1e-10)


def test_wick_index_range_error():
    G = vacuum_covariance(2)
    with pytest.raises(ValueError):
        wick_expectation(G, (1, 5))
    with pytest.raises(ValueError):
        wick_expectation(G, (0, 1))


def test_pfaffian_values():
    assert pfaffian([[0, 3], [-3, 0]]) == pytest.approx(3.0)
    rng = np.random.default_rng(24)
    a = rng.integers(-4, 5, size=6)
    A = np.array([
        [0, a[0], a[1], a[2]],
        [-a[0], 0, a[3], a[4]],
        [-a[1], -a[3], 0, a[5]],
        [-a[2], -a[4], -a[5], 0],
    ], dtype=float)
    want = a[0] * a[5] - a[1] * a[4] + a[2] * a[3]
    assert pfaffian(A) == pytest.approx(want)
    assert pfaffian(np.zeros((3, 3))) == 0


@pytest.mark.parametrize("n,seed", [(6, 25), (12, 26)])
def test_pfaffian_squares_to_determinant(n, seed):
    rng = np.random.default_rng(seed)
    M = rng.normal(size=(n, n))
    A = M - M.T
    pf = pfaffian(A)
    assert pf ** 2 == pytest.approx(np.linalg.det(A), rel=1e-9)


def test_pfaffian_elimination_branch_known_value():
    # block diagonal of nu_j J has Pfaffian prod(nu_j); SO conjugation
    # preserves it, and size 12 exercises the elimination path
    nus = [3.0, 2.5, 2.0, 1.5, 1.0, 0.5]
    form = np.zeros((12, 12))
    for j, nu in enumerate(nus):
        form[2 * j: 2 * j + 2, 2 * j: 2 * j + 2] = nu * J2
    O = random_special_orthogonal(12, seed=27)
    assert pfaffian(O @ form @ O.T) == pytest.approx(np.prod(nus), rel=1e-10)


# -- controllability --------------------------------------------------------


@pytest.mark.parametrize("d,want", [
    (2, (4, "inapplicable")),
    (3, (3, True)),
    (4, (3, True)),
    (5, (3, True)),
    (6, (3, True)),
])
def test_tensor_square_full_algebra(d, want):
    dim, verdict = tensor_square_controllable(so_matrix_basis(2 * d))
    assert (dim, verdict) == want


def test_tensor_square_single_generator():
    T = np.zeros((6, 6))
    T[0, 1], T[1, 0] = 1.0, -1.0
    dim, verdict = tensor_square_controllable([T])
    # one elementary rotation: 18 zero modes, 8 equivalent rotation
    # planes, 1 double-speed plane -> 18^2 + 8^2 + 1
    assert (dim, verdict) == (389, False)


def test_tensor_square_errors():
    with pytest.raises(ValueError):
        tensor_square_controllable([])
    with pytest.raises(ValueError):
        tensor_square_controllable([np.zeros((3, 3))])
    with pytest.raises(ValueError):
        tensor_square_controllable([np.zeros((4, 4)), np.zeros((6, 6))])


def test_transitive_full_so6():
    v = quasifree_pure_controllable(so_matrix_basis(6))
    assert v.transitive
    assert v.label == "so(6)"
    assert (v.closure_dim, v.rank, v.tangent_dim) == (15, 3, 6)
    assert v.to_json_dict() == {
        "transitive": True, "closure_dim": 15, "rank": 3,
        "tangent_dim": 6, "label": "so(6)",
    }


def test_axis_stabilizer_is_still_transitive():
    # so(9) inside so(10) acts transitively on pure states even though
    # it is a proper subalgebra
    v = quasifree_pure_controllable(axis_stabilizer_basis(10))
    assert v.transitive
    assert v.label == "so(9)"
    assert (v.closure_dim, v.rank, v.tangent_dim) == (36, 4, 20)


def test_number_conserving_family_is_not_transitive():
    rng = np.random.default_rng(5)

    def rand_A(d):
        M = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        return (M + M.conj().T) / 2

    d = 4
    gens = [ham_to_T(quadratic_ham(rand_A(d), np.zeros((d, d))))
            for _ in range(2)]
    v = quasifree_pure_controllable(gens)
    assert not v.transitive
    assert v.tangent_dim == 0
    assert v.closure_dim == 16
    assert v.label == "su(4) + u(1)"


@pytest.mark.parametrize("d", [2, 3, 4])
def test_vacuum_stabilizer_has_codimension_d_d_minus_1(d):
    G0 = random_pure_covariance(d, seed=28 + d)
    rows = [np.ravel(X @ G0 - G0 @ X) for X in so_matrix_basis(2 * d)]
    s = np.linalg.svd(np.stack(rows), compute_uv=False)
    rank = int(np.sum(s > 1e-8 * s[0]))
    assert rank == d * (d - 1)


def test_controllability_input_errors():
    with pytest.raises(ValueError):
        quasifree_pure_controllable([])
    with pytest.raises(ValueError):
        quasifree_pure_controllable([np.zeros((2, 2))])
    with pytest.raises(ValueError):
        quasifree_pure_controllable([np.zeros((3, 3))])


# -- serialization -----------------------------------------------------------


def test_matrix_json_roundtrip():
    G = random_pure_covariance(3, seed=29)
    text = matrix_to_json(G)
    data = json.loads(text)
    assert data["d"] == 3
    assert np.allclose(matrix_from_json(text), G)
    with pytest.raises(ValueError):
        matrix_to_json(np.zeros((3, 3)))
    with pytest.raises(ValueError):
        matrix_from_json(json.dumps({"d": 2, "matrix": [[0.0] * 6] * 6}))


def test_spectra_csv_format():
    Gs = [vacuum_covariance(2), 0.5 * vacuum_covariance(2)]
    text = spectra_csv(Gs)
    lines = text.strip().split("\n")
    assert lines[0] == "d,nu_1,nu_2"
    assert lines[1] == "2,1,1"
    assert lines[2] == "2,0.5,0.5"
    assert text.endswith("\n")
    with pytest.raises(ValueError):
        spectra_csv([vacuum_covariance(2), vacuum_covariance(3)])
    assert spectra_csv([]) == ""
