"""Quadratic fermionic Hamiltonians and the covariance-matrix picture.

A quadratic Hamiltonian in d modes,

    H = sum_pq A_pq (f_p^dag f_q - delta_pq/2)
        + (1/2) sum_pq B_pq f_p^dag f_q^dag - (1/2) conj(B_pq) f_p f_q,

with A hermitian and B skew-symmetric, is the same thing as a real skew
matrix T of size 2d through -iH = sum_kl T_kl (-m_k m_l/2).  Brackets of
Hamiltonians turn into matrix brackets of the T's (up to one global
factor: T_{[X1,X2]} = -2 [T1, T2] in this normalization, see
quad_commutator), so the dynamical algebra of a quadratic control
system lives inside so(2d) and every question about it shrinks from
4^d dimensions to (2d)^2; rescaling generators never changes a
generated algebra, so closures, structure labels, and controllability
verdicts are unaffected by the factor.

States enter through covariance matrices G_pq = i tr(rho m_p m_q) for
p != q (zero diagonal).  Conjugation by the quadratic flow acts on G by
a special orthogonal matrix, orbits of the full quadratic group are
labeled by singular values, pure states are exactly the G with
G G^t = 1, and expectations of Majorana monomials in a quasifree state
reduce to Pfaffians of submatrices of -iG.
"""

from __future__ import annotations

import json

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.linalg import expm

from .coeffs import QQ, QQ_ZERO, QQi, as_fraction
from .engine import (
    block_equivalence_classes,
    invariant_blocks,
    matrix_lie_closure,
    matrix_structure_profile,
)
from .ops import SparseOperator

HALF = Fraction(1, 2)

# 2x2 letters of the block formula for T.
_J2 = np.array([[0.0, 1.0], [-1.0, 0.0]])
_X2 = np.array([[0.0, 1.0], [1.0, 0.0]])
_D2 = np.array([[1.0, 0.0], [0.0, -1.0]])

_J2_EXACT = np.array(
    [[Fraction(0), Fraction(1)], [Fraction(-1), Fraction(0)]], dtype=object
)
_X2_EXACT = np.array(
    [[Fraction(0), Fraction(1)], [Fraction(1), Fraction(0)]], dtype=object
)
_D2_EXACT = np.array(
    [[Fraction(1), Fraction(0)], [Fraction(0), Fraction(-1)]], dtype=object
)


# -- quadratic Hamiltonians ------------------------------------------


def _exact_entry(x):
    """QQi view of a rational-like scalar, or None when it needs floats."""
    if isinstance(x, QQi):
        return x
    if isinstance(x, (int, np.integer)):
        return QQi(int(x))
    if isinstance(x, Fraction) or type(x) is type(QQ_ZERO):
        return QQi(x)
    return None


def _coerce_square(M, name):
    rows = [list(r) for r in M]
    d = len(rows)
    if d == 0 or any(len(r) != d for r in rows):
        raise ValueError(f"{name} must be square and nonempty")
    exact = np.empty((d, d), dtype=object)
    for p in range(d):
        for q in range(d):
            e = _exact_entry(rows[p][q])
            if e is None:
                return np.array(
                    [[complex(x) for x in r] for r in rows], dtype=complex
                ), "float"
            exact[p, q] = e
    return exact, "exact"


@dataclass(frozen=True)
class QuadraticHam:
    """Validated (A, B) pair; field is "exact" (QQi entries) or "float"."""

    d: int
    A: np.ndarray
    B: np.ndarray
    field: str


def quadratic_ham(A, B) -> QuadraticHam:
    """Build a QuadraticHam, enforcing A = A^dag and B = -B^t.

    Entries that are all ints, Fractions, or QQi values keep exact
    arithmetic; anything float-like demotes both matrices to complex.
    """
    Am, fa = _coerce_square(A, "A")
    Bm, fb = _coerce_square(B, "B")
    if Am.shape != Bm.shape:
        raise ValueError("A and B must have the same size")
    field = "exact" if fa == fb == "exact" else "float"
    if field == "float":
        Am = np.asarray(Am, dtype=complex)
        Bm = np.asarray(Bm, dtype=complex)
        scale = max(1.0, np.max(np.abs(Am)), np.max(np.abs(Bm)))
        if np.max(np.abs(Am - Am.conj().T)) > 1e-12 * scale:
            raise ValueError("A must be hermitian")
        if np.max(np.abs(Bm + Bm.T)) > 1e-12 * scale:
            raise ValueError("B must be skew-symmetric")
    else:
        d = Am.shape[0]
        for p in range(d):
            for q in range(d):
                if not (Am[p, q] == Am[q, p].conj()):
                    raise ValueError("A must be hermitian")
                if not (Bm[p, q] == -Bm[q, p]):
                    raise ValueError("B must be skew-symmetric")
    return QuadraticHam(Am.shape[0], Am, Bm, field)


def convert_CDEF_to_AB(C, D, E, F) -> QuadraticHam:
    """Rewrite H = sum C ff + D f f^dag + E f^dag f + F f^dag f^dag.

    The redundant parameterization must satisfy C = F^dag, D = D^dag,
    E = E^dag, C = -C^t, D = -E^t, F = -F^t; then A = 2E, B = -2 conj(C)
    reproduces the same operator, constants included.
    """
    mats = {}
    fields = set()
    for name, M in (("C", C), ("D", D), ("E", E), ("F", F)):
        mats[name], f = _coerce_square(M, name)
        fields.add(f)
    if len({m.shape for m in mats.values()}) != 1:
        raise ValueError("C, D, E, F must share one size")
    if "float" in fields:
        for name in mats:
            mats[name] = np.asarray(mats[name], dtype=complex)
        scale = max([1.0] + [np.max(np.abs(m)) for m in mats.values()])

        def bad(lhs, rhs):
            return np.max(np.abs(lhs - rhs)) > 1e-12 * scale

        Cm, Dm, Em, Fm = mats["C"], mats["D"], mats["E"], mats["F"]
        if (
            bad(Cm, Fm.conj().T)
            or bad(Dm, Dm.conj().T)
            or bad(Em, Em.conj().T)
            or bad(Cm, -Cm.T)
            or bad(Dm, -Em.T)
            or bad(Fm, -Fm.T)
        ):
            raise ValueError("C, D, E, F constraints violated")
        return quadratic_ham(2.0 * Em, -2.0 * Cm.conj())
    Cm, Dm, Em, Fm = mats["C"], mats["D"], mats["E"], mats["F"]
    d = Cm.shape[0]
    two = QQi(2)
    for p in range(d):
        for q in range(d):
            ok = (
                Cm[p, q] == Fm[q, p].conj()
                and Dm[p, q] == Dm[q, p].conj()
                and Em[p, q] == Em[q, p].conj()
                and Cm[p, q] == -Cm[q, p]
                and Dm[p, q] == -Em[q, p]
                and Fm[p, q] == -Fm[q, p]
            )
            if not ok:
                raise ValueError("C, D, E, F constraints violated")
    A = np.empty((d, d), dtype=object)
    B = np.empty((d, d), dtype=object)
    for p in range(d):
        for q in range(d):
            A[p, q] = two * Em[p, q]
            B[p, q] = -(two * Cm[p, q].conj())
    return quadratic_ham(A, B)


# -- the so(2d) matrix picture ---------------------------------------


def _exact_parts(M):
    d = M.shape[0]
    re = np.empty((d, d), dtype=object)
    im = np.empty((d, d), dtype=object)
    for p in range(d):
        for q in range(d):
            re[p, q] = as_fraction(M[p, q].re)
            im[p, q] = as_fraction(M[p, q].im)
    return re, im


def ham_to_T(h: QuadraticHam) -> np.ndarray:
    """Real skew 2d x 2d matrix T with -iH = sum T_kl (-m_k m_l/2).

    The 2x2-block form: with J = [[0,1],[-1,0]], X = [[0,1],[1,0]] and
    D = diag(1,-1),

        T = (Re A (x) J - Re B (x) X - Im A (x) 1 - Im B (x) D) / 2.

    Exact Hamiltonians give an object array of Fractions, float ones a
    float64 array.
    """
    if h.field == "exact":
        reA, imA = _exact_parts(h.A)
        reB, imB = _exact_parts(h.B)
        T = (
            np.kron(reA, _J2_EXACT)
            - np.kron(reB, _X2_EXACT)
            - np.kron(imA, np.identity(2, dtype=object) * Fraction(1))
            - np.kron(imB, _D2_EXACT)
        )
        return T * HALF
    A = np.asarray(h.A, dtype=complex)
    B = np.asarray(h.B, dtype=complex)
    T = (
        np.kron(A.real, _J2)
        - np.kron(B.real, _X2)
        - np.kron(A.imag, np.eye(2))
        - np.kron(B.imag, _D2)
    )
    return T / 2.0


def _check_T(T):
    T = np.asarray(T)
    n = T.shape[0] if T.ndim == 2 else 0
    if T.ndim != 2 or T.shape != (n, n) or n == 0 or n % 2:
        raise ValueError("T must be square of even size")
    if T.dtype == object:
        for k in range(n):
            for l in range(n):
                if not (T[k, l] == -T[l, k]):
                    raise ValueError("T must be skew-symmetric")
    else:
        T = np.asarray(T, dtype=float)
        if np.max(np.abs(T + T.T)) > 1e-12 * max(1.0, np.max(np.abs(T))):
            raise ValueError("T must be skew-symmetric")
    return T


def T_to_ham(T) -> QuadraticHam:
    """Inverse of ham_to_T (block-by-block decomposition)."""
    T = _check_T(T)
    d = T.shape[0] // 2
    exact = T.dtype == object
    A = np.empty((d, d), dtype=object)
    B = np.empty((d, d), dtype=object)
    for p in range(d):
        for q in range(d):
            S = T[2 * p: 2 * p + 2, 2 * q: 2 * q + 2]
            reA = S[0, 1] - S[1, 0]
            reB = -(S[0, 1] + S[1, 0])
            imA = -(S[0, 0] + S[1, 1])
            imB = S[1, 1] - S[0, 0]
            if exact:
                A[p, q] = QQi(QQ(reA.numerator, reA.denominator),
                              QQ(imA.numerator, imA.denominator))
                B[p, q] = QQi(QQ(reB.numerator, reB.denominator),
                              QQ(imB.numerator, imB.denominator))
            else:
                A[p, q] = complex(reA, imA)
                B[p, q] = complex(reB, imB)
    return quadratic_ham(A, B)


def quad_commutator(h1: QuadraticHam, h2: QuadraticHam) -> QuadraticHam:
    """The quadratic Hamiltonian whose T matrix is [T1, T2].

    ham_to_T carries brackets up to a fixed factor: with X = -iH,
    the normalization of T makes T_{[X1,X2]} = -2 [T1, T2], so the
    operator behind this Hamiltonian is (i/2)[H1, H2] and

        -2 ham_skew_operator(quad_commutator(h1, h2))
            = [ham_skew_operator(h1), ham_skew_operator(h2)]

    holds exactly.  Transporting the matrix bracket this way keeps the
    correspondence T(quad_commutator(h1, h2)) = [T1, T2] exact.
    """
    T1 = ham_to_T(h1)
    T2 = ham_to_T(h2)
    if T1.shape != T2.shape:
        raise ValueError("mode counts differ")
    return T_to_ham(np.dot(T1, T2) - np.dot(T2, T1))


def T_to_op(T) -> SparseOperator:
    """-iH as a Majorana polynomial: sum over k<l of -T_kl m_k m_l."""
    T = _check_T(T)
    d = T.shape[0] // 2
    exact = T.dtype == object
    op = SparseOperator("majorana", d, "exact" if exact else "float")
    for k in range(2 * d):
        for l in range(k + 1, 2 * d):
            val = T[k, l]
            if (val == 0) if exact else (val == 0.0):
                continue
            key = (1 << k) | (1 << l)
            coeff = QQi(QQ(-val.numerator, val.denominator)) if exact \
                else complex(-val)
            op._accum(key, op._coerce(coeff))
    return op


def ham_skew_operator(h: QuadraticHam) -> SparseOperator:
    """-iH as a SparseOperator in the Majorana representation."""
    return T_to_op(ham_to_T(h))


def op_to_T(op: SparseOperator) -> np.ndarray:
    """T matrix of a purely quadratic skew operator X = sum x_kl m_k m_l.

    Exact operators give an object array of Fractions.  Identity or
    higher-degree components are errors: they have no so(2d) image.
    """
    if op.rep != "majorana":
        raise ValueError("op_to_T needs a Majorana-representation operator")
    d = op.n
    exact = op.field == "exact"
    T = np.full((2 * d, 2 * d), Fraction(0), dtype=object) if exact \
        else np.zeros((2 * d, 2 * d))
    for key, coeff in op.terms.items():
        weight = bin(key).count("1")
        if weight != 2:
            raise ValueError("operator is not purely quadratic")
        k = (key & -key).bit_length() - 1
        l = key.bit_length() - 1
        if exact:
            if not coeff.is_real():
                raise ValueError("quadratic coefficients must be real")
            val = as_fraction(coeff.re)
        else:
            if abs(coeff.imag) > 1e-12 * max(1.0, abs(coeff)):
                raise ValueError("quadratic coefficients must be real")
            val = coeff.real
        T[k, l] = -val
        T[l, k] = val
    return T


# -- covariance matrices ----------------------------------------------


def _check_covariance(G, sv_bound=True):
    G = np.asarray(G, dtype=float)
    n = G.shape[0] if G.ndim == 2 else 0
    if G.ndim != 2 or G.shape != (n, n) or n == 0 or n % 2:
        raise ValueError("covariance matrix must be square of even size")
    scale = max(1.0, np.max(np.abs(G)))
    if np.max(np.abs(G + G.T)) > 1e-9 * scale:
        raise ValueError("covariance matrix must be skew-symmetric")
    if sv_bound:
        top = np.linalg.norm(G, 2)
        if top > 1.0 + 1e-8:
            raise ValueError("covariance singular values exceed 1")
    return G


def vacuum_covariance(d: int) -> np.ndarray:
    """Covariance of the Fock vacuum: d blocks of [[0,1],[-1,0]]."""
    if d < 1:
        raise ValueError("need at least one mode")
    return np.kron(np.eye(d), _J2)


def random_special_orthogonal(n: int, seed=None) -> np.ndarray:
    """Haar-ish SO(n) sample: QR of a Gaussian matrix, det fixed to +1."""
    rng = np.random.default_rng(seed)
    Q, R = np.linalg.qr(rng.normal(size=(n, n)))
    Q = Q * np.sign(np.diag(R))
    if np.linalg.det(Q) < 0:
        Q[:, 0] = -Q[:, 0]
    return Q


def random_pure_covariance(d: int, seed=None) -> np.ndarray:
    """O G_vac O^t for a random O in SO(2d)."""
    O = random_special_orthogonal(2 * d, seed)
    return O @ vacuum_covariance(d) @ O.T


def singular_values(G) -> np.ndarray:
    """All 2d singular values of G, descending (each nu appears twice)."""
    G = _check_covariance(G, sv_bound=False)
    return np.linalg.svd(G, compute_uv=False)


def is_pure(G) -> bool:
    """True iff G G^t = 1 within 1e-9 (all singular values one)."""
    G = _check_covariance(G)
    n = G.shape[0]
    return bool(np.max(np.abs(G @ G.T - np.eye(n))) < 1e-9)


def evolve_covariance(G, T, t: float) -> np.ndarray:
    """Heisenberg flow of the covariance: e^{-tT} G (e^{tT})^t.

    One unit of physical time under H corresponds to t = 2 here, since
    [-iH, m_r] = 2 (T m)_r.
    """
    G = _check_covariance(G, sv_bound=False)
    T = _check_T(T)
    T = np.asarray(T, dtype=float)
    if T.shape != G.shape:
        raise ValueError("covariance and T sizes differ")
    O = expm(-t * T)
    return O @ G @ O.T


def same_orbit(G1, G2, tol: float = 1e-8) -> bool:
    """Orbit test for the quadratic group: equal singular-value lists."""
    G1 = _check_covariance(G1, sv_bound=False)
    G2 = _check_covariance(G2, sv_bound=False)
    if G1.shape != G2.shape:
        raise ValueError("covariance sizes differ")
    s1 = np.sort(np.linalg.svd(G1, compute_uv=False))
    s2 = np.sort(np.linalg.svd(G2, compute_uv=False))
    return bool(np.max(np.abs(s1 - s2)) <= tol)


@dataclass(frozen=True)
class CanonicalForm:
    """O G O^t = form, O in SO(2d), form built from 2x2 blocks nu_j J.

    nu holds the d singular values, descending.  When det would come
    out -1 and G has no zero mode to hide the flip in, the last block
    carries a minus sign instead (so O can stay special orthogonal);
    last_block_sign records it.
    """

    nu: np.ndarray
    O: np.ndarray
    form: np.ndarray
    last_block_sign: int


def canonical_form(G) -> CanonicalForm:
    """Block-diagonalize a covariance matrix by a special orthogonal O."""
    G = _check_covariance(G)
    n = G.shape[0]
    d = n // 2
    w, V = np.linalg.eigh(-G @ G)
    order = np.argsort(-w)
    rows: list[np.ndarray] = []
    kernel: list[np.ndarray] = []
    nus: list[float] = []
    for col in order:
        u = V[:, col].copy()
        for _ in range(2):
            for r in rows:
                u -= r * (r @ u)
            for r in kernel:
                u -= r * (r @ u)
        nrm = np.linalg.norm(u)
        if nrm < 1e-6:
            continue
        u /= nrm
        v = -G @ u
        nu = np.linalg.norm(v)
        if nu <= 1e-9:
            kernel.append(u)
            continue
        v /= nu
        for r in rows:
            v -= r * (r @ v)
        v /= np.linalg.norm(v)
        rows.extend([u, v])
        nus.append(nu)
    for j in range(0, len(kernel) - 1, 2):
        rows.extend([kernel[j], kernel[j + 1]])
        nus.append(0.0)
    if len(rows) != n:
        raise RuntimeError("covariance pairing lost a direction")
    O = np.array(rows)
    sign = 1
    if np.linalg.det(O) < 0:
        if nus[-1] <= 1e-9:
            O[-1] = -O[-1]
        else:
            O[-1] = -O[-1]
            sign = -1
    blocks = [nu * _J2 for nu in nus]
    blocks[-1] = blocks[-1] * sign
    form = np.zeros((n, n))
    for j, blk in enumerate(blocks):
        form[2 * j: 2 * j + 2, 2 * j: 2 * j + 2] = blk
    if np.max(np.abs(O @ G @ O.T - form)) > 1e-10 * max(1.0, np.max(np.abs(G))):
        raise RuntimeError("canonical form residual too large")
    return CanonicalForm(np.array(nus), O, form, sign)


# -- Wick expectations -------------------------------------------------


def _pf_recursive(A):
    n = A.shape[0]
    if n == 0:
        return 1.0 + 0.0j
    acc = 0.0 + 0.0j
    rest = list(range(1, n))
    for pos, j in enumerate(rest):
        if A[0, j] == 0:
            continue
        sub = [k for k in rest if k != j]
        term = A[0, j] * _pf_recursive(A[np.ix_(sub, sub)])
        acc += term if pos % 2 == 0 else -term
    return acc


def pfaffian(K) -> complex:
    """Pfaffian of an even-size skew matrix.

    Recursive first-row expansion up to size 8 (exact structure, cheap),
    skew elimination with partial pivoting above (stable).
    """
    A = np.asarray(K, dtype=complex)
    n = A.shape[0] if A.ndim == 2 else 0
    if A.ndim != 2 or A.shape != (n, n):
        raise ValueError("pfaffian needs a square matrix")
    if n % 2:
        return 0.0 + 0.0j
    if n <= 8:
        return complex(_pf_recursive(A))
    A = A.copy()
    scale = max(1.0, np.max(np.abs(A)))
    pf = 1.0 + 0.0j
    for k in range(0, n - 2, 2):
        col = np.abs(A[k + 1:, k])
        piv = k + 1 + int(np.argmax(col))
        if np.abs(A[piv, k]) <= 1e-13 * scale:
            return 0.0 + 0.0j
        if piv != k + 1:
            A[[k + 1, piv]] = A[[piv, k + 1]]
            A[:, [k + 1, piv]] = A[:, [piv, k + 1]]
            pf = -pf
        a = A[k, k + 1]
        pf *= a
        b1 = A[k, k + 2:].copy()
        b2 = A[k + 1, k + 2:].copy()
        A[k + 2:, k + 2:] += (np.outer(b2, b1) - np.outer(b1, b2)) / a
    return complex(pf * A[n - 2, n - 1])


def wick_expectation(G, indices) -> complex:
    """tr(rho m_{i1} ... m_{ik}) for the quasifree state with covariance G.

    Indices are 1-based Majorana labels in 1..2d, repeats allowed.  The
    word is normal-ordered with fermionic signs (m^2 = 1 removes equal
    neighbors), and the surviving distinct ascending word evaluates to
    the Pfaffian of the submatrix of -iG it selects.  Odd words vanish.
    """
    G = _check_covariance(G)
    n = G.shape[0]
    word = [int(i) for i in indices]
    for i in word:
        if not 1 <= i <= n:
            raise ValueError("Majorana index out of range")
    if len(word) % 2:
        return 0.0 + 0.0j
    sign = 1
    changed = True
    while changed:
        changed = False
        j = 0
        while j + 1 < len(word):
            if word[j] == word[j + 1]:
                del word[j: j + 2]
                changed = True
            elif word[j] > word[j + 1]:
                word[j], word[j + 1] = word[j + 1], word[j]
                sign = -sign
                changed = True
            else:
                j += 1
    if not word:
        return complex(sign)
    idx = [i - 1 for i in word]
    K = -1j * G[np.ix_(idx, idx)]
    return complex(sign * pfaffian(K))


# -- controllability of quasifree systems ------------------------------


def _swap_sector_bases(n):
    """Orthonormal bases of the swap-symmetric and antisymmetric sectors
    of C^n (x) C^n, in the e_{a*n+b} = e_a (x) e_b indexing."""
    root = 1.0 / np.sqrt(2.0)
    sym = []
    anti = []
    for a in range(n):
        v = np.zeros(n * n)
        v[a * n + a] = 1.0
        sym.append(v)
        for b in range(a + 1, n):
            v = np.zeros(n * n)
            v[a * n + b] = root
            v[b * n + a] = root
            sym.append(v)
            w = np.zeros(n * n)
            w[a * n + b] = root
            w[b * n + a] = -root
            anti.append(w)
    return np.stack(sym, axis=1), np.stack(anti, axis=1)


def tensor_square_controllable(gens):
    """Commutant dimension of {T (x) 1 + 1 (x) T} over the generators.

    Returns (commutant_dim, verdict): verdict is True exactly when the
    commutant is three-dimensional, which for d >= 3 certifies that the
    generated algebra is all of so(2d).  At d = 2 the criterion cannot
    apply (so(4) is not simple) and the verdict is "inapplicable".

    The swap of the two tensor factors commutes with every generator,
    so the search for minimal invariant blocks runs inside the two swap
    sectors separately; that keeps orbit computations away from the
    systematically degenerate cross-sector spectrum.
    """
    Ts = [np.asarray(T, dtype=float) for T in gens]
    if not Ts:
        raise ValueError("need at least one generator")
    n = Ts[0].shape[0]
    if any(T.ndim != 2 or T.shape != (n, n) for T in Ts):
        raise ValueError("generator sizes differ")
    if n % 2:
        raise ValueError("generators must act on an even-dimensional space")
    eye = np.eye(n)
    doubled = [np.kron(T, eye) + np.kron(eye, T) for T in Ts]
    blocks = []
    for sector in _swap_sector_bases(n):
        restricted = [sector.T @ D @ sector for D in doubled]
        _, found = invariant_blocks(restricted)
        blocks.extend(sector @ Q for Q in found)
    classes = block_equivalence_classes(doubled, blocks)
    commutant_dim = sum(len(cls) ** 2 for cls in classes)
    if n == 4:
        return commutant_dim, "inapplicable"
    return commutant_dim, commutant_dim == 3


@dataclass(frozen=True)
class TransitivityVerdict:
    """Pure-state controllability report for a quasifree system."""

    transitive: bool
    closure_dim: int
    rank: int
    tangent_dim: int
    label: str

    def to_json_dict(self):
        return {
            "transitive": self.transitive,
            "closure_dim": self.closure_dim,
            "rank": self.rank,
            "tangent_dim": self.tangent_dim,
            "label": self.label,
        }


def quasifree_pure_controllable(gens) -> TransitivityVerdict:
    """Decide transitivity on pure quasifree states from T-matrix generators.

    Closes the generators to a matrix Lie algebra k inside so(2d) and
    measures the tangent space {[X, G0] : X in k} at the vacuum
    covariance G0.  The system reaches every pure quasifree state from
    every other exactly when that tangent space has the full orbit
    dimension d(d-1); this test stays correct even for proper
    subalgebras that happen to share dimension data with so(2d-1).
    The label cross-reports the isomorphism class when the (dim, rank)
    pair pins it down.
    """
    Ts = [np.asarray(T, dtype=float) for T in gens]
    if not Ts:
        raise ValueError("need at least one generator")
    n = Ts[0].shape[0]
    if any(T.ndim != 2 or T.shape != (n, n) for T in Ts):
        raise ValueError("generator sizes differ")
    if n % 2 or n < 4:
        raise ValueError("need an even matrix size of at least 4")
    d = n // 2
    basis = matrix_lie_closure(Ts)
    dim = len(basis)
    profile = matrix_structure_profile(basis)
    G0 = vacuum_covariance(d)
    tangent = np.stack(
        [np.ravel(X.real @ G0 - G0 @ X.real) for X in basis]
    )
    s = np.linalg.svd(tangent, compute_uv=False)
    tangent_dim = int(np.sum(s > 1e-8 * max(1.0, s[0])))
    target = d * (d - 1)
    if dim == d * (2 * d - 1) and profile.rank == d:
        label = f"so({2 * d})"
    elif dim == (d - 1) * (2 * d - 1) and profile.rank == d - 1:
        label = f"so({2 * d - 1})"
    else:
        label = profile.structure
    return TransitivityVerdict(
        transitive=tangent_dim == target,
        closure_dim=dim,
        rank=profile.rank,
        tangent_dim=tangent_dim,
        label=label,
    )


def so_matrix_basis(n: int):
    """Elementary basis E_ij - E_ji (i < j) of so(n)."""
    out = []
    for i in range(n):
        for j in range(i + 1, n):
            M = np.zeros((n, n))
            M[i, j] = 1.0
            M[j, i] = -1.0
            out.append(M)
    return out


def axis_stabilizer_basis(n: int):
    """Basis of the so(n-1) subalgebra fixing the first coordinate."""
    out = []
    for i in range(1, n):
        for j in range(i + 1, n):
            M = np.zeros((n, n))
            M[i, j] = 1.0
            M[j, i] = -1.0
            out.append(M)
    return out


# -- serialization ------------------------------------------------------


def matrix_to_json(M) -> str:
    """Dense row-major JSON form with an explicit mode count."""
    M = np.asarray(M, dtype=float)
    n = M.shape[0] if M.ndim == 2 else 0
    if M.ndim != 2 or M.shape != (n, n) or n % 2:
        raise ValueError("need a square matrix of even size")
    return json.dumps({"d": n // 2, "matrix": [list(map(float, r)) for r in M]})


def matrix_from_json(text: str) -> np.ndarray:
    data = json.loads(text)
    d = int(data["d"])
    M = np.array(data["matrix"], dtype=float)
    if M.shape != (2 * d, 2 * d):
        raise ValueError("matrix size does not match the mode count")
    return M


def spectra_csv(Gs) -> str:
    """CSV of singular-value spectra, one covariance matrix per row."""
    rows = []
    d = None
    for G in Gs:
        cf = canonical_form(G)
        if d is None:
            d = len(cf.nu)
            rows.append("d," + ",".join(f"nu_{j + 1}" for j in range(d)))
        elif len(cf.nu) != d:
            raise ValueError("spectra_csv needs a uniform mode count")
        rows.append(
            str(d) + "," + ",".join(f"{nu:.12g}" for nu in cf.nu)
        )
    return "\n".join(rows) + ("\n" if rows else "")
