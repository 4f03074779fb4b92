"""Span, closure, centralizer, and structure analysis.

All vectors here are real coordinate dicts over monomial keys in the
normalized skew-hermitian basis (see ops).  Exact field uses backend
rationals, float field uses Python floats with a relative tolerance:
coordinates below 1e-9 times the norm of the incoming vector are
treated as zero.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field as dc_field

import numpy as np

from ._fast import bracket_expand_maj, bracket_expand_pauli
from .coeffs import QQ
from .ops import SparseOperator

FLOAT_TOL = 1e-9
CLOSURE_CAP = 6000


def _bracket_fn(rep):
    return bracket_expand_maj if rep == "majorana" else bracket_expand_pauli


def bracket_vec(rep: str, va: dict, vb: dict) -> dict:
    return _bracket_fn(rep)(list(va.items()), list(vb.items()))


def _vec_norm(vec: dict) -> float:
    return max((abs(c) for c in vec.values()), default=0.0)


class OperatorSpace:
    """Row-echelon real span over monomial coordinates.

    Rows are monic at their pivot key and fully reduced against all
    earlier rows at insertion time, so a membership sweep visits each
    row once in insertion order.
    """

    def __init__(self, rep: str, n: int, field: str = "exact"):
        self.rep = rep
        self.n = n
        self.field = field
        self.rows: list[dict] = []
        self.pivot_keys: list[int] = []

    @property
    def dim(self) -> int:
        return len(self.rows)

    def _coords(self, op) -> dict:
        if isinstance(op, SparseOperator):
            if (op.rep, op.n) != (self.rep, self.n):
                raise ValueError("operator does not match this space")
            coords = op.l_coordinates()
            if self.field == "float" and op.field == "exact":
                coords = {k: float(c) for k, c in coords.items()}
            elif self.field != op.field:
                raise ValueError("field mismatch")
            return coords
        return op

    def reduce(self, vec) -> dict:
        """Remainder of vec modulo the span (vec is not consumed)."""
        v = dict(self._coords(vec))
        if self.field == "exact":
            zero = QQ(0)
            for idx, pkey in enumerate(self.pivot_keys):
                c = v.get(pkey)
                if not c:
                    continue
                del v[pkey]
                for k2, c2 in self.rows[idx].items():
                    if k2 == pkey:
                        continue
                    s = v.get(k2, zero) - c * c2
                    if s:
                        v[k2] = s
                    else:
                        v.pop(k2, None)
            return v
        cut = FLOAT_TOL * max(_vec_norm(v), 1e-300)
        for idx, pkey in enumerate(self.pivot_keys):
            c = v.get(pkey)
            if c is None:
                continue
            del v[pkey]
            if abs(c) <= cut:
                continue
            for k2, c2 in self.rows[idx].items():
                if k2 == pkey:
                    continue
                v[k2] = v.get(k2, 0.0) - c * c2
        return {k: c for k, c in v.items() if abs(c) > cut}

    def insert(self, vec) -> bool:
        """Reduce and, if independent, add; returns True when added."""
        r = self.reduce(vec)
        if not r:
            return False
        if self.field == "exact":
            pivot = min(r)
        else:
            pivot = max(r, key=lambda k: (abs(r[k]), -k))
        pc = r[pivot]
        row = {k: c / pc for k, c in r.items()}
        self.pivot_keys.append(pivot)
        self.rows.append(row)
        return True

    def contains(self, op) -> bool:
        return not self.reduce(op)

    def basis_operators(self) -> list[SparseOperator]:
        return [
            SparseOperator.from_l_coordinates(self.rep, self.n, row, self.field)
            for row in self.rows
        ]

    def copy(self) -> "OperatorSpace":
        out = OperatorSpace(self.rep, self.n, self.field)
        out.rows = [dict(r) for r in self.rows]
        out.pivot_keys = list(self.pivot_keys)
        return out


def span_reduce(ops, rep=None, n=None, field=None) -> OperatorSpace:
    """Echelonized span of a list of operators or coordinate vectors."""
    ops = list(ops)
    if rep is None:
        first = ops[0]
        if not isinstance(first, SparseOperator):
            raise ValueError("rep/n/field required for raw vectors")
        rep, n, field = first.rep, first.n, first.field
    space = OperatorSpace(rep, n, field)
    for op in ops:
        space.insert(op)
    return space


@dataclass
class ClosureResult:
    space: OperatorSpace
    hit_cap: bool
    brackets: int

    @property
    def dim(self) -> int:
        return self.space.dim


def lie_closure(gens, cap: int = CLOSURE_CAP, pairwise: bool = False) -> ClosureResult:
    """Lie closure of the span of gens.

    New basis elements are bracketed against the generator span only;
    ad-invariance under the generators implies closure of the whole span
    by induction with the Jacobi identity.  pairwise=True brackets
    against every current basis row instead.
    """
    space = span_reduce(gens)
    gen_rows = [dict(r) for r in space.rows]
    expand = _bracket_fn(space.rep)
    queue = [dict(r) for r in space.rows]
    nbr = 0
    hit_cap = False
    while queue and not hit_cap:
        v = queue.pop(0)
        vi = list(v.items())
        partners = space.rows if pairwise else gen_rows
        for g in list(partners):
            w = expand(list(g.items()), vi)
            nbr += 1
            if not w:
                continue
            r = space.reduce(w)
            if r:
                space.insert(r)
                queue.append(space.rows[-1])
                if space.dim >= cap:
                    hit_cap = True
                    break
    return ClosureResult(space, hit_cap, nbr)


def full_skew_space(
    rep: str, n: int, include_identity: bool = False, even_only: bool = False
) -> OperatorSpace:
    """Ambient space of all normalized monomials (u or su of the rep)."""
    space = OperatorSpace(rep, n, "exact")
    ncodes = 1 << (2 * n)  # same count for majorana masks and pauli codes
    one = QQ(1)
    for code in range(ncodes):
        if code == 0 and not include_identity:
            continue
        if even_only and rep == "majorana" and code.bit_count() & 1:
            continue
        space.insert({code: one})
    return space


# -- exact linear algebra ----------------------------------------------------


def rational_nullspace(equations: list[dict], nunknowns: int) -> list[dict]:
    """Nullspace basis of sparse rational equations over unknowns 0..n-1."""
    pivots: dict[int, dict] = {}
    zero = QQ(0)
    for eq in equations:
        eq = dict(eq)
        while eq:
            j = min(eq)
            if j in pivots:
                c = eq.pop(j)
                for j2, c2 in pivots[j].items():
                    if j2 == j:
                        continue
                    s = eq.get(j2, zero) - c * c2
                    if s:
                        eq[j2] = s
                    else:
                        eq.pop(j2, None)
            else:
                pc = eq[j]
                pivots[j] = {k: c / pc for k, c in eq.items()}
                break
    # back-substitution to reduced row-echelon form
    for j in sorted(pivots, reverse=True):
        row = pivots[j]
        for j2 in [k for k in row if k != j and k in pivots]:
            c = row.pop(j2)
            for k2, c2 in pivots[j2].items():
                if k2 == j2:
                    continue
                s = row.get(k2, zero) - c * c2
                if s:
                    row[k2] = s
                else:
                    row.pop(k2, None)
    free = [j for j in range(nunknowns) if j not in pivots]
    basis = []
    for f in free:
        sol = {f: QQ(1)}
        for j, row in pivots.items():
            c = row.get(f)
            if c:
                sol[j] = -c
        basis.append(sol)
    return basis


def centralizer_in(ambient, elems) -> OperatorSpace:
    """Centralizer of elems inside the span of ambient (exact field)."""
    if isinstance(ambient, OperatorSpace):
        space = ambient
    else:
        space = span_reduce(ambient)
    if space.field != "exact":
        raise NotImplementedError("exact field only")
    rows = space.rows
    elem_vecs = []
    for s in elems.rows if isinstance(elems, OperatorSpace) else elems:
        elem_vecs.append(s if isinstance(s, dict) else space._coords(s))
    expand = _bracket_fn(space.rep)
    equations: dict[tuple, dict] = {}
    for i, e in enumerate(rows):
        ei = list(e.items())
        for j, s in enumerate(elem_vecs):
            w = expand(ei, list(s.items()))
            for key, c in w.items():
                equations.setdefault((j, key), {})[i] = c
    sols = rational_nullspace(list(equations.values()), len(rows))
    out = OperatorSpace(space.rep, space.n, "exact")
    zero = QQ(0)
    for sol in sols:
        vec: dict = {}
        for i, x in sol.items():
            for k, c in rows[i].items():
                s = vec.get(k, zero) + x * c
                if s:
                    vec[k] = s
                else:
                    vec.pop(k, None)
        out.insert(vec)
    return out


def center_of(space: OperatorSpace) -> OperatorSpace:
    return centralizer_in(space, space)


def algebra_rank(space: OperatorSpace, seed: int = 7, trials: int = 3) -> int:
    """Centralizer dimension of a random regular element (min of trials)."""
    rng = np.random.default_rng(seed)
    best = None
    zero = QQ(0)
    for _ in range(trials):
        coeffs = rng.integers(-9, 10, size=space.dim)
        vec: dict = {}
        for c, row in zip(coeffs, space.rows):
            if not c:
                continue
            q = QQ(int(c))
            for k, v in row.items():
                s = vec.get(k, zero) + q * v
                if s:
                    vec[k] = s
                else:
                    vec.pop(k, None)
        cent = centralizer_in(space, [vec])
        best = cent.dim if best is None else min(best, cent.dim)
    return best


def derived_dim(space: OperatorSpace) -> int:
    """Dimension of [g, g]."""
    expand = _bracket_fn(space.rep)
    out = OperatorSpace(space.rep, space.n, space.field)
    rows = space.rows
    for i in range(len(rows)):
        ri = list(rows[i].items())
        for j in range(i + 1, len(rows)):
            w = expand(ri, list(rows[j].items()))
            if w:
                out.insert(w)
    return out.dim


# -- dense helpers ------------------------------------------------------------


def commutant_dimension(mats, tol: float = FLOAT_TOL) -> int:
    """dim over C of {X : [X, A] = 0 for all A} via stacked Sylvester SVD."""
    mats = [np.asarray(m, dtype=complex) for m in mats]
    N = mats[0].shape[0]
    if N * N > 1400:
        raise ValueError(
            "commutant_dimension guard: matrix too large, use invariant_blocks"
        )
    eye = np.eye(N)
    blocks = [np.kron(eye, A) - np.kron(A.T, eye) for A in mats]
    stacked = np.vstack(blocks)
    sv = np.linalg.svd(stacked, compute_uv=False)
    cut = tol * max(sv[0], 1.0)
    return int(N * N - np.sum(sv > cut))


def invariant_blocks(mats, tol: float = 1e-9, seed: int = 11):
    """Sizes of minimal common invariant subspaces (Krylov orbits).

    Assumes a *-closed set (skew-hermitian images), so orthogonal
    complements of invariant subspaces are again invariant.  Each block
    from the first pass is re-probed with fresh random weights until it
    stops splitting: a single probe word can have an accidental
    eigenvalue collision across two blocks and merge them.
    """
    sizes, found = _invariant_blocks_pass(mats, tol=tol, seed=seed)
    refined: list[np.ndarray] = []
    for Q in found:
        if Q.shape[1] <= 1 or len(found) == 1 and Q.shape[1] == len(mats[0]):
            refined.append(Q)
            continue
        sub = [Q.conj().T @ np.asarray(A, dtype=complex) @ Q for A in mats]
        _, parts = invariant_blocks(sub, tol=tol, seed=seed + 17 + Q.shape[1])
        if len(parts) == 1:
            refined.append(Q)
        else:
            refined.extend(Q @ P for P in parts)
    refined.sort(key=lambda Q: -Q.shape[1])
    return [Q.shape[1] for Q in refined], refined


def _invariant_blocks_pass(mats, tol: float = 1e-9, seed: int = 11):
    mats = [np.asarray(m, dtype=complex) for m in mats]
    N = mats[0].shape[0]
    rng = np.random.default_rng(seed)
    # Eigenvectors of a generic positive word M1'M1 + M2'M2 in the algebra
    # each lie inside a single minimal invariant subspace: within an
    # isotypic component the word acts as (PSD) tensor 1, so eigenvectors
    # have the needed product form, and unlike a linear combination the
    # word has no systematic cross-block kernel (a generic skew element
    # always kills its own Cartan direction under ad, for instance).
    # A plain random vector would overlap every block at once.
    H = np.zeros((N, N), dtype=complex)
    for _ in range(2):
        M = sum(c * A for c, A in zip(rng.normal(size=len(mats)), mats))
        H += M.conj().T @ M
    H = (H + H.conj().T) / 2.0
    _, eigvecs = np.linalg.eigh(H)
    found: list[np.ndarray] = []
    total = 0
    # Rank decisions below go through one SVD per growth round instead of
    # vector-at-a-time Gram-Schmidt: sequential acceptance normalizes
    # near-zero residuals up to unit vectors, amplifying rounding noise
    # until it bridges genuinely separate blocks.
    cut = max(tol, 1e-8)
    # Walk the spectrum from the top: the small eigenvalues of the PSD
    # word bunch near zero across every block, and eigh mixes vectors
    # inside such a near-degenerate cluster across block boundaries.
    for col in range(N - 1, -1, -1):
        if total >= N:
            break
        v = eigvecs[:, col].copy()
        for Q in found:
            v -= Q @ (Q.conj().T @ v)
        nv = np.linalg.norm(v)
        if nv < 1e-6:
            continue
        X = (v / nv)[:, None]
        while True:
            Y = np.hstack([X] + [A @ X for A in mats])
            for Q in found:
                Y -= Q @ (Q.conj().T @ Y)
            U, s, _ = np.linalg.svd(Y, full_matrices=False)
            r = int(np.sum(s > cut * s[0]))
            grown = r > X.shape[1]
            X = U[:, :r]
            if not grown:
                break
        found.append(X)
        total += X.shape[1]
    if total != N:
        raise RuntimeError("invariant subspace search did not exhaust the space")
    order = sorted(range(len(found)), key=lambda i: -found[i].shape[1])
    found = [found[i] for i in order]
    return [Q.shape[1] for Q in found], found


def block_equivalence_classes(mats, blocks, seed: int = 23, tol: float = 1e-6):
    """Group invariant blocks by representation equivalence.

    Uses trace fingerprints of seeded random words in the restricted
    generators; unequal-dimension blocks are never equivalent.
    """
    mats = [np.asarray(m, dtype=complex) for m in mats]
    rng = np.random.default_rng(seed)
    words = [
        (rng.normal(size=len(mats)), rng.normal(size=len(mats))) for _ in range(6)
    ]
    fingerprints = []
    for Q in blocks:
        restricted = [Q.conj().T @ A @ Q for A in mats]
        fp = []
        for c1, c2 in words:
            W1 = sum(c * R for c, R in zip(c1, restricted))
            W2 = sum(c * R for c, R in zip(c2, restricted))
            fp.extend([np.trace(W1), np.trace(W1 @ W2), np.trace(W1 @ W2 @ W1)])
        fingerprints.append(np.array(fp))
    classes: list[list[int]] = []
    for i, fp in enumerate(fingerprints):
        placed = False
        for cls in classes:
            j = cls[0]
            if blocks[j].shape[1] != blocks[i].shape[1]:
                continue
            ref = fingerprints[j]
            if np.max(np.abs(fp - ref)) <= tol * max(1.0, np.max(np.abs(ref))):
                cls.append(i)
                placed = True
                break
        if not placed:
            classes.append([i])
    return classes


def _rvec(X):
    v = X.reshape(-1)
    return np.concatenate([v.real, v.imag])


def adjoint_profile(mats, seed: int = 5, tol: float = 1e-9):
    """(center_dim, rank, simple ideal dims) of the real span of mats.

    The span must be *-closed (skew-hermitian images of a reductive
    algebra).  Everything is read off the adjoint action in the real
    Hilbert-Schmidt geometry: the common kernel of a few generic
    adjoints is the center, the kernel of a single generic adjoint is
    Cartan plus center (so its size gives the rank), and the minimal
    common invariant subspaces on the center's complement are the
    simple ideals.  Center candidates are verified against the whole
    basis; a failed check raises RuntimeError.
    """
    mats = [np.asarray(m, dtype=complex) for m in mats]
    N = mats[0].shape[0]

    def unvec(v):
        return (v[: N * N] + 1j * v[N * N:]).reshape(N, N)

    V = np.stack([_rvec(X) for X in mats], axis=1)
    O, R = np.linalg.qr(V)
    diag = np.abs(np.diag(R))
    if np.min(diag) < 1e-8 * max(1.0, np.max(diag)):
        raise ValueError("basis matrices are not linearly independent")
    m = O.shape[1]
    basis = [unvec(O[:, t]) for t in range(m)]
    rng = np.random.default_rng(seed)
    ads = []
    for _ in range(4):
        X = unvec(O @ rng.normal(size=m))
        S = np.stack([_rvec(X @ B - B @ X) for B in basis], axis=1)
        ads.append(O.T @ S)
    sv, kernels = [], []
    for A in ads:
        _, s, vt = np.linalg.svd(A)
        sv.append(s)
        kernels.append(vt)
    cut = [1e-8 * max(s[0], 1.0) for s in sv]
    rank = min(int(np.sum(s <= c)) for s, c in zip(sv, cut))
    stack = np.vstack(ads)
    _, s_all, vt_all = np.linalg.svd(stack, full_matrices=False)
    c_cut = 1e-8 * max(s_all[0], 1.0)
    c = int(np.sum(s_all <= c_cut))
    K = vt_all[m - c:, :].T if c else np.zeros((m, 0))
    # certify the numeric center against the full basis
    for t in range(c):
        Z = unvec(O @ K[:, t])
        worst = max(
            np.max(np.abs(Z @ B - B @ Z)) for B in basis
        )
        if worst > 1e-7:
            raise RuntimeError("numeric center candidate fails to centralize")
    proj = np.eye(m) - K @ K.T if c else np.eye(m)
    ew, evec = np.linalg.eigh(proj)
    W = evec[:, ew > 0.5]
    if W.shape[1] == 0:
        return c, rank, []
    restricted = [W.T @ A @ W for A in ads]
    sizes, _ = invariant_blocks(restricted, tol=tol, seed=seed + 1)
    return c, rank, sorted(sizes, reverse=True)


def simple_ideal_dims(mats, center_mats=None, seed: int = 5, tol: float = 1e-9):
    """Dimensions of the simple ideals of the real span of mats (see
    adjoint_profile; center_mats is accepted for call-site clarity but
    the center is recovered from the adjoint action either way)."""
    del center_mats
    _, _, dims = adjoint_profile(mats, seed=seed, tol=tol)
    return dims


def matrix_lie_closure(mats, tol: float = 1e-9, cap: int = 4096):
    """Lie closure of the real span of explicit matrices.

    Returns a Hilbert-Schmidt-orthonormal basis (list of matrices) of
    the smallest bracket-closed real space containing mats.  Float
    arithmetic; a bracket counts as new when its residual after
    projection on the current span exceeds tol relative to its norm.
    """
    mats = [np.asarray(m, dtype=complex) for m in mats]
    N = mats[0].shape[0]
    vecs: list[np.ndarray] = []
    ops: list[np.ndarray] = []

    def add(X) -> bool:
        v = _rvec(X)
        nrm0 = np.linalg.norm(v)
        if nrm0 <= tol:
            return False
        for _ in range(2):
            for b in vecs:
                v = v - b * (b @ v)
        nrm = np.linalg.norm(v)
        if nrm <= tol * max(1.0, nrm0):
            return False
        v = v / nrm
        vecs.append(v)
        ops.append((v[: N * N] + 1j * v[N * N:]).reshape(N, N))
        return True

    frontier = []
    for X in mats:
        if add(X):
            frontier.append(ops[-1])
    while frontier:
        fresh = []
        known = list(ops)
        for F in frontier:
            for B in known:
                if len(ops) >= cap:
                    raise RuntimeError("matrix closure exceeded the cap")
                if add(F @ B - B @ F):
                    fresh.append(ops[-1])
        frontier = fresh
    return ops


def _ideal_report(dim, c, rank, ideal_dims):
    """StructureReport from an ideal split, or None when the catalog or
    the rank bookkeeping cannot confirm it."""
    if not ideal_dims:
        return None
    picks = [_catalog_with_rank(di) for di in ideal_dims]
    if not all(picks):
        return None
    unique = all(len(p) == 1 for p in picks)
    labels = [p[0][0] for p in picks]
    pred_rank = sum(p[0][1] for p in picks) + c
    if rank is not None and pred_rank != rank:
        return None
    info = [{"dim": di, "label": lab} for di, lab in zip(ideal_dims, labels)]
    return StructureReport(
        dim,
        rank if rank is not None else pred_rank,
        c,
        info,
        _format_labeled(labels, c),
        certified=unique,
        candidates=[] if unique else [lbl for p in picks for lbl, _ in p],
    )


def matrix_structure_profile(mats, seed: int = 7, tol: float = 1e-9) -> StructureReport:
    """Classify the *-closed bracket-closed real span of explicit
    matrices through its adjoint action; label semantics match
    structure_profile."""
    dim = len(mats)
    c, rank, ideal_dims = adjoint_profile(mats, seed=seed, tol=tol)
    rep = _ideal_report(dim, c, rank, ideal_dims)
    if rep is not None:
        return rep
    if dim == c:
        return StructureReport(dim, rank, c, [], format_structure([], c), certified=True)
    cand = simple_catalog_candidates(dim - c, rank - c)
    if cand:
        label = cand[0]
        structure = label if c == 0 else (
            f"{label} + {c} u(1)" if c > 1 else f"{label} + u(1)"
        )
        return StructureReport(
            dim, rank, c, [], structure, certified=len(cand) == 1, candidates=cand
        )
    return StructureReport(dim, rank, c, [], "unrecognized", certified=False)


# -- structure classification --------------------------------------------------


_ISO_NORMALIZE = {
    ("so", 3): ("su", 2),
    ("sp", 1): ("su", 2),
    ("so", 6): ("su", 4),
    ("sp", 2): ("so", 5),
}


def simple_catalog_candidates(dim: int, rank) -> list[str]:
    """Compact classical simple algebras matching (dim, rank)."""
    out = []
    for k in range(2, 200):
        if k * k - 1 == dim and (rank is None or rank == k - 1):
            out.append(f"su({k})")
    for k in range(3, 300):
        if k == 4:
            continue  # so(4) is not simple
        if k * (k - 1) // 2 == dim and (rank is None or rank == k // 2):
            fam, kk = _ISO_NORMALIZE.get(("so", k), ("so", k))
            out.append(f"{fam}({kk})")
    for k in range(1, 150):
        if k * (2 * k + 1) == dim and (rank is None or rank == k):
            fam, kk = _ISO_NORMALIZE.get(("sp", k), ("sp", k))
            out.append(f"{fam}({kk})")
    seen = []
    for label in out:
        if label not in seen:
            seen.append(label)
    return seen


def format_structure(blocks: list[int], center: int) -> str:
    """Table-style structure string, e.g. '2 su(4) + 8 su(3) + 3 u(1)'."""
    counts: dict[int, int] = {}
    for k in blocks:
        if k >= 2:
            counts[k] = counts.get(k, 0) + 1
    parts = []
    for k in sorted(counts, reverse=True):
        m = counts[k]
        parts.append(f"{m} su({k})" if m > 1 else f"su({k})")
    if center:
        parts.append(f"{center} u(1)" if center > 1 else "u(1)")
    return " + ".join(parts) if parts else "0"


def _catalog_with_rank(dim: int) -> list[tuple[str, int]]:
    """(label, rank) pairs of compact simple algebras of the given dim."""
    out = []
    for k in range(2, 200):
        if k * k - 1 == dim:
            out.append((f"su({k})", k - 1))
    for k in range(3, 300):
        if k == 4:
            continue  # so(4) is not simple
        if k * (k - 1) // 2 == dim:
            fam, kk = _ISO_NORMALIZE.get(("so", k), ("so", k))
            out.append((f"{fam}({kk})", k // 2))
    for k in range(1, 150):
        if k * (2 * k + 1) == dim:
            fam, kk = _ISO_NORMALIZE.get(("sp", k), ("sp", k))
            out.append((f"{fam}({kk})", k))
    dedup: list[tuple[str, int]] = []
    for item in out:
        if item not in dedup:
            dedup.append(item)
    return dedup


def _format_labeled(labels: list[str], center: int) -> str:
    """Structure string from per-ideal labels (already dim-sorted)."""
    counts: list[list] = []
    for lab in labels:
        for entry in counts:
            if entry[0] == lab:
                entry[1] += 1
                break
        else:
            counts.append([lab, 1])
    parts = [f"{n} {lab}" if n > 1 else lab for lab, n in counts]
    if center:
        parts.append(f"{center} u(1)" if center > 1 else "u(1)")
    return " + ".join(parts) if parts else "0"


@dataclass
class StructureReport:
    dim: int
    rank: int | None
    center_dim: int
    blocks: list[dict] = dc_field(default_factory=list)
    structure: str = ""
    certified: bool = False
    candidates: list[str] = dc_field(default_factory=list)

    def to_json_dict(self) -> dict:
        return {
            "dim": self.dim,
            "rank": self.rank,
            "center_dim": self.center_dim,
            "blocks": self.blocks,
            "structure": self.structure,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)


def structure_profile(
    space: OperatorSpace,
    dense=None,
    seed: int = 7,
    rank_budget: int = 320,
    exact_budget: int = 64,
    quotient_central=(),
) -> StructureReport:
    """Classify a closed algebra: center, rank, ideal structure, label.

    dense: optional callable op -> matrix giving a faithful
    representation; auto-loaded for n <= 6 when omitted.  With a dense
    representation available the derived ideal is split into simple
    ideals through its adjoint action and each ideal dimension is looked
    up in the compact catalog; the label is certified when every lookup
    is unique and the rank bookkeeping confirms it.  Without one, a
    single-simple-plus-center hypothesis against (dim, rank) is all
    that can be offered.

    Center and rank come from exact rational solves up to exact_budget
    dimensions; past that (with a dense representation) they are read
    off the adjoint action, with every numeric center direction
    certified against the full basis.

    quotient_central: central directions (coordinate dicts or operators)
    to be projected out of the report when they lie inside the algebra;
    used for parity-superselected systems where relative sector phases
    are unobservable.
    """
    dim = space.dim
    if dense is None and space.n <= 6:
        from .fock import dense as dense_fn

        dense = dense_fn

    mats = None
    if dense is not None:
        mats = [dense(op) for op in space.basis_operators()]

    ideal_dims: list[int] = []
    c = rank = None
    if mats is not None and dim > exact_budget:
        try:
            c, rank, ideal_dims = adjoint_profile(mats, seed=seed)
        except (ValueError, RuntimeError):
            c = rank = None
    if c is None:
        c = center_of(space).dim
        rank = algebra_rank(space, seed=seed) if dim <= rank_budget else None
        if mats is not None and dim > c:
            try:
                ideal_dims = simple_ideal_dims(mats, seed=seed)
            except (ValueError, RuntimeError):
                ideal_dims = []

    if quotient_central:
        probe = OperatorSpace(space.rep, space.n, space.field)
        for vec in quotient_central:
            if space.contains(vec):
                probe.insert(space._coords(vec) if not isinstance(vec, dict) else vec)
        if probe.dim:
            dim -= probe.dim
            c -= probe.dim
            if rank is not None:
                rank -= probe.dim

    rep = _ideal_report(dim, c, rank, ideal_dims)
    if rep is not None:
        return rep

    # fallback without a usable ideal split: one simple ideal plus center
    cand = simple_catalog_candidates(dim - c, None if rank is None else rank - c)
    if cand and not ideal_dims:
        label = cand[0]
        structure = label if c == 0 else (
            f"{label} + {c} u(1)" if c > 1 else f"{label} + u(1)"
        )
        return StructureReport(
            dim,
            rank,
            c,
            [],
            structure,
            certified=len(cand) == 1,
            candidates=cand,
        )

    if dim == c:
        return StructureReport(
            dim, rank, c, [], format_structure([], c), certified=True
        )
    return StructureReport(
        dim,
        rank,
        c,
        [{"dim": di, "label": "?"} for di in ideal_dims],
        "unrecognized",
        certified=False,
        candidates=cand,
    )
