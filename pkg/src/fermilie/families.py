"""Named generator families for the closure and witness machinery.

Every family returns *skew-hermitian* operators: Hamiltonian-style
families (h0, h_rh, ..., witness elements) come back multiplied by i so
they can feed a Lie closure directly.  Mode indices are 1-based and
cyclic where a family is defined on a ring.
"""

from __future__ import annotations

import math

from .coeffs import QQ, QQi
from .ops import MonomialKey, SparseOperator, normalize_L

HALF = QQ(1, 2)


def creation(p: int, d: int) -> SparseOperator:
    """f_p^dag = (m_{2p-1} + i m_{2p}) / 2."""
    if not 1 <= p <= d:
        raise ValueError("mode index out of range")
    op = SparseOperator("majorana", d)
    op._accum(1 << (2 * p - 2), QQi(HALF))
    op._accum(1 << (2 * p - 1), QQi(0, HALF))
    return op


def annihilation(p: int, d: int) -> SparseOperator:
    return creation(p, d).dagger()


def number_op(p: int, d: int) -> SparseOperator:
    return creation(p, d) @ annihilation(p, d)


def identity_op(rep: str, n: int, field: str = "exact") -> SparseOperator:
    return SparseOperator.monomial(MonomialKey(rep, n, 0), 1, field)


def _wrap(p: int, d: int) -> int:
    return (p - 1) % d + 1


def _hop(p: int, q: int, d: int) -> SparseOperator:
    return creation(p, d) @ annihilation(q, d)


def _pair(p: int, q: int, d: int) -> SparseOperator:
    return creation(p, d) @ creation(q, d)


def chain_range_terms(d: int, p: int):
    """The four hermitian range-p ring sums h^1_p, h^X_p, h^Y_p, h^Z_p.

    h^1: (1/2) sum_l i(f+_l f_{l+p} - f+_{l+p} f_l)     complex hopping
    h^X: (1/2) sum_l i(f+_l f+_{l+p} - f_{l+p} f_l)     complex pairing
    h^Y: (1/2) sum_l (f+_l f+_{l+p} + f_{l+p} f_l)      real pairing
    h^Z: (1/2) sum_l (f+_l f_{l+p} + f+_{l+p} f_l)      real hopping

    p = 0 is only meaningful for h^Z, giving sum_l (n_l - 1/2).
    """
    h1 = SparseOperator("majorana", d)
    hx = SparseOperator("majorana", d)
    hy = SparseOperator("majorana", d)
    hz = SparseOperator("majorana", d)
    for ell in range(1, d + 1):
        q = _wrap(ell + p, d)
        hop = _hop(ell, q, d)
        hopc = hop.dagger()
        hz = hz + (hop + hopc).scale(HALF)
        h1 = h1 + (hop - hopc).times_i().scale(HALF)
        pair = _pair(ell, q, d)
        pairc = pair.dagger()
        hy = hy + (pair + pairc).scale(HALF)
        hx = hx + (pair - pairc).times_i().scale(HALF)
    if p == 0:
        hz = hz - identity_op("majorana", d).scale(QQ(d, 2))
    return {"1": h1, "X": hx, "Y": hy, "Z": hz}


def _w_op(which: int, d: int) -> SparseOperator:
    if which == 1:
        if d < 2:
            raise ValueError("w1 needs at least two modes")
        op = SparseOperator("majorana", d)
        for p in range(1, d):
            a = (1 << (2 * p - 2)) | (1 << (2 * p + 1))
            b = (1 << (2 * p - 1)) | (1 << (2 * p))
            op._accum(a, QQi(HALF))   # -(1/2) * (-m_{2p-1} m_{2p+2})
            op._accum(b, QQi(-HALF))  # -(1/2) * (+m_{2p} m_{2p+1})
        return op
    if which == 2:
        return normalize_L(MonomialKey.majorana((1, 2), d))
    if which == 3:
        if d < 2:
            raise ValueError("w3 needs at least two modes")
        return normalize_L(MonomialKey.majorana((2, 3), d))
    if which == 4:
        if d < 2:
            raise ValueError("w4 needs at least two modes")
        return normalize_L(MonomialKey.majorana((1, 2, 3, 4), d))
    raise ValueError("unknown w operator")


def _mode_product_tail(d: int, last: int) -> SparseOperator:
    """L(m_last * prod_{p<d} m_{2p-1} m_{2p}), a degree 2d-1 monomial."""
    mask = (1 << (2 * d - 2)) - 1
    if last == 2 * d - 1:
        mask |= 1 << (2 * d - 2)
    elif last == 2 * d:
        mask |= 1 << (2 * d - 1)
    else:
        raise ValueError("tail index must touch the last mode")
    return normalize_L(MonomialKey("majorana", d, mask))


def _xx_chain(d: int, ends: int):
    """Uniform XX+YY coupling chain with full local control on one or
    both end qubits (spin picture, open boundary)."""
    if d < 2:
        raise ValueError("chain needs at least two qubits")
    if ends not in (1, 2):
        raise ValueError("ends must be 1 or 2")
    drift = SparseOperator("pauli", d)
    half_i = QQi(0, QQ(-1, 2))
    for p in range(1, d):
        xx = "I" * (p - 1) + "XX" + "I" * (d - p - 1)
        yy = "I" * (p - 1) + "YY" + "I" * (d - p - 1)
        drift._accum(MonomialKey.pauli(xx).code, half_i)
        drift._accum(MonomialKey.pauli(yy).code, half_i)
    out = [drift]
    sites = [1] if ends == 1 else [1, d]
    for s in sites:
        for letter in "XY":
            word = "I" * (s - 1) + letter + "I" * (d - s)
            out.append(
                SparseOperator.monomial(MonomialKey.pauli(word), QQi(0, QQ(-1, 2)))
            )
    return out


def _fourier_mode(k: int, d: int, dagger: bool) -> SparseOperator:
    """Fourier-transformed mode operator (float coefficients)."""
    op = SparseOperator("majorana", d, "float")
    norm = 1.0 / math.sqrt(d)
    for p in range(1, d + 1):
        phase = 2.0 * math.pi * p * k / d
        w = norm * complex(math.cos(phase), math.sin(phase) if dagger else -math.sin(phase))
        base = creation(p, d) if dagger else annihilation(p, d)
        op = op + base.to_float().scale(w)
    return op


def momentum_pair_ops(k: int, d: int) -> dict:
    """The four quadratic operators supported on the (k, d-k) momentum
    pair; float coefficients.  Keys "1", "X", "Y", "Z"."""
    if not 0 <= k <= d // 2:
        raise ValueError("momentum index out of range")
    fk = _fourier_mode(k, d, False)
    fkd = _fourier_mode(k, d, True)
    one = identity_op("majorana", d, "float")
    if k == 0 or 2 * k == d:
        # self-paired momentum: only the number-type operator survives
        zero = SparseOperator("majorana", d, "float")
        return {"1": zero, "X": zero.copy(), "Y": zero.copy(),
                "Z": (fkd @ fk) - one.scale(0.5)}
    gk = _fourier_mode((d - k) % d, d, False)
    gkd = _fourier_mode((d - k) % d, d, True)
    return {
        "1": (gkd @ gk) - (fkd @ fk),
        "X": (fk @ gk) - (fkd @ gkd),
        "Y": ((fkd @ gkd) - (gk @ fk)).times_i(),
        "Z": (fkd @ fk) + (gkd @ gk) - one,
    }


def build_named_family(name: str, d: int, **params) -> list[SparseOperator]:
    """Skew-hermitian generator lists by family name.

    Fermionic families (majorana rep on d modes):
      w1..w4                quadratic/quartic span generators
      h0                    chemical potential, i * sum (n_l - 1/2)
      h_rh, h_ch            real/complex nearest-neighbor hopping (ring)
      h_rp, h_cp            real/complex nearest-neighbor pairing (ring)
      h_int                 density-density coupling, i * sum (n_l n_{l+1} - 1/4)
      h_odd_witness         i * sum_l i(f+_l f_{l+3} - f+_{l+3} f_l)
      h_even_witness        i * sum_l (prod_{j=0..4} n_{l+j} - 1/32)
      hQ_p (params Q, p)    range-p ring sums, exact
      ell_k_Q (params k, Q) momentum-pair quadratics, float
      so2n1_family          w1 with both linear end operators
      so2n2_family          so2n1_family plus the two top-degree tails

    Spin family (pauli rep on d qubits):
      xx_chain_end_controls (param ends=1|2)  XX chain, end controls
    """
    if name in ("w1", "w2", "w3", "w4"):
        return [_w_op(int(name[1]), d)]
    if name == "xx_chain_end_controls":
        return _xx_chain(d, params.get("ends", 1))
    if name == "h0":
        return [chain_range_terms(d, 0)["Z"].times_i()]
    if name in ("h_rh", "h_ch", "h_rp", "h_cp"):
        if d < 2:
            raise ValueError("ring coupling needs at least two modes")
        which = {"h_rh": "Z", "h_ch": "1", "h_rp": "Y", "h_cp": "X"}[name]
        return [chain_range_terms(d, 1)[which].scale(2).times_i()]
    if name == "h_int":
        if d < 2:
            raise ValueError("ring coupling needs at least two modes")
        quarter = identity_op("majorana", d).scale(QQ(1, 4))
        op = SparseOperator("majorana", d)
        for ell in range(1, d + 1):
            q = _wrap(ell + 1, d)
            op = op + (number_op(ell, d) @ number_op(q, d)) - quarter
        return [op.times_i()]
    if name == "h_odd_witness":
        if d < 4:
            raise ValueError("range-3 hopping needs at least four modes")
        return [chain_range_terms(d, 3)["1"].scale(2).times_i()]
    if name == "h_even_witness":
        if d < 5:
            raise ValueError("five-site density product needs at least five modes")
        shift = identity_op("majorana", d).scale(QQ(1, 32))
        op = SparseOperator("majorana", d)
        for ell in range(1, d + 1):
            term = number_op(ell, d)
            for j in range(1, 5):
                term = term @ number_op(_wrap(ell + j, d), d)
            op = op + term - shift
        return [op.times_i()]
    if name == "hQ_p":
        which = str(params["Q"])
        p = int(params["p"])
        if which not in ("1", "X", "Y", "Z"):
            raise ValueError("Q must be one of 1, X, Y, Z")
        if which != "Z" and not 1 <= p <= (d - 1) // 2:
            raise ValueError("p out of range for this Q")
        if which == "Z" and not 0 <= p <= d // 2:
            raise ValueError("p out of range for Z")
        return [chain_range_terms(d, p)[which].times_i()]
    if name == "ell_k_Q":
        k = int(params["k"])
        which = str(params["Q"])
        return [momentum_pair_ops(k, d)[which].times_i()]
    if name == "so2n1_family":
        if d < 2:
            raise ValueError("needs at least two modes")
        return [
            _w_op(1, d),
            normalize_L(MonomialKey.majorana((1,), d)),
            normalize_L(MonomialKey.majorana((2,), d)),
        ]
    if name == "so2n2_family":
        fam = build_named_family("so2n1_family", d)
        fam.append(_mode_product_tail(d, 2 * d - 1))
        fam.append(_mode_product_tail(d, 2 * d))
        return fam
    raise ValueError(f"unknown family: {name}")


def six_nearest_neighbor_generators(d: int) -> list[SparseOperator]:
    """The on-site and nearest-neighbor ring generators in one list."""
    names = ["h0", "h_rh", "h_ch", "h_rp", "h_cp", "h_int"]
    return [build_named_family(nm, d)[0] for nm in names]
