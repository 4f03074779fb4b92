"""Dense Fock-space backend.

Qubit-basis convention: mode/site p sits at bit n-p of the column
index, occupied means qubit value 0, so the vacuum is the all-ones
index.  Majorana operators go through their Pauli images; Pauli strings
act with one nonzero entry per column, so matrices are assembled by
state action instead of Kronecker products.
"""

from __future__ import annotations

import numpy as np

from .coeffs import QQi
from .ops import SparseOperator, jordan_wigner

DENSE_CAP = 12


def _popcounts(n: int) -> np.ndarray:
    xs = np.arange(1 << n, dtype=np.int64)
    out = np.zeros(1 << n, dtype=np.int64)
    for b in range(n):
        out += (xs >> b) & 1
    return out


def _code_masks(code: int, n: int):
    """(flip, phase_mask, y_count) for one packed pauli string."""
    flip = 0
    phase_mask = 0
    ycount = 0
    for p in range(1, n + 1):
        v = (code >> (2 * (n - p))) & 3
        pos = n - p
        if v == 1:  # X
            flip |= 1 << pos
        elif v == 2:  # Y
            flip |= 1 << pos
            phase_mask |= 1 << pos
            ycount += 1
        elif v == 3:  # Z
            phase_mask |= 1 << pos
    return flip, phase_mask, ycount


def dense(op: SparseOperator, cap: int = DENSE_CAP) -> np.ndarray:
    """Complex matrix of an operator in the qubit basis."""
    if op.n > cap:
        raise ValueError(f"dense matrix would have 2^{op.n} rows; cap is 2^{cap}")
    if op.rep == "majorana":
        op = jordan_wigner(op)
    n = op.n
    N = 1 << n
    xs = np.arange(N)
    out = np.zeros((N, N), dtype=complex)
    pc = _popcounts(n)
    for code, c in op.terms.items():
        flip, phase_mask, ycount = _code_masks(code, n)
        ys = xs ^ flip
        signs = 1.0 - 2.0 * (pc[xs & phase_mask] & 1)
        out[ys, xs] += complex(c) * (1j**ycount) * signs
    return out


def vacuum_index(d: int) -> int:
    return (1 << d) - 1


def dense_translation(d: int) -> np.ndarray:
    """Cyclic mode shift U with U f_p^dag U^dag = f_{p+1}^dag, U|vac>=|vac>."""
    N = 1 << d
    out = np.zeros((N, N), dtype=complex)
    for x in range(N):
        y = (x >> 1) | ((x & 1) << (d - 1))
        npart = d - x.bit_count()
        nd = 1 - (x & 1)
        sign = -1.0 if (npart * (nd + 1) + nd * (d - 1)) & 1 else 1.0
        out[y, x] = sign
    return out


def dense_reflection(d: int) -> np.ndarray:
    """Mode reversal R with the quartic occupation phase."""
    N = 1 << d
    out = np.zeros((N, N), dtype=complex)
    for x in range(N):
        y = int(f"{x:0{d}b}"[::-1], 2)
        npart = d - x.bit_count()
        phase = (1j ** (npart * npart)) * (
            -1.0 if (npart * (d - 1)) & 1 else 1.0
        )
        out[y, x] = phase
    return out


def dense_spin_translation(L: int) -> np.ndarray:
    """Cyclic site shift on L qubits (no fermionic signs)."""
    N = 1 << L
    out = np.zeros((N, N), dtype=complex)
    for x in range(N):
        out[(x >> 1) | ((x & 1) << (L - 1)), x] = 1.0
    return out


# -- exact single-state action (for trace machinery) -------------------------


def pauli_action(code: int, n: int, x: int):
    """(phase, y) with  string |x> = phase |y>;  exact QQi phase."""
    flip, phase_mask, ycount = _code_masks(code, n)
    sign = -1 if (x & phase_mask).bit_count() & 1 else 1
    phase = QQi.i_power(ycount)
    if sign < 0:
        phase = -phase
    return phase, x ^ flip


def occupation_shift(x: int, d: int):
    """Exact sign and image index of the cyclic mode shift on |x>."""
    y = (x >> 1) | ((x & 1) << (d - 1))
    npart = d - x.bit_count()
    nd = 1 - (x & 1)
    return (-1 if (npart * (nd + 1) + nd * (d - 1)) & 1 else 1), y
