"""Pure-Python key arithmetic: the fallback for the compiled kernel.

Monomial keys are plain ints.

Majorana: bit (k-1) set means the factor m_k is present; products of the
basis monomials only ever produce real signs (the i's live in the
normalization weights), so ``maj_mul`` returns +-1.

Pauli: packed base-4 string code, big-endian (site 1 in the highest two
bits), digit values I=0, X=1, Y=2, Z=3 so integer order equals
lexicographic string order.  Per site x = bit0 xor bit1, z = bit1.

The "bracket" functions return structure constants in the normalized
skew-hermitian basis b(M) = L(M) (Majorana) / b(P) = -(i/2) P (Pauli),
where they are always 0 or +-1.
"""

from __future__ import annotations

# i-exponent of the L weight w(M) = i^{E[deg mod 8]}
_WEXP = (1, 1, 0, 0, 3, 3, 2, 2)

_LANES = None  # lazily sized 0b0101.. masks are easier to inline per call


def maj_sign(a: int, b: int) -> int:
    """Sign s with m[a] * m[b] = s * m[a^b], factors in ascending order."""
    count = 0
    while b:
        low = b & -b
        count += (a >> low.bit_length()).bit_count()
        b ^= low
    return -1 if count & 1 else 1


def maj_mul(a: int, b: int):
    return maj_sign(a, b), a ^ b


def maj_bracket(a: int, b: int):
    """[L(a), L(b)] = eps * L(a^b); eps in {0, +-1}."""
    da = a.bit_count()
    db = b.bit_count()
    ov = (a & b).bit_count()
    if not (da * db - ov) & 1:
        return 0, 0
    key = a ^ b
    s = maj_sign(a, b)
    exp = (_WEXP[da & 7] + _WEXP[db & 7] - _WEXP[key.bit_count() & 7]) & 3
    # exp is 0 or 2 here; eps = -s * i^exp
    return (s if exp else -s), key


def _lane_mask(code: int) -> int:
    n = max(code.bit_length() + 1, 2)
    m = 0
    for shift in range(0, n, 2):
        m |= 1 << shift
    return m


def pauli_phase(ka: int, kb: int) -> int:
    """Exponent t (mod 4) with P[ka] * P[kb] = i^t * P[ka^kb]."""
    lanes = _lane_mask(ka | kb)
    xa = (ka ^ (ka >> 1)) & lanes
    za = (ka >> 1) & lanes
    xb = (kb ^ (kb >> 1)) & lanes
    zb = (kb >> 1) & lanes
    xc = xa ^ xb
    zc = za ^ zb
    t = (
        (xa & za).bit_count()
        + (xb & zb).bit_count()
        - (xc & zc).bit_count()
        + 2 * (za & xb).bit_count()
    )
    return t & 3


def pauli_mul(ka: int, kb: int):
    lanes = _lane_mask(ka | kb)
    xa = (ka ^ (ka >> 1)) & lanes
    za = (ka >> 1) & lanes
    xb = (kb ^ (kb >> 1)) & lanes
    zb = (kb >> 1) & lanes
    xc = xa ^ xb
    zc = za ^ zb
    t = (
        (xa & za).bit_count()
        + (xb & zb).bit_count()
        - (xc & zc).bit_count()
        + 2 * (za & xb).bit_count()
    ) & 3
    return t, (zc << 1) | (xc ^ zc)


def pauli_bracket(ka: int, kb: int):
    """[b(ka), b(kb)] = eps * b(ka^kb) with b(P) = -(i/2)P; eps in {0,+-1}."""
    t, key = pauli_mul(ka, kb)
    if not t & 1:
        return 0, 0
    return (1 if t == 1 else -1), key


def jw_raw(key: int, d: int):
    """Jordan-Wigner image of a raw Majorana monomial.

    Returns (t, code) with m-monomial = i^t * P[code] after mapping
    m_{2p-1} -> Z^(p-1) X, m_{2p} -> Z^(p-1) Y on d sites.
    """
    acc = 0
    t = 0
    k = key
    while k:
        low = k & -k
        idx = low.bit_length()  # majorana index, 1-based
        k ^= low
        p = (idx + 1) // 2  # mode
        letter = 1 if idx & 1 else 2  # X or Y
        code = 0
        for site in range(1, p):
            code |= 3 << (2 * (d - site))
        code |= letter << (2 * (d - p))
        dt, acc = pauli_mul(acc, code)
        t = (t + dt) & 3
    return t, acc


def maj_shift(key: int, two_d: int, steps: int = 1):
    """Index rotation m_k -> m_{k+2*steps mod 2d} with the resort sign."""
    steps %= two_d // 2
    if steps == 0:
        return 1, key
    r = 2 * steps
    deg = key.bit_count()
    wrapped = (key >> (two_d - r)).bit_count()
    sign = -1 if (wrapped * (deg - wrapped)) & 1 else 1
    mask = (1 << two_d) - 1
    return sign, ((key << r) | (key >> (two_d - r))) & mask


def pauli_shift(code: int, nsites: int, steps: int = 1) -> int:
    """Cyclic site shift p -> p + steps of a packed Pauli string."""
    steps %= nsites
    if steps == 0:
        return code
    r = 2 * steps
    width = 2 * nsites
    mask = (1 << width) - 1
    return ((code >> r) | (code << (width - r))) & mask


def bracket_expand(terms_a, terms_b, bracket):
    """Accumulate [sum_a, sum_b] in basis coordinates into a dict."""
    out = {}
    for ka, ca in terms_a:
        for kb, cb in terms_b:
            eps, key = bracket(ka, kb)
            if eps:
                c = ca * cb
                prev = out.get(key)
                if prev is None:
                    out[key] = c if eps == 1 else -c
                else:
                    prev = prev + c if eps == 1 else prev - c
                    if prev:
                        out[key] = prev
                    else:
                        del out[key]
    return out


def bracket_expand_maj(terms_a, terms_b):
    return bracket_expand(terms_a, terms_b, maj_bracket)


def bracket_expand_pauli(terms_a, terms_b):
    return bracket_expand(terms_a, terms_b, pauli_bracket)
