"""Sparse operators over Majorana or Pauli monomial bases.

Two representations share one term store (dict key -> coefficient):

* ``majorana``: keys are bitmasks over m_1..m_{2n} (bit k-1 <-> m_k),
  canonical order = ascending mask value.  Raw coefficients are Gaussian
  rationals (exact field) or complex (float field).
* ``pauli``: keys are packed base-4 strings, big-endian over sites, with
  I=0 < X=1 < Y=2 < Z=3 so integer order matches string order.

Skew-hermitian operators expand with *real* coordinates over the
normalized basis L(M) = -(1/2) w(M) M resp. b(P) = -(i/2) P, where
w(M) = i^e by degree mod 8 (e = 1,1,0,0,3,3,2,2).  Those coordinates are
what the span/closure engine and the JSON format use.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import NamedTuple

from ._fast import jw_raw, maj_mul, pauli_mul
from ._pure import _WEXP
from .coeffs import QQ, QQi, QQI_ONE, as_fraction

SKEW_TOL = 1e-9


class MonomialKey(NamedTuple):
    rep: str  # "majorana" | "pauli"
    n: int  # modes (majorana) or sites (pauli)
    code: int

    @classmethod
    def majorana(cls, indices, n: int) -> "MonomialKey":
        code = 0
        prev = 0
        for k in indices:
            if not 1 <= k <= 2 * n:
                raise ValueError(f"majorana index {k} out of range for n={n}")
            if k <= prev:
                raise ValueError("majorana indices must be strictly ascending")
            prev = k
            code |= 1 << (k - 1)
        return cls("majorana", n, code)

    @classmethod
    def pauli(cls, letters: str, n: int | None = None) -> "MonomialKey":
        if n is None:
            n = len(letters)
        if len(letters) != n:
            raise ValueError("pauli string length must equal site count")
        code = 0
        for p, ch in enumerate(letters, start=1):
            try:
                v = "IXYZ".index(ch)
            except ValueError:
                raise ValueError(f"bad pauli letter {ch!r}") from None
            code |= v << (2 * (n - p))
        return cls("pauli", n, code)

    def indices(self):
        if self.rep != "majorana":
            raise ValueError("indices() is for majorana keys")
        k = self.code
        out = []
        while k:
            low = k & -k
            out.append(low.bit_length())
            k ^= low
        return out

    def letters(self) -> str:
        if self.rep != "pauli":
            raise ValueError("letters() is for pauli keys")
        return "".join(
            "IXYZ"[(self.code >> (2 * (self.n - p))) & 3] for p in range(1, self.n + 1)
        )

    @property
    def degree(self) -> int:
        if self.rep == "majorana":
            return self.code.bit_count()
        return sum(
            1 for p in range(self.n) if (self.code >> (2 * p)) & 3
        )


def weight_exponent(code: int) -> int:
    """e with w(M) = i^e for a raw majorana mask."""
    return _WEXP[code.bit_count() & 7]


def multiply_monomials(a: MonomialKey, b: MonomialKey):
    """Product of two raw monomials: (phase, key) with phase in {+-1,+-i}."""
    if a.rep != b.rep or a.n != b.n:
        raise ValueError("mismatched representations")
    if a.rep == "majorana":
        s, code = maj_mul(a.code, b.code)
        return QQi(s), MonomialKey(a.rep, a.n, code)
    t, code = pauli_mul(a.code, b.code)
    return QQi.i_power(t), MonomialKey(a.rep, a.n, code)


class SparseOperator:
    """Sparse operator: dict of raw monomial coefficients.

    field "exact" -> QQi coefficients, "float" -> complex.
    """

    __slots__ = ("rep", "n", "field", "terms")

    def __init__(self, rep: str, n: int, field: str = "exact", terms=None):
        if rep not in ("majorana", "pauli"):
            raise ValueError(f"unknown rep {rep!r}")
        if field not in ("exact", "float"):
            raise ValueError(f"unknown field {field!r}")
        self.rep = rep
        self.n = n
        self.field = field
        self.terms = {}
        if terms:
            for k, c in terms.items() if isinstance(terms, dict) else terms:
                self._accum(k, self._coerce(c))

    # -- scalar plumbing ----------------------------------------------
    def _coerce(self, c):
        if self.field == "exact":
            if isinstance(c, QQi):
                return c
            if isinstance(c, Fraction):
                return QQi(QQ(c.numerator, c.denominator))
            if isinstance(c, int):
                return QQi(c)
            if type(c) is type(QQ(0)):
                return QQi(c)
            raise TypeError(f"exact operator got coefficient {type(c).__name__}")
        return complex(c)

    def _accum(self, key: int, c):
        t = self.terms
        prev = t.get(key)
        if prev is None:
            if (not c.is_zero()) if self.field == "exact" else (c != 0):
                t[key] = c
        else:
            s = prev + c
            if (s.is_zero() if self.field == "exact" else s == 0):
                del t[key]
            else:
                t[key] = s

    # -- constructors --------------------------------------------------
    @classmethod
    def zero(cls, rep: str, n: int, field: str = "exact") -> "SparseOperator":
        return cls(rep, n, field)

    @classmethod
    def monomial(cls, key: MonomialKey, coeff=1, field: str = "exact"):
        return cls(key.rep, key.n, field, {key.code: coeff})

    def copy(self) -> "SparseOperator":
        out = SparseOperator(self.rep, self.n, self.field)
        out.terms = dict(self.terms)
        return out

    # -- linear structure ----------------------------------------------
    def _check_same(self, other: "SparseOperator"):
        if (
            self.rep != other.rep
            or self.n != other.n
            or self.field != other.field
        ):
            raise ValueError("operator mismatch (rep/n/field)")

    def __add__(self, other: "SparseOperator") -> "SparseOperator":
        self._check_same(other)
        out = self.copy()
        for k, c in other.terms.items():
            out._accum(k, c)
        return out

    def __sub__(self, other: "SparseOperator") -> "SparseOperator":
        self._check_same(other)
        out = self.copy()
        for k, c in other.terms.items():
            out._accum(k, -c)
        return out

    def __neg__(self) -> "SparseOperator":
        out = SparseOperator(self.rep, self.n, self.field)
        out.terms = {k: -c for k, c in self.terms.items()}
        return out

    def scale(self, s) -> "SparseOperator":
        s = self._coerce(s)
        out = SparseOperator(self.rep, self.n, self.field)
        if (s.is_zero() if self.field == "exact" else s == 0):
            return out
        out.terms = {k: c * s for k, c in self.terms.items()}
        return out

    def times_i(self) -> "SparseOperator":
        out = SparseOperator(self.rep, self.n, self.field)
        if self.field == "exact":
            out.terms = {k: c.times_i() for k, c in self.terms.items()}
        else:
            out.terms = {k: c * 1j for k, c in self.terms.items()}
        return out

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseOperator):
            return NotImplemented
        return (
            self.rep == other.rep
            and self.n == other.n
            and self.field == other.field
            and self.terms == other.terms
        )

    # -- products --------------------------------------------------------
    def __matmul__(self, other: "SparseOperator") -> "SparseOperator":
        """Associative operator product."""
        self._check_same(other)
        out = SparseOperator(self.rep, self.n, self.field)
        exact = self.field == "exact"
        if self.rep == "majorana":
            for ka, ca in self.terms.items():
                for kb, cb in other.terms.items():
                    s, key = maj_mul(ka, kb)
                    out._accum(key, ca * cb * s if s == 1 else -(ca * cb))
        else:
            for ka, ca in self.terms.items():
                for kb, cb in other.terms.items():
                    t, key = pauli_mul(ka, kb)
                    ph = QQi.i_power(t) if exact else 1j ** t
                    out._accum(key, ca * cb * ph)
        return out

    def dagger(self) -> "SparseOperator":
        out = SparseOperator(self.rep, self.n, self.field)
        exact = self.field == "exact"
        for k, c in self.terms.items():
            cc = c.conj() if exact else c.conjugate()
            if self.rep == "majorana" and k.bit_count() & 2:
                cc = -cc  # reversal sign for deg = 2,3 mod 4
            out.terms[k] = cc
        return out

    def is_skew_hermitian(self, tol: float = SKEW_TOL) -> bool:
        diff = self.dagger() + self
        if self.field == "exact":
            return diff.is_zero()
        scale = max((abs(c) for c in self.terms.values()), default=0.0)
        return all(abs(c) <= tol * max(scale, 1.0) for c in diff.terms.values())

    # -- normalized-basis coordinates -------------------------------------
    def l_coordinates(self):
        """Real coordinates over L(M) / b(P); raises if not skew-hermitian."""
        coords = {}
        if self.field == "exact":
            for k, c in self.terms.items():
                if self.rep == "majorana":
                    # c * M = r * L(M) with r = -2 c / i^e
                    r = (c * (-2)) / QQi.i_power(weight_exponent(k))
                else:
                    r = c * QQi(0, 2)  # r = -2c/(-i) = 2ic
                if not r.is_real():
                    raise ValueError("operator is not skew-hermitian")
                coords[k] = r.re
            return coords
        scale = max((abs(c) for c in self.terms.values()), default=0.0)
        for k, c in self.terms.items():
            if self.rep == "majorana":
                r = -2 * c / (1j ** weight_exponent(k))
            else:
                r = 2j * c
            if abs(r.imag) > SKEW_TOL * max(scale, 1.0):
                raise ValueError("operator is not skew-hermitian")
            coords[k] = r.real
        return coords

    @classmethod
    def from_l_coordinates(
        cls, rep: str, n: int, coords, field: str = "exact"
    ) -> "SparseOperator":
        out = cls(rep, n, field)
        if field == "exact":
            for k, r in coords.items() if isinstance(coords, dict) else coords:
                if isinstance(r, Fraction):
                    r = QQ(r.numerator, r.denominator)
                if rep == "majorana":
                    c = QQi.i_power(weight_exponent(k)) * QQi(-r / 2)
                else:
                    c = QQi(0, -r / 2)
                out._accum(k, c)
        else:
            for k, r in coords.items() if isinstance(coords, dict) else coords:
                if rep == "majorana":
                    c = (-r / 2) * 1j ** weight_exponent(k)
                else:
                    c = -0.5j * r
                out._accum(k, complex(c))
        return out

    # -- misc --------------------------------------------------------------
    def keys(self):
        return [MonomialKey(self.rep, self.n, k) for k in sorted(self.terms)]

    def sup_norm(self) -> float:
        if self.field == "exact":
            return max(
                (abs(complex(c)) for c in self.terms.values()), default=0.0
            )
        return max((abs(c) for c in self.terms.values()), default=0.0)

    def to_float(self) -> "SparseOperator":
        if self.field == "float":
            return self.copy()
        out = SparseOperator(self.rep, self.n, "float")
        out.terms = {k: complex(c) for k, c in self.terms.items()}
        return out

    def __repr__(self):
        return (
            f"SparseOperator({self.rep}, n={self.n}, {self.field}, "
            f"{len(self.terms)} terms)"
        )


def commutator(x: SparseOperator, y: SparseOperator) -> SparseOperator:
    """xy - yx on raw terms (works for arbitrary operators)."""
    x._check_same(y)
    out = SparseOperator(x.rep, x.n, x.field)
    exact = x.field == "exact"
    if x.rep == "majorana":
        for ka, ca in x.terms.items():
            da = ka.bit_count()
            for kb, cb in y.terms.items():
                ov = (ka & kb).bit_count()
                if not (da * kb.bit_count() - ov) & 1:
                    continue  # monomials commute
                s, key = maj_mul(ka, kb)
                c = ca * cb * (2 * s)
                out._accum(key, c)
    else:
        for ka, ca in x.terms.items():
            for kb, cb in y.terms.items():
                t, key = pauli_mul(ka, kb)
                if not t & 1:
                    continue
                ph = QQi(0, 2) if exact else 2j
                if t == 3:
                    ph = -ph
                out._accum(key, ca * cb * ph)
    return out


def normalize_L(key: MonomialKey, field: str = "exact") -> SparseOperator:
    """The normalized skew-hermitian element for one monomial key."""
    return SparseOperator.from_l_coordinates(
        key.rep, key.n, {key.code: QQ(1) if field == "exact" else 1.0}, field
    )


def parity_operator(d: int) -> SparseOperator:
    """P = i^d m_1 m_2 .. m_{2d} (hermitian, squares to 1)."""
    return SparseOperator(
        "majorana", d, "exact", {(1 << (2 * d)) - 1: QQi.i_power(d)}
    )


def jordan_wigner(op: SparseOperator) -> SparseOperator:
    """Map a majorana operator to its pauli image on n sites."""
    if op.rep != "majorana":
        raise ValueError("jordan_wigner expects a majorana operator")
    out = SparseOperator("pauli", op.n, op.field)
    exact = op.field == "exact"
    for k, c in op.terms.items():
        t, code = jw_raw(k, op.n)
        out._accum(code, c * QQi.i_power(t) if exact else c * 1j ** t)
    return out


# -- JSON ------------------------------------------------------------------


def op_to_json_dict(op: SparseOperator) -> dict:
    """Serialize a skew-hermitian operator (normalized-basis coordinates)."""
    coords = op.l_coordinates()
    terms = []
    for k in sorted(coords):
        r = coords[k]
        if op.rep == "majorana":
            entry = {"m": MonomialKey("majorana", op.n, k).indices()}
            if op.field == "exact":
                fr = as_fraction(r)
                entry["c"] = [fr.numerator, fr.denominator]
            else:
                entry["c"] = r
        else:
            entry = {"p": MonomialKey("pauli", op.n, k).letters()}
            if op.field == "exact":
                fr = as_fraction(r)
                entry["cf"] = [fr.numerator, fr.denominator]
            else:
                entry["cf"] = r
        terms.append(entry)
    return {"rep": op.rep, "n": op.n, "field": op.field, "terms": terms}


def op_from_json_dict(data: dict) -> SparseOperator:
    rep = data["rep"]
    n = data["n"]
    field = data.get("field", "exact")
    coords = {}
    for entry in data["terms"]:
        if rep == "majorana":
            key = MonomialKey.majorana(entry["m"], n).code
            raw = entry["c"]
        else:
            key = MonomialKey.pauli(entry["p"], n).code
            raw = entry["cf"]
        if isinstance(raw, (list, tuple)):
            val = Fraction(raw[0], raw[1]) if field == "exact" else raw[0] / raw[1]
        else:
            if field == "exact":
                raise ValueError("exact field requires [num, den] coefficients")
            val = float(raw)
        coords[key] = coords.get(key, 0) + val if key in coords else val
    return SparseOperator.from_l_coordinates(rep, n, coords, field)


def op_to_json(op: SparseOperator) -> str:
    return json.dumps(op_to_json_dict(op), sort_keys=True)


def op_from_json(text: str) -> SparseOperator:
    return op_from_json_dict(json.loads(text))
