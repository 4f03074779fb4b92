"""Span reduction, closures, centralizers, and structure classification."""

import numpy as np
import pytest

from fermilie.coeffs import QQ
from fermilie.engine import (
    OperatorSpace,
    algebra_rank,
    center_of,
    centralizer_in,
    commutant_dimension,
    derived_dim,
    format_structure,
    full_skew_space,
    invariant_blocks,
    lie_closure,
    rational_nullspace,
    simple_catalog_candidates,
    span_reduce,
    structure_profile,
)
from fermilie.families import build_named_family
from fermilie.fock import dense
from fermilie.ops import MonomialKey, SparseOperator, normalize_L


def pauli_op(letters, coeff=QQ(1)):
    return SparseOperator.from_l_coordinates(
        "pauli", len(letters), {MonomialKey.pauli(letters).code: coeff}
    )


def test_span_reduce_dimensions():
    a = pauli_op("XI")
    b = pauli_op("IX")
    s = span_reduce([a, b, a + b])
    assert s.dim == 2
    assert s.contains(a + b.scale(QQ(5)))
    assert not s.contains(pauli_op("ZZ"))


def test_reduce_handles_late_pivot_fill_in():
    # row insertion order chosen so a later row's pivot appears inside an
    # earlier row; membership reduction must still cancel everything
    space = OperatorSpace("pauli", 2, "exact")
    space.insert({1: QQ(1), 7: QQ(1)})
    space.insert({2: QQ(1), 7: QQ(2)})
    space.insert({7: QQ(1), 9: QQ(1)})
    v = {1: QQ(3), 2: QQ(5), 7: QQ(13), 9: QQ(0)}
    r = space.reduce(v)
    assert 1 not in r and 2 not in r and 7 not in r


def test_float_field_reduce():
    space = OperatorSpace("pauli", 2, "float")
    space.insert({1: 1.0, 2: 1e-15})
    space.insert({2: 0.5})
    assert space.dim == 2
    assert not space.reduce({1: 2.0, 2: 1.0})
    assert space.reduce({3: 1.0})


def test_lie_closure_su2():
    x = pauli_op("X")
    y = pauli_op("Y")
    res = lie_closure([x, y])
    assert res.dim == 3 and not res.hit_cap
    pairwise = lie_closure([x, y], pairwise=True)
    assert pairwise.dim == 3


def test_lie_closure_cap():
    gens = build_named_family("w1", 3) + build_named_family("w2", 3)
    res = lie_closure(gens, cap=4)
    assert res.hit_cap and res.dim >= 4


@pytest.mark.parametrize("d,expect", [(2, 6), (3, 15), (4, 28)])
def test_quadratic_closure_dims(d, expect):
    gens = [
        build_named_family("w1", d)[0],
        build_named_family("w2", d)[0],
        build_named_family("w3", d)[0],
    ]
    res = lie_closure(gens)
    assert res.dim == expect
    # closure stays inside the even quadratic sector here
    for row in res.space.rows:
        assert all(k.bit_count() == 2 for k in row)


def test_full_skew_space_dims():
    assert full_skew_space("pauli", 2).dim == 15
    assert full_skew_space("pauli", 2, include_identity=True).dim == 16
    assert full_skew_space("majorana", 2).dim == 15
    assert full_skew_space("majorana", 2, even_only=True).dim == 7


def test_rational_nullspace_small():
    # x0 + 2 x1 = 0, x1 + x2 = 0
    eqs = [{0: QQ(1), 1: QQ(2)}, {1: QQ(1), 2: QQ(1)}]
    basis = rational_nullspace(eqs, 3)
    assert len(basis) == 1
    sol = basis[0]
    x = [sol.get(j, QQ(0)) for j in range(3)]
    assert x[0] + 2 * x[1] == 0 and x[1] + x[2] == 0


def test_centralizer_and_center():
    gens = [build_named_family("w1", 2)[0], build_named_family("w2", 2)[0]]
    u2 = lie_closure(gens).space  # u(2): quadratic ops commuting with number
    assert u2.dim == 4
    assert center_of(u2).dim == 1
    assert algebra_rank(u2) == 2
    assert derived_dim(u2) == 3
    z = normalize_L(MonomialKey.pauli("ZI"))
    amb = full_skew_space("pauli", 2)
    cent = centralizer_in(amb, [z])
    # strings commuting with Z1: 1 (excluded), Z1 itself, and Z1*(su(2) on site 2)
    assert cent.dim == 7


def test_commutant_dimension_small():
    X = np.array([[0, 1], [1, 0]], dtype=complex)
    Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
    assert commutant_dimension([X, Y]) == 1
    two_copies = [np.kron(np.eye(2), A) for A in (X, Y)]
    assert commutant_dimension(two_copies) == 4
    big = np.eye(64, dtype=complex)
    with pytest.raises(ValueError):
        commutant_dimension([big])


def test_invariant_blocks_direct_sum():
    X = np.array([[0, 1], [1, 0]], dtype=complex)
    Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
    A = np.zeros((5, 5), dtype=complex)
    A[:2, :2] = X
    A[2:4, 2:4] = X
    B = np.zeros((5, 5), dtype=complex)
    B[:2, :2] = Y
    B[2:4, 2:4] = Y
    sizes, blocks = invariant_blocks([1j * A, 1j * B])
    assert sorted(sizes) == [1, 2, 2]
    assert sum(Q.shape[1] for Q in blocks) == 5


def test_simple_catalog():
    assert simple_catalog_candidates(3, 1) == ["su(2)"]
    assert simple_catalog_candidates(15, 3) == ["su(4)"]  # so(6) folded in
    assert simple_catalog_candidates(28, 4) == ["so(8)"]
    assert simple_catalog_candidates(10, 2) == ["so(5)"]
    assert simple_catalog_candidates(6, None) == []  # so(4) is not simple


def test_format_structure():
    assert format_structure([4, 3, 3], 2) == "su(4) + 2 su(3) + 2 u(1)"
    assert format_structure([2], 0) == "su(2)"
    assert format_structure([], 3) == "3 u(1)"
    assert format_structure([1, 1], 0) == "0"


def test_structure_profile_so4():
    gens = [build_named_family(w, 2)[0] for w in ("w1", "w2", "w3")]
    rep = structure_profile(lie_closure(gens).space)
    assert rep.dim == 6 and rep.rank == 2 and rep.center_dim == 0
    assert rep.structure == "2 su(2)"
    assert rep.certified


def test_structure_profile_u3():
    gens = [build_named_family("w1", 3)[0], build_named_family("w2", 3)[0]]
    rep = structure_profile(lie_closure(gens).space)
    assert rep.dim == 9 and rep.center_dim == 1 and rep.rank == 3
    assert rep.structure == "su(3) + u(1)"


def test_structure_profile_so6_uses_su4_label():
    gens = [build_named_family(w, 3)[0] for w in ("w1", "w2", "w3")]
    rep = structure_profile(lie_closure(gens).space)
    assert rep.dim == 15 and rep.rank == 3 and rep.center_dim == 0
    assert rep.structure == "su(4)"


def test_structure_profile_so8():
    gens = [build_named_family(w, 4)[0] for w in ("w1", "w2", "w3")]
    rep = structure_profile(lie_closure(gens).space)
    assert rep.dim == 28 and rep.rank == 4
    assert rep.structure == "so(8)"


def test_structure_profile_abelian():
    ops = [pauli_op("ZI"), pauli_op("IZ")]
    rep = structure_profile(span_reduce(ops))
    assert rep.structure == "2 u(1)" and rep.certified


def test_structure_profile_quotient():
    # projecting out a central direction drops dim/center/rank by one
    gens = [build_named_family(w, 2)[0] for w in ("w1", "w2", "w3")]
    space = lie_closure(gens).space
    from fermilie.ops import parity_operator

    pvec = parity_operator(2).times_i().scale(QQ(1, 2)).l_coordinates()
    rep = structure_profile(space, quotient_central=[pvec])
    # parity is not inside so(4) here, so nothing changes
    assert rep.dim == 6 and rep.structure == "2 su(2)"
