from fractions import Fraction

from congtower import catalog, identities, ringmat
from congtower.rings import make_ring


def test_identity_suite_green():
    ok, results = identities.run_identity_suite()
    assert ok, [name for name, passed in results if not passed]
    assert len(results) == len(identities.IDENTITY_CHECKS)


def test_fault_injected_alpha_fails():
    alpha = catalog.coordinate_change_alpha()
    ring = make_ring("rational")
    rows = [list(row) for row in alpha]
    rows[0][1] = rows[0][1] + ring.one
    assert not identities.check_alpha_conjugates_forms(ringmat.mat(ring, rows))


def test_fault_injected_unitary_swap_fails():
    g0 = catalog.pu21_swap()
    ring = make_ring("cyclotomic-5")
    rows = [list(row) for row in g0]
    rows[1][1] = rows[1][1] * ring.zeta()
    assert not identities.check_unitary_swap(tuple(tuple(r) for r in rows))


def test_identity_matrix_preserves_any_form():
    ring = make_ring("rational")
    q = catalog.q_form()
    assert ringmat.preserves_form(ringmat.identity(ring, 5), q, "bilinear")


def test_coordinate_change_details():
    ok, details = ringmat.coordinate_change_check()
    assert ok
    assert details["norm_1_plus_a"] == -4
    assert details["norm_4_plus_2a"] == -4
    assert details["form_identity"] and details["sqrt_units"]


def test_identity_coordinate_change_fails_for_identity_matrix():
    # substituting c = Id: h and -h0 are different forms
    from congtower.rings import SquareRootAlgebra
    from congtower.ringmat import _alg_mat_mul, _sqrt_algebra_matrices
    A, h, h0, c, d, d_inv, e, a = _sqrt_algebra_matrices()
    ident = [[A.one if i == j else A.zero for j in range(3)] for i in range(3)]
    lhs = _alg_mat_mul(A, _alg_mat_mul(
        A, [[ident[j][i] for j in range(3)] for i in range(3)], h), ident)
    minus_h0 = [[A.scale(x, -1) for x in row] for row in h0]
    agree = all(A.equal(lhs[i][j], minus_h0[i][j])
                for i in range(3) for j in range(3))
    assert not agree
