"""Matrices over number rings: products, conjugate transpose, determinants,
form-preservation predicates, and the JSON interchange format.

Matrices are immutable tuples of tuples of RingElt.  Entries may sit in the
fraction field (several of the built-in conjugators do); integrality is a
property you ask about, not a constraint.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .errors import InputError
from . import rings
from .rings import make_ring, ring_tag


def mat(ring, rows):
    return tuple(tuple(ring(v) for v in row) for row in rows)


def identity(ring, n):
    return tuple(
        tuple(ring.one if i == j else ring.zero for j in range(n)) for i in range(n)
    )


def mat_mul(a, b):
    n, k, m = len(a), len(b), len(b[0])
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = a[i][0] * b[0][j]
            for t in range(1, k):
                acc = acc + a[i][t] * b[t][j]
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def mat_add(a, b):
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_sub(a, b):
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_scale(a, c):
    return tuple(tuple(x * c for x in row) for row in a)


def transpose(a):
    return tuple(tuple(a[i][j] for i in range(len(a))) for j in range(len(a[0])))


def conj_transpose(a):
    return tuple(
        tuple(a[i][j].conj() for i in range(len(a))) for j in range(len(a[0]))
    )


def mat_eq(a, b):
    return all(x == y for ra, rb in zip(a, b) for x, y in zip(ra, rb))


def det(a):
    """Exact determinant by fraction-free-ish expansion (n <= 5 in practice)."""
    n = len(a)
    if n == 1:
        return a[0][0]
    if n == 2:
        return a[0][0] * a[1][1] - a[0][1] * a[1][0]
    out = None
    for j in range(n):
        if a[0][j].is_zero():
            continue
        minor = tuple(row[:j] + row[j + 1:] for row in a[1:])
        term = a[0][j] * det(minor)
        if j % 2:
            term = -term
        out = term if out is None else out + term
    if out is None:
        ring = a[0][0].ring
        return ring.zero
    return out


def mat_inverse(a):
    """Inverse over the fraction field via adjugate / det."""
    n = len(a)
    d = det(a)
    if d.is_zero():
        raise InputError("matrix is singular")
    dinv = d.inverse()
    cof = []
    for i in range(n):
        row = []
        for j in range(n):
            minor = tuple(
                tuple(a[r][c] for c in range(n) if c != j)
                for r in range(n) if r != i
            )
            term = det(minor) if n > 1 else a[0][0].ring.one
            if (i + j) % 2:
                term = -term
            row.append(term * dinv)
        cof.append(tuple(row))
    return transpose(tuple(cof))


def is_integral(a):
    return all(x.is_integral() for row in a for x in row)


def preserves_form(m, form, kind):
    """True iff  m~^t F m = F,  with entrywise conjugation for hermitian."""
    if kind not in ("bilinear", "hermitian"):
        raise InputError("kind must be 'bilinear' or 'hermitian'")
    if len(m) != len(form) or len(m[0]) != len(form[0]) or len(m) != len(m[0]):
        raise InputError("dimension mismatch")
    ring = m[0][0].ring
    if any(x.ring != ring for row in form for x in row):
        raise InputError("matrix and form live over different rings")
    left = conj_transpose(m) if kind == "hermitian" else transpose(m)
    return mat_eq(mat_mul(mat_mul(left, form), m), form)


def congruent_to_identity(m, prime, level):
    """Entrywise p-adic check that m = Id mod p^level (localized valuations)."""
    n = len(m)
    ring = m[0][0].ring
    for i in range(n):
        for j in range(n):
            e = m[i][j] - (ring.one if i == j else ring.zero)
            if prime.valuation(e) < level:
                return False
    return True


# ---------------------------------------------------------------------------
# JSON interchange: {"ring": tag, "rows": [[entry, ...], ...]}
# entry = int | "a/b" | [coord, ...] with coord = int | "a/b"


def _coord_to_json(fr):
    if fr.denominator == 1:
        return int(fr)
    return "%d/%d" % (fr.numerator, fr.denominator)


def _coord_from_json(v):
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v)
    raise InputError("bad coordinate %r" % (v,))


def entry_to_json(x):
    coords = [_coord_to_json(c) for c in x.coords]
    if all(c == 0 for c in x.coords[1:]):
        return coords[0]
    return coords


def entry_from_json(ring, v):
    if isinstance(v, (int, str)):
        return ring(_coord_from_json(v))
    if isinstance(v, list):
        return ring(tuple(_coord_from_json(c) for c in v))
    raise InputError("bad matrix entry %r" % (v,))


def matrix_to_json(m):
    ring = m[0][0].ring
    return {
        "ring": ring_tag(ring),
        "rows": [[entry_to_json(x) for x in row] for row in m],
    }


def matrix_from_json(obj, ring=None):
    if ring is None:
        ring = make_ring(obj["ring"])
    return mat(ring, [[entry_from_json(ring, v) for v in row] for row in obj["rows"]])


def load_matrix_file(path, ring=None):
    with open(path) as fh:
        obj = json.load(fh)
    return matrix_from_json(obj, ring=ring)


# ---------------------------------------------------------------------------
# the coordinate-change verification for the hermitian example
#
# Work in Q[a,d] with a = sqrt5 and d^2 = 1+a (a degree-4 field).  The second
# square root e with e^2 = 4+2a is not independent: (1+a)^3 = 4(4+2a), so
# e = d(1+a)/2 is a compatible choice and the two roots must be chosen
# compatibly for the displayed base change to work (with e -> -e the product
# c~^t h c is not even close).  Check that c carries the hermitian form with
# matrix h (phi = (1-a)/2 on the diagonal) to -h0, h0 the antidiagonal unit
# form: c~^t h c = -h0.  All entries of c are real, so conjugation is
# trivial on them.  Also checks N(1+a) = N(4+2a) = -4 in Q(a).


def _sqrt_algebra_matrices():
    A = rings.SquareRootAlgebra()
    one = A.one
    a = A.a()
    d = A.d()
    # compatible square root of 4+2a
    e = A.scale(A.mul(d, A.add(one, a)), Fraction(1, 2))
    half = Fraction(1, 2)

    def q(x):
        return A.from_rational(x)

    # d_inv = d (a-1)/4  since d * d(a-1)/4 = (1+a)(a-1)/4 = 1
    d_inv = A.scale(A.mul(d, A.sub(a, one)), Fraction(1, 4))
    phi = A.scale(A.sub(one, a), half)          # (1-a)/2
    h = [
        [phi, one, A.zero],
        [one, phi, one],
        [A.zero, one, phi],
    ]
    h0 = [
        [A.zero, A.zero, one],
        [A.zero, one, A.zero],
        [one, A.zero, A.zero],
    ]
    c = [
        [one,
         A.scale(d_inv, -1),
         A.scale(A.sub(a, one), Fraction(1, 8))],
        [A.add(q(-1), d),
         d_inv,
         A.scale(A.mul(A.sub(one, a), A.add(one, d)), Fraction(1, 8))],
        [A.add(A.sub(q(-1), a), e),
         A.zero,
         A.scale(A.add(q(2), d), Fraction(-1, 4))],
    ]
    return A, h, h0, c, d, d_inv, e, a


def _alg_mat_mul(A, x, y):
    n, k, m = len(x), len(y), len(y[0])
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = A.zero
            for t in range(k):
                acc = A.add(acc, A.mul(x[i][t], y[t][j]))
            row.append(acc)
        out.append(row)
    return out


def coordinate_change_check():
    """Verify the base change relating h and -h0, plus the norm facts.

    Returns (ok, details).  The identity verified is  c~^t h c = -h0
    (equivalently, in the new coordinates the form h has matrix -h0), and
    N(1+a) = N(4+2a) = -4, and that d, e are units with the stated squares.
    """
    A, h, h0, c, d, d_inv, e, a = _sqrt_algebra_matrices()
    ct = [[c[j][i] for j in range(3)] for i in range(3)]  # entries are real
    lhs = _alg_mat_mul(A, _alg_mat_mul(A, ct, h), c)
    minus_h0 = [[A.scale(x, -1) for x in row] for row in h0]
    ok_form = all(
        A.equal(lhs[i][j], minus_h0[i][j]) for i in range(3) for j in range(3)
    )
    # square-root bookkeeping
    one = A.one
    ok_d = A.equal(A.mul(d, d), A.add(one, a)) and A.equal(A.mul(d, d_inv), one)
    ok_e = A.equal(A.mul(e, e), A.add(A.from_rational(4), A.scale(a, 2)))
    # norms in Q(sqrt5): N(x + y a) = x^2 - 5 y^2
    n1 = Fraction(1) ** 2 - 5 * Fraction(1) ** 2          # N(1 + a)
    n2 = Fraction(4) ** 2 - 5 * Fraction(2) ** 2          # N(4 + 2a)
    ok_norms = (n1 == -4) and (n2 == -4)
    details = {
        "form_identity": ok_form,
        "sqrt_units": ok_d and ok_e,
        "norm_1_plus_a": int(n1),
        "norm_4_plus_2a": int(n2),
    }
    return (ok_form and ok_d and ok_e and ok_norms), details


__all__ = [
    "mat", "identity", "mat_mul", "mat_add", "mat_sub", "mat_scale",
    "transpose", "conj_transpose", "mat_eq", "det", "mat_inverse",
    "is_integral", "preserves_form", "congruent_to_identity",
    "matrix_to_json", "matrix_from_json", "load_matrix_file",
    "coordinate_change_check",
]
