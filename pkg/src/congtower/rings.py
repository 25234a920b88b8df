"""Exact arithmetic in the number rings behind the built-in lattices.

Supported rings: the rational integers, the imaginary quadratic orders
O_d = Z[omega_d] for d in {1, 2, 3, 7, 11} (omega = (1+sqrt(-d))/2 when
d = 3 mod 4, else sqrt(-d)), and Z[zeta] for zeta a primitive 5th root
of unity.  Elements are coordinate vectors over the integral basis with
Fraction entries, so the field of fractions comes for free; integrality
is just "all denominators 1".

Prime ideals are stored with their Z-lattice (HNF basis), which makes
membership, valuations and residue rings O/p^k purely integer linear
algebra.  No general ideal arithmetic beyond powers of primes.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

from .errors import BudgetExceeded, InputError
from . import intmat

RATIONAL = "rational"
IMAG_QUAD = "imag-quad"
CYCLOTOMIC5 = "cyclotomic-5"

SUPPORTED_D = (1, 2, 3, 7, 11)


class NumberRing:
    """Ring descriptor: integral basis, multiplication table, conjugation."""

    def __init__(self, kind, d=None):
        self.kind = kind
        self.d = d
        if kind == RATIONAL:
            self.degree = 1
            self.basis_names = ("1",)
            self._mult = (((1,),),)
            self._conj = ((1,),)
            self.min_poly = (0, 1)  # x
        elif kind == IMAG_QUAD:
            if d not in SUPPORTED_D:
                raise InputError("unsupported imaginary quadratic field d=%r" % (d,))
            self.degree = 2
            if d % 4 == 3:
                # omega = (1+sqrt(-d))/2, omega^2 = omega - (1+d)/4
                t, n = 1, -(1 + d) // 4
                self.basis_names = ("1", "(1+sqrt(-%d))/2" % d)
            else:
                # omega = sqrt(-d), omega^2 = -d
                t, n = 0, -d
                self.basis_names = ("1", "sqrt(-%d)" % d)
            self.min_poly = (-n, -t, 1)  # x^2 - t x - n
            self._mult = (
                ((1, 0), (0, 1)),
                ((0, 1), (n, t)),
            )
            # conj(omega) = t - omega
            self._conj = ((1, t), (0, -1))
        elif kind == CYCLOTOMIC5:
            self.degree = 4
            self.basis_names = ("1", "z", "z^2", "z^3")
            self.min_poly = (1, 1, 1, 1, 1)  # x^4+x^3+x^2+x+1
            # z^4 = -1-z-z^2-z^3, z^5 = 1
            pows = {0: (1, 0, 0, 0), 1: (0, 1, 0, 0), 2: (0, 0, 1, 0),
                    3: (0, 0, 0, 1), 4: (-1, -1, -1, -1)}
            pows[5] = pows[0]
            pows[6] = pows[1]
            table = []
            for i in range(4):
                table.append(tuple(pows[i + j] for j in range(4)))
            self._mult = tuple(table)
            # conj is z -> z^4
            conj_cols = (pows[0], pows[4], pows[3], pows[2])
            self._conj = tuple(
                tuple(conj_cols[j][i] for j in range(4)) for i in range(4)
            )
        else:
            raise InputError("unsupported ring kind %r" % (kind,))

    @property
    def key(self):
        return (self.kind, self.d)

    def __eq__(self, other):
        return isinstance(other, NumberRing) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        if self.kind == IMAG_QUAD:
            return "NumberRing(O_%d)" % self.d
        return "NumberRing(%s)" % self.kind

    # -- element constructors ------------------------------------------

    def __call__(self, coords):
        if isinstance(coords, RingElt):
            if coords.ring is not self and coords.ring != self:
                raise InputError("element of %r used in %r" % (coords.ring, self))
            return coords
        if isinstance(coords, (int, Fraction)):
            coords = (coords,) + (0,) * (self.degree - 1)
        coords = tuple(Fraction(c) for c in coords)
        if len(coords) != self.degree:
            raise InputError("expected %d coordinates, got %d" % (self.degree, len(coords)))
        return RingElt(self, coords)

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def gen(self):
        """The non-rational basis generator (omega or zeta)."""
        if self.degree == 1:
            return self.one
        return self((0, 1) + (0,) * (self.degree - 2))

    def zeta(self):
        if self.kind != CYCLOTOMIC5:
            raise InputError("zeta lives in the cyclotomic ring")
        return self.gen()

    def alpha(self):
        """sqrt(5) inside Z[zeta]: alpha = 1 + 2 zeta + 2 zeta^4."""
        if self.kind != CYCLOTOMIC5:
            raise InputError("alpha lives in the cyclotomic ring")
        return self((-1, 0, -2, -2))

    def sqrt_minus_d(self):
        if self.kind != IMAG_QUAD:
            raise InputError("sqrt(-d) lives in an imaginary quadratic ring")
        if self.d % 4 == 3:
            return self((-1, 2))  # 2 omega - 1
        return self.gen()

    # -- element arithmetic (coordinate level) -------------------------

    def _mul_coords(self, a, b):
        n = self.degree
        out = [Fraction(0)] * n
        for i in range(n):
            ai = a[i]
            if not ai:
                continue
            row = self._mult[i]
            for j in range(n):
                bj = b[j]
                if not bj:
                    continue
                c = ai * bj
                basis = row[j]
                for k in range(n):
                    if basis[k]:
                        out[k] += c * basis[k]
        return tuple(out)

    def _conj_coords(self, a):
        n = self.degree
        return tuple(
            sum(self._conj[i][j] * a[j] for j in range(n)) for i in range(n)
        )

    def mult_matrix(self, a):
        """Matrix of y -> a*y over the integral basis (columns = a*b_j)."""
        n = self.degree
        cols = []
        for j in range(n):
            ej = tuple(Fraction(1) if t == j else Fraction(0) for t in range(n))
            cols.append(self._mul_coords(a, ej))
        return tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))


class RingElt:
    """Element of a NumberRing (or its fraction field) as basis coordinates."""

    __slots__ = ("ring", "coords")

    def __init__(self, ring, coords):
        self.ring = ring
        self.coords = coords

    def __add__(self, other):
        other = self.ring(other)
        return RingElt(self.ring, tuple(a + b for a, b in zip(self.coords, other.coords)))

    __radd__ = __add__

    def __neg__(self):
        return RingElt(self.ring, tuple(-a for a in self.coords))

    def __sub__(self, other):
        other = self.ring(other)
        return RingElt(self.ring, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __rsub__(self, other):
        return self.ring(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return RingElt(self.ring, tuple(a * other for a in self.coords))
        other = self.ring(other)
        return RingElt(self.ring, self.ring._mul_coords(self.coords, other.coords))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return RingElt(self.ring, tuple(a / other for a in self.coords))
        other = self.ring(other)
        return self * other.inverse()

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        out = self.ring.one
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def inverse(self):
        """Exact inverse in the fraction field (linear solve against mult matrix)."""
        n = self.ring.degree
        m = self.ring.mult_matrix(self.coords)
        rhs = [Fraction(1)] + [Fraction(0)] * (n - 1)
        sol = _solve_fraction_linear(m, rhs)
        if sol is None:
            raise ZeroDivisionError("element is zero")
        return RingElt(self.ring, tuple(sol))

    def conj(self):
        return RingElt(self.ring, self.ring._conj_coords(self.coords))

    def norm(self):
        """Field norm down to Q (determinant of the multiplication map)."""
        return _fraction_det(self.ring.mult_matrix(self.coords))

    def trace(self):
        m = self.ring.mult_matrix(self.coords)
        return sum(m[i][i] for i in range(self.ring.degree))

    def is_zero(self):
        return all(c == 0 for c in self.coords)

    def is_integral(self):
        return all(c.denominator == 1 for c in self.coords)

    def int_coords(self):
        if not self.is_integral():
            raise InputError("element %r is not integral" % (self,))
        return tuple(int(c) for c in self.coords)

    def denominator(self):
        return math.lcm(*(c.denominator for c in self.coords))

    def as_rational(self):
        if any(self.coords[1:]):
            raise InputError("element %r is not rational" % (self,))
        return self.coords[0]

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring(other)
        return (
            isinstance(other, RingElt)
            and self.ring == other.ring
            and self.coords == other.coords
        )

    def __hash__(self):
        return hash((self.ring.key, self.coords))

    def __repr__(self):
        names = self.ring.basis_names
        terms = []
        for c, nm in zip(self.coords, names):
            if c == 0:
                continue
            if nm == "1":
                terms.append(str(c))
            elif c == 1:
                terms.append(nm)
            else:
                terms.append("%s*%s" % (c, nm))
        return " + ".join(terms) if terms else "0"


def _solve_fraction_linear(m, rhs):
    """Solve m x = rhs over Q by Gaussian elimination; None if singular."""
    n = len(rhs)
    aug = [list(m[i]) + [rhs[i]] for i in range(n)]
    for col in range(n):
        piv = None
        for r in range(col, n):
            if aug[r][col] != 0:
                piv = r
                break
        if piv is None:
            return None
        aug[col], aug[piv] = aug[piv], aug[col]
        pv = aug[col][col]
        aug[col] = [x / pv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [aug[i][n] for i in range(n)]


def _fraction_det(m):
    n = len(m)
    mat = [list(row) for row in m]
    det = Fraction(1)
    for col in range(n):
        piv = None
        for r in range(col, n):
            if mat[r][col] != 0:
                piv = r
                break
        if piv is None:
            return Fraction(0)
        if piv != col:
            mat[col], mat[piv] = mat[piv], mat[col]
            det = -det
        pv = mat[col][col]
        det *= pv
        for r in range(col + 1, n):
            if mat[r][col]:
                f = mat[r][col] / pv
                mat[r] = [x - f * y for x, y in zip(mat[r], mat[col])]
    return det


# ---------------------------------------------------------------------------
# ring construction


_RING_CACHE = {}


def make_ring(spec):
    """Build a ring descriptor from a short spec.

    Accepted specs: "rational", "cyclotomic-5", an integer d in {1,2,3,7,11},
    or strings like "d=7" / "O_7" / "imag-quad-7".
    """
    key = _parse_ring_spec(spec)
    if key not in _RING_CACHE:
        _RING_CACHE[key] = NumberRing(*key)
    return _RING_CACHE[key]


def _parse_ring_spec(spec):
    if isinstance(spec, NumberRing):
        return spec.key
    if isinstance(spec, int):
        return (IMAG_QUAD, spec)
    if isinstance(spec, str):
        s = spec.strip().lower()
        if s in ("rational", "q", "z"):
            return (RATIONAL, None)
        if s in ("cyclotomic-5", "cyclotomic5", "z[zeta5]", "zeta5"):
            return (CYCLOTOMIC5, None)
        for prefix in ("d=", "o_", "imag-quad-", "imag_quad_"):
            if s.startswith(prefix):
                try:
                    return (IMAG_QUAD, int(s[len(prefix):]))
                except ValueError:
                    break
        if s.isdigit():
            return (IMAG_QUAD, int(s))
    raise InputError("cannot parse ring spec %r" % (spec,))


def ring_tag(ring):
    """Stable string tag for JSON files."""
    if ring.kind == RATIONAL:
        return "rational"
    if ring.kind == CYCLOTOMIC5:
        return "cyclotomic-5"
    return "d=%d" % ring.d


# ---------------------------------------------------------------------------
# prime ideals


class PrimeIdeal:
    """Prime ideal over a rational prime p, with its Z-lattice in basis coords."""

    def __init__(self, ring, p, gens, e, f):
        self.ring = ring
        self.p = p
        self.gens = tuple(gens)
        self.e = e
        self.f = f
        self._power_lattices = {}
        self._power_lattices[1] = self._lattice_from_gens(self.gens)

    def norm(self):
        return self.p ** self.f

    @property
    def residue_field_size(self):
        return self.p ** self.f

    def _lattice_from_gens(self, gens):
        ring = self.ring
        n = ring.degree
        rows = [[self.p if i == j else 0 for j in range(n)] for i in range(n)]
        for g in gens:
            for j in range(n):
                ej = tuple(Fraction(1) if t == j else Fraction(0) for t in range(n))
                prod = ring._mul_coords(g.coords, ej)
                rows.append([int(c) for c in prod])
        h, _ = intmat.hnf(rows)
        return tuple(tuple(r) for r in h[: n])

    def power_lattice(self, k):
        """HNF basis (rows) of the Z-lattice of p^k."""
        if k < 0:
            raise InputError("negative ideal power")
        if k == 0:
            n = self.ring.degree
            return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))
        if k not in self._power_lattices:
            base = self.power_lattice(1)
            prev = self.power_lattice(k - 1)
            ring = self.ring
            n = ring.degree
            rows = []
            for a in prev:
                fa = tuple(Fraction(x) for x in a)
                for b in base:
                    fb = tuple(Fraction(x) for x in b)
                    prod = ring._mul_coords(fa, fb)
                    rows.append([int(c) for c in prod])
            h, _ = intmat.hnf(rows)
            self._power_lattices[k] = tuple(tuple(r) for r in h[: n])
        return self._power_lattices[k]

    def contains(self, x, k=1):
        """Is x in p^k?  x must be integral."""
        x = self.ring(x)
        if x.is_zero():
            return True
        if not x.is_integral():
            return False
        return intmat.lattice_contains(self.power_lattice(k), x.int_coords())

    def valuation(self, x):
        """p-adic valuation on the fraction field; +inf on 0."""
        x = self.ring(x)
        if x.is_zero():
            return math.inf
        den = x.denominator()
        num = x * den
        vd = self.e * _int_valuation(den, self.p)
        # v(num) is at most e * v_p(N(num))
        bound = self.e * _int_valuation(abs(_as_int(num.norm())), self.p)
        v = 0
        while v < bound and self.contains(num, v + 1):
            v += 1
        return v - vd

    def conj_stable(self):
        """Whether complex conjugation maps this ideal to itself."""
        lat = self.power_lattice(1)
        ring = self.ring
        for row in lat:
            elt = ring(row).conj()
            if not self.contains(elt, 1):
                return False
        return True

    def __repr__(self):
        return "PrimeIdeal(p=%d, e=%d, f=%d, gens=%r)" % (self.p, self.e, self.f, self.gens)


def _as_int(fr):
    fr = Fraction(fr)
    if fr.denominator != 1:
        raise InputError("expected integer, got %r" % (fr,))
    return fr.numerator


def _int_valuation(n, p):
    if n == 0:
        return math.inf
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _poly_divmod_monic(num, den, p):
    """Divide polynomials over F_p, den monic; coefficient lists, low degree first."""
    num = [c % p for c in num]
    dd = len(den) - 1
    out = [0] * (len(num) - dd)
    while len(num) - 1 >= dd and any(num):
        k = len(num) - 1 - dd
        c = num[-1] % p
        out[k] = c
        for i, dc in enumerate(den):
            num[k + i] = (num[k + i] - c * dc) % p
        while num and num[-1] % p == 0:
            num.pop()
        if not num:
            num = [0]
    rem = [c % p for c in num]
    return out, rem


def _factor_monic_mod_p(coeffs, p):
    """Factor a monic polynomial over F_p into irreducibles (degree <= 4).

    Brute force: strip roots, then search monic quadratic divisors.
    Returns a list of (factor_coeffs, multiplicity).
    """
    coeffs = [c % p for c in coeffs]
    factors = {}
    work = list(coeffs)

    def add(fac):
        key = tuple(fac)
        factors[key] = factors.get(key, 0) + 1

    changed = True
    while len(work) > 1 and changed:
        changed = False
        for r in range(p):
            if sum(c * pow(r, i, p) for i, c in enumerate(work)) % p == 0:
                lin = [(-r) % p, 1]
                work, rem = _poly_divmod_monic(work, lin, p)
                assert not any(rem)
                add(lin)
                changed = True
                break
    deg = len(work) - 1
    if deg == 0:
        pass
    elif deg in (2, 3):
        # no roots left: degree-2 is irreducible; degree 3 with no roots is too
        if deg == 2:
            add(work)
        else:
            add(work)
    elif deg == 4:
        found = False
        for b in range(p):
            for c in range(p):
                quad = [c, b, 1]
                quo, rem = _poly_divmod_monic(work, quad, p)
                if not any(rem):
                    add(quad)
                    add([x % p for x in quo])
                    found = True
                    break
            if found:
                break
        if not found:
            add(work)
    return [(list(k), m) for k, m in sorted(factors.items(), key=lambda kv: (len(kv[0]), kv[0]))]


def _small_generator_search(ideal):
    """Look for a single generator: small coords, right norm, inside the ideal.

    Candidates are ordered so that e.g. zeta-1 beats its unit multiples.
    """
    ring = ideal.ring
    n = ring.degree
    target = ideal.norm()

    def preference(t):
        support = [i for i, c in enumerate(t) if c]
        top = support[-1] if support else 0
        return (sum(abs(c) for c in t), top, -t[top],
                tuple(-c for c in t))

    candidates = sorted(itertools.product(range(-2, 3), repeat=n),
                        key=preference)
    for coords in candidates:
        if not any(coords):
            continue
        x = ring(coords)
        if abs(_as_int(x.norm())) == target and ideal.contains(x):
            probe = PrimeIdeal(ring, ideal.p, (x,), ideal.e, ideal.f)
            if probe.power_lattice(1) == ideal.power_lattice(1):
                return x
    return None


def factor_rational_prime(ring, p):
    """Factor (p) in the ring; returns PrimeIdeal list sorted deterministically."""
    if not _is_small_prime(p):
        raise InputError("p=%r is not a prime in the supported range" % (p,))
    if p > 100:
        raise InputError("primes above 100 are out of the supported desk scale")
    ring = make_ring(ring)
    if ring.kind == RATIONAL:
        return [PrimeIdeal(ring, p, (ring(p),), 1, 1)]
    # factor the minimal polynomial of the generator mod p
    coeffs = list(ring.min_poly)
    facs = _factor_monic_mod_p(coeffs, p)
    ideals = []
    gen = ring.gen()
    for fac, mult in facs:
        # ideal (p, f(gen)), residue degree deg f, ramification = multiplicity
        val = ring.zero
        for i, c in enumerate(fac):
            val = val + ring(c) * gen ** i
        ideal = PrimeIdeal(ring, p, (ring(p), val), mult, len(fac) - 1)
        single = _small_generator_search(ideal)
        if single is not None:
            ideal = PrimeIdeal(ring, p, (single,), mult, len(fac) - 1)
        ideals.append(ideal)
    total = 1
    for ideal in ideals:
        total *= ideal.norm() ** ideal.e
    assert total == p ** ring.degree, "norm bookkeeping failed for p=%d" % p
    return ideals


def _is_small_prime(p):
    if not isinstance(p, int) or p < 2:
        return False
    return all(p % q for q in range(2, int(p ** 0.5) + 1))


# ---------------------------------------------------------------------------
# residue rings O/p^k


ENUMERATION_LIMIT = 10 ** 6


class ResidueRing:
    """O/p^k with canonical coordinate representatives.

    Representatives are integer tuples reduced against the HNF basis of the
    p^k lattice: 0 <= x_i < H[i][i] after back-substitution.  All group and
    ring structure is computed by lifting to O and reducing.
    """

    def __init__(self, prime, k):
        if k < 1:
            raise InputError("residue ring exponent must be >= 1")
        self.prime = prime
        self.k = k
        self.ring = prime.ring
        self.lattice = prime.power_lattice(k)
        n = self.ring.degree
        self.diag = tuple(self.lattice[i][i] for i in range(n))
        self.size = 1
        for d in self.diag:
            self.size *= d
        assert self.size == prime.norm() ** k
        self._inv_cache = {}

    # -- representatives ----------------------------------------------

    def reduce_coords(self, coords):
        # the lattice basis is upper triangular, so reduce top-down
        x = [int(c) for c in coords]
        n = len(x)
        for i in range(n):
            q = x[i] // self.lattice[i][i]
            if q:
                row = self.lattice[i]
                for j in range(i, n):
                    x[j] -= q * row[j]
        return tuple(x)

    def reduce(self, elt):
        """Reduce a ring element; any p-locally integral element of the
        fraction field is accepted (localized reduction).

        For x = n/m the representative r solves m r = n mod p^(k + v(m)),
        an integer linear system; this works even when the denominator is
        divisible by p at the conjugate primes.
        """
        elt = self.ring(elt)
        den = elt.denominator()
        if den == 1:
            return self.reduce_coords(elt.int_coords())
        if self.prime.valuation(elt) < 0:
            raise InputError("element %r is not locally integral at p" % (elt,))
        vm = self.prime.valuation(self.ring(den))
        if vm == math.inf:
            raise InputError("zero denominator")
        num = (elt * den).int_coords()
        lat = self.prime.power_lattice(self.k + int(vm))
        n = self.ring.degree
        rows = [
            [den if i == j else 0 for j in range(n)] + [lat[j][i] for j in range(n)]
            for i in range(n)
        ]
        sol = intmat.solve_integer_linear(rows, list(num))
        if sol is None:
            raise AssertionError("localized reduction failed unexpectedly")
        return self.reduce_coords(sol[:n])

    def lift(self, rep):
        return self.ring(rep)

    @property
    def zero(self):
        return self.reduce_coords((0,) * self.ring.degree)

    @property
    def one(self):
        return self.reduce(self.ring.one)

    # -- arithmetic on representatives ---------------------------------

    def add(self, a, b):
        return self.reduce_coords(tuple(x + y for x, y in zip(a, b)))

    def sub(self, a, b):
        return self.reduce_coords(tuple(x - y for x, y in zip(a, b)))

    def neg(self, a):
        return self.reduce_coords(tuple(-x for x in a))

    def mul(self, a, b):
        fa = tuple(Fraction(x) for x in a)
        fb = tuple(Fraction(x) for x in b)
        return self.reduce_coords(
            tuple(int(c) for c in self.ring._mul_coords(fa, fb))
        )

    def pow(self, a, k):
        out = self.one
        base = a
        while k:
            if k & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            k >>= 1
        return out

    def is_unit(self, a):
        return self.prime.valuation(self.lift(a)) == 0 if a != self.zero else False

    def inverse(self, a):
        if a in self._inv_cache:
            return self._inv_cache[a]
        n = self.ring.degree
        fa = tuple(Fraction(x) for x in a)
        mult = self.ring.mult_matrix(fa)
        cols = [[int(mult[i][j]) for j in range(n)] for i in range(n)]
        lat_cols = [list(col) for col in zip(*self.lattice)]
        one = [1] + [0] * (n - 1)
        sol = intmat.solve_integer_linear(
            [ [cols[i][j] for j in range(n)] + [lat_cols[i][j] for j in range(n)]
              for i in range(n) ],
            one,
        )
        if sol is None:
            raise InputError("element %r is not a unit in O/p^%d" % (a, self.k))
        inv = self.reduce_coords(sol[:n])
        self._inv_cache[a] = inv
        return inv

    # -- structure -----------------------------------------------------

    def elements(self):
        if self.size > ENUMERATION_LIMIT:
            raise BudgetExceeded(
                "residue ring of size %d exceeds the enumeration limit" % self.size,
                estimate=self.size, budget=ENUMERATION_LIMIT,
            )
        ranges = [range(d) for d in self.diag]
        for combo in itertools.product(*ranges):
            yield self.reduce_coords(combo)

    def has_involution(self):
        ring = self.ring
        return all(
            intmat.lattice_contains(self.lattice, ring(row).conj().int_coords())
            for row in self.lattice
        )

    def involution(self, a):
        if not self.has_involution():
            raise InputError("conjugation does not preserve this ideal power")
        return self.reduce(self.lift(a).conj())

    def reduce_to_level(self, other, a):
        """Natural map O/p^k -> O/p^j for j < k."""
        if other.prime is not self.prime or other.k > self.k:
            raise InputError("not a coarser residue ring")
        return other.reduce_coords(a)

    def __repr__(self):
        return "ResidueRing(N(p)=%d, k=%d, size=%d)" % (
            self.prime.norm(), self.k, self.size)


def residue_ring(prime, k):
    size = prime.norm() ** k
    if size > ENUMERATION_LIMIT:
        raise BudgetExceeded(
            "residue ring size %d exceeds enumeration budget" % size,
            estimate=size, budget=ENUMERATION_LIMIT,
        )
    return ResidueRing(prime, k)


# ---------------------------------------------------------------------------
# the rank-8 square-root algebra Q[a,d,e]/(a^2-5, d^2-(1+a), e^2-(4+2a))


class SquareRootAlgebra:
    """Symbolic home for sqrt(5), sqrt(1+sqrt5), sqrt(4+2*sqrt5).

    Elements are Fraction coordinate dicts over the basis a^i d^j e^k,
    (i,j,k) in {0,1}^3.  Only used for coordinate-change verification, so
    inverses are provided for the handful of elements that need them.
    """

    BASIS = tuple(itertools.product((0, 1), repeat=3))

    def elt(self, mapping=None):
        out = {b: Fraction(0) for b in self.BASIS}
        if mapping:
            for key, val in mapping.items():
                out[key] = Fraction(val)
        return out

    def from_rational(self, q):
        return self.elt({(0, 0, 0): Fraction(q)})

    @property
    def one(self):
        return self.from_rational(1)

    @property
    def zero(self):
        return self.elt()

    def a(self):
        return self.elt({(1, 0, 0): 1})

    def d(self):
        return self.elt({(0, 1, 0): 1})

    def e(self):
        return self.elt({(0, 0, 1): 1})

    def add(self, x, y):
        return {b: x[b] + y[b] for b in self.BASIS}

    def sub(self, x, y):
        return {b: x[b] - y[b] for b in self.BASIS}

    def scale(self, x, c):
        c = Fraction(c)
        return {b: x[b] * c for b in self.BASIS}

    def mul(self, x, y):
        out = {b: Fraction(0) for b in self.BASIS}
        for (i1, j1, k1), c1 in x.items():
            if not c1:
                continue
            for (i2, j2, k2), c2 in y.items():
                if not c2:
                    continue
                c = c1 * c2
                # reduce a^2 -> 5, d^2 -> 1+a, e^2 -> 4+2a
                terms = [((i1 + i2) % 2, (j1 + j2) % 2, (k1 + k2) % 2, c)]
                if i1 + i2 == 2:
                    terms = [(i, j, k, cc * 5) for (i, j, k, cc) in terms]
                if j1 + j2 == 2:
                    expanded = []
                    for (i, j, k, cc) in terms:
                        expanded.append((i, j, k, cc))
                        expanded.append(((i + 1) % 2, j, k, cc * (5 if i else 1)))
                    terms = expanded
                if k1 + k2 == 2:
                    expanded = []
                    for (i, j, k, cc) in terms:
                        expanded.append((i, j, k, cc * 4))
                        expanded.append(((i + 1) % 2, j, k, cc * 2 * (5 if i else 1)))
                    terms = expanded
                for (i, j, k, cc) in terms:
                    out[(i, j, k)] += cc
        return out

    def equal(self, x, y):
        return all(x[b] == y[b] for b in self.BASIS)

    def is_zero(self, x):
        return all(v == 0 for v in x.values())


__all__ = [
    "NumberRing", "RingElt", "PrimeIdeal", "ResidueRing", "SquareRootAlgebra",
    "make_ring", "factor_rational_prime", "residue_ring", "ring_tag",
    "RATIONAL", "IMAG_QUAD", "CYCLOTOMIC5", "SUPPORTED_D", "ENUMERATION_LIMIT",
]
