"""Exact integer matrix algebra: Hermite and Smith normal forms.

Everything is plain Python ints (arbitrary precision), lists of rows.
The Smith reduction uses minimal-absolute-value pivoting with full row and
column reduction, which keeps entries tame at the sizes we need (a few
thousand rows).  For the large, very sparse relation matrices coming out
of Reidemeister-Schreier there is a sparse elimination front end that
knocks out +-1 pivots before handing the small dense core to ``snf``.
"""

from __future__ import annotations

from dataclasses import dataclass


# ---------------------------------------------------------------------------
# Hermite normal form (row style)


def hnf(rows):
    """Row HNF with transformation: returns (H, U) with U unimodular, U*M = H.

    H is in canonical form: pivots positive, entries above each pivot reduced
    into [0, pivot), zero rows at the bottom.
    """
    m = len(rows)
    n = len(rows[0]) if m else 0
    a = [list(r) for r in rows]
    u = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    row = 0
    for col in range(n):
        # gcd-eliminate everything below `row` in this column
        piv = None
        for r in range(row, m):
            if a[r][col]:
                if piv is None or abs(a[r][col]) < abs(a[piv][col]):
                    piv = r
        if piv is None:
            continue
        a[row], a[piv] = a[piv], a[row]
        u[row], u[piv] = u[piv], u[row]
        while True:
            done = True
            for r in range(row + 1, m):
                if a[r][col]:
                    q = a[r][col] // a[row][col]
                    if q:
                        _row_sub(a[r], a[row], q)
                        _row_sub(u[r], u[row], q)
                    if a[r][col]:
                        a[row], a[r] = a[r], a[row]
                        u[row], u[r] = u[r], u[row]
                        done = False
            if done:
                break
        if a[row][col] < 0:
            a[row] = [-x for x in a[row]]
            u[row] = [-x for x in u[row]]
        # reduce entries above the pivot
        for r in range(row):
            q = a[r][col] // a[row][col]
            if q:
                _row_sub(a[r], a[row], q)
                _row_sub(u[r], u[row], q)
        row += 1
        if row == m:
            break
    return [list(r) for r in a], u


def _row_sub(target, source, q):
    for j in range(len(target)):
        if source[j]:
            target[j] -= q * source[j]


def lattice_contains(hnf_rows, vector):
    """Membership of an integer vector in the row lattice given by a square,
    full-rank upper-triangular HNF basis."""
    x = list(vector)
    n = len(x)
    for i in range(n):
        piv = hnf_rows[i][i]
        if x[i] % piv:
            return False
        q = x[i] // piv
        if q:
            for j in range(i, n):
                x[j] -= q * hnf_rows[i][j]
    return all(v == 0 for v in x)


def solve_integer_linear(m_rows, target):
    """Integer solution x of M x = target (columns of M as generators), or None."""
    nrows = len(m_rows)
    ncols = len(m_rows[0]) if nrows else 0
    gens = [[m_rows[i][j] for i in range(nrows)] for j in range(ncols)]
    h, u = hnf(gens)
    # forward-substitute target against the HNF rows
    x = list(target)
    coeffs = [0] * len(h)
    pivots = []  # (row, col)
    for r, row in enumerate(h):
        c = next((j for j, v in enumerate(row) if v), None)
        if c is not None:
            pivots.append((r, c))
    for r, c in pivots:
        if x[c] % h[r][c]:
            return None
        q = x[c] // h[r][c]
        coeffs[r] = q
        if q:
            for j in range(len(x)):
                x[j] -= q * h[r][j]
    if any(x):
        return None
    sol = [0] * ncols
    for r, q in enumerate(coeffs):
        if q:
            for j in range(ncols):
                sol[j] += q * u[r][j]
    return sol


# ---------------------------------------------------------------------------
# Smith normal form


def snf(rows):
    """Divisor chain d_1 | d_2 | ... | d_r (nonzero divisors only)."""
    a = [list(r) for r in rows]
    m = len(a)
    n = len(a[0]) if m else 0
    divisors = []
    s = 0
    while s < m and s < n:
        if _min_abs_pivot(a, m, n, s) is None:
            break
        while True:
            _clear_block_corner(a, m, n, s)
            # pivot must divide every remaining entry of the block
            piv_val = abs(a[s][s])
            offender = None
            for r in range(s + 1, m):
                row = a[r]
                for c in range(s + 1, n):
                    if row[c] % piv_val:
                        offender = r
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            for j in range(n):
                a[s][j] += a[offender][j]
        divisors.append(abs(a[s][s]))
        s += 1
    return divisors


def _clear_block_corner(a, m, n, s):
    """Make a[s][s] the gcd pivot with zero row/column tail (min-abs pivoting)."""
    while True:
        r, c = _min_abs_pivot(a, m, n, s)
        if r != s:
            a[s], a[r] = a[r], a[s]
        if c != s:
            for row in a:
                row[s], row[c] = row[c], row[s]
        pv = a[s][s]
        dirty = False
        for r2 in range(s + 1, m):
            if a[r2][s]:
                q = a[r2][s] // pv
                if q:
                    _row_sub(a[r2], a[s], q)
                if a[r2][s]:
                    dirty = True
        for c2 in range(s + 1, n):
            if a[s][c2]:
                q = a[s][c2] // pv
                if q:
                    for row in a:
                        if row[s]:
                            row[c2] -= q * row[s]
                if a[s][c2]:
                    dirty = True
        if not dirty:
            if a[s][s] < 0:
                a[s] = [-x for x in a[s]]
            return


def _min_abs_pivot(a, m, n, s):
    best = None
    best_val = None
    for r in range(s, m):
        row = a[r]
        for c in range(s, n):
            v = row[c]
            if v:
                av = abs(v)
                if best_val is None or av < best_val:
                    best, best_val = (r, c), av
                    if av == 1:
                        return best
    return best


# ---------------------------------------------------------------------------
# abelian invariants


def _factorint(n):
    out = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


@dataclass(frozen=True)
class AbelianInvariants:
    """Invariants of a finitely generated abelian group.

    ``torsion`` is the multiset (sorted tuple) of prime powers appearing in
    the elementary-divisor decomposition; equality of AbelianInvariants is
    isomorphism of the groups.
    """

    free_rank: int
    torsion: tuple

    @classmethod
    def from_divisors(cls, ngens, divisors):
        rank = ngens - len(divisors)
        torsion = []
        for d in divisors:
            if d in (0, 1):
                continue
            for p, e in _factorint(d).items():
                torsion.append(p ** e)
        return cls(rank, tuple(sorted(torsion)))

    def torsion_size(self):
        out = 1
        for q in self.torsion:
            out *= q
        return out

    def torsion_factorization(self):
        """Size of the torsion subgroup in prime factorization, e.g. '2^5'."""
        if not self.torsion:
            return "1"
        agg = {}
        for q in self.torsion:
            fac = _factorint(q)
            for p, e in fac.items():
                agg[p] = agg.get(p, 0) + e
        parts = []
        for p in sorted(agg):
            e = agg[p]
            parts.append("%d^%d" % (p, e) if e > 1 else str(p))
        return " ".join(parts)

    def has_p_torsion(self, p):
        return any(q % p == 0 for q in self.torsion)

    def __str__(self):
        if self.free_rank == 0 and not self.torsion:
            return "trivial"
        parts = []
        if self.free_rank:
            parts.append("Z^%d" % self.free_rank if self.free_rank > 1 else "Z")
        parts.extend("Z/%d" % q for q in self.torsion)
        return " x ".join(parts)


def abelian_invariants(relation_rows, num_generators):
    """Invariants of Z^num_generators / (row span of relation matrix)."""
    rows = [r for r in relation_rows if any(r)]
    if not rows:
        return AbelianInvariants(num_generators, ())
    if len(rows) * num_generators > 40000:
        return _sparse_abelian_invariants(rows, num_generators)
    return AbelianInvariants.from_divisors(num_generators, snf(rows))


def _sparse_abelian_invariants(rows, ncols):
    """Unit-pivot sparse elimination, then dense SNF on the residual core."""
    sparse = []
    for r in rows:
        d = {j: v for j, v in enumerate(r) if v}
        if d:
            sparse.append(d)
    by_col = {}
    for i, row in enumerate(sparse):
        for j in row:
            by_col.setdefault(j, set()).add(i)
    alive_rows = set(range(len(sparse)))
    alive_cols = set(by_col.keys())
    unit_pivots = 0

    def pick_unit():
        best = None
        best_cost = None
        for i in alive_rows:
            row = sparse[i]
            rn = len(row)
            for j, v in row.items():
                if v in (1, -1):
                    cost = (rn - 1) * (len(by_col[j]) - 1)
                    if best_cost is None or cost < best_cost:
                        best, best_cost = (i, j), cost
                        if cost == 0:
                            return best
        return best

    while True:
        piv = pick_unit()
        if piv is None:
            break
        pi, pj = piv
        prow = sparse[pi]
        pval = prow[pj]
        users = [i for i in by_col[pj] if i != pi and i in alive_rows]
        for i in users:
            row = sparse[i]
            factor = row[pj] * pval  # pval is +-1 so this is row[pj]/pval
            for j, v in prow.items():
                nv = row.get(j, 0) - factor * v
                if nv:
                    if j not in row:
                        by_col.setdefault(j, set()).add(i)
                    row[j] = nv
                else:
                    if j in row:
                        del row[j]
                        by_col[j].discard(i)
            if not row:
                alive_rows.discard(i)
        for j in prow:
            by_col[j].discard(pi)
        alive_rows.discard(pi)
        alive_cols.discard(pj)
        unit_pivots += 1

    # densify the remaining core
    col_list = sorted(alive_cols)
    col_index = {j: t for t, j in enumerate(col_list)}
    core = []
    for i in alive_rows:
        row = sparse[i]
        if not row:
            continue
        dense = [0] * len(col_list)
        for j, v in row.items():
            dense[col_index[j]] = v
        core.append(dense)
    core_divs = snf(core) if core and col_list else []
    divisors = [1] * unit_pivots + core_divs
    return AbelianInvariants.from_divisors(ncols, divisors)


__all__ = [
    "hnf", "snf", "abelian_invariants", "AbelianInvariants",
    "lattice_contains", "solve_integer_linear",
]
