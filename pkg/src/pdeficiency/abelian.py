"""Integer matrices, Smith normal form, abelian invariants and the
abelianized deficiency bounds.

All arithmetic is over arbitrary-precision Python integers; no floating
point is involved anywhere.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

from .presentation import FinitePresentation
from .words import Valuation, nu_p_int, require_prime


class IntMatrix:
    """Immutable integer matrix stored as a tuple of row tuples."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, data, cols: int = None):
        data = tuple(tuple(int(x) for x in row) for row in data)
        rows = len(data)
        if rows:
            cols = len(data[0])
            if any(len(row) != cols for row in data):
                raise ValueError("ragged matrix rows")
        else:
            cols = 0 if cols is None else cols
        self.rows = rows
        self.cols = cols
        self.data = data

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)], cols=n)

    def at(self, i: int, j: int) -> int:
        return self.data[i][j]

    def mul(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("matrix dimensions do not match")
        out = [
            [
                sum(self.data[i][k] * other.data[k][j] for k in range(self.cols))
                for j in range(other.cols)
            ]
            for i in range(self.rows)
        ]
        return IntMatrix(out, cols=other.cols)

    def diagonal(self) -> tuple:
        return tuple(self.data[i][i] for i in range(min(self.rows, self.cols)))

    def det(self) -> int:
        """Exact determinant by fraction-free (Bareiss) elimination."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        a = [list(row) for row in self.data]
        sign = 1
        prev = 1
        for k in range(n - 1):
            if a[k][k] == 0:
                pivot = next((i for i in range(k + 1, n) if a[i][k]), None)
                if pivot is None:
                    return 0
                a[k], a[pivot] = a[pivot], a[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
                a[i][k] = 0
            prev = a[k][k]
        return sign * a[n - 1][n - 1]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, IntMatrix)
            and self.cols == other.cols
            and self.data == other.data
        )

    def __hash__(self) -> int:
        return hash((self.data, self.cols))

    def __repr__(self) -> str:
        return f"IntMatrix({[list(r) for r in self.data]!r})"


@dataclass(frozen=True)
class SnfResult:
    """S = U * A * V with U, V unimodular and S diagonal with a divisibility
    chain d_1 | d_2 | ... of nonnegative entries."""

    s: IntMatrix
    u: IntMatrix
    v: IntMatrix

    @property
    def diagonal(self) -> tuple:
        return self.s.diagonal()


def smith_normal_form(mat: IntMatrix) -> SnfResult:
    """Diagonalize by elementary row/column operations, smallest-pivot
    strategy with a full divisibility cleanup pass per step."""
    m, n = mat.rows, mat.cols
    s = [list(row) for row in mat.data]
    u = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    v = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def row_swap(i, j):
        s[i], s[j] = s[j], s[i]
        u[i], u[j] = u[j], u[i]

    def row_add(i, j, c):  # row i += c * row j, mirrored into U
        si, sj = s[i], s[j]
        for t in range(n):
            si[t] += c * sj[t]
        ui, uj = u[i], u[j]
        for t in range(m):
            ui[t] += c * uj[t]

    def row_negate(i):
        s[i] = [-x for x in s[i]]
        u[i] = [-x for x in u[i]]

    def col_swap(i, j):
        for r in range(m):
            s[r][i], s[r][j] = s[r][j], s[r][i]
        for r in range(n):
            v[r][i], v[r][j] = v[r][j], v[r][i]

    def col_add(i, j, c):  # col i += c * col j, mirrored into V
        for r in range(m):
            s[r][i] += c * s[r][j]
        for r in range(n):
            v[r][i] += c * v[r][j]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                val = s[i][j]
                if val and (best is None or abs(val) < abs(s[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        if best[0] != t:
            row_swap(t, best[0])
        if best[1] != t:
            col_swap(t, best[1])
        if s[t][t] < 0:
            row_negate(t)
        pivot = s[t][t]

        remainder = False
        for i in range(t + 1, m):
            if s[i][t]:
                row_add(i, t, -(s[i][t] // pivot))
                remainder = remainder or bool(s[i][t])
        for j in range(t + 1, n):
            if s[t][j]:
                col_add(j, t, -(s[t][j] // pivot))
                remainder = remainder or bool(s[t][j])
        if remainder:
            continue  # a strictly smaller pivot appeared; redo this step

        # pivot must divide everything that remains
        offender = None
        for i in range(t + 1, m):
            if any(s[i][j] % pivot for j in range(t + 1, n)):
                offender = i
                break
        if offender is not None:
            row_add(t, offender, 1)
            continue
        t += 1

    return SnfResult(
        s=IntMatrix(s, cols=n),
        u=IntMatrix(u, cols=m),
        v=IntMatrix(v, cols=n),
    )


# -- abelian invariants ----------------------------------------------------


@dataclass(frozen=True)
class AbelianInvariants:
    """Free rank plus the elementary divisor chain d_1 | d_2 | ..., each >= 2."""

    rank: int
    divisors: tuple

    def __post_init__(self):
        if self.rank < 0:
            raise ValueError("rank must be nonnegative")
        object.__setattr__(self, "divisors", tuple(int(d) for d in self.divisors))
        prev = None
        for d in self.divisors:
            if d < 2:
                raise ValueError(f"divisor {d} is not >= 2")
            if prev is not None and d % prev:
                raise ValueError(f"divisibility chain broken: {prev} does not divide {d}")
            prev = d

    @classmethod
    def from_cyclic_factors(cls, orders, rank: int = 0) -> "AbelianInvariants":
        """Canonical chain of an arbitrary direct sum of cyclic groups."""
        orders = [int(e) for e in orders if int(e) != 1]
        if any(e < 1 for e in orders):
            raise ValueError("cyclic factor orders must be positive")
        primes = set()
        for e in orders:
            primes.update(_prime_factors(e))
        per_prime = {
            p: sorted((nu_p_int(e, p) for e in orders if e % p == 0), reverse=True)
            for p in primes
        }
        length = max((len(v) for v in per_prime.values()), default=0)
        chain = []
        for j in range(length):  # largest divisor first
            d = 1
            for p, exps in per_prime.items():
                if j < len(exps):
                    d *= p ** exps[j]
            chain.append(d)
        return cls(rank, tuple(reversed(chain)))


def _prime_factors(n: int) -> set:
    out = set()
    d = 2
    while d * d <= n:
        while n % d == 0:
            out.add(d)
            n //= d
        d += 1
    if n > 1:
        out.add(n)
    return out


def exponent_matrix(pres: FinitePresentation) -> IntMatrix:
    """The |X| x |R| matrix whose column j is the exponent-sum vector of
    relator j."""
    cols = [r.exponent_sums() for r in pres.relators]
    data = [[col[i] for col in cols] for i in range(pres.n_gens)]
    return IntMatrix(data, cols=len(cols))


def abelian_invariants(pres: FinitePresentation) -> AbelianInvariants:
    diag = smith_normal_form(exponent_matrix(pres)).diagonal
    nonzero = [d for d in diag if d]
    rank = pres.n_gens - len(nonzero)
    return AbelianInvariants(rank, tuple(d for d in nonzero if d > 1))


def nu_p_vector(vec, p: int) -> Valuation:
    """Largest k with p^k dividing every coordinate; infinite on the zero
    vector."""
    require_prime(p)
    g = 0
    for x in vec:
        g = math.gcd(g, int(x))
    if g == 0:
        return Valuation.infinite()
    return Valuation.finite(nu_p_int(g, p))


def abelian_p_deficiency_presentation(pres: FinitePresentation, p: int) -> Fraction:
    """Deficiency with valuations taken in the free abelian group of
    exponent vectors; an upper bound for the presentation's p-deficiency."""
    require_prime(p)
    total = Fraction(pres.n_gens - 1)
    for r in pres.relators:
        total -= nu_p_vector(r.exponent_sums(), p).weight(p)
    return total


def abelian_p_deficiency_group(inv: AbelianInvariants, p: int) -> Fraction:
    """r - 1 + sum over divisors of (1 - p^-nu_p(e_i)); the supremum over
    all abelian presentations of the group."""
    require_prime(p)
    total = Fraction(inv.rank - 1)
    for e in inv.divisors:
        total += 1 - Fraction(1, p ** nu_p_int(e, p))
    return total


def upper_bound_de(pres: FinitePresentation, p: int) -> Fraction:
    """Upper bound for the p-deficiency of the group presented by pres,
    computed from its abelianization."""
    return abelian_p_deficiency_group(abelian_invariants(pres), p)


def d_p(inv: AbelianInvariants, p: int) -> int:
    """Dimension over F_p of G / (commutators and p-th powers)."""
    require_prime(p)
    return inv.rank + sum(1 for d in inv.divisors if d % p == 0)
