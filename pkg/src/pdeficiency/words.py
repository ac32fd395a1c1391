"""Free-group word arithmetic: reduction, conjugation, maximal roots and
p-valuations.

Words are stored in run-length form, as a tuple of (generator index, nonzero
exponent) pairs in which adjacent runs carry distinct generators.  The
constructor performs free reduction, so every Word is canonical, and all
values here are immutable; every operation is a pure function.
"""

from dataclasses import dataclass
from fractions import Fraction


def is_prime(p) -> bool:
    if not isinstance(p, int) or isinstance(p, bool) or p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def require_prime(p) -> None:
    if not is_prime(p):
        raise ValueError(f"p must be a prime number, got {p!r}")


def nu_p_int(n: int, p: int) -> int:
    """Exponent of the prime p in the nonzero integer n."""
    require_prime(p)
    if n == 0:
        raise ValueError("p-valuation of 0 is undefined")
    n = abs(n)
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


class Word:
    """Freely reduced word over a fixed alphabet of ``n_gens`` generators."""

    __slots__ = ("runs", "n_gens")

    def __init__(self, runs, n_gens: int):
        if n_gens < 0:
            raise ValueError("alphabet size must be nonnegative")
        stack = []
        for g, e in runs:
            if not isinstance(g, int) or not 0 <= g < n_gens:
                raise ValueError(
                    f"generator index {g!r} invalid for alphabet of size {n_gens}"
                )
            if e == 0:
                continue
            if stack and stack[-1][0] == g:
                merged = stack[-1][1] + e
                stack.pop()
                if merged:
                    stack.append((g, merged))
            else:
                stack.append((g, e))
        self.runs = tuple(stack)
        self.n_gens = n_gens

    @classmethod
    def identity(cls, n_gens: int) -> "Word":
        return cls((), n_gens)

    @classmethod
    def generator(cls, g: int, n_gens: int, power: int = 1) -> "Word":
        return cls(((g, power),), n_gens)

    @classmethod
    def from_letters(cls, letters, n_gens: int) -> "Word":
        """Build (and freely reduce) a word from signed 1-based letters.

        Letter +k is the k-th generator, -k its inverse.
        """
        runs = []
        for lt in letters:
            if lt == 0:
                raise ValueError("letter 0 is not a generator")
            runs.append((abs(lt) - 1, 1 if lt > 0 else -1))
        return cls(runs, n_gens)

    # -- basic structure ---------------------------------------------------

    @property
    def is_identity(self) -> bool:
        return not self.runs

    def __len__(self) -> int:
        return sum(abs(e) for _, e in self.runs)

    def letters(self) -> list:
        """Signed 1-based letter sequence of the reduced word."""
        out = []
        for g, e in self.runs:
            lt = g + 1 if e > 0 else -(g + 1)
            out.extend([lt] * abs(e))
        return out

    def exponent_sums(self) -> tuple:
        """Image under the abelianization map, one integer per generator."""
        sums = [0] * self.n_gens
        for g, e in self.runs:
            sums[g] += e
        return tuple(sums)

    # -- group operations --------------------------------------------------

    def _same_alphabet(self, other: "Word") -> None:
        if self.n_gens != other.n_gens:
            raise ValueError(
                f"words over different alphabets ({self.n_gens} vs {other.n_gens})"
            )

    def __mul__(self, other: "Word") -> "Word":
        self._same_alphabet(other)
        return Word(self.runs + other.runs, self.n_gens)

    def inverse(self) -> "Word":
        return Word(tuple((g, -e) for g, e in reversed(self.runs)), self.n_gens)

    __invert__ = inverse

    def __pow__(self, n: int) -> "Word":
        if n == 0 or self.is_identity:
            return Word.identity(self.n_gens)
        if n < 0:
            return self.inverse() ** (-n)
        if len(self.runs) == 1:
            g, e = self.runs[0]
            return Word(((g, e * n),), self.n_gens)
        # w = c u c^-1 with u cyclically reduced, so w^n = c u^n c^-1 and the
        # n-fold run concatenation of u needs no cancellation.
        conj, core = self.cyclic_reduce()
        powered = Word(core.runs * n, self.n_gens)
        return conj * powered * conj.inverse()

    def conjugated_by(self, a: "Word") -> "Word":
        """a * self * a^-1."""
        return a * self * a.inverse()

    def cyclic_reduce(self) -> tuple:
        """Split self = conj * core * conj^-1 with core cyclically reduced."""
        runs = list(self.runs)
        conj = []
        while len(runs) >= 2:
            g1, e1 = runs[0]
            g2, e2 = runs[-1]
            if g1 != g2 or (e1 > 0) == (e2 > 0):
                break
            s = 1 if e1 > 0 else -1
            t = min(abs(e1), abs(e2))
            conj.append((g1, s * t))
            runs[0] = (g1, e1 - s * t)
            runs[-1] = (g2, e2 + s * t)
            if runs[-1][1] == 0:
                runs.pop()
            if runs[0][1] == 0:
                runs.pop(0)
        return Word(conj, self.n_gens), Word(runs, self.n_gens)

    # -- value semantics ---------------------------------------------------

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Word)
            and self.n_gens == other.n_gens
            and self.runs == other.runs
        )

    def __hash__(self) -> int:
        return hash((self.runs, self.n_gens))

    def __repr__(self) -> str:
        if self.is_identity:
            return f"Word(1, n_gens={self.n_gens})"
        body = "*".join(f"g{g}" if e == 1 else f"g{g}^{e}" for g, e in self.runs)
        return f"Word({body}, n_gens={self.n_gens})"


@dataclass(frozen=True)
class Valuation:
    """p-valuation of a word: a finite natural number, or infinite for the
    identity.  The weight p^-k is an exact rational; the identity weighs 0.
    """

    k: object  # int, or None for infinite

    @classmethod
    def finite(cls, k: int) -> "Valuation":
        if k < 0:
            raise ValueError("valuation must be nonnegative")
        return cls(k)

    @classmethod
    def infinite(cls) -> "Valuation":
        return cls(None)

    @property
    def is_infinite(self) -> bool:
        return self.k is None

    def weight(self, p: int) -> Fraction:
        require_prime(p)
        if self.k is None:
            return Fraction(0)
        return Fraction(1, p**self.k)


@dataclass(frozen=True)
class RootDecomposition:
    """w = conjugator * root^exponent * conjugator^-1 with the exponent
    maximal; the root is cyclically reduced and not a proper power."""

    conjugator: Word
    root: Word
    exponent: int

    def reassemble(self) -> Word:
        return self.conjugator * self.root**self.exponent * self.conjugator.inverse()


def _divisors(n: int) -> list:
    return [d for d in range(1, n + 1) if n % d == 0]


def maximal_root(w: Word) -> RootDecomposition:
    """Maximal-exponent root of a non-identity word.

    After cyclic reduction the core is a literal power of its shortest
    period, so the smallest period dividing the core length gives the
    primitive root and the largest exponent.
    """
    if w.is_identity:
        raise ValueError("no root of trivial word")
    conj, core = w.cyclic_reduce()
    letters = core.letters()
    length = len(letters)
    for d in _divisors(length):
        if all(letters[i] == letters[i % d] for i in range(d, length)):
            root = Word.from_letters(letters[:d], w.n_gens)
            return RootDecomposition(conj, root, length // d)
    raise AssertionError("unreachable: every word has period = its length")


def nu_p(w: Word, p: int) -> Valuation:
    """Largest k such that w is a p^k-th power; infinite for the identity."""
    require_prime(p)
    if w.is_identity:
        return Valuation.infinite()
    m = maximal_root(w).exponent
    return Valuation.finite(nu_p_int(m, p))


def p_prime_root(w: Word, p: int) -> tuple:
    """Shortest v with v^n = w and p not dividing n; returns (v, n).

    With w = c u^m c^-1 maximal, v = c u^(p^nu_p(m)) c^-1 and n = m / p^nu_p(m).
    """
    require_prime(p)
    if w.is_identity:
        raise ValueError("no root of trivial word")
    rd = maximal_root(w)
    k = nu_p_int(rd.exponent, p)
    n = rd.exponent // p**k
    root = rd.conjugator * rd.root ** (p**k) * rd.conjugator.inverse()
    return root, n
