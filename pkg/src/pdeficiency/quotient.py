"""Finite quotients of the free group through permutation images, plus a
catalog of small permutation groups and the homomorphism search over it.

Permutations are tuples of 0-based images; ``perm_mul(a, b)`` applies a
first and then b, so evaluating a word left to right is a homomorphism.
"""

import itertools
import math
from dataclasses import dataclass

from .presentation import FinitePresentation
from .words import Word

CLOSURE_LIMIT = 10_000


# -- permutation helpers ----------------------------------------------------


def perm_identity(n: int) -> tuple:
    return tuple(range(n))


def perm_mul(a: tuple, b: tuple) -> tuple:
    """a then b."""
    return tuple(b[x] for x in a)


def perm_inv(a: tuple) -> tuple:
    out = [0] * len(a)
    for i, x in enumerate(a):
        out[x] = i
    return tuple(out)


def perm_pow(a: tuple, e: int) -> tuple:
    if e < 0:
        a, e = perm_inv(a), -e
    result = perm_identity(len(a))
    base = a
    while e:
        if e & 1:
            result = perm_mul(result, base)
        base = perm_mul(base, base)
        e >>= 1
    return result


def perm_cycles(a: tuple, include_fixed: bool = False) -> list:
    """Disjoint cycles, each starting at its least point, ordered by it."""
    seen = [False] * len(a)
    cycles = []
    for start in range(len(a)):
        if seen[start]:
            continue
        cyc = []
        x = start
        while not seen[x]:
            seen[x] = True
            cyc.append(x)
            x = a[x]
        if len(cyc) > 1 or include_fixed:
            cycles.append(tuple(cyc))
    return cycles


def perm_order(a: tuple) -> int:
    order = 1
    for cyc in perm_cycles(a):
        order = order * len(cyc) // math.gcd(order, len(cyc))
    return order


def parse_cycles(text: str) -> list:
    """Cycle notation with 1-based points, e.g. ``(1 2)(3 4)``.

    Returns a list of cycles as 0-based point tuples; ``()``, ``1`` and
    ``id`` all denote the identity.
    """
    text = text.strip()
    if text in ("()", "id", "1", ""):
        return []
    if not text.startswith("("):
        raise ValueError(f"invalid permutation {text!r}: expected cycle notation")
    cycles = []
    seen = set()
    rest = text
    while rest:
        rest = rest.lstrip()
        if not rest:
            break
        if not rest.startswith("("):
            raise ValueError(f"invalid permutation {text!r}")
        close = rest.find(")")
        if close < 0:
            raise ValueError(f"unbalanced parenthesis in {text!r}")
        body = rest[1:close].replace(",", " ").split()
        rest = rest[close + 1:]
        if not body:
            continue
        points = []
        for item in body:
            if not item.isdigit() or int(item) < 1:
                raise ValueError(f"invalid point {item!r} in {text!r}")
            pt = int(item) - 1
            if pt in seen:
                raise ValueError(f"point {item} repeated in {text!r}")
            seen.add(pt)
            points.append(pt)
        if len(points) > 1:
            cycles.append(tuple(points))
    return cycles


def cycles_to_perm(cycles, degree: int) -> tuple:
    out = list(range(degree))
    for cyc in cycles:
        if any(pt >= degree for pt in cyc):
            raise ValueError(f"cycle {cyc} exceeds degree {degree}")
        for i, pt in enumerate(cyc):
            out[pt] = cyc[(i + 1) % len(cyc)]
    return tuple(out)


def parse_perm(text: str, degree: int) -> tuple:
    return cycles_to_perm(parse_cycles(text), degree)


def format_perm(a: tuple) -> str:
    cycles = perm_cycles(a)
    if not cycles:
        return "()"
    return "".join("(" + " ".join(str(x + 1) for x in cyc) + ")" for cyc in cycles)


def _validate_perm(p, degree):
    if len(p) != degree or sorted(p) != list(range(degree)):
        raise ValueError(f"{p!r} is not a permutation of {degree} points")


# -- finite quotients --------------------------------------------------------


class FiniteQuotient:
    """Homomorphism from the free group into Sym(degree), one permutation
    image per generator.  The image group is the closure of the images; its
    elements double as the cosets of the kernel under the regular action.
    """

    __slots__ = ("degree", "images", "_elements", "_tables")

    def __init__(self, images):
        images = tuple(tuple(p) for p in images)
        if not images:
            raise ValueError("a quotient needs at least one generator image")
        degree = len(images[0])
        for p in images:
            _validate_perm(p, degree)
        self.degree = degree
        self.images = images
        self._elements = None
        self._tables = None

    @property
    def n_gens(self) -> int:
        return len(self.images)

    @property
    def elements(self) -> tuple:
        """Image-group elements in breadth-first order from the identity."""
        if self._elements is None:
            identity = perm_identity(self.degree)
            order = [identity]
            index = {identity: 0}
            queue = [identity]
            while queue:
                h = queue.pop(0)
                for img in self.images:
                    nxt = perm_mul(h, img)
                    if nxt not in index:
                        if len(order) >= CLOSURE_LIMIT:
                            raise ValueError(
                                f"group closure exceeds limit {CLOSURE_LIMIT}"
                            )
                        index[nxt] = len(order)
                        order.append(nxt)
                        queue.append(nxt)
            self._elements = tuple(order)
        return self._elements

    @property
    def order(self) -> int:
        return len(self.elements)

    def regular_tables(self) -> tuple:
        """Per-generator action on the image-group elements by right
        multiplication, with the breadth-first numbering; this is the coset
        table of the kernel and a canonical invariant of it."""
        if self._tables is None:
            elements = self.elements
            index = {h: i for i, h in enumerate(elements)}
            self._tables = tuple(
                tuple(index[perm_mul(h, img)] for h in elements)
                for img in self.images
            )
        return self._tables

    def kernel_key(self) -> tuple:
        return (self.order, self.regular_tables())

    def __repr__(self) -> str:
        imgs = ", ".join(format_perm(p) for p in self.images)
        return f"FiniteQuotient(degree={self.degree}, images=[{imgs}])"


def evaluate(q: FiniteQuotient, w: Word) -> tuple:
    """Image of a word under the quotient homomorphism."""
    if w.n_gens != q.n_gens:
        raise ValueError(
            f"alphabet mismatch: word has {w.n_gens} generators, quotient {q.n_gens}"
        )
    result = perm_identity(q.degree)
    for g, e in w.runs:
        result = perm_mul(result, perm_pow(q.images[g], e))
    return result


def is_quotient_of(q: FiniteQuotient, pres: FinitePresentation) -> bool:
    """True iff every relator evaluates to the identity permutation."""
    if pres.n_gens != q.n_gens:
        raise ValueError(
            f"alphabet mismatch: presentation has {pres.n_gens} generators, "
            f"quotient {q.n_gens}"
        )
    identity = perm_identity(q.degree)
    return all(evaluate(q, r) == identity for r in pres.relators)


def order_of_image(q: FiniteQuotient, w: Word) -> int:
    return perm_order(evaluate(q, w))


def kernel_index(q: FiniteQuotient, pres: FinitePresentation) -> int:
    """Index of the kernel of free group -> image group; equals the image
    group order."""
    if not is_quotient_of(q, pres):
        raise ValueError("relators are not killed by the quotient")
    return q.order


# -- catalog of small groups -------------------------------------------------


@dataclass(frozen=True)
class CatalogGroup:
    name: str
    degree: int
    gens: tuple
    order: int

    def __post_init__(self):
        for p in self.gens:
            _validate_perm(p, self.degree)
        actual = FiniteQuotient(self.gens).order
        if actual != self.order:
            raise ValueError(
                f"catalog group {self.name}: closure order {actual} != declared {self.order}"
            )

    def elements(self) -> tuple:
        return FiniteQuotient(self.gens).elements


@dataclass(frozen=True)
class GroupCatalog:
    groups: tuple

    def up_to(self, max_order: int) -> "GroupCatalog":
        return GroupCatalog(tuple(g for g in self.groups if g.order <= max_order))

    def names(self) -> tuple:
        return tuple(g.name for g in self.groups)


def _cycle(n: int) -> tuple:
    return tuple((i + 1) % n for i in range(n))


def default_catalog() -> GroupCatalog:
    """Cyclic C_2..C_12, elementary abelian C_pxC_p for p in {2, 3, 5},
    dihedral D_4 and D_5, symmetric S_3 and S_4, alternating A_4."""
    entries = []
    for n in range(2, 13):
        entries.append(CatalogGroup(f"C{n}", n, (_cycle(n),), n))
    for p in (2, 3, 5):
        first = cycles_to_perm([tuple(range(p))], 2 * p)
        second = cycles_to_perm([tuple(range(p, 2 * p))], 2 * p)
        entries.append(CatalogGroup(f"C{p}xC{p}", 2 * p, (first, second), p * p))
    entries.append(
        CatalogGroup("D4", 4, (cycles_to_perm([(0, 1, 2, 3)], 4),
                               cycles_to_perm([(1, 3)], 4)), 8)
    )
    entries.append(
        CatalogGroup("D5", 5, (cycles_to_perm([(0, 1, 2, 3, 4)], 5),
                               cycles_to_perm([(1, 4), (2, 3)], 5)), 10)
    )
    entries.append(
        CatalogGroup("S3", 3, (cycles_to_perm([(0, 1)], 3),
                               cycles_to_perm([(0, 1, 2)], 3)), 6)
    )
    entries.append(
        CatalogGroup("S4", 4, (cycles_to_perm([(0, 1)], 4),
                               cycles_to_perm([(0, 1, 2, 3)], 4)), 24)
    )
    entries.append(
        CatalogGroup("A4", 4, (cycles_to_perm([(0, 1, 2)], 4),
                               cycles_to_perm([(1, 2, 3)], 4)), 12)
    )
    entries.sort(key=lambda g: (g.order, g.name))
    return GroupCatalog(tuple(entries))


def parse_catalog_manifest(text: str) -> GroupCatalog:
    """One group per line: ``name degree perm1 perm2 ...`` with cycle
    notation, e.g. ``S3 3 (1 2) (1 2 3)``.  Blank lines and lines starting
    with '#' are ignored."""
    entries = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split(None, 2)
        if len(parts) < 3:
            raise ValueError(f"manifest line {lineno}: expected 'name degree perms...'")
        name, degree_text, perm_text = parts
        if not degree_text.isdigit() or int(degree_text) < 1:
            raise ValueError(f"manifest line {lineno}: invalid degree {degree_text!r}")
        degree = int(degree_text)
        gen_texts = [t for t in _split_perm_list(perm_text) if t]
        if not gen_texts:
            raise ValueError(f"manifest line {lineno}: no generators")
        gens = tuple(parse_perm(t, degree) for t in gen_texts)
        order = FiniteQuotient(gens).order
        entries.append(CatalogGroup(name, degree, gens, order))
    return GroupCatalog(tuple(entries))


def _split_perm_list(text: str) -> list:
    """Split e.g. '(1 2)(3 4) (1 2 3)' into whole-permutation chunks."""
    chunks = []
    current = ""
    depth = 0
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise ValueError(f"unbalanced parenthesis in {text!r}")
        if ch.isspace() and depth == 0:
            if current:
                chunks.append(current)
                current = ""
        else:
            current += ch
    if current:
        chunks.append(current)
    return chunks


# -- quotient search ---------------------------------------------------------


@dataclass
class SearchBudget:
    """Caps for the homomorphism search; exhaustion is reported, not fatal."""

    max_order: int = 24
    max_assignments: int = 10**6
    assignments_used: int = 0
    exhausted: bool = False

    def spend(self) -> bool:
        if self.assignments_used >= self.max_assignments:
            self.exhausted = True
            return False
        self.assignments_used += 1
        return True


def enumerate_quotients(
    pres: FinitePresentation,
    catalog: GroupCatalog = None,
    max_order: int = None,
    budget: SearchBudget = None,
):
    """Yield quotients of pres over the catalog, deduplicated by kernel.

    Every assignment of catalog-group elements to the generators that kills
    all relators is considered; two assignments are the same kernel exactly
    when their regular coset tables agree after breadth-first relabeling,
    so the deduplication is exact.  Order of results is deterministic:
    catalog order, then assignment order over each group's element list.
    """
    if catalog is None:
        catalog = default_catalog()
    if budget is None:
        budget = SearchBudget()
    if max_order is None:
        max_order = budget.max_order
    if max_order < 2:
        raise ValueError("max_order must be at least 2")
    seen = set()
    for grp in catalog.groups:
        if grp.order > max_order:
            continue
        elements = grp.elements()
        for assignment in itertools.product(elements, repeat=pres.n_gens):
            if not budget.spend():
                return
            q = FiniteQuotient(assignment)
            if not is_quotient_of(q, pres):
                continue
            key = q.kernel_key()
            if key in seen:
                continue
            seen.add(key)
            yield q
