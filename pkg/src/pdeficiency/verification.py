"""Built-in verification suite: named checks with exact expected values.

Every check is deterministic (fixed seeds, fixed budgets) and uses exact
rational arithmetic; randomized checks state their instance counts in the
summary.  The CLI ``verify`` command and the acceptance tests both run
these.
"""

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .abelian import (
    AbelianInvariants,
    IntMatrix,
    abelian_invariants,
    abelian_p_deficiency_group,
    abelian_p_deficiency_presentation,
    smith_normal_form,
    upper_bound_de,
)
from .fuchsian import (
    FuchsianSignature,
    classify,
    de_exact,
    de_standard,
    kernel_construction,
    standard_presentation,
    volume,
)
from .invariants import chi_p_estimate, find_power_witness, quotient_dp_drop
from .presentation import FinitePresentation, p_deficiency, parse_presentation
from .quotient import (
    FiniteQuotient,
    SearchBudget,
    default_catalog,
    enumerate_quotients,
    evaluate,
    kernel_index,
    perm_identity,
    perm_mul,
    perm_order,
)
from .rewrite import (
    centralizer_index,
    conjugate_class_reps,
    coset_table,
    p_size_bound,
    rewrite_word,
    schreier,
    subgroup_presentation,
    supermultiplicity_check,
)
from .words import Word, maximal_root, nu_p, nu_p_int, p_prime_root


class CheckFailure(AssertionError):
    pass


def _ensure(cond, message: str):
    if not cond:
        raise CheckFailure(message)


def _rat(q: Fraction) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class CheckOutcome:
    name: str
    passed: bool
    summary: str
    details: dict


# -- shared generators -------------------------------------------------------


def _random_reduced_letters(rng, n_gens: int, length: int) -> list:
    letters = []
    for _ in range(length):
        while True:
            g = rng.randrange(1, n_gens + 1)
            lt = g if rng.random() < 0.5 else -g
            if not letters or letters[-1] != -lt:
                letters.append(lt)
                break
    return letters


def _random_word(rng, n_gens: int, length: int) -> Word:
    return Word.from_letters(_random_reduced_letters(rng, n_gens, length), n_gens)


def _random_presentation(rng, max_gens=3, max_relators=4, max_len=12,
                         min_relators=1) -> FinitePresentation:
    n = rng.randint(1, max_gens)
    k = rng.randint(min_relators, max_relators)
    names = ("x", "y", "z")[:n]
    relators = [_random_word(rng, n, rng.randint(1, max_len)) for _ in range(k)]
    return FinitePresentation(names, relators)


def _all_reduced_letter_words(n_gens: int, max_len: int) -> list:
    alphabet = [lt for g in range(1, n_gens + 1) for lt in (g, -g)]
    words = [[]]
    frontier = [[]]
    for _ in range(max_len):
        new = []
        for w in frontier:
            last = w[-1] if w else 0
            for lt in alphabet:
                if lt != -last:
                    new.append(w + [lt])
        words.extend(new)
        frontier = new
    return words


# -- independent oracles -----------------------------------------------------


def _oracle_nu(letters, p: int) -> int:
    """Valuation by repeated literal p-th root extraction on the cyclic core."""
    core = list(letters)
    while len(core) >= 2 and core[0] == -core[-1]:
        core = core[1:-1]
    k = 0
    while core:
        length = len(core)
        if length % p:
            break
        d = length // p
        if core == core[:d] * p:
            core = core[:d]
            k += 1
        else:
            break
    return k


def _oracle_kernel_conjugate(q: FiniteQuotient, a: Word, b: Word) -> bool:
    """Conjugacy inside the kernel, decided from first principles: align the
    cyclic words over all rotations, then test one conjugator against the
    image of the centralizer generator."""
    ga, ca = a.cyclic_reduce()
    gb, cb = b.cyclic_reduce()
    la, lb = ca.letters(), cb.letters()
    if len(la) != len(lb):
        return False
    length = len(la)
    d0 = next(
        d for d in range(1, length + 1)
        if length % d == 0 and la == la[:d] * (length // d)
    )
    root = ga * Word.from_letters(la[:d0], a.n_gens) * ga.inverse()
    u = evaluate(q, root)
    identity = perm_identity(q.degree)
    cyclic = {identity}
    power = u
    while power != identity:
        cyclic.add(power)
        power = perm_mul(power, u)
    for j in range(length):
        if la[j:] + la[:j] == lb:
            prefix = Word.from_letters(la[:j], a.n_gens)
            h0 = gb * prefix.inverse() * ga.inverse()
            return evaluate(q, h0) in cyclic
    return False


def _oracle_class_count(q: FiniteQuotient, conjugates) -> int:
    reps = []
    for w in conjugates:
        if not any(_oracle_kernel_conjugate(q, w, r) for r in reps):
            reps.append(w)
    return len(reps)


def _gcd_of_minors(mat: IntMatrix, k: int) -> int:
    g = 0
    for rows in combinations(range(mat.rows), k):
        for cols in combinations(range(mat.cols), k):
            sub = IntMatrix([[mat.at(i, j) for j in cols] for i in rows])
            g = math.gcd(g, abs(sub.det()))
    return g


# -- the criteria ------------------------------------------------------------


def check_intro_examples():
    """Zero 2-deficiency examples, with the abelianization squeeze where it
    applies."""
    dinf = parse_presentation("< x, y | x^2, y^2 >")
    de_dinf = p_deficiency(dinf, 2)
    ub_dinf = upper_bound_de(dinf, 2)
    _ensure(de_dinf == 0, f"de_2 of the infinite dihedral presentation is {de_dinf}")
    _ensure(ub_dinf == 0, f"abelian upper bound for it is {ub_dinf}")

    p244 = parse_presentation("< x, y, z | x^2 = y^4 = z^4 = x*y*z = 1 >")
    de_244 = p_deficiency(p244, 2)
    ab_pres = abelian_p_deficiency_presentation(p244, 2)
    ub_244 = upper_bound_de(p244, 2)
    _ensure(de_244 == 0, f"de_2 of the (2,4,4) presentation is {de_244}")
    _ensure(ab_pres == 0, f"abelian presentation-level value is {ab_pres}")
    # The abelianization here is C_2 + C_4, so the group-level bound is 1/4;
    # the squeeze pins the group value only for the dihedral example.
    _ensure(ub_244 == Fraction(1, 4), f"abelian group bound is {ub_244}")
    _ensure(abelian_invariants(p244) == AbelianInvariants(0, (2, 4)),
            "unexpected abelian invariants")
    return (
        "dihedral: de_2 = 0 squeezed exactly; (2,4,4): de_2 = 0, group value in [0, 1/4]",
        {
            "dihedral_de": _rat(de_dinf),
            "dihedral_upper": _rat(ub_dinf),
            "244_de": _rat(de_244),
            "244_upper": _rat(ub_244),
        },
    )


def check_free_products():
    """Free products of cyclic groups: presentation value meets the
    abelianized group value, 200 random tuples."""
    rng = random.Random(0x5EED01)
    trials = 200
    for _ in range(trials):
        s = rng.randint(0, 4)
        r = rng.randint(0, 3)
        if s + r == 0:
            s = 1
        orders = [rng.randint(1, 36) for _ in range(s)]
        p = rng.choice((2, 3, 5))
        names = [f"x{i}" for i in range(s)] + [f"y{i}" for i in range(r)]
        relators = [
            Word.generator(i, s + r, e) for i, e in enumerate(orders)
        ]
        pres = FinitePresentation(names, relators)
        lower = p_deficiency(pres, p)
        group_value = abelian_p_deficiency_group(
            AbelianInvariants.from_cyclic_factors(orders, r), p
        )
        upper = upper_bound_de(pres, p)
        _ensure(
            lower == group_value == upper,
            f"mismatch for factors {orders}, rank {r}, p={p}: "
            f"{lower} / {group_value} / {upper}",
        )
    return (f"{trials} random cyclic free products: lower bound = group value = upper bound",
            {"trials": trials})


def check_supermult():
    """Subgroup deficiency is at least index times the original, over random
    presentations and catalog quotients."""
    rng = random.Random(0x5EED02)
    catalog = default_catalog().up_to(12)
    instances = 0
    presentations = 0
    target = 100
    while instances < target and presentations < 600:
        presentations += 1
        pres = _random_presentation(rng)
        p = rng.choice((2, 3, 5))
        budget = SearchBudget(max_order=12, max_assignments=1500)
        found = 0
        for q in enumerate_quotients(pres, catalog, 12, budget):
            if q.order == 1:
                continue
            report = supermultiplicity_check(pres, q, p)
            _ensure(
                report.holds,
                f"supermultiplicity failed for {pres.to_text()} at p={p}, "
                f"index {report.index}: {report.de_sub} < {report.scaled}",
            )
            instances += 1
            found += 1
            if found >= 2 or instances >= target:
                break
    _ensure(instances >= target, f"only {instances} instances found")
    return (f"{instances} random (presentation, quotient) instances hold exactly",
            {"instances": instances, "presentations_drawn": presentations})


def check_conjugacy():
    """Conjugate-class splitting: class count d/k against a rotation-based
    conjugacy oracle, and the valuation transfer inequality, exactly."""
    rng = random.Random(0x5EED03)
    free2 = FinitePresentation(("x", "y"), ())
    catalog = default_catalog().up_to(6)
    quotients = [
        q for q in enumerate_quotients(free2, catalog, 6, SearchBudget(6, 10_000))
        if q.order > 1
    ][:12]
    _ensure(len(quotients) >= 6, "too few small quotients found")
    instances = 0
    for q in quotients:
        identity = perm_identity(q.degree)
        sd = schreier(coset_table(q, free2))
        d = q.order
        words = []
        attempts = 0
        while len(words) < 5 and attempts < 400:
            attempts += 1
            base = _random_word(rng, 2, rng.randint(1, 4))
            if rng.random() < 0.5:
                w = base ** rng.randint(1, 4)
            else:
                w = base ** perm_order(evaluate(q, base))
            if w.is_identity or len(w) > 8:
                continue
            if evaluate(q, w) != identity:
                continue
            words.append(w)
        for r in words:
            instances += 1
            k = centralizer_index(q, r)
            reps = conjugate_class_reps(q, r, sd)
            _ensure(len(reps) == d // k,
                    f"class count {len(reps)} != {d}/{k} for {r!r}")
            conjugates = [r.conjugated_by(t) for t in sd.transversal]
            oracle = _oracle_class_count(q, conjugates)
            _ensure(oracle == d // k,
                    f"oracle count {oracle} != {d // k} for {r!r}")
            root_exponent = maximal_root(r).exponent
            for p in (2, 3):
                lower = nu_p_int(root_exponent, p) - nu_p_int(k, p)
                for rep in reps:
                    val = nu_p(rewrite_word(sd, rep), p).k
                    _ensure(
                        val >= lower,
                        f"valuation transfer failed: {val} < {lower} for {rep!r} at p={p}",
                    )
    _ensure(instances >= 30, f"only {instances} instances exercised")
    return (f"{instances} kernel elements across {len(quotients)} quotients: "
            "class counts and valuation transfer match",
            {"instances": instances, "quotients": len(quotients)})


def check_snf():
    """Smith normal form against the gcd-of-minors characterization on 500
    random matrices, plus exact recomposition and unimodularity."""
    rng = random.Random(0x5EED05)
    trials = 500
    for _ in range(trials):
        m = rng.randint(1, 4)
        n = rng.randint(1, 4)
        mat = IntMatrix([[rng.randint(-9, 9) for _ in range(n)] for _ in range(m)])
        res = smith_normal_form(mat)
        _ensure(res.u.mul(mat).mul(res.v) == res.s, f"recomposition failed for {mat!r}")
        _ensure(abs(res.u.det()) == 1, f"U not unimodular for {mat!r}")
        _ensure(abs(res.v.det()) == 1, f"V not unimodular for {mat!r}")
        diag = res.diagonal
        for i in range(len(diag) - 1):
            _ensure(diag[i] >= 0, "negative diagonal entry")
            if diag[i]:
                _ensure(diag[i + 1] % diag[i] == 0, f"chain broken in {diag}")
            else:
                _ensure(diag[i + 1] == 0, f"zero before nonzero in {diag}")
        prod = 1
        for k in range(1, len(diag) + 1):
            prod *= diag[k - 1]
            _ensure(
                prod == _gcd_of_minors(mat, k),
                f"d_1..d_{k} = {prod} != gcd of {k}x{k} minors for {mat!r}",
            )
    return (f"{trials} random matrices up to 4x4: minors, recomposition, unimodularity",
            {"trials": trials})


def check_valuation():
    """nu_p against exhaustive root extraction for every reduced word of
    length at most 10 over two generators, p in {2, 3}."""
    words = _all_reduced_letter_words(2, 10)
    _ensure(nu_p(Word.identity(2), 2).is_infinite, "identity valuation not infinite")
    checked = 0
    for letters in words:
        if not letters:
            continue
        w = Word.from_letters(letters, 2)
        for p in (2, 3):
            got = nu_p(w, p).k
            want = _oracle_nu(letters, p)
            _ensure(got == want, f"nu_{p} mismatch on {letters}: {got} != {want}")
        checked += 1
    return (f"{checked} words of length <= 10, p in {{2, 3}}: valuations match the oracle",
            {"words": checked})


def check_triangle():
    """The (0; 6,12,12) signature has exact deficiency 0 at p = 2 (case d)
    and p = 3 (case b)."""
    sig = FuchsianSignature(0, (6, 12, 12))
    for p, case in ((2, "d"), (3, "b")):
        _ensure(classify(sig, p) == case, f"classify p={p} gave {classify(sig, p)}")
        result = de_exact(sig, p)
        _ensure(not result.negative and result.value == 0,
                f"de_exact p={p} gave {result}")
        _ensure(de_standard(sig, p) == 0, f"standard value p={p} nonzero")
    return ("(0; 6,12,12): exact deficiency 0 at p=2 (case d) and p=3 (case b)",
            {"volume": _rat(volume(sig))})


def check_singerman():
    """Kernel constructions match the transferred signatures and scale volume
    and deficiency exactly by the index."""
    sig_a = FuchsianSignature(1, (2, 3))
    act_a, new_a = kernel_construction(sig_a, 2, "a")
    _ensure(new_a == FuchsianSignature(1, (2, 2, 2, 2, 3, 3, 3, 3)),
            f"case a transfer gave {new_a}")
    _ensure(new_a.genus == 4 * sig_a.genus - 3, "genus is not 4s-3")
    _ensure(volume(new_a) == 4 * volume(sig_a), "volume does not scale by 4")
    for p in (2, 3):
        _ensure(de_standard(new_a, p) == 4 * de_standard(sig_a, p),
                f"deficiency does not scale by 4 at p={p}")

    sig_d = FuchsianSignature(0, (4, 4, 4))
    act_d, new_d = kernel_construction(sig_d, 2, "d")
    _ensure(new_d == FuchsianSignature(0, (2, 2, 4, 4)),
            f"case d transfer gave {new_d}")
    _ensure(volume(new_d) == 2 * volume(sig_d), "volume does not scale by 2")
    _ensure(de_standard(sig_d, 2) == Fraction(1, 4), "base value is not 1/4")
    _ensure(de_standard(new_d, 2) == Fraction(1, 2), "transferred value is not 1/2")
    return ("case a on (1; 2,3) gives (1; 2^4,3^4) at index 4; "
            "case d on (0; 4,4,4) gives (0; 2,2,4,4) at index 2",
            {"index_a": act_a.degree, "index_d": act_d.degree})


def check_virtually_positive():
    """The generalized triangle presentation < x,y | x^2, y^5, (xy)^5 > has
    de_2 = -3/2 yet an index-5 kernel of exactly positive 2-deficiency."""
    pres = parse_presentation("< x, y | x^2, y^5, (x*y)^5 >")
    de_orig = p_deficiency(pres, 2)
    _ensure(de_orig == Fraction(-3, 2), f"de_2 is {de_orig}")
    ub = upper_bound_de(pres, 2)
    _ensure(ub == -1, f"abelian upper bound is {ub}")

    shift = tuple((i + 1) % 5 for i in range(5))
    q = FiniteQuotient((perm_identity(5), shift))
    _ensure(kernel_index(q, pres) == 5, "kernel index is not 5")
    bound = p_size_bound(pres, q, 2)
    _ensure(bound.value == Fraction(9, 2), f"transfer bound is {bound.value}")
    _ensure(bound.value < 5, "transfer bound not below the index")
    sub = subgroup_presentation(pres, q)
    _ensure(sub.n_gens == 6, f"subgroup rank is {sub.n_gens}")
    de_sub = p_deficiency(sub, 2)
    _ensure(de_sub >= Fraction(1, 2), f"subgroup de_2 = {de_sub} < 1/2")
    _ensure(de_sub > 0, "subgroup deficiency not positive")
    return (f"de_2 = -3/2, bound 9/2 < 5, subgroup de_2 = {_rat(de_sub)} > 0",
            {"de_orig": _rat(de_orig), "upper": _rat(ub),
             "bound": _rat(bound.value), "de_sub": _rat(de_sub)})


def check_chi():
    """Euler-characteristic estimates: free group of rank 2 gives ratio 1
    everywhere; the genus-2 surface group stays at its volume 2;
    multiplicativity across an index-2 kernel."""
    free2 = FinitePresentation(("x", "y"), ())
    est2 = chi_p_estimate(free2, 2, default_catalog().up_to(6),
                          SearchBudget(max_order=6, max_assignments=10_000))
    _ensure(all(s.ratio == 1 for s in est2.samples),
            "a free-group ratio differs from 1")
    _ensure(est2.best_ratio == 1, f"best ratio {est2.best_ratio} != 1")

    surface = standard_presentation(FuchsianSignature(2))
    est_s = chi_p_estimate(surface, 2, default_catalog().up_to(4),
                           SearchBudget(max_order=4, max_assignments=10_000))
    _ensure(est_s.samples[0].ratio == 2, "index-1 ratio is not 2")
    _ensure(all(s.ratio <= 2 for s in est_s.samples), "a surface ratio exceeds 2")
    _ensure(est_s.best_ratio == 2, f"best surface ratio {est_s.best_ratio} != 2")

    q2 = FiniteQuotient(((1, 0), (0, 1)))
    free3 = subgroup_presentation(free2, q2)
    _ensure(free3.n_gens == 3 and not free3.relators, "index-2 kernel is not free of rank 3")
    est3 = chi_p_estimate(free3, 2, default_catalog().up_to(6),
                          SearchBudget(max_order=6, max_assignments=10_000))
    _ensure(est3.best_ratio == 2 * est2.best_ratio, "multiplicativity failed")
    return (f"free rank 2: all {est2.subgroups_examined} ratios = 1; genus 2: "
            f"{est_s.subgroups_examined} ratios <= 2 with equality at index 1; "
            "index-2 kernel doubles the estimate",
            {"free_samples": est2.subgroups_examined,
             "surface_samples": est_s.subgroups_examined})


def check_power_witness():
    """< x,y | x^6, y^12, (xy)^12 > at p = 2: zero deficiency, and the order-3
    cyclic quotient x -> 1, y -> 0 certifies a positive-deficiency kernel."""
    pres = parse_presentation("< x, y | x^6, y^12, (x*y)^12 >")
    _ensure(p_deficiency(pres, 2) == 0, "presentation deficiency is not 0")
    shift = (1, 2, 0)
    q = FiniteQuotient((shift, perm_identity(3)))
    _ensure(kernel_index(q, pres) == 3, "kernel index is not 3")
    root, n = p_prime_root(pres.relators[0], 2)
    _ensure(root == pres.word("x^2") and n == 3, f"root decomposition gave {root}, {n}")
    _ensure(evaluate(q, root) != perm_identity(3), "root image is trivial")
    sub = subgroup_presentation(pres, q)
    de_sub = p_deficiency(sub, 2)
    _ensure(de_sub > 0, f"kernel deficiency {de_sub} not positive")

    witness = find_power_witness(pres, 2, default_catalog().up_to(12),
                                  SearchBudget(max_order=12, max_assignments=50_000))
    _ensure(witness is not None, "witness search found nothing")
    _ensure(witness.subgroup_deficiency > 0, "witness kernel not positive")
    return (f"explicit C_3 kernel has de_2 = {_rat(de_sub)} > 0; search found a witness "
            f"with exponent {witness.exponent}",
            {"de_sub": _rat(de_sub), "witness_exponent": witness.exponent,
             "witness_index": witness.index})


def check_dp_drop():
    """d_p(quotient) >= d_p - ell on 200 random (presentation, generator-set)
    instances, exact integers."""
    rng = random.Random(0x5EED0C)
    trials = 200
    for _ in range(trials):
        pres = _random_presentation(rng, max_gens=3, max_relators=3, max_len=8,
                                    min_relators=0)
        p = rng.choice((2, 3, 5))
        gens = []
        for _ in range(rng.randint(1, 3)):
            w = _random_word(rng, pres.n_gens, rng.randint(1, 6))
            if rng.random() < 0.3:
                w = w**p
            gens.append(w)
        report = quotient_dp_drop(pres, gens, p)
        _ensure(
            report.holds,
            f"dp drop failed for {pres.to_text()}, p={p}: "
            f"{report.d_after} < {report.d_before} - {report.ell}",
        )
    return (f"{trials} random instances: d_p drops by at most ell", {"trials": trials})


CHECKS = {
    "intro_examples": check_intro_examples,
    "free_products": check_free_products,
    "supermult": check_supermult,
    "conjugacy": check_conjugacy,
    "snf": check_snf,
    "valuation": check_valuation,
    "triangle": check_triangle,
    "singerman": check_singerman,
    "virtually_positive": check_virtually_positive,
    "chi": check_chi,
    "power_witness": check_power_witness,
    "dp_drop": check_dp_drop,
}


def check_names() -> tuple:
    return tuple(CHECKS)


def run_check(name: str) -> CheckOutcome:
    fn = CHECKS[name]
    try:
        summary, details = fn()
    except Exception as exc:  # a failed criterion is data, not a crash
        return CheckOutcome(name, False, f"{type(exc).__name__}: {exc}", {})
    return CheckOutcome(name, True, summary, details)


def run_checks(only=None) -> list:
    names = check_names()
    if only:
        names = [n for n in names if only in n]
        if not names:
            raise ValueError(f"no check matches {only!r}")
    return [run_check(name) for name in names]
