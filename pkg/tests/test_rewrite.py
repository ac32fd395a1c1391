import random
from fractions import Fraction

import pytest

from pdeficiency.abelian import abelian_invariants
from pdeficiency.presentation import parse_presentation
from pdeficiency.quotient import (
    FiniteQuotient,
    default_catalog,
    enumerate_quotients,
    evaluate,
    parse_perm,
    perm_identity,
)
from pdeficiency.rewrite import (
    CosetTable,
    centralizer_index,
    conjugate_class_reps,
    coset_table,
    expand_basis_word,
    p_size_bound,
    rewrite_word,
    schreier,
    subgroup_presentation,
    supermultiplicity_check,
)
from pdeficiency.words import Word, maximal_root, nu_p, nu_p_int

DINF = parse_presentation("< x, y | x^2, y^2 >")
Q_DINF = FiniteQuotient([(1, 0), (1, 0)])

PROP = parse_presentation("< x, y | x^2, y^5, (x*y)^5 >")
Q_PROP = FiniteQuotient([tuple(range(5)), tuple((i + 1) % 5 for i in range(5))])


def random_word(rng, n_gens, length):
    letters = []
    for _ in range(length):
        while True:
            g = rng.randrange(1, n_gens + 1)
            lt = g if rng.random() < 0.5 else -g
            if not letters or letters[-1] != -lt:
                letters.append(lt)
                break
    return Word.from_letters(letters, n_gens)


class TestCosetTable:
    def test_dihedral(self):
        ct = coset_table(Q_DINF, DINF)
        assert ct.degree == 2
        assert ct.tables == ((1, 0), (1, 0))

    def test_order_four_cyclic(self):
        pres = parse_presentation("< x | x^4 >")
        ct = coset_table(FiniteQuotient([(1, 0)]), pres)
        assert ct.degree == 2

    def test_prop_instance(self):
        ct = coset_table(Q_PROP, PROP)
        assert ct.degree == 5
        assert ct.tables[1] == tuple((i + 1) % 5 for i in range(5))

    def test_relators_must_die(self):
        with pytest.raises(ValueError):
            coset_table(FiniteQuotient([parse_perm("(1 2 3)", 3), perm_identity(3)]), DINF)


class TestSchreier:
    def test_dihedral_transversal_and_basis(self):
        sd = schreier(coset_table(Q_DINF, DINF))
        x, y = Word(((0, 1),), 2), Word(((1, 1),), 2)
        assert sd.transversal == (Word.identity(2), x)
        assert [b.word for b in sd.basis] == [x**2, y * x.inverse(), x * y]

    def test_rank_f2_index2(self):
        free2 = parse_presentation("< x, y | >")
        sd = schreier(coset_table(FiniteQuotient([(1, 0), (0, 1)]), free2))
        assert sd.rank == 3

    def test_rank_f1_index2(self):
        free1 = parse_presentation("< x | >")
        sd = schreier(coset_table(FiniteQuotient([(1, 0)]), free1))
        assert sd.rank == 1
        assert sd.basis[0].word == Word(((0, 2),), 1)

    def test_nielsen_schreier_rank(self):
        free2 = parse_presentation("< x, y | >")
        for q in enumerate_quotients(free2, default_catalog().up_to(8), 8):
            sd = schreier(coset_table(q, free2))
            assert sd.rank == 1 + q.order * (free2.n_gens - 1)

    def test_non_transitive_rejected(self):
        with pytest.raises(ValueError, match="transitive"):
            schreier(CosetTable(((0, 1),)))


class TestRewrite:
    def test_dihedral_examples(self):
        sd = schreier(coset_table(Q_DINF, DINF))
        assert rewrite_word(sd, DINF.word("x^2")) == Word(((0, 1),), 3)
        assert rewrite_word(sd, DINF.word("y^2")) == Word(((1, 1), (2, 1)), 3)
        assert rewrite_word(sd, Word.identity(2)).is_identity

    def test_not_in_subgroup(self):
        sd = schreier(coset_table(Q_DINF, DINF))
        with pytest.raises(ValueError, match="subgroup"):
            rewrite_word(sd, DINF.word("x"))

    def test_round_trip_random(self):
        rng = random.Random(23)
        free2 = parse_presentation("< x, y | >")
        quotients = [
            q for q in enumerate_quotients(free2, default_catalog().up_to(6), 6)
            if q.order > 1
        ]
        for q in quotients[:8]:
            sd = schreier(coset_table(q, free2))
            identity = perm_identity(q.degree)
            found = 0
            while found < 5:
                w = random_word(rng, 2, rng.randint(1, 10))
                if evaluate(q, w) != identity:
                    continue
                found += 1
                assert expand_basis_word(sd, rewrite_word(sd, w)) == w


class TestCentralizerIndex:
    def test_dihedral(self):
        assert centralizer_index(Q_DINF, DINF.word("x^2")) == 2

    def test_root_in_kernel(self):
        # x, y -> (1 2): xy lies in the kernel, so its powers have k = 1
        q = FiniteQuotient([(1, 0), (1, 0)])
        assert centralizer_index(q, DINF.word("(x*y)^3")) == 1

    def test_prop_instance(self):
        assert centralizer_index(Q_PROP, PROP.word("y^5")) == 5

    def test_identity_rejected(self):
        with pytest.raises(ValueError):
            centralizer_index(Q_DINF, Word.identity(2))


class TestConjugateClassReps:
    def test_dihedral_single_class(self):
        reps = conjugate_class_reps(Q_DINF, DINF.word("x^2"))
        assert reps == [DINF.word("x^2")]

    def test_index_two_free(self):
        q = FiniteQuotient([(1, 0), (0, 1)])
        y = Word(((1, 1),), 2)
        reps = conjugate_class_reps(q, y)
        assert reps == [y, DINF.word("x*y*x^-1")]

    def test_prop_instance_single_class(self):
        reps = conjugate_class_reps(Q_PROP, PROP.word("y^5"))
        assert len(reps) == 1

    def test_not_in_kernel_rejected(self):
        with pytest.raises(ValueError, match="kernel"):
            conjugate_class_reps(Q_DINF, DINF.word("x"))

    def test_count_matches_index_over_centralizer(self):
        rng = random.Random(31)
        free2 = parse_presentation("< x, y | >")
        quotients = [
            q for q in enumerate_quotients(free2, default_catalog().up_to(6), 6)
            if q.order > 1
        ]
        for q in quotients[:10]:
            identity = perm_identity(q.degree)
            sd = schreier(coset_table(q, free2))
            checked = 0
            attempts = 0
            while checked < 4 and attempts < 200:
                attempts += 1
                w = random_word(rng, 2, rng.randint(1, 4)) ** rng.randint(1, 3)
                if w.is_identity or evaluate(q, w) != identity:
                    continue
                checked += 1
                reps = conjugate_class_reps(q, w, sd)
                assert len(reps) == q.order // centralizer_index(q, w)
                for rep in reps:
                    assert evaluate(q, rep) == identity


class TestSubgroupPresentation:
    def test_dihedral(self):
        sub = subgroup_presentation(DINF, Q_DINF)
        assert sub.to_text() == "< a, b, c | a, b*c >"
        # the kernel is infinite cyclic
        inv = abelian_invariants(sub)
        assert inv.rank == 1 and inv.divisors == ()

    def test_cyclic_four(self):
        pres = parse_presentation("< x | x^4 >")
        sub = subgroup_presentation(pres, FiniteQuotient([(1, 0)]))
        assert sub.to_text() == "< a | a^2 >"

    def test_prop_instance(self):
        sub = subgroup_presentation(PROP, Q_PROP)
        assert sub.n_gens == 6
        assert len(sub.relators) == 7  # 5 classes for x^2, one each for y^5, (xy)^5

    def test_naive_variant_presents_the_same_group(self):
        sub = subgroup_presentation(PROP, Q_PROP)
        naive = subgroup_presentation(PROP, Q_PROP, refined=False)
        assert len(naive.relators) == 15  # 5 conjugates per relator
        assert abelian_invariants(naive) == abelian_invariants(sub)

    def test_naive_variant_can_lose_the_supermultiplicity_bound(self):
        # duplicated conjugates inflate the relator weight: the naive
        # presentation of the dihedral kernel scores -2 < 2 * 0, while the
        # refined class representatives achieve the bound exactly
        from pdeficiency.presentation import p_deficiency

        naive = subgroup_presentation(DINF, Q_DINF, refined=False)
        assert naive.to_text() == "< a, b, c | a, a, b*c, c*b >"
        assert p_deficiency(naive, 2) == -2
        refined = subgroup_presentation(DINF, Q_DINF)
        assert p_deficiency(refined, 2) == 0


class TestPSizeBound:
    def test_prop_instance(self):
        bound = p_size_bound(PROP, Q_PROP, 2)
        assert bound.value == Fraction(9, 2)
        assert bound.value < 5
        terms = [c.term for c in bound.contributions]
        assert terms == [Fraction(5, 2), 1, 1]

    def test_pure_p_power_formula(self):
        # single relator x^p with k = p gives (d/p) * p^(-1+1) = d/p
        pres = parse_presentation("< x | x^3 >")
        q = FiniteQuotient([(1, 2, 0)])
        bound = p_size_bound(pres, q, 3)
        assert bound.value == 1
        assert bound.contributions[0].centralizer_idx == 3

    def test_dihedral_exact_sum(self):
        bound = p_size_bound(DINF, Q_DINF, 2)
        assert bound.exact_sum == 2

    def test_chain_of_inequalities(self):
        rng = random.Random(41)
        catalog = default_catalog().up_to(8)
        checked = 0
        while checked < 15:
            n = rng.randint(1, 3)
            names = ("x", "y", "z")[:n]
            relators = [random_word(rng, n, rng.randint(1, 8)) for _ in range(rng.randint(1, 3))]
            from pdeficiency.presentation import FinitePresentation

            pres = FinitePresentation(names, relators)
            for q in enumerate_quotients(pres, catalog, 8):
                if q.order == 1:
                    continue
                p = rng.choice((2, 3))
                bound = p_size_bound(pres, q, p)
                naive = q.order * sum(
                    Fraction(1, p ** nu_p_int(maximal_root(r).exponent, p))
                    for r in pres.relators
                )
                assert bound.exact_sum <= bound.value <= naive
                checked += 1
                break


class TestSupermultiplicity:
    def test_dihedral(self):
        report = supermultiplicity_check(DINF, Q_DINF, 2)
        assert (report.de_sub, report.scaled, report.holds) == (0, 0, True)

    def test_cyclic_four(self):
        pres = parse_presentation("< x | x^4 >")
        report = supermultiplicity_check(pres, FiniteQuotient([(1, 0)]), 2)
        assert report.de_sub == Fraction(-1, 2)
        assert report.scaled == Fraction(-1, 2)  # 2 * (-1/4)
        assert report.holds

    def test_prop_instance(self):
        report = supermultiplicity_check(PROP, Q_PROP, 2)
        assert report.de_orig == Fraction(-3, 2)
        assert report.de_sub >= Fraction(1, 2)
        assert report.holds

    def test_valuation_transfer_inequality(self):
        rng = random.Random(57)
        free2 = parse_presentation("< x, y | >")
        quotients = [
            q for q in enumerate_quotients(free2, default_catalog().up_to(6), 6)
            if q.order > 1
        ]
        for q in quotients[:6]:
            identity = perm_identity(q.degree)
            sd = schreier(coset_table(q, free2))
            checked = 0
            attempts = 0
            while checked < 3 and attempts < 200:
                attempts += 1
                w = random_word(rng, 2, rng.randint(1, 3)) ** rng.randint(1, 4)
                if w.is_identity or evaluate(q, w) != identity or len(w) > 10:
                    continue
                checked += 1
                k = centralizer_index(q, w)
                root_exponent = maximal_root(w).exponent
                for p in (2, 3):
                    lower = nu_p_int(root_exponent, p) - nu_p_int(k, p)
                    for rep in conjugate_class_reps(q, w, sd):
                        assert nu_p(rewrite_word(sd, rep), p).k >= lower
