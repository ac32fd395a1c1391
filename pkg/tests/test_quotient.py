import pytest
from hypothesis import given, strategies as st

from pdeficiency.presentation import parse_presentation
from pdeficiency.quotient import (
    FiniteQuotient,
    SearchBudget,
    cycles_to_perm,
    default_catalog,
    enumerate_quotients,
    evaluate,
    format_perm,
    is_quotient_of,
    kernel_index,
    order_of_image,
    parse_catalog_manifest,
    parse_cycles,
    parse_perm,
    perm_identity,
    perm_mul,
    perm_order,
    perm_pow,
)
from pdeficiency.words import Word


class TestPerms:
    def test_parse_format_roundtrip(self):
        for text in ["(1 2)", "(1 2 3)(4 5)", "()"]:
            perm = parse_perm(text, 5)
            assert parse_perm(format_perm(perm), 5) == perm

    def test_parse_errors(self):
        with pytest.raises(ValueError):
            parse_cycles("(1 2")
        with pytest.raises(ValueError):
            parse_cycles("(1 1)")
        with pytest.raises(ValueError):
            parse_cycles("nonsense")
        with pytest.raises(ValueError):
            cycles_to_perm([(0, 5)], 3)

    def test_mul_is_then(self):
        a = parse_perm("(1 2)", 3)
        b = parse_perm("(2 3)", 3)
        # apply a then b: 1 -> 2 -> 3
        assert perm_mul(a, b)[0] == 2

    def test_order_and_pow(self):
        c = parse_perm("(1 2 3 4 5 6)", 6)
        assert perm_order(c) == 6
        assert perm_pow(c, 6) == perm_identity(6)
        assert perm_pow(c, -1) == perm_pow(c, 5)


def quotient(*specs, degree):
    return FiniteQuotient([parse_perm(s, degree) for s in specs])


class TestEvaluate:
    def test_involution(self):
        q = quotient("(1 2)", degree=2)
        assert evaluate(q, Word(((0, 2),), 1)) == perm_identity(2)

    def test_cyclic_exponent(self):
        q = quotient("(1 2 3 4 5)", "(1 2 3 4 5)", degree=5)
        word = Word(((0, 1), (1, 1)), 2) ** 5
        assert evaluate(q, word) == perm_identity(5)

    def test_hand_multiplication(self):
        q = quotient("(1 2)", "(2 3)", degree=3)
        word = Word(((0, 1), (1, 1), (0, 1)), 2)
        assert evaluate(q, word) == parse_perm("(1 3)", 3)

    def test_alphabet_mismatch(self):
        q = quotient("(1 2)", degree=2)
        with pytest.raises(ValueError):
            evaluate(q, Word(((1, 1),), 2))

    @given(
        st.lists(st.tuples(st.integers(0, 1), st.integers(-3, 3)), max_size=5),
        st.lists(st.tuples(st.integers(0, 1), st.integers(-3, 3)), max_size=5),
    )
    def test_homomorphism(self, runs1, runs2):
        q = quotient("(1 2 3)", "(1 2)", degree=3)
        w1, w2 = Word(runs1, 2), Word(runs2, 2)
        assert evaluate(q, w1 * w2) == perm_mul(evaluate(q, w1), evaluate(q, w2))


class TestQuotientPredicates:
    def test_is_quotient(self):
        pres = parse_presentation("< x | x^2 >")
        assert is_quotient_of(quotient("(1 2)", degree=2), pres)
        assert not is_quotient_of(quotient("(1 2 3)", degree=3), pres)

    def test_prop_instance(self):
        pres = parse_presentation("< x, y | x^2, y^5, (x*y)^5 >")
        q = quotient("()", "(1 2 3 4 5)", degree=5)
        assert is_quotient_of(q, pres)
        assert kernel_index(q, pres) == 5

    def test_order_of_image(self):
        q = quotient("(1 2)", degree=2)
        assert order_of_image(q, Word(((0, 1),), 1)) == 2
        assert order_of_image(q, Word.identity(1)) == 1
        q5 = quotient("(1 2 3 4 5)", "(1 2 3 4 5)", degree=5)
        assert order_of_image(q5, Word(((0, 1), (1, 1)), 2)) == 5

    def test_kernel_index_examples(self):
        free2 = parse_presentation("< x, y | >")
        assert kernel_index(quotient("(1 2)", "()", degree=2), free2) == 2
        dinf = parse_presentation("< x, y | x^2, y^2 >")
        assert kernel_index(quotient("(1 2)", "(1 2)", degree=2), dinf) == 2

    def test_kernel_index_requires_killing(self):
        with pytest.raises(ValueError, match="not killed"):
            kernel_index(quotient("(1 2 3)", degree=3), parse_presentation("< x | x^2 >"))

    @given(st.lists(st.tuples(st.integers(0, 1), st.integers(-4, 4)), max_size=6))
    def test_lagrange(self, runs):
        q = quotient("(1 2 3)", "(1 2)", degree=3)
        word = Word(runs, 2)
        assert q.order % order_of_image(q, word) == 0


class TestEnumerate:
    def test_c2_on_involution(self):
        pres = parse_presentation("< x | x^2 >")
        catalog = default_catalog().up_to(2)
        found = list(enumerate_quotients(pres, catalog, 2))
        assert len(found) == 2  # the trivial quotient and x -> (1 2)
        orders = sorted(q.order for q in found)
        assert orders == [1, 2]

    def test_free_group_c2_kernels(self):
        pres = parse_presentation("< x, y | >")
        catalog = default_catalog().up_to(2)
        found = list(enumerate_quotients(pres, catalog, 2))
        assert len(found) == 4  # trivial plus the 3 index-2 kernels
        assert sum(1 for q in found if q.order == 2) == 3

    def test_prop_instance_has_y_surviving(self):
        pres = parse_presentation("< x, y | x^2, y^5, (x*y)^5 >")
        catalog = default_catalog().up_to(5)
        found = list(enumerate_quotients(pres, catalog, 5))
        y = Word(((1, 1),), 2)
        assert any(
            q.order == 5 and evaluate(q, y) != perm_identity(q.degree) for q in found
        )

    def test_all_yielded_are_quotients_and_deduplicated(self):
        pres = parse_presentation("< x, y | x^2, y^2 >")
        found = list(enumerate_quotients(pres, default_catalog().up_to(8), 8))
        keys = [q.kernel_key() for q in found]
        assert len(keys) == len(set(keys))
        assert all(is_quotient_of(q, pres) for q in found)

    def test_cross_group_deduplication(self):
        # the C_2 kernels reappear inside C_4 assignments and must collapse:
        # 1 trivial + 3 of index 2 + 6 of index 4
        from pdeficiency.quotient import GroupCatalog

        pres = parse_presentation("< x, y | >")
        catalog = GroupCatalog(
            tuple(g for g in default_catalog().groups if g.name in ("C2", "C4"))
        )
        found = list(enumerate_quotients(pres, catalog, 4))
        counts = {}
        for q in found:
            counts[q.order] = counts.get(q.order, 0) + 1
        assert counts == {1: 1, 2: 3, 4: 6}

    def test_deterministic_order(self):
        pres = parse_presentation("< x, y | x^2, y^2 >")
        first = [q.images for q in enumerate_quotients(pres, default_catalog().up_to(8), 8)]
        second = [q.images for q in enumerate_quotients(pres, default_catalog().up_to(8), 8)]
        assert first == second

    def test_budget_exhaustion(self):
        pres = parse_presentation("< x, y | >")
        budget = SearchBudget(max_order=6, max_assignments=10)
        list(enumerate_quotients(pres, default_catalog(), 6, budget))
        assert budget.exhausted
        assert budget.assignments_used == 10

    def test_max_order_validation(self):
        with pytest.raises(ValueError):
            list(enumerate_quotients(parse_presentation("< x | >"), max_order=1))


class TestCatalog:
    def test_default_orders(self):
        catalog = default_catalog()
        by_name = {g.name: g for g in catalog.groups}
        assert by_name["S3"].order == 6
        assert by_name["S4"].order == 24
        assert by_name["A4"].order == 12
        assert by_name["D4"].order == 8
        assert by_name["D5"].order == 10
        assert by_name["C2xC2"].order == 4
        assert by_name["C5xC5"].order == 25
        for n in range(2, 13):
            assert by_name[f"C{n}"].order == n

    def test_up_to(self):
        assert all(g.order <= 6 for g in default_catalog().up_to(6).groups)

    def test_manifest_roundtrip(self):
        manifest = "# a comment\nS3 3 (1 2) (1 2 3)\nK4 4 (1 2)(3 4) (1 3)(2 4)\n"
        catalog = parse_catalog_manifest(manifest)
        assert catalog.names() == ("S3", "K4")
        assert catalog.groups[0].order == 6
        assert catalog.groups[1].order == 4

    def test_manifest_errors(self):
        with pytest.raises(ValueError):
            parse_catalog_manifest("S3 three (1 2)")
        with pytest.raises(ValueError):
            parse_catalog_manifest("S3 3")
        with pytest.raises(ValueError):
            parse_catalog_manifest("S3 2 (1 2 3)")
