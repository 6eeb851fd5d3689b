import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from knowval.syntax import (
    And,
    DepAtom,
    Inspect,
    Kv,
    Not,
    ParseError,
    RESERVED_AGENT,
    TOP,
    agents_of,
    all_formulas,
    diamond,
    disjunction,
    implication,
    is_desugared,
    is_normal,
    parse_formula,
    print_formula,
    signature_of,
    translate,
)


def kv(c):
    return Kv(RESERVED_AGENT, c)


class TestParse:
    def test_learn_shape(self):
        assert parse_formula("[c]Kv(c)") == Inspect("c", kv("c"))

    def test_top(self):
        assert parse_formula("T") == TOP

    def test_dep_sugar_sorted_expansion(self):
        # Kv_1(c,e;f) abbreviates [c][e]Kv_1(f), sorted enumeration
        f = parse_formula("Kv_1(c,e;f)", "multi")
        assert f == Inspect("c", Inspect("e", Kv("1", "f")))
        assert parse_formula("Kv_1(e,c;f)", "multi") == f
        assert parse_formula(print_formula(f), "multi") == f

    def test_dep_sugar_multi_rhs(self):
        f = parse_formula("Kv(c;d,e)")
        assert f == Inspect("c", And(kv("d"), kv("e")))

    def test_set_form_without_rhs(self):
        assert parse_formula("Kv(d,c)") == And(kv("c"), kv("d"))

    def test_braces_form(self):
        assert parse_formula("Kv({c,e};{f})") == parse_formula("Kv(c,e;f)")
        # empty lhs braces: no boxes at all
        assert parse_formula("Kv({};{d})") == kv("d")

    def test_precedence(self):
        f = parse_formula("~Kv(c) & Kv(d) | Kv(e) -> T")
        or_part = disjunction(And(Not(kv("c")), kv("d")), kv("e"))
        assert f == implication(or_part, TOP)

    def test_implication_right_assoc(self):
        f = parse_formula("Kv(c) -> Kv(d) -> Kv(e)")
        assert f == implication(kv("c"), implication(kv("d"), kv("e")))

    def test_box_and_diamond(self):
        assert parse_formula("<c>T") == diamond("c", TOP)
        assert parse_formula("[c]~Kv(d)") == Inspect("c", Not(kv("d")))

    def test_box_list_sorted(self):
        assert parse_formula("[d,c]Kv(e)") == Inspect("c", Inspect("d", kv("e")))

    def test_parens(self):
        assert parse_formula("[c](Kv(d) & Kv(e))") == Inspect(
            "c", And(kv("d"), kv("e"))
        )

    def test_desugared_core_only(self):
        for text in ("Kv(c) -> Kv(d)", "<c>Kv(d) | ~T", "Kv({a,b};{c,d})"):
            assert is_desugared(parse_formula(text))


class TestParseErrors:
    @pytest.mark.parametrize(
        "text",
        ["", "Kv()", "[]T", "[c]", "Kv(c", "Kv(c;)", "Kv(;d)", "(T", "T)", "T &",
         "Kv_(c)", "%", "Kv(c,)", "<c]T"],
    )
    def test_syntax_errors(self, text):
        with pytest.raises(ParseError):
            parse_formula(text)

    def test_error_carries_position(self):
        with pytest.raises(ParseError) as exc:
            parse_formula("Kv(c) & %")
        assert exc.value.position == 8
        assert "position 8" in str(exc.value)

    def test_agent_subscript_rejected_in_single_mode(self):
        with pytest.raises(ParseError):
            parse_formula("Kv_1(c)")

    def test_bare_kv_rejected_in_multi_mode(self):
        with pytest.raises(ParseError):
            parse_formula("Kv(c)", "multi")

    def test_reserved_agent_rejected(self):
        with pytest.raises(ParseError):
            parse_formula("Kv__(c)", "multi")

    def test_unknown_mode(self):
        with pytest.raises(ValueError):
            parse_formula("T", "both")


single_formulas = st.recursive(
    st.one_of(
        st.just(TOP),
        st.builds(kv, st.sampled_from(["c", "d", "e"])),
    ),
    lambda sub: st.one_of(
        st.builds(Not, sub),
        st.builds(And, sub, sub),
        st.builds(Inspect, st.sampled_from(["c", "d", "e"]), sub),
    ),
    max_leaves=20,
)

multi_formulas = st.recursive(
    st.one_of(
        st.just(TOP),
        st.builds(Kv, st.sampled_from(["1", "2"]), st.sampled_from(["c", "d"])),
    ),
    lambda sub: st.one_of(
        st.builds(Not, sub),
        st.builds(And, sub, sub),
        st.builds(Inspect, st.sampled_from(["c", "d"]), sub),
    ),
    max_leaves=20,
)


class TestPrint:
    def test_learn_roundtrip(self):
        assert print_formula(Inspect("c", kv("c"))) == "[c]Kv(c)"

    def test_top(self):
        assert print_formula(TOP) == "T"

    @given(single_formulas)
    @settings(max_examples=300)
    def test_roundtrip_single(self, f):
        assert parse_formula(print_formula(f)) == f

    @given(multi_formulas)
    @settings(max_examples=300)
    def test_roundtrip_multi(self, f):
        assert parse_formula(print_formula(f), "multi") == f

    def test_sugar_reprint(self):
        for text in ("Kv(c) -> Kv(d)", "Kv(c) | Kv(d)", "<c>Kv(d)", "~(Kv(c) & T)"):
            f = parse_formula(text)
            assert parse_formula(print_formula(f)) == f

    def test_dep_atom_printing(self):
        atom = DepAtom(RESERVED_AGENT, frozenset(("e", "c")), frozenset(("f",)))
        assert print_formula(atom) == "Kv({c,e};{f})"
        assert print_formula(DepAtom("1", frozenset(), frozenset("d"))) == "Kv_1({};{d})"


class TestTranslate:
    def test_paper_example(self):
        f = parse_formula("[c](~Kv(d) & [e]Kv(f))")
        nf = translate(f)
        assert nf == And(
            Not(DepAtom(RESERVED_AGENT, frozenset("c"), frozenset("d"))),
            DepAtom(RESERVED_AGENT, frozenset(("c", "e")), frozenset("f")),
        )
        assert print_formula(nf) == "~Kv({c};{d}) & Kv({c,e};{f})"

    def test_bare_kv(self):
        assert translate(kv("d")) == DepAtom(RESERVED_AGENT, frozenset(), frozenset("d"))

    def test_boxed_top_collapses(self):
        assert translate(parse_formula("[c]T")) == TOP

    def test_agent_indices_carried(self):
        nf = translate(parse_formula("[c]Kv_2(d)", "multi"))
        assert nf == DepAtom("2", frozenset("c"), frozenset("d"))

    @given(single_formulas)
    @settings(max_examples=200)
    def test_shape_and_idempotence(self, f):
        nf = translate(f)
        assert is_normal(nf)
        assert translate(nf) == nf


class TestAnalysis:
    def test_agents_of(self):
        assert agents_of(parse_formula("Kv_1(c) & [d]Kv_2(e)", "multi")) == {"1", "2"}
        assert agents_of(TOP) == frozenset()
        assert agents_of(parse_formula("[c][d]Kv_1(e)", "multi")) == {"1"}

    def test_signature_of(self):
        assert signature_of(parse_formula("[c]Kv(d)")) == {"c", "d"}
        assert signature_of(TOP) == frozenset()
        assert signature_of(parse_formula("Kv({c,e};{f})")) == {"c", "e", "f"}

    def test_formula_pool_counts(self):
        # depth 0: Top plus one Kv atom per agent/constant pair
        assert len(all_formulas(["c"], ["1"], 0)) == 2
        pool1 = all_formulas(["c"], ["1"], 1)
        # adds Not, Inspect and And combinations of the two atoms
        assert len(pool1) == 2 + 2 + 2 + 4
        assert len(set(pool1)) == len(pool1)
