import pytest
from hypothesis import given

from generators import instr_strategy, tree_strategy, trees_up_to
from treemach.errors import TreeSyntaxError
from treemach.instr import (
    DELTA, EPS, ONE, PI1, PI2, UNIT_CHECK, Pair, apply_instr, compile_instr, format_instr,
    instr_arity_depth, parse_instr,
)

A = ((), ())


class TestGenerators:
    def test_identity(self):
        assert apply_instr(ONE, A) == A

    def test_unit_check(self):
        assert apply_instr(UNIT_CHECK, ()) == ()
        assert apply_instr(UNIT_CHECK, A) is None

    def test_erase(self):
        assert apply_instr(EPS, (A, A)) == ()

    def test_projections(self):
        t = ((), A)
        assert apply_instr(PI1, t) == ()
        assert apply_instr(PI2, t) == A
        assert apply_instr(PI1, ()) is None
        assert apply_instr(PI2, ()) is None

    def test_duplicate(self):
        assert apply_instr(DELTA, A) == (A, A)

    def test_pairing(self):
        swap_parts = Pair(EPS, ONE)
        assert apply_instr(swap_parts, (A, A)) == ((), A)
        assert apply_instr(swap_parts, ()) is None
        assert apply_instr(Pair(UNIT_CHECK, ONE), (A, ())) is None


class TestCompiled:
    @given(instr_strategy(), tree_strategy())
    def test_same_as_interpreter(self, i, t):
        assert compile_instr(i)(t) == apply_instr(i, t)

    def test_exhaustive_small(self):
        instrs = [ONE, UNIT_CHECK, EPS, PI1, PI2, DELTA, Pair(PI2, PI1), Pair(DELTA, EPS)]
        for i in instrs:
            f = compile_instr(i)
            for t in trees_up_to(3):
                assert f(t) == apply_instr(i, t)


class TestText:
    def test_format(self):
        assert format_instr(Pair(Pair(EPS, ONE), PI2)) == "pair(pair(eps,1),pi2)"

    @given(instr_strategy())
    def test_roundtrip(self, i):
        assert parse_instr(format_instr(i)) == i

    def test_spaces(self):
        assert parse_instr(" pair ( pi2 , pi1 ) ") == Pair(PI2, PI1)

    @pytest.mark.parametrize("text", ["", "pair(1)", "pair(1,2)", "foo", "1 1"])
    def test_errors(self, text):
        with pytest.raises(TreeSyntaxError):
            parse_instr(text)

    def test_depth(self):
        assert instr_arity_depth(ONE) == 0
        assert instr_arity_depth(Pair(ONE, Pair(ONE, ONE))) == 2
