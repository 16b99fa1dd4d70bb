import pytest

from treemach.errors import TreeSyntaxError
from treemach.expr import ZERO, Named, Prim, Psi, PsiInstr, RuleExpr, Star, format_expr
from treemach.instr import DELTA, ONE, PI1, PI2, Pair
from treemach.machine import run
from treemach.machine_file import (
    format_graph_file, format_machine_file, parse_expr, parse_machine_file,
)
from treemach.tree import encode_nat

U = ()
I = ((), ())


class TestExpressions:
    def test_atoms(self):
        assert parse_expr("1") == Prim(ONE)
        assert parse_expr("0") == ZERO
        assert parse_expr("delta") == Prim(DELTA)
        assert parse_expr("up") == Psi(PsiInstr.UP)

    def test_pair_of_instructions_collapses(self):
        assert parse_expr("pair(pi2, pi1)") == Prim(Pair(PI2, PI1))

    def test_precedence(self):
        e = parse_expr("pi1 . pi2* + delta")
        assert format_expr(e) == "pi1 . pi2* + delta"

    def test_rules(self):
        e = parse_expr("[(x,y) => (y,x)]")
        assert isinstance(e, RuleExpr)
        assert run(e, (U, I)).outputs == ((I, U),)

    def test_roundtrip(self):
        for text in ["delta . pair(pi2,pi1)", "(pi1 + pi2)*", "open . left . liftpi1 . up . exit",
                     "pair(pi1*, 1) . [(x,y) => x]", "0 + 1"]:
            e = parse_expr(text)
            assert parse_expr(format_expr(e)) == e

    @pytest.mark.parametrize("text", ["", "pair(1)", "delta +", "foo", "(1", "[x =>]", "2"])
    def test_errors(self, text):
        with pytest.raises(TreeSyntaxError):
            parse_expr(text)


class TestFiles:
    def test_main(self):
        f = parse_machine_file("main = delta . pair(pi2, pi1)\n")
        assert run(f.machine(), (U, I)).outputs == ((I, U),)

    def test_lets_and_comments(self):
        text = """
        -- swap the components
        let swap = delta . pair(pi2, pi1)
        main = swap . swap   -- identity on pairs
        """
        f = parse_machine_file(text)
        assert isinstance(f.main.first, Named)
        assert run(f.machine(), (U, I)).outputs == ((U, I),)

    def test_symbols(self):
        f = parse_machine_file("symbols a b c;\nmain = [(c, x) => (a, x)]\n")
        assert run(f.machine(), (encode_nat(2), I)).outputs == ((U, I),)

    def test_graph(self):
        text = """
        graph {
          states a b;
          initial a;
          final b;
          a -> b : pi2;
          b -> b : pi2*;
        }
        """
        g = parse_machine_file(text).machine()
        assert set(run(g, (U, (U, U))).outputs) == {(U, U), U}
        assert g.state_name(0) == "a"

    def test_needs_exactly_one_entry(self):
        with pytest.raises(TreeSyntaxError):
            parse_machine_file("let x = 1\n")
        with pytest.raises(TreeSyntaxError):
            parse_machine_file("main = 1\ngraph { states a; initial a; final a; }")

    def test_reserved_let(self):
        with pytest.raises(TreeSyntaxError):
            parse_machine_file("let delta = 1\nmain = 1")

    def test_format_roundtrip(self):
        swap = parse_expr("delta . pair(pi2,pi1)")
        text = format_machine_file(Named("swap", swap), {"swap": swap})
        f = parse_machine_file(text)
        assert run(f.machine(), (U, I)).outputs == ((I, U),)

    def test_graph_format_roundtrip(self):
        text = format_graph_file(["p", "q"], ["p"], ["q"],
                                 [("p", "q", parse_expr("[(x,y) => (y,x)]"))], header="demo")
        assert text.startswith("-- demo\n")
        g = parse_machine_file(text).machine()
        assert run(g, (U, I)).outputs == ((I, U),)
