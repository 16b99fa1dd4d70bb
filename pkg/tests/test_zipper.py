import random

from hypothesis import given, settings, strategies as st

from generators import instr_strategy, random_instr, random_tree, tree_strategy, trees_up_to
from oracles import denote
from treemach.expr import Psi, PsiInstr, format_expr
from treemach.instr import DELTA, EPS, ONE, PI1, PI2, Pair, apply_instr
from treemach.machine import run
from treemach.zipper import lift, psi_expr, to_finite, zipper_rules

U = ()
I = ((), ())
ZERO_MARK, ONE_MARK = (), ((), ())


def apply_psi(op, t):
    out = denote(psi_expr(op), t)
    assert len(out) <= 1
    return next(iter(out), None)


class TestZipperRules:
    def test_open_exit(self):
        assert apply_psi(PsiInstr.OPEN, I) == (U, I)
        assert apply_psi(PsiInstr.EXIT, (U, I)) == I
        assert apply_psi(PsiInstr.EXIT, (I, I)) is None

    def test_left_marks_zero(self):
        c, a, b = I, U, (I, U)
        assert apply_psi(PsiInstr.LEFT, (c, (a, b))) == ((ZERO_MARK, (c, b)), a)

    def test_right_marks_one(self):
        c, a, b = I, U, (I, U)
        assert apply_psi(PsiInstr.RIGHT, (c, (a, b))) == ((ONE_MARK, (c, a)), b)

    def test_up_undoes_both(self):
        for down in (PsiInstr.LEFT, PsiInstr.RIGHT):
            for t in trees_up_to(3):
                z = apply_psi(down, t)
                if z is not None:
                    assert apply_psi(PsiInstr.UP, z) == t

    def test_up_at_root(self):
        assert apply_psi(PsiInstr.UP, (U, I)) is None

    def test_lifted_instruction(self):
        assert apply_psi(PsiInstr.LIFTPI1, (I, (U, I))) == (I, U)
        assert apply_psi(PsiInstr.LIFTDELTA, (I, U)) == (I, I)

    def test_rules_named(self):
        assert set(zipper_rules()) == {"open", "left", "right", "up", "exit"}
        assert len(zipper_rules()["up"].rules) == 2


class TestLift:
    def test_word(self):
        assert format_expr(lift(Pair(PI2, PI1))) == "left . liftpi2 . up . right . liftpi1 . up"

    def test_generators_lift_to_one_instruction(self):
        assert lift(DELTA) == Psi(PsiInstr.LIFTDELTA)

    @settings(max_examples=200, deadline=None)
    @given(instr_strategy(), tree_strategy(12), tree_strategy(20))
    def test_lifting_law(self, i, c, t):
        expected = apply_instr(i, t)
        got = set(run(lift(i), (c, t)).outputs)
        assert got == (set() if expected is None else {(c, expected)})

    @settings(max_examples=200, deadline=None)
    @given(instr_strategy(), tree_strategy(20))
    def test_to_finite(self, i, t):
        expected = apply_instr(i, t)
        got = set(run(to_finite(i), t).outputs)
        assert got == (set() if expected is None else {expected})

    def test_deep_instruction(self):
        rng = random.Random(11)
        for _ in range(50):
            i = random_instr(rng, 4)
            t = random_tree(rng, 7)
            expected = apply_instr(i, t)
            assert set(run(to_finite(i), t).outputs) == (set() if expected is None else {expected})
