import io
import re

import pytest

from treemach.cli import main


def call(argv):
    out = io.StringIO()
    code = main(argv, out=out)
    text = out.getvalue()
    payload = [line for line in text.splitlines() if not line.startswith("#")]
    return code, payload, text


@pytest.fixture
def machine(tmp_path):
    def write(text):
        p = tmp_path / "m.tm"
        p.write_text(text)
        return str(p)
    return write


class TestRun:
    def test_identity(self, machine):
        code, payload, text = call(["run", machine("main = 1\n"), "()"])
        assert code == 0 and payload == ["()"]
        assert "# steps=1 configs=2 truncated=false" in text

    def test_swap(self, machine):
        code, payload, _ = call(["run", machine("main = delta . pair(pi2, pi1)"), "((),((),()))"])
        assert payload == ["(((),()),())"]

    def test_zero(self, machine):
        code, payload, _ = call(["run", machine("main = 0"), "()"])
        assert code == 0 and payload == []

    def test_numeral_input(self, machine):
        code, payload, _ = call(["run", machine("main = pi2"), "#3"])
        assert payload == ["((),())"]

    def test_truncated_without_output(self, machine):
        code, payload, text = call(["run", machine("main = delta* . 0"), "()",
                                    "--max-configs", "5"])
        assert code == 2 and payload == []
        assert "truncated=true" in text

    def test_parse_error(self, machine, capsys):
        code, _, _ = call(["run", machine("main = pair(1"), "()"])
        assert code == 1
        assert "error" in capsys.readouterr().err

    def test_bad_tree(self, machine):
        assert call(["run", machine("main = 1"), "(("])[0] == 1

    def test_cost_model(self, machine):
        m = machine("main = delta . pair(pi2, pair(1,1))")
        _, _, text = call(["run", m, "((),())", "--cost", "depth"])
        assert "# cost=4 model=depth" in text

    def test_trace_flag(self, machine):
        _, payload, text = call(["run", machine("main = pi1*"), "((),())", "--trace"])
        assert payload == ["()", "((),())"]
        assert "--pi1-->" in text

    def test_deterministic_payload(self, machine):
        m = machine("main = (pi1 + pi2)*")
        runs = [call(["run", m, "(((),()),((),()))"]) for _ in range(2)]
        strip = [re.sub(r"# time=.*", "", r[2]) for r in runs]
        assert strip[0] == strip[1]


class TestTrace:
    def test_paths(self, machine):
        code, payload, _ = call(["trace", machine("main = pi2 . pi2"), "((),((),()))"])
        assert code == 0
        assert payload[0].endswith("((),((),()))")
        assert payload[-1].endswith(": ()")


class TestCompilePattern:
    def test_identity(self):
        assert call(["compile-pattern", "x => x"])[1] == ["1"]

    def test_swap(self):
        assert call(["compile-pattern", "(x,y) => (y,x)"])[1] == [
            "delta . pair(pair(eps,1) . pi2, pair(1,eps) . pi1)"]

    def test_nonlinear(self, capsys):
        assert call(["compile-pattern", "(x,x) => x"])[0] == 1
        assert "NonlinearGuard" in capsys.readouterr().err


class TestPolish:
    def test_encode(self):
        assert call(["polish", "((),((),()))"])[1] == ["pupuu"]

    def test_decode(self):
        assert call(["polish", "--decode", "u"])[1] == ["()"]

    def test_decode_error(self):
        assert call(["polish", "--decode", "pp"])[0] == 1


class TestLift:
    def test_word(self):
        assert call(["lift", "pair(pi2,pi1)"])[1] == ["left . liftpi2 . up . right . liftpi1 . up"]


class TestTuring:
    def test_run(self):
        code, payload, _ = call(["tm", "run", "binary_increment", "01|1"])
        assert code == 0 and payload == ["100"]

    def test_run_direct(self):
        assert call(["tm", "run", "binary_increment", "01|1", "--direct"])[1] == ["100"]

    def test_embed_is_a_machine_file(self, tmp_path):
        code, _, text = call(["tm", "embed", "binary_increment"])
        assert code == 0
        p = tmp_path / "inc.m"
        p.write_text(text)
        # tape "0|1" (left list ((),#0), right list (#1,())) becomes "10"
        code, payload, _ = call(["run", str(p), "(((),#0),(#1,()))"])
        assert payload == ["((),(((),()),((),())))"]

    def test_unknown_machine(self):
        assert call(["tm", "run", "no_such_machine", "0"])[0] == 1


class TestLambda:
    def test_encode(self):
        code, payload, _ = call(["lambda", "encode", r"\ 0"])
        from treemach.lam import LAMBDA_SYMBOLS
        from treemach.tree import print_tree
        assert payload == [print_tree((LAMBDA_SYMBOLS.encode("lam"), LAMBDA_SYMBOLS.encode("nought")))]

    def test_step(self):
        assert call(["lambda", "step", r"(\ 0) (\ 0)"])[1] == [r"\ 0"]

    def test_normalize(self):
        code, payload, text = call(["lambda", "normalize", r"(\ 0) (\ 0)"])
        assert payload == [r"\ 0"]
        assert "reductions=1" in text

    def test_normalize_budget(self):
        code, payload, text = call(["lambda", "normalize", r"(\ 0) (\ 0)", "--budget", "5"])
        assert code == 2 and "truncated=true" in text

    def test_bad_term(self):
        assert call(["lambda", "step", r"(\ 0"])[0] == 1
