"""Expression parser and second-order dual-number evaluation."""

import math

import numpy as np
import pytest

from slantgeo import catalog, dsl
from slantgeo.dsl import (Binary, DslError, Name, Num, Unary, eval_jet2,
                          free_names, parse, to_text)


class TestParser:
    def test_simple_shape(self):
        ast = parse("u*cos(alpha)")
        assert isinstance(ast, Binary) and ast.op == "*"
        assert isinstance(ast.left, Name) and ast.left.ident == "u"
        assert isinstance(ast.right, Unary) and ast.right.op == "cos"
        assert ast.right.arg == Name("alpha")

    def test_ex23_component(self):
        ast = parse("exp(k*u)*cos(u)*cos(v)")
        assert free_names(ast) == {"k", "u", "v"}
        val = eval_jet2(ast, 0.5, 0.25, {"k": 2.0}).value
        assert val == pytest.approx(math.exp(1.0) * math.cos(0.5) * math.cos(0.25))

    def test_precedence_and_power(self):
        assert eval_jet2(parse("2+3*4"), 0, 0).value == 14
        # right-associative; non-literal exponents run through exp/log
        assert eval_jet2(parse("2^3^2"), 0, 0).value == pytest.approx(512.0, rel=1e-14)
        assert eval_jet2(parse("-2^2"), 0, 0).value == -4
        assert eval_jet2(parse("(2+3)*4"), 0, 0).value == 20
        assert eval_jet2(parse("7/2/2"), 0, 0).value == pytest.approx(1.75)

    def test_syntax_error_position(self):
        with pytest.raises(DslError) as err:
            parse("u + * v")
        assert err.value.pos == 4

    def test_unknown_function(self):
        with pytest.raises(DslError):
            parse("frob(u)")

    def test_arity_mismatch(self):
        with pytest.raises(DslError):
            parse("sin(u, v)")

    def test_unknown_identifier_check(self):
        ast = parse("u + bogus")
        with pytest.raises(DslError):
            dsl.check_free_names(ast, {})
        dsl.check_free_names(ast, {"bogus": 1.0})

    def test_unbound_at_eval(self):
        with pytest.raises(DslError):
            eval_jet2(parse("q + 1"), 0.0, 0.0)


class TestJetValues:
    def test_product_jet(self):
        j = eval_jet2(parse("u*v"), 2.0, 3.0)
        assert (j.value, j.du, j.dv, j.duv, j.duu, j.dvv) == (6, 3, 2, 1, 0, 0)

    def test_kcosv_jet(self):
        j = eval_jet2(parse("k*cos(v)"), 0.0, 0.0, {"k": 1.0})
        assert j.value == 1.0
        assert j.dv == 0.0
        assert j.dvv == -1.0

    def test_division_and_powers(self):
        j = eval_jet2(parse("u^3/v"), 2.0, 4.0)
        assert j.value == 2.0
        assert j.du == pytest.approx(3.0)           # 3u^2/v
        assert j.dv == pytest.approx(-0.5)          # -u^3/v^2
        assert j.duu == pytest.approx(3.0)          # 6u/v
        assert j.duv == pytest.approx(-0.75)        # -3u^2/v^2
        assert j.dvv == pytest.approx(0.25)         # 2u^3/v^3

    def test_general_power(self):
        j = eval_jet2(parse("u^v"), 2.0, 3.0)
        assert j.value == pytest.approx(8.0)
        assert j.du == pytest.approx(12.0)                    # v u^(v-1)
        assert j.dv == pytest.approx(8.0 * math.log(2.0))

    def test_domain_errors(self):
        with pytest.raises(DslError):
            eval_jet2(parse("log(u)"), -1.0, 0.0)
        with pytest.raises(DslError):
            eval_jet2(parse("1/u"), 0.0, 0.0)
        with pytest.raises(DslError):
            eval_jet2(parse("sqrt(u)"), -2.0, 0.0)

    def test_var_renaming_for_loops(self):
        ast = parse("sin(t)")
        j = eval_jet2(ast, 0.3, 0.0, var_names=("t", "_"))
        assert j.value == pytest.approx(math.sin(0.3))
        assert j.du == pytest.approx(math.cos(0.3))


def _random_ast(rng, depth):
    if depth == 0:
        choice = rng.integers(0, 3)
        if choice == 0:
            return Num(float(rng.uniform(0.5, 2.0)))
        return Name("u" if choice == 1 else "v")
    op = rng.integers(0, 6)
    if op < 3:
        return Binary("+-*"[op], _random_ast(rng, depth - 1),
                      _random_ast(rng, depth - 1))
    if op == 3:
        fn = ("sin", "cos", "exp", "atan", "sinh", "cosh", "tan")[rng.integers(0, 7)]
        return Unary(fn, _random_ast(rng, depth - 1))
    if op == 4:
        return Unary("neg", _random_ast(rng, depth - 1))
    return Binary("^", _random_ast(rng, depth - 1), Num(float(rng.integers(1, 4))))


def _fd_oracle(ast, u, v, h=1e-4):
    """Richardson central differences for first and second partials."""
    def f(uu, vv):
        return eval_jet2(ast, uu, vv).value

    def d1(g, x, step):
        a = (g(x + step) - g(x - step)) / (2 * step)
        b = (g(x + step / 2) - g(x - step / 2)) / step
        return (4 * b - a) / 3

    du = d1(lambda x: f(x, v), u, h)
    dv = d1(lambda x: f(u, x), v, h)
    duu = (f(u + h, v) - 2 * f(u, v) + f(u - h, v)) / h ** 2
    dvv = (f(u, v + h) - 2 * f(u, v) + f(u, v - h)) / h ** 2
    duv = (f(u + h, v + h) - f(u + h, v - h)
           - f(u - h, v + h) + f(u - h, v - h)) / (4 * h ** 2)
    return du, dv, duu, duv, dvv


class TestAgainstFiniteDifferences:
    def test_random_expressions(self):
        rng = np.random.default_rng(2024)
        checked = 0
        while checked < 1000:
            ast = _random_ast(rng, int(rng.integers(1, 4)))
            u = float(rng.uniform(-1.0, 1.0))
            v = float(rng.uniform(-1.0, 1.0))
            try:
                jet = eval_jet2(ast, u, v)
            except DslError:
                continue
            envelope = (abs(jet.value), abs(jet.du), abs(jet.dv),
                        abs(jet.duu), abs(jet.duv), abs(jet.dvv))
            if max(envelope) > 1e3:
                continue  # huge values make the FD oracle meaningless
            du, dv, duu, duv, dvv = _fd_oracle(ast, u, v)
            # absolute 1e-6 for tame O(1) expressions, scaled up with the
            # jet magnitude (the FD truncation error scales the same way)
            scale = max(1.0, *envelope)
            assert jet.du == pytest.approx(du, abs=1e-6 * scale)
            assert jet.dv == pytest.approx(dv, abs=1e-6 * scale)
            assert jet.duu == pytest.approx(duu, abs=2e-5 * scale)
            assert jet.duv == pytest.approx(duv, abs=2e-5 * scale)
            assert jet.dvv == pytest.approx(dvv, abs=2e-5 * scale)
            checked += 1


class TestRoundTrip:
    def test_print_parse_identical_values(self):
        rng = np.random.default_rng(99)
        for _ in range(60):
            ast = _random_ast(rng, int(rng.integers(1, 4)))
            text = to_text(ast)
            back = parse(text)
            for _ in range(3):
                u = float(rng.uniform(-1, 1))
                v = float(rng.uniform(-1, 1))
                try:
                    a = eval_jet2(ast, u, v)
                except DslError:
                    continue
                b = eval_jet2(back, u, v)
                assert a.value == b.value
                assert a.du == b.du and a.dvv == b.dvv

    def test_print_parse_print_fixpoint(self):
        for text in ("u*cos(v) + 1", "exp(k*u)*sin(v)", "-(u + v)^2/3",
                     "u^2^3", "1 - u - v", "u/(v*v)"):
            once = to_text(parse(text))
            twice = to_text(parse(once))
            assert once == twice


class TestConfigImmersion:
    EX24 = {
        "name": "ex2.4-dsl",
        "components": ["u", "k*cos(v)", "v", "k*sin(v)"],
        "params": {"k": 1.0},
        "domain": [[0.0, 1.0], [0.0, 6.283185307179586]],
    }

    def test_matches_catalog_jets(self):
        imm_dsl = catalog.load_config(self.EX24)
        imm_cat = catalog.build("ex2.4", {"k": 1.0})
        rng = np.random.default_rng(3)
        for _ in range(25):
            u = float(rng.uniform(0, 1))
            v = float(rng.uniform(0, 6.28))
            jd = imm_dsl.jet(u, v)
            jc = imm_cat.jet(u, v)
            for f in ("point", "xu", "xv", "xuu", "xuv", "xvv"):
                assert np.max(np.abs(getattr(jd, f) - getattr(jc, f))) < 1e-13

    def test_ex23_matches_catalog(self):
        cfg = {
            "name": "ex2.3-dsl",
            "components": [
                "exp(k*u)*cos(u)*cos(v)", "exp(k*u)*sin(u)*cos(v)",
                "exp(k*u)*cos(u)*sin(v)", "exp(k*u)*sin(u)*sin(v)"],
            "params": {"k": 1.0},
            "domain": [[0.0, 1.0], [0.0, 6.283185307179586]],
        }
        imm_dsl = catalog.load_config(cfg)
        imm_cat = catalog.build("ex2.3", {"k": 1.0})
        rng = np.random.default_rng(4)
        for _ in range(25):
            u = float(rng.uniform(0, 1))
            v = float(rng.uniform(0, 6.28))
            jd = imm_dsl.jet(u, v)
            jc = imm_cat.jet(u, v)
            for f in ("point", "xu", "xv", "xuu", "xuv", "xvv"):
                assert np.max(np.abs(getattr(jd, f) - getattr(jc, f))) < 1e-13

    def test_missing_fields_rejected(self):
        with pytest.raises((KeyError, ValueError)):
            catalog.load_config({"name": "x", "components": ["u"]})
