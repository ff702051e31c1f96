import random
from pathlib import Path

import pytest
from hypothesis import given
from hypothesis import strategies as st

from blockstream.specializer import (
    ArityMismatch,
    Attribute,
    CycleDetected,
    DuplicateName,
    ExternWithoutBody,
    FunRef,
    IndexMisuse,
    InvalidEntryPoint,
    IrSyntaxError,
    NameCollision,
    NonTotalIndexMatch,
    SpecializationRequest,
    UnboundExtern,
    UnboundName,
    UnknownIndexSymbol,
    build_call_graph,
    emit_ir,
    functorize,
    instantiate,
    interpret,
    parse_ir,
    specialize,
)
from blockstream.specializer.ir import INDEX_PARAM, MatchIdx, subexprs
from blockstream.specializer.rewrite import MK_PREFIX
from irgen import at_index, collapsed_edges, generate

FIXTURES = Path(__file__).parent / "fixtures" / "ir"
HPKE_BINDINGS = {"sign": "sign_p256", "enc": "enc_chachapoly"}
MATCH_F = "(index A B) (fn f [specialize] (idx x) (match-idx (A (+ x 1)) (B (* x 2))))"


def fixture(name):
    return parse_ir((FIXTURES / name).read_text())


def hpke_request(**kw):
    return SpecializationRequest("ChachaPolyP256", HPKE_BINDINGS, ("hpke",), "cp256", **kw)


# ---------------------------------------------------------------------------
# parsing


def test_parse_minimal():
    p = parse_ir("(index A B) (fn f [specialize] (idx x) x)")
    assert p.index_decl == ("A", "B")
    assert len(p.functions) == 1 and p.functions[0].indexed


def test_parse_hpke_fixture():
    p = fixture("hpke.ir")
    assert len(p.functions) == 4 and len(p.externs) == 2
    assert p.function("helper").attribute is Attribute.ELIMINATE


def test_unannotated_defaults_to_specialize():
    p = parse_ir("(index A) (fn g (x) x) (extern e 2)")
    assert p.function("g").attribute is Attribute.SPECIALIZE
    assert p.get("e").attribute is Attribute.SPECIALIZE and p.get("e").arity == 2


def test_comments_and_whitespace():
    p = parse_ir("; header\n(index A)   ; trailing\n\n(fn f (x)\n   ; inner\n   (+ x 1))\n")
    assert emit_ir(p) == "(index A)\n(fn f [specialize] (x) (+ x 1))\n"


@pytest.mark.parametrize(
    "text, exc, line, col",
    [
        ("foo bar", IrSyntaxError, 1, 1),
        ("(index A)\n(fn f (x) (+ x))", IrSyntaxError, 2, 11),
        ("(index A)\n(fn f (x) x", IrSyntaxError, 2, 1),
        ("(index A) (fn f [bogus] (x) x)", IrSyntaxError, 1, 18),
        ("(index A) (fn f (x) x)\n(fn f (y) y)", DuplicateName, 2, 5),
        ("(index A B) (fn f (idx x) (match-idx (A 1) (C 2)))", UnknownIndexSymbol, 1, 45),
        ("(index A B)\n(fn f (idx x)\n  (match-idx (A 1)))", NonTotalIndexMatch, 3, 3),
        ("(index A B) (fn f (idx x) (match-idx (A 1) (A 2) (B 3)))", NonTotalIndexMatch, None, None),
        ("(index A) (fn f (x) (match-idx (A 1)))", IndexMisuse, 1, 15),
        ("(index A) (fn f (idx) 1) (fn g (x) (call f idx))", IndexMisuse, 1, 30),
        ("(index A) (fn f (x) y)", UnboundName, 1, 15),
        ("(index A) (fn g (x) (call f x))", UnboundName, 1, 15),
        ("(index A) (fn f (x y) x)\n(fn g (x) (call f x))", ArityMismatch, 2, 5),
    ],
)
def test_parse_errors_have_positions(text, exc, line, col):
    with pytest.raises(exc) as info:
        parse_ir(text)
    if line is not None:
        assert (info.value.line, info.value.col) == (line, col)


def test_empty_program_round_trip():
    assert emit_ir(parse_ir("(index)")) == "(index)\n"


def test_emit_is_canonical_and_round_trips():
    text = (FIXTURES / "curve25519.ir").read_text()
    p = parse_ir(text)
    out = emit_ir(p)
    assert parse_ir(out) == p
    assert emit_ir(parse_ir(out)) == out
    assert all(line.count("  ") == 0 for line in out.splitlines())


@given(st.integers(0, 10_000))
def test_round_trip_generated(seed):
    p = generate(seed).program
    assert parse_ir(emit_ir(p)) == p


# ---------------------------------------------------------------------------
# call graph


def test_call_graph_hpke():
    g = build_call_graph(fixture("hpke.ir"))
    assert g.edges == {("hpke", "helper"), ("hpke", "enc"), ("helper", "sign")}
    order = list(g.order)
    assert order.index("sign") < order.index("helper") < order.index("hpke")


def test_call_graph_single_function():
    assert build_call_graph(parse_ir("(index A) (fn f (x) x)")).edges == frozenset()


def test_cycle_detected():
    with pytest.raises(CycleDetected) as info:
        build_call_graph(parse_ir("(index A) (fn f (x) (call g x)) (fn g (x) (call f x))"))
    assert set(info.value.cycle) == {"f", "g"}
    with pytest.raises(CycleDetected):
        functorize(fixture("cycle.ir"))


# ---------------------------------------------------------------------------
# functorize


def test_functorize_hpke():
    f = functorize(fixture("hpke.ir"))
    mk = f.function("mk_hpke")
    assert mk.params == (INDEX_PARAM, "sign", "enc", "m")
    assert mk.fparams == ("sign", "enc")
    assert f.function("mk_helper").params == (INDEX_PARAM, "sign", "m")
    callees = [c.callee for c in subexprs(mk.body) if hasattr(c, "callee")]
    assert callees == ["mk_helper", "enc"]
    assert f.get("hpke") is None and f.get("sign_p256") is not None


def test_functorize_leaf_only_renames():
    p = parse_ir("(index A) (fn leaf [specialize] (idx x) (* x 3))")
    mk = functorize(p).function("mk_leaf")
    assert mk.params == (INDEX_PARAM, "x") and mk.body == p.function("leaf").body


def test_functorize_two_eliminate_hops():
    p = parse_ir(
        "(index A B) (extern g 1)"
        " (fn h2 [eliminate] (idx y) (call g idx (+ y 1)))"
        " (fn h1 [eliminate] (idx y) (call h2 idx (* y 2)))"
        " (fn f [specialize] (idx x) (call h1 idx x))"
    )
    f = functorize(p)
    assert f.function("mk_f").params == (INDEX_PARAM, "g", "x")
    assert f.function("mk_h1").params == (INDEX_PARAM, "g", "y")
    assert f.function("mk_h2").params == (INDEX_PARAM, "g", "y")
    assert emit_ir(f).splitlines()[-1] == "(fn mk_f [specialize] (idx g x) (call mk_h1 idx g x))"


def test_functorize_name_clash():
    with pytest.raises(NameCollision):
        functorize(parse_ir("(index A) (fn mk_f (x) x) (fn f (idx x) x)"))


@given(st.integers(0, 10_000))
def test_subset_property(seed):
    f = functorize(generate(seed).program)
    for fn in f.functions:
        own = set(fn.fparams)
        for e in subexprs(fn.body):
            if getattr(e, "callee", "").startswith(MK_PREFIX):
                callee = f.function(e.callee)
                passed = [a.name for a in e.args[1:1 + len(callee.fparams)]]
                assert set(passed) <= own


# ---------------------------------------------------------------------------
# instantiate


def test_hpke_golden():
    out = emit_ir(specialize(fixture("hpke.ir"), hpke_request()))
    assert out == (FIXTURES / "hpke.cp256.golden").read_text()
    assert "helper" not in out


def test_hpke_other_index_and_bindings_agree_with_interpreter():
    p = fixture("hpke.ir")
    for sym in p.index_decl:
        s = specialize(p, SpecializationRequest(sym, HPKE_BINDINGS, ("hpke",), "x"))
        for m in (-3, 0, 41):
            assert interpret(s, "hpke_x", [m]) == interpret(p, "hpke", [m], sym, HPKE_BINDINGS)


def test_curve25519_nested():
    p = fixture("curve25519.ir")
    field = specialize(p, SpecializationRequest("M64", {"mul64": "core_hacl_mul64"}, ("field64_fmul", "field64_fadd"), "hacl"))
    assert emit_ir(field) == (FIXTURES / "curve25519.field64.golden").read_text()
    curve = specialize(
        p.merged(field),
        SpecializationRequest("M64", {"fmul": "field64_fmul_hacl", "fadd": "field64_fadd_hacl"}, ("curve_ladder",), "c64"),
    )
    assert emit_ir(curve) == (FIXTURES / "curve25519.c64.golden").read_text()
    g = build_call_graph(curve)
    assert ("curve_ladder_c64", "field64_fmul_hacl") in g.edges
    assert ("field64_fmul_hacl", "core_hacl_mul64") in g.edges
    assert interpret(curve, "curve_ladder_c64", [3]) == 332355


def test_non_indexed_program_copied_with_suffix():
    p = parse_ir("(index A) (fn g [specialize] (x y) (let t (+ x y) (* t t)))")
    out = specialize(p, SpecializationRequest("A", {}, ("g",), "s"))
    assert emit_ir(out) == "(index)\n(fn g_s [specialize] (x y) (let t (+ x y) (* t t)))\n"


def test_inlining_is_hygienic():
    p = parse_ir(
        "(index A) (fn h [eliminate] (idx y) (let t (* y 2) (+ t y)))"
        " (fn f [specialize] (idx t) (let y 5 (+ (call h idx t) (call h idx (+ y 1)))))"
    )
    s = specialize(p, SpecializationRequest("A", {}, ("f",), "a"))
    for t in (-1, 0, 7):
        assert interpret(s, "f_a", [t]) == interpret(p, "f", [t], "A")
    assert emit_ir(s).splitlines()[-1] == (
        "(fn f_a [specialize] (t) (let y 5 (+ (let t_1 (* t 2) (+ t_1 t)) "
        "(let y_1 (+ y 1) (let t_2 (* y_1 2) (+ t_2 y_1))))))"
    )


def test_instantiate_errors():
    p = fixture("hpke.ir")
    with pytest.raises(UnboundExtern):
        specialize(p, SpecializationRequest("ChachaPolyP256", {"sign": "sign_p256"}, ("hpke",), "x"))
    with pytest.raises(UnboundExtern):
        specialize(p, SpecializationRequest("ChachaPolyP256", {**HPKE_BINDINGS, "enc": "nowhere"}, ("hpke",), "x"))
    clash = p.merged(parse_ir("(index) (fn hpke_x (m) m)"))
    with pytest.raises(NameCollision):
        specialize(clash, SpecializationRequest("ChachaPolyP256", HPKE_BINDINGS, ("hpke",), "x"))
    with pytest.raises(InvalidEntryPoint):
        specialize(p, SpecializationRequest("ChachaPolyP256", HPKE_BINDINGS, ("helper",), "x"))
    with pytest.raises(InvalidEntryPoint):
        specialize(p, SpecializationRequest("ChachaPolyP256", HPKE_BINDINGS, ("nope",), "x"))
    with pytest.raises(UnknownIndexSymbol):
        specialize(p, SpecializationRequest("Nope", HPKE_BINDINGS, ("hpke",), "x"))


# ---------------------------------------------------------------------------
# interpreter


def test_interpret_examples():
    assert interpret(parse_ir("(index A) (fn k () 42)"), "k", []) == 42
    p = parse_ir(MATCH_F)
    assert interpret(p, "f", [5], "A") == 6
    assert interpret(p, "f", [5], "B") == 10


def test_interpret_wraps_and_compares():
    p = parse_ir("(index A) (fn f (x y) (+ (* x y) (ifz (< x y) 100 (= x y))))")
    assert interpret(p, "f", [2**62, 4]) == 100  # product wraps to 0
    assert interpret(p, "f", [3, 3]) == 109
    assert interpret(p, "f", [1, 3]) == 3


def test_interpret_errors():
    p = parse_ir("(index A) (extern e 1) (fn f (idx x) (call e idx x)) (fn g (x) x)")
    with pytest.raises(UnboundName):
        interpret(p, "nope", [])
    with pytest.raises(ArityMismatch):
        interpret(p, "g", [1, 2])
    with pytest.raises(ArityMismatch):
        interpret(p, "f", [1])
    with pytest.raises(ExternWithoutBody):
        interpret(p, "f", [1], "A")
    assert interpret(p, "f", [1], "A", {"e": "g"}) == 1


def test_interpret_functorized():
    f = functorize(fixture("hpke.ir"))
    args = ["ChachaPolyP256", FunRef("sign_p256"), FunRef("enc_chachapoly"), 4]
    assert interpret(f, "mk_hpke", args[1:], "ChachaPolyP256") == (4 + 1 + 256) * 3


# ---------------------------------------------------------------------------
# properties over generated programs


def _check_generated(seed, n_args=3):
    g = generate(seed)
    p = g.program
    rng = random.Random(seed)
    for sym in p.index_decl:
        s = specialize(p, SpecializationRequest(sym, g.bindings, g.entries, "s"))
        text = emit_ir(s)
        assert parse_ir(text) == s
        assert INDEX_PARAM not in text and "match-idx" not in text
        eliminated = {f.name for f in p.functions if f.attribute is Attribute.ELIMINATE}
        assert not eliminated & {f.name for f in s.functions}
        assert not any(isinstance(e, MatchIdx) for f in s.functions for e in subexprs(f.body))
        rename = lambda n: n + "_s" if p.get(n).indexed else n  # noqa: E731
        assert set(build_call_graph(s).edges) == collapsed_edges(at_index(p, sym), g.bindings, g.entries, rename)
        for entry in g.entries:
            for _ in range(n_args):
                args = [rng.randint(-(2**63), 2**63 - 1) for _ in range(p.function(entry).arity)]
                assert interpret(s, entry + "_s", args) == interpret(p, entry, args, sym, g.bindings)


@given(st.integers(0, 2**32))
def test_generated_programs_preserved(seed):
    _check_generated(seed)


def test_generator_respects_bounds():
    for seed in range(100):
        p = generate(seed).program
        assert len(p.functions) <= 12 + 1 and 1 <= len(p.index_decl) <= 3
