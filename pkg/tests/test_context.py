import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from fcacore.context import (
    ContextError,
    CxtParseError,
    FormalContext,
    closure_attributes,
    derive_attributes,
    derive_objects,
    dual,
    format_csv,
    format_cxt,
    induced_subcontext,
    is_induced_subcontext,
    parse_csv,
    parse_cxt,
    read_context,
    write_context,
)


@st.composite
def contexts(draw, max_objects=12, max_attributes=12):
    n = draw(st.integers(0, max_objects))
    m = draw(st.integers(0, max_attributes))
    cells = draw(st.lists(st.booleans(), min_size=n * m, max_size=n * m))
    arr = np.array(cells, dtype=bool).reshape(n, m)
    return FormalContext.from_array(arr)


@st.composite
def context_and_subsets(draw):
    K = draw(contexts())
    A = draw(st.frozensets(st.integers(0, max(K.n_objects - 1, 0)))) if K.n_objects else frozenset()
    B = draw(st.frozensets(st.integers(0, max(K.n_attributes - 1, 0)))) if K.n_attributes else frozenset()
    return K, A, B


# Water: attributes 1..9 and objects 1..8 in table numbering are indices 0..8 / 0..7


def test_water_shape(W):
    assert W.shape == (8, 9)
    assert W.n_incidences == 34
    assert W.objects[0] == "Bean" and W.objects[-1] == "Spike-weed"


def test_derive_objects_examples(W):
    assert derive_objects(W, {0}) == {3, 4, 5, 8}
    assert derive_objects(W, set()) == set(range(9))
    assert derive_objects(W, {1, 2, 3, 4}) == oracles.intent(W, {1, 2, 3, 4}) == {0, 5}


def test_derive_attributes_examples(W):
    assert derive_attributes(W, {7}) == {W.object_index("Dog")}
    assert derive_attributes(W, set()) == set(range(8))
    assert derive_attributes(W, {5}) == oracles.extent(W, {5}) == set(range(8))


def test_closure_examples(W):
    assert closure_attributes(W, {0}) == oracles.closure(W, {0}) == {0, 5}
    assert closure_attributes(W, {5}) == {5}


def test_out_of_range(W):
    with pytest.raises(ContextError):
        derive_objects(W, {8})
    with pytest.raises(ContextError):
        derive_attributes(W, {9})
    with pytest.raises(ContextError):
        FormalContext(["a"], ["b"], [(0, 1)])


def test_duplicate_names_rejected():
    with pytest.raises(ContextError):
        FormalContext(["a", "a"], ["m"])
    with pytest.raises(ContextError):
        FormalContext(["a"], ["m", "m"])


def test_induced_subcontext_examples(W):
    assert induced_subcontext(W, range(8), range(9)) == W
    empty = induced_subcontext(W, [], [])
    assert empty.shape == (0, 0)
    keep = [g for g in range(8) if W.objects[g] not in ("Bean", "Leech")]
    S = induced_subcontext(W, keep, range(7))
    assert S.objects == ("Bream", "Dog", "Frog", "Maize", "Reed", "Spike-weed")
    rows = ["XXX..X.", "XX.X.X.", "XXXX.X.", "...XXXX", "..XXXXX", "..X.XXX"]
    expected = {(g, a) for g, r in enumerate(rows) for a, ch in enumerate(r) if ch == "X"}
    assert S.incidence == expected
    assert is_induced_subcontext(S, W)


def test_dual_examples(W):
    assert dual(FormalContext([], [])).shape == (0, 0)
    D = dual(W)
    assert D.shape == (9, 8)
    row = D.rows[D.object_index("suckles its offspring")]
    assert row == 1 << D.attribute_index("Dog")
    assert dual(D) == W


def test_dual_involution_random():
    rng = np.random.default_rng(7)
    K = FormalContext.from_array(rng.random((10, 10)) < 0.4)
    assert dual(dual(K)) == K
    assert dual(K).incidence == {(m, g) for g, m in K.incidence}


@settings(max_examples=150, deadline=None)
@given(context_and_subsets())
def test_derivation_matches_oracle(data):
    K, A, B = data
    assert derive_objects(K, A) == oracles.intent(K, A)
    assert derive_attributes(K, B) == oracles.extent(K, B)


@settings(max_examples=150, deadline=None)
@given(context_and_subsets(), st.data())
def test_antitone_and_galois(data, more):
    K, A, B = data
    A2 = A | more.draw(st.frozensets(st.integers(0, max(K.n_objects - 1, 0)))) if K.n_objects else A
    B2 = B | more.draw(st.frozensets(st.integers(0, max(K.n_attributes - 1, 0)))) if K.n_attributes else B
    assert derive_objects(K, A2) <= derive_objects(K, A)
    assert derive_attributes(K, B2) <= derive_attributes(K, B)
    assert (A <= derive_attributes(K, B)) == (B <= derive_objects(K, A))


@settings(max_examples=150, deadline=None)
@given(context_and_subsets(), st.data())
def test_closure_operator(data, more):
    K, _, B = data
    C = closure_attributes(K, B)
    assert B <= C
    assert closure_attributes(K, C) == C
    B2 = B | more.draw(st.frozensets(st.integers(0, max(K.n_attributes - 1, 0)))) if K.n_attributes else B
    assert C <= closure_attributes(K, B2)


@settings(max_examples=100, deadline=None)
@given(contexts())
def test_cxt_roundtrip(K):
    text = format_cxt(K)
    assert parse_cxt(text) == K
    assert format_cxt(parse_cxt(text)) == text


@settings(max_examples=100, deadline=None)
@given(contexts())
def test_csv_roundtrip(K):
    assert parse_csv(format_csv(K)) == K


def test_parse_empty():
    K = parse_cxt("B\n\n0\n0\n\n")
    assert K.shape == (0, 0)


def test_parse_row_length_error():
    text = "B\n\n2\n2\n\ng1\ng2\nm1\nm2\nX.\nX\n"
    with pytest.raises(CxtParseError) as err:
        parse_cxt(text)
    assert err.value.lineno == 11
    assert "row 1" in str(err.value)


@pytest.mark.parametrize(
    "text, lineno",
    [
        ("A\n\n0\n0\n\n", 1),
        ("B\n\nx\n0\n\n", 3),
        ("B\n\n1\n1\nfoo\n", 5),
        ("B\n\n2\n1\n\ng\ng\nm\nX\n.\n", 6),
        ("B\n\n1\n1\n\ng\nm\n", 8),
        ("B\n\n1\n1\n\ng\nm\nQ\n", 8),
    ],
)
def test_parse_errors_have_line_numbers(text, lineno):
    with pytest.raises(CxtParseError) as err:
        parse_cxt(text)
    assert err.value.lineno == lineno


def test_cxt_golden_format(W):
    text = format_cxt(W)
    assert text.startswith("B\n\n8\n9\n\nBean\n")
    assert text.endswith("..X.XXX..\n")
    assert "\r" not in text


def test_csv_reader_accepts_crosses():
    K = parse_csv(",a,b\ng1,X,\ng2,,x\n")
    assert K.incidence == {(0, 0), (1, 1)}
    K2 = parse_csv(",a,b\ng1,1,0\ng2,0,1\n")
    assert K2 == K


def test_file_roundtrip(tmp_path, W):
    for name in ("w.cxt", "w.csv"):
        path = tmp_path / name
        write_context(W, path)
        assert read_context(path) == W
    with pytest.raises(ContextError):
        read_context(tmp_path / "w.txt")
