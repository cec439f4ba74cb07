import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from cbar.geometry import Finite, Infinite
from cbar.io import (
    PointParseError,
    decode_approximant,
    dumps,
    encode_approximant,
    flat_csv,
    format_point,
    load_sequence,
    parse_coefficient,
    parse_point,
    write_sequence,
)
from cbar.polynomials import ChebyshevSeries, Polynomial, TrigPolynomial


@pytest.mark.parametrize("text, point", [
    ("1", Finite(1)),
    ("-2.5", Finite(-2.5)),
    ("3i", Finite(3j)),
    ("i", Finite(1j)),
    ("-i", Finite(-1j)),
    ("1-2i", Finite(1 - 2j)),
    ("  .5+1e-3j ", Finite(0.5 + 1e-3j)),
    ("2i+1", Finite(1 + 2j)),
    ("inf@0", Infinite(0)),
    ("inf@3.14159", Infinite(3.14159)),
    ("INF@-1", Infinite(-1)),
])
def test_parse_point(text, point):
    assert parse_point(text) == point


@pytest.mark.parametrize("text, pos", [
    ("", 0),
    ("1+2x", 3),
    ("1+", 2),
    ("1 + 2i", 1),
    ("1+2i+3i", 4),
    ("1+2", 1),
    ("inf", 3),
    ("inf@", 4),
    ("inf@1x", 5),
    ("abc", 0),
])
def test_parse_point_errors_point_at_offender(text, pos):
    with pytest.raises(PointParseError) as info:
        parse_point(text)
    assert info.value.pos == pos
    lines = str(info.value).splitlines()
    assert lines[-1].index("^") - 2 == pos


finite_values = st.complex_numbers(allow_nan=False, allow_infinity=False)


@given(finite_values)
def test_format_parse_roundtrip_finite(z):
    assert parse_point(format_point(Finite(z))) == Finite(z)


@given(st.floats(0, 2 * math.pi, exclude_max=True))
def test_format_parse_roundtrip_infinite(t):
    assert parse_point(format_point(Infinite(t))) == Infinite(t)


def test_parse_coefficient_forms():
    assert parse_coefficient(2) == 2
    assert parse_coefficient("0x1.8p+1") == 3
    assert parse_coefficient([1, "-0x1p-1"]) == 1 - 0.5j
    assert parse_coefficient("1-2i") == 1 - 2j
    with pytest.raises(ValueError):
        parse_coefficient([1, 2, 3])


coeff_lists = st.lists(finite_values, min_size=1, max_size=20)


@given(coeff_lists, finite_values.filter(lambda z: abs(z) < 1e300), st.floats(1e-3, 1e3))
def test_polynomial_hex_roundtrip_is_exact(c, center, scale):
    p = Polynomial(c, center, scale)
    q = decode_approximant(json.loads(json.dumps(encode_approximant(p))))
    assert np.array_equal(q.coeffs[: p.degree + 1], p.coeffs[: p.degree + 1])
    assert q.center == p.center and q.scale == p.scale


@given(st.lists(finite_values, min_size=1, max_size=9).filter(lambda c: len(c) % 2))
def test_trig_and_chebyshev_roundtrip(c):
    T = TrigPolynomial(c)
    assert np.array_equal(decode_approximant(encode_approximant(T)).coeffs, T.coeffs)
    S = ChebyshevSeries(c)
    assert np.array_equal(decode_approximant(encode_approximant(S)).coeffs[: S.degree + 1],
                          S.coeffs[: S.degree + 1])


def test_decode_unknown_type():
    with pytest.raises(ValueError):
        decode_approximant({"type": "rational", "coeffs": []})
    with pytest.raises(TypeError):
        encode_approximant(object())


def test_dumps_is_deterministic_and_plain():
    a = dumps({"b": np.float64(1.5), "a": [np.int64(2), math.inf, 1 + 2j], "c": np.array([True])})
    assert a == dumps({"a": [2, math.inf, 1 + 2j], "c": [True], "b": 1.5})
    data = json.loads(a)
    assert data == {"a": [2, "inf", [1.0, 2.0]], "b": 1.5, "c": [True]}
    assert a.endswith("\n") and a.index('"a"') < a.index('"b"')


def test_flat_csv():
    text = flat_csv({"x": {"b": 1.0, "a": [1, 2]}, "k": "s"})
    assert text.splitlines() == ["key,value", "k,s", 'x.a,"[1, 2]"', "x.b,1.0"]


def test_load_sequence_formats(tmp_path):
    a = tmp_path / "a.json"
    a.write_text(json.dumps([[1, 2], ["0x1p+0", [0, 1]], ["1+1i"]]))
    seq = load_sequence(a)
    assert [p.coeffs.tolist() for p in seq] == [[1, 2], [1, 1j], [1 + 1j]]
    b = tmp_path / "b.json"
    write_sequence(b, seq)
    again = load_sequence(b)
    assert all(p == q for p, q in zip(seq, again))
    c = tmp_path / "c.json"
    c.write_text(json.dumps({"polynomials": [[3]]}))
    assert load_sequence(c)[0].coeffs.tolist() == [3]


@pytest.mark.parametrize("content, message", [
    ("[1, 2", "invalid JSON at line 1"),
    ('{"p": []}', "'polynomials'"),
    ('"x"', "expected a list"),
    ("[[]]", "polynomial 0"),
    ('[[1], [1, "zz"]]', "polynomial 1"),
])
def test_load_sequence_errors(tmp_path, content, message):
    f = tmp_path / "bad.json"
    f.write_text(content)
    with pytest.raises(ValueError, match=message):
        load_sequence(f)
