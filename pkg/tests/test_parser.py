import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dirichlet_ball.errors import InvalidInput, ParseError
from dirichlet_ball.parser import ExprSource, format_series, parse
from dirichlet_ball.series import TruncatedPowerSeries, enumerate_multiindices


def test_parse_examples():
    assert dict(parse("1 - 2*z1*z2", 2).coefficients) == {(0, 0): 1, (1, 1): -2}
    assert dict(parse("(1-z1)^2", 2).coefficients) == {(0, 0): 1, (1, 0): -2, (2, 0): 1}
    assert dict(parse(ExprSource("i*z2", 2)).coefficients) == {(0, 1): 1j}


def test_format_examples():
    assert format_series(TruncatedPowerSeries(2, 2, {(0, 0): 1, (1, 1): -2})) == "1 - 2*z1*z2"
    assert format_series(TruncatedPowerSeries.zero(2)) == "0"
    assert format_series(TruncatedPowerSeries(2, 2, {(2, 0): 1})) == "z1^2"


@pytest.mark.parametrize(
    "text, expected",
    [
        ("-z1 + 3", {(0,): 3, (1,): -1}),
        ("2.5*z1^2", {(2,): 2.5}),
        ("(-(z1))", {(1,): -1}),
        ("  1 +\tz1 ", {(0,): 1, (1,): 1}),
        ("i*i", {(0,): -1}),
        ("z1 - z1", {}),
    ],
)
def test_grammar(text, expected):
    assert dict(parse(text, 1).coefficients) == expected


@pytest.mark.parametrize(
    "text, offset",
    [("1 + ", 4), ("z0", 0), ("(1 - z1", 7), ("2**z1", 2), ("z1^", 3), ("1 $ 2", 2), ("z1 z2", 3)],
)
def test_syntax_errors_carry_offsets(text, offset):
    with pytest.raises(ParseError) as exc:
        parse(text, 2)
    assert exc.value.offset == offset


def test_semantic_errors():
    with pytest.raises(ParseError):
        parse("z3", 2)
    with pytest.raises(ParseError):
        parse("z1^65", 2)
    assert parse("z1^64", 1).polynomial_degree == 64


def test_parse_error_is_invalid_input():
    assert issubclass(ParseError, InvalidInput)


def _random_poly(rng, n):
    ks = enumerate_multiindices(n, 6)
    coeffs = {}
    for i in rng.choice(len(ks), size=int(rng.integers(0, 7)), replace=False):
        kind = rng.integers(4)
        re, im = rng.normal(size=2) * 10.0 ** rng.integers(-3, 4, size=2)
        coeffs[ks[i]] = [complex(re, 0), complex(0, im), complex(re, im), complex(int(re), 0)][kind]
    return TruncatedPowerSeries(n, 6, coeffs)


def test_round_trip_thousand_cases():
    rng = np.random.default_rng(12345)
    for _ in range(1000):
        n = int(rng.integers(1, 4))
        f = _random_poly(rng, n)
        g = parse(format_series(f), n)
        assert dict(g.coefficients) == dict(f.coefficients), format_series(f)


ALPHABET = "0123456789.+-*^()iz z1z2 \t"


@settings(max_examples=2000, deadline=None)
@given(st.text(alphabet=ALPHABET, max_size=30) | st.text(max_size=15))
def test_fuzz_total(text):
    try:
        parse(text, 2)
    except ParseError as exc:
        assert 0 <= exc.offset <= len(text.encode("utf-8"))
