import mpmath
import pytest
from hypothesis import given, strategies as st

from entropy_mirage.digits import (
    DigitStream,
    bbp_hex_digit,
    binarize,
    champernowne_digits,
    format_digit_file,
    load_digit_file,
    pi_digits,
    pi_hex_string,
    prng_digits,
)
from entropy_mirage.measures import sequence_entropy


def mp_pi_decimal(count):
    with mpmath.workdps(count + 20):
        return mpmath.nstr(mpmath.pi, count + 10, strip_zeros=False).replace(".", "")[:count]


def mp_pi_binary(count):
    with mpmath.workprec(count + 64):
        return bin(int(mpmath.floor(mpmath.pi * mpmath.mpf(2) ** (count - 2))))[2:][:count]


class TestChampernowne:
    def test_base_ten(self):
        assert champernowne_digits(10, 15).digits == (1, 2, 3, 4, 5, 6, 7, 8, 9, 1, 0, 1, 1, 1, 2)

    def test_base_two(self):
        assert champernowne_digits(2, 7).digits == (1, 1, 0, 1, 1, 1, 0)

    def test_zero_count(self):
        assert len(champernowne_digits(10, 0)) == 0

    def test_bad_base(self):
        with pytest.raises(ValueError):
            champernowne_digits(1, 5)

    @given(st.integers(2, 16), st.integers(0, 300), st.integers(0, 300))
    def test_prefix_property(self, base, a, b):
        lo, hi = sorted((a, b))
        assert champernowne_digits(base, hi).digits[:lo] == champernowne_digits(base, lo).digits


class TestPi:
    def test_first_decimal_digits(self):
        assert pi_digits(10, 10).as_string() == "3141592653"

    def test_first_bits(self):
        assert pi_digits(2, 10).as_string() == "1100100100"

    def test_decimal_against_mpmath(self):
        assert pi_digits(10, 10_000).as_string() == mp_pi_decimal(10_000)

    def test_binary_against_mpmath(self):
        assert pi_digits(2, 4_000).as_string() == mp_pi_binary(4_000)

    @pytest.mark.parametrize("position", [1, 2, 10, 100, 1000, 2500])
    def test_digit_extraction_matches_bulk(self, position):
        assert bbp_hex_digit(position) == int(pi_hex_string(position + 1)[position], 16)

    def test_hex_prefix(self):
        assert pi_hex_string(9) == "3243f6a88"

    @given(st.integers(0, 600), st.integers(0, 600))
    def test_prefix_property(self, a, b):
        lo, hi = sorted((a, b))
        assert pi_digits(10, hi).digits[:lo] == pi_digits(10, lo).digits

    def test_unsupported_base(self):
        with pytest.raises(ValueError):
            pi_digits(16, 10)

    def test_budget_requires_file(self):
        with pytest.raises(ValueError, match="budget"):
            pi_digits(10, 50, budget=20)

    def test_file_used_beyond_budget(self, tmp_path):
        f = tmp_path / "pi.txt"
        f.write_text("# base=10\n31415926535897\n")
        s = pi_digits(10, 12, digit_file=f, budget=5)
        assert s.as_string() == "314159265358"
        assert s.provenance.startswith("file:")

    def test_file_cross_check(self, tmp_path):
        f = tmp_path / "bad.txt"
        f.write_text("# base=10\n3141592600\n")
        with pytest.raises(ValueError, match="disagrees"):
            pi_digits(10, 10, digit_file=f)


class TestBinarize:
    def test_decimal(self):
        s = DigitStream(10, (0, 4, 5, 9), "x")
        assert binarize(s).digits == (0, 0, 1, 1)
        assert binarize(s).provenance == "binarize(x)"

    def test_odd_base(self):
        assert binarize(DigitStream(3, (0, 1, 2), "x")).digits == (0, 0, 1)

    def test_binary_unchanged(self):
        s = DigitStream(2, (1, 0, 1), "x")
        assert binarize(s) is s

    @given(st.lists(st.integers(0, 9), max_size=50))
    def test_idempotent(self, ds):
        once = binarize(DigitStream(10, tuple(ds), "x"))
        assert binarize(once) == once


class TestDigitFile:
    def test_parse_with_comments_and_whitespace(self, tmp_path):
        f = tmp_path / "d.txt"
        f.write_text("# some note\n# base=16\n3 2 4\n3F\n")
        s = load_digit_file(f)
        assert s.base == 16 and s.digits == (3, 2, 4, 3, 15)
        assert s.provenance == f"file:{f}"

    @pytest.mark.parametrize(
        "text, message",
        [("0101\n", "header"), ("# base=2\n", "no digits"), ("# base=2\n0120\n", "invalid digit")],
    )
    def test_errors(self, tmp_path, text, message):
        f = tmp_path / "d.txt"
        f.write_text(text)
        with pytest.raises(ValueError, match=message):
            load_digit_file(f)

    def test_missing_file(self, tmp_path):
        with pytest.raises(OSError):
            load_digit_file(tmp_path / "absent.txt")

    def test_round_trip(self, tmp_path):
        s = prng_digits(7, 500, 3)
        f = tmp_path / "d.txt"
        f.write_text(format_digit_file(s))
        assert load_digit_file(f).digits == s.digits


class TestPrng:
    def test_deterministic(self):
        assert prng_digits(10, 100, 5) == prng_digits(10, 100, 5)
        assert prng_digits(10, 100, 5).digits != prng_digits(10, 100, 6).digits

    def test_provenance(self):
        assert prng_digits(2, 3, 42).provenance == "prng:42"

    def test_balance(self):
        s = prng_digits(2, 100_000, 0)
        assert 0.49 <= sum(s.digits) / len(s) <= 0.51

    @pytest.mark.parametrize(
        "stream",
        [pi_digits(10, 10_000), champernowne_digits(10, 10_000), prng_digits(10, 10_000, 0)],
        ids=["pi", "champernowne", "prng"],
    )
    def test_single_bit_entropy_near_one(self, stream):
        assert sequence_entropy(binarize(stream).digits) >= 0.95


def test_stream_validates_digits():
    with pytest.raises(ValueError):
        DigitStream(2, (0, 2), "x")
