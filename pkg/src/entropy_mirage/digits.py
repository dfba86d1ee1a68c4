"""Digit streams: Champernowne, pi, external digit files and seeded controls."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

__all__ = [
    "DigitStream",
    "DEFAULT_PI_BUDGET",
    "champernowne_digits",
    "pi_digits",
    "pi_decimal_string",
    "pi_hex_string",
    "bbp_hex_digit",
    "binarize",
    "load_digit_file",
    "format_digit_file",
    "prng_digits",
]

log = logging.getLogger(__name__)

DEFAULT_PI_BUDGET = 100_000

_ALPHABET = "0123456789abcdefghijklmnopqrstuvwxyz"


@dataclass(frozen=True)
class DigitStream:
    base: int
    digits: tuple[int, ...]
    provenance: str

    def __post_init__(self):
        if self.base < 2:
            raise ValueError(f"base must be >= 2, got {self.base}")
        if any(d < 0 or d >= self.base for d in self.digits):
            raise ValueError(f"digit outside [0, {self.base})")

    def __len__(self) -> int:
        return len(self.digits)

    def as_string(self) -> str:
        return "".join(_ALPHABET[d] for d in self.digits)


def _to_base(k: int, base: int) -> list[int]:
    out = []
    while k:
        k, r = divmod(k, base)
        out.append(r)
    return out[::-1]


def champernowne_digits(base: int, count: int) -> DigitStream:
    """First ``count`` digits of ``0.1 2 3 ...`` written in ``base``."""
    if base < 2:
        raise ValueError(f"base must be >= 2, got {base}")
    if count < 0:
        raise ValueError("count must be non-negative")
    digits: list[int] = []
    k = 1
    while len(digits) < count:
        digits.extend(_to_base(k, base))
        k += 1
    return DigitStream(base, tuple(digits[:count]), "champernowne")


def _int_to_decimal(x: int, width: int) -> str:
    # str() on huge ints is quadratic and capped by sys.int_info limits
    if width <= 1000:
        return str(x).zfill(width)
    half = width // 2
    hi, lo = divmod(x, 10**half)
    return _int_to_decimal(hi, width - half) + _int_to_decimal(lo, half)


def _chudnovsky_bs(a: int, b: int) -> tuple[int, int, int]:
    if b - a == 1:
        if a == 0:
            p = q = 1
        else:
            p = (6 * a - 5) * (2 * a - 1) * (6 * a - 1)
            q = a * a * a * 10939058860032000  # 640320**3 // 24
        t = p * (13591409 + 545140134 * a)
        return p, q, -t if a & 1 else t
    m = (a + b) // 2
    pam, qam, tam = _chudnovsky_bs(a, m)
    pmb, qmb, tmb = _chudnovsky_bs(m, b)
    return pam * pmb, qam * qmb, qmb * tam + pam * tmb


def pi_decimal_string(count: int) -> str:
    """Leading ``count`` decimal digits of pi, starting with the integer 3.

    Evaluated in fixed point with the Chudnovsky series (binary splitting)
    plus guard digits, then truncated.
    """
    if count <= 0:
        return ""
    guard = 12
    terms = (count + guard) // 14 + 2
    _, q, t = _chudnovsky_bs(0, terms)
    one = 10 ** (count + guard)
    fixed = q * 426880 * math.isqrt(10005 * one * one) // t
    return _int_to_decimal(fixed // 10 ** (guard + 1), count)


def pi_hex_string(count: int) -> str:
    """Leading ``count`` hexadecimal digits of pi (``"3243f6a8..."``).

    The BBP series ``sum 16^-k (4/(8k+1) - 2/(8k+4) - 1/(8k+5) - 1/(8k+6))``
    is summed in binary fixed point; every term adds one hex digit.
    """
    if count <= 0:
        return ""
    guard = 8
    width = 4 * (count + guard)
    one = 1 << width
    total = 0
    for k in range(count + guard + 1):
        term = 4 * one // (8 * k + 1) - 2 * one // (8 * k + 4) - one // (8 * k + 5) - one // (8 * k + 6)
        total += term >> (4 * k)
    return format(total >> (4 * (guard + 1)), "x").zfill(count)[:count]


def bbp_hex_digit(position: int) -> int:
    """Hex digit of pi at ``position`` after the point (1-based), by BBP
    digit extraction without computing the preceding digits."""
    if position < 1:
        raise ValueError("position is 1-based")
    n = position - 1

    def series(j: int) -> float:
        s = 0.0
        for k in range(n + 1):
            denom = 8 * k + j
            s = (s + pow(16, n - k, denom) / denom) % 1.0
        k = n + 1
        while True:
            term = 16.0 ** (n - k) / (8 * k + j)
            if term < 1e-17:
                break
            s += term
            k += 1
        return s % 1.0

    x = (4 * series(1) - 2 * series(4) - series(5) - series(6)) % 1.0
    return int(x * 16)


def pi_digits(
    base: int,
    count: int,
    *,
    digit_file: str | Path | None = None,
    budget: int = DEFAULT_PI_BUDGET,
) -> DigitStream:
    """Leading digits of pi in base 10 or 2, integer part included.

    Up to ``budget`` digits are computed natively. A ``digit_file`` is used
    for longer requests and, when both are available, the computed digits are
    checked against it.
    """
    if base not in (2, 10):
        raise ValueError("pi digits are available in base 2 or 10")
    if count < 0:
        raise ValueError("count must be non-negative")
    reference = None
    if digit_file is not None:
        reference = load_digit_file(digit_file)
        if reference.base != base:
            raise ValueError(f"digit file has base {reference.base}, expected {base}")

    if count > budget:
        if reference is None:
            raise ValueError(
                f"{count} digits exceed the compute budget of {budget}; supply a digit file"
            )
        if len(reference) < count:
            raise ValueError(f"digit file holds {len(reference)} digits, {count} requested")
        return DigitStream(base, reference.digits[:count], reference.provenance)

    if base == 10:
        digits = tuple(int(c) for c in pi_decimal_string(count))
    else:
        # "11" is the integer part, then four bits per hex digit
        hexdigits = pi_hex_string(max(0, (count - 2 + 3) // 4) + 1)[1:]
        bits = "11" + "".join(format(int(h, 16), "04b") for h in hexdigits)
        digits = tuple(int(c) for c in bits[:count])

    if reference is not None:
        overlap = min(len(reference), count)
        if reference.digits[:overlap] != digits[:overlap]:
            bad = next(i for i in range(overlap) if reference.digits[i] != digits[i])
            raise ValueError(f"computed pi disagrees with {reference.provenance} at digit {bad}")
    return DigitStream(base, digits, "pi")


def binarize(s: DigitStream) -> DigitStream:
    """Map each digit to 0 if ``d < base / 2`` else 1."""
    if s.base == 2:
        return s
    digits = tuple(0 if 2 * d < s.base else 1 for d in s.digits)
    return DigitStream(2, digits, f"binarize({s.provenance})")


def load_digit_file(path: str | Path) -> DigitStream:
    """Read a digit file.

    Lines starting with ``#`` are comments; one of them must be
    ``# base=B``. Everything else is digits, whitespace ignored.
    """
    path = Path(path)
    base = None
    chars: list[str] = []
    for raw in path.read_text(encoding="ascii").splitlines():
        line = raw.strip()
        if line.startswith("#"):
            key, sep, value = line[1:].strip().partition("=")
            if sep and key.strip() == "base":
                base = int(value)
            continue
        chars.extend(line.split())
    if base is None:
        raise ValueError(f"{path}: missing '# base=B' header")
    if not 2 <= base <= len(_ALPHABET):
        raise ValueError(f"{path}: unsupported base {base}")
    text = "".join(chars).lower()
    if not text:
        raise ValueError(f"{path}: no digits")
    digits = []
    for i, ch in enumerate(text):
        d = _ALPHABET.find(ch)
        if d < 0 or d >= base:
            raise ValueError(f"{path}: invalid digit {ch!r} for base {base} at offset {i}")
        digits.append(d)
    return DigitStream(base, tuple(digits), f"file:{path}")


def format_digit_file(s: DigitStream, width: int = 80) -> str:
    body = s.as_string()
    lines = [f"# base={s.base}", f"# provenance={s.provenance}"]
    lines.extend(body[i : i + width] for i in range(0, len(body), width))
    return "\n".join(lines) + "\n"


def prng_digits(base: int, count: int, seed) -> DigitStream:
    """Uniform digits from a seeded numpy generator (control stream)."""
    if base < 2:
        raise ValueError(f"base must be >= 2, got {base}")
    rng = np.random.default_rng(seed)
    digits = rng.integers(0, base, size=count)
    return DigitStream(base, tuple(int(d) for d in digits), f"prng:{seed}")
