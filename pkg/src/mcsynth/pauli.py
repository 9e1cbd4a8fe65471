"""Pauli-string algebra over the binary (z|x) encoding.

An n-qubit Pauli string is stored as two n-bit integers ``z`` and ``x``.
Bit ``i`` (least significant first) describes the factor on qubit ``i + 1``
via the mapping

    (z_i, x_i):  (0, 0) -> I    (0, 1) -> X    (1, 0) -> Z    (1, 1) -> Y

so symplectic inner products and bit updates run word-parallel on plain
Python integers at any qubit count.

:class:`SignedPauli` is a Hermitian Pauli with an overall sign of +/-1; it is
what tableau rows and circuit gate payloads are made of.  :class:`PhasedPauli`
carries a full phase ``i**phase_exp`` with ``phase_exp`` mod 4 and shows up as
the intermediate result of products and conjugations.  Phase bookkeeping is
exact and fixed by the convention that ``Y`` is stored as (z, x) = (1, 1) with
``Y = i * X @ Z``; the resulting product rule in :func:`raw_product` is
validated exhaustively against dense matrices in the test suite.

In text form a Pauli is a sign character followed by one letter per qubit,
qubit 1 leftmost: ``"+XIZ"``, ``"-Y"``.
"""

from __future__ import annotations

from dataclasses import dataclass

_CHAR_BITS = {"I": (0, 0), "X": (0, 1), "Z": (1, 0), "Y": (1, 1)}
_BITS_CHAR = {bits: ch for ch, bits in _CHAR_BITS.items()}


class PauliError(ValueError):
    """Malformed Pauli text or incompatible operands."""


@dataclass(frozen=True, slots=True)
class SignedPauli:
    """Hermitian n-qubit Pauli string with a +/-1 sign."""

    n: int
    z: int
    x: int
    sign: int = 1

    def __post_init__(self):
        if self.n < 1:
            raise PauliError(f"qubit count must be positive, got {self.n}")
        top = 1 << self.n
        if not (0 <= self.z < top and 0 <= self.x < top):
            raise PauliError("bit vector out of range for qubit count")
        if self.sign not in (1, -1):
            raise PauliError(f"sign must be +1 or -1, got {self.sign}")

    def phased(self) -> "PhasedPauli":
        return PhasedPauli(self.n, self.z, self.x, 0 if self.sign == 1 else 2)

    def __str__(self) -> str:
        return format_pauli(self)


@dataclass(frozen=True, slots=True)
class PhasedPauli:
    """n-qubit Pauli string carrying a phase i**phase_exp, phase_exp mod 4."""

    n: int
    z: int
    x: int
    phase_exp: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise PauliError(f"qubit count must be positive, got {self.n}")
        top = 1 << self.n
        if not (0 <= self.z < top and 0 <= self.x < top):
            raise PauliError("bit vector out of range for qubit count")
        if not 0 <= self.phase_exp < 4:
            raise PauliError(f"phase exponent must be in 0..3, got {self.phase_exp}")

    @property
    def is_hermitian(self) -> bool:
        return self.phase_exp % 2 == 0

    def signed(self) -> SignedPauli:
        """Convert back to a SignedPauli; requires an even phase exponent."""
        if self.phase_exp % 2:
            raise PauliError(f"phase i**{self.phase_exp} is not a sign")
        return SignedPauli(self.n, self.z, self.x, 1 if self.phase_exp == 0 else -1)


def parse_pauli(text: str) -> SignedPauli:
    """Parse ``"+XIZ"``-style text into a SignedPauli.

    The first character must be '+' or '-', followed by one character per
    qubit from {I, X, Y, Z}.  Errors name the offending 1-based position.
    """
    if not text:
        raise PauliError("empty Pauli string")
    if text[0] not in "+-":
        raise PauliError(f"expected sign '+' or '-' at position 1, got {text[0]!r}")
    body = text[1:]
    if not body:
        raise PauliError("Pauli string has a sign but no body")
    z = x = 0
    for i, ch in enumerate(body):
        bits = _CHAR_BITS.get(ch)
        if bits is None:
            raise PauliError(f"invalid Pauli character {ch!r} at position {i + 2}")
        z |= bits[0] << i
        x |= bits[1] << i
    return SignedPauli(len(body), z, x, 1 if text[0] == "+" else -1)


def format_pauli(p: SignedPauli) -> str:
    """Canonical text form; inverse of :func:`parse_pauli`."""
    chars = [_BITS_CHAR[(p.z >> i) & 1, (p.x >> i) & 1] for i in range(p.n)]
    return ("+" if p.sign == 1 else "-") + "".join(chars)


def single_pauli(n: int, qubit: int, letter: str, sign: int = 1) -> SignedPauli:
    """Weight-<=1 Pauli with `letter` on 1-based `qubit` and I elsewhere."""
    if not 1 <= qubit <= n:
        raise PauliError(f"qubit {qubit} out of range 1..{n}")
    try:
        zb, xb = _CHAR_BITS[letter]
    except KeyError:
        raise PauliError(f"unknown Pauli letter {letter!r}") from None
    return SignedPauli(n, zb << (qubit - 1), xb << (qubit - 1), sign)


def raw_product(z1: int, x1: int, e1: int, z2: int, x2: int, e2: int):
    """Low-level product of two Pauli bit patterns with i-exponent tracking.

    Returns (z, x, phase_exp) for the operator product left * right where
    each operand means i**e * P(z, x).  Pure integer bit arithmetic; used by
    the hot loops in tableau conjugation and stabilizer simulation.
    """
    z3 = z1 ^ z2
    x3 = x1 ^ x2
    e3 = (e1 + e2
          - (z1 & x1).bit_count() - (z2 & x2).bit_count()
          + 2 * (x1 & z2).bit_count()
          + (z3 & x3).bit_count())
    return z3, x3, e3 & 3


def _as_phased(p) -> PhasedPauli:
    return p.phased() if isinstance(p, SignedPauli) else p


def multiply(p, q) -> PhasedPauli:
    """Exact operator product p * q of two Pauli strings.

    Accepts SignedPauli or PhasedPauli operands of equal length; the result
    bits are the XOR of the operand bits and the phase exponent follows the
    per-qubit product rule (e.g. Z*X = iY, X*Z = -iY).
    """
    a, b = _as_phased(p), _as_phased(q)
    if a.n != b.n:
        raise PauliError(f"length mismatch: {a.n} vs {b.n}")
    z, x, e = raw_product(a.z, a.x, a.phase_exp, b.z, b.x, b.phase_exp)
    return PhasedPauli(a.n, z, x, e)


def commutes(p, q) -> bool:
    """True iff the symplectic inner product <p.z,q.x> xor <p.x,q.z> vanishes."""
    if p.n != q.n:
        raise PauliError(f"length mismatch: {p.n} vs {q.n}")
    return (((p.z & q.x).bit_count() + (p.x & q.z).bit_count()) & 1) == 0


def weight(p) -> int:
    """Number of non-identity tensor factors."""
    return (p.z | p.x).bit_count()
