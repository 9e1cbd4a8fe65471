"""Stabilizer tableaus: validation, conjugation, composition and inversion.

A Clifford unitary C on n qubits is specified here by the 2n conjugated
generators (C Z_i C^, C X_i C^) stored as :class:`SignedPauli` rows in the
interleaved order Z1, X1, ..., Zn, Xn.  Rows Zi and Xi anticommute for each i
and all other row pairs commute; equivalently the 2n x 2n binary part of the
tableau is symplectic over GF(2).

Inversion works on the binary part by a symplectic block transpose and then
recovers each sign s~ of a candidate row Q through the product test
``g * conjugate(t, Q) == s~ * I`` against the matching generator g.  Sign
recovery is the hot spot, so the row products are evaluated for all 2n
candidates at once with word-parallel bit matrices; :func:`conjugate` is the
scalar reference for the same product.

Elementary gates are plain tuples with 1-based qubits: ``("H", q)``,
``("S", q)``, ``("CNOT", c, t)``.

Text format (used by the CLI and the golden files)::

    mcs-tableau v1
    n 2
    Z1 -> +ZI
    X1 -> +XX
    Z2 -> +ZZ
    X2 -> +IX

'#' starts a comment line and blank lines are ignored.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._fold import fold_columns
from .bitops import and_parity, bits_to_words, pack_bits, unpack_ints, words_to_bits
from .pauli import (
    PauliError,
    PhasedPauli,
    SignedPauli,
    format_pauli,
    parse_pauli,
    weight,
)

Gate = tuple
GATE_KINDS = ("H", "S", "CNOT")
_KIND_CODE = {"H": 0, "S": 1, "CNOT": 2}

TABLEAU_MAGIC = "mcs-tableau v1"


class TableauError(ValueError):
    """Invalid tableau contents (symplectic violation, bad dimensions, ...)."""


class TableauFormatError(TableauError):
    """Malformed tableau/gate-list text; carries the offending line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True, slots=True)
class Tableau:
    """2n signed Pauli rows in the order Z1, X1, ..., Zn, Xn."""

    n: int
    rows: tuple

    def __post_init__(self):
        if self.n < 1:
            raise TableauError(f"qubit count must be positive, got {self.n}")
        if len(self.rows) != 2 * self.n:
            raise TableauError(
                f"expected {2 * self.n} rows, got {len(self.rows)}")
        for r in self.rows:
            if r.n != self.n:
                raise TableauError("row length does not match qubit count")

    def z_row(self, i: int) -> SignedPauli:
        """Image of Z_i, 1-based."""
        return self.rows[2 * (i - 1)]

    def x_row(self, i: int) -> SignedPauli:
        """Image of X_i, 1-based."""
        return self.rows[2 * (i - 1) + 1]


def row_label(k: int) -> str:
    """Label of row index k in storage order: 0 -> Z1, 1 -> X1, 2 -> Z2, ..."""
    return f"{'ZX'[k & 1]}{k // 2 + 1}"


def identity_tableau(n: int) -> Tableau:
    if n < 1:
        raise TableauError(f"qubit count must be positive, got {n}")
    rows = []
    for i in range(n):
        rows.append(SignedPauli(n, 1 << i, 0))
        rows.append(SignedPauli(n, 0, 1 << i))
    return Tableau(n, tuple(rows))


# -- symplectic validation ------------------------------------------------------

def _bit_view(t: Tableau):
    """Row bits as (2n, n) uint8 matrices (z part, x part)."""
    zbits = unpack_ints([r.z for r in t.rows], t.n)
    xbits = unpack_ints([r.x for r in t.rows], t.n)
    return zbits, xbits


def _xz_parity(zbits, xbits) -> np.ndarray:
    """P[j, k] = |z_j AND x_k| mod 2; anticommutation matrix is P ^ P.T."""
    return and_parity(bits_to_words(zbits), bits_to_words(xbits))


def _violations(anti: np.ndarray, n: int) -> list:
    expected = np.zeros_like(anti)
    for i in range(n):
        expected[2 * i, 2 * i + 1] = expected[2 * i + 1, 2 * i] = 1
    out = []
    for j, k in np.argwhere(anti != expected):
        if j < k:
            need = "must anticommute" if expected[j, k] else "must commute"
            out.append((row_label(j), row_label(k), need))
    return out


def check_symplectic(t: Tableau) -> list:
    """Return [] when the tableau rows satisfy the symplectic condition.

    Otherwise return one (row_label_a, row_label_b, requirement) triple per
    violating pair.
    """
    par = _xz_parity(*_bit_view(t))
    return _violations(par ^ par.T, t.n)


def _raise_violations(violations: list):
    parts = "; ".join(f"({a}, {b}) {msg}" for a, b, msg in violations[:4])
    more = "" if len(violations) <= 4 else f" (+{len(violations) - 4} more)"
    raise TableauError(f"invalid tableau, symplectic violations: {parts}{more}")


def _require_symplectic(t: Tableau):
    violations = check_symplectic(t)
    if violations:
        _raise_violations(violations)


# -- conjugation and composition --------------------------------------------------

def conjugate(t: Tableau, p) -> PhasedPauli:
    """Image C p C^ of a Pauli under the Clifford described by the tableau.

    The input is expanded as i**e * prod_i Z_i**z_i X_i**x_i (Z before X on
    each qubit), every generator is substituted by its tableau row, and the
    factors are multiplied left to right with exact phase tracking.  Hermitian
    in, Hermitian out.
    """
    if t.n != p.n:
        raise PauliError(f"length mismatch: tableau n={t.n}, Pauli n={p.n}")
    pz, px = p.z, p.x
    e = (p.phase_exp if isinstance(p, PhasedPauli) else (0 if p.sign == 1 else 2))
    # Z before X per qubit makes i**(3*|z&x|) the exact expansion prefactor.
    acc_e = e + 3 * (pz & px).bit_count()
    az = ax = 0
    rows = t.rows
    for i in range(t.n):
        if (pz >> i) & 1:
            r = rows[2 * i]
            rz, rx = r.z, r.x
            nz, nx = az ^ rz, ax ^ rx
            acc_e += ((0 if r.sign == 1 else 2)
                      - (az & ax).bit_count() - (rz & rx).bit_count()
                      + 2 * (ax & rz).bit_count() + (nz & nx).bit_count())
            az, ax = nz, nx
        if (px >> i) & 1:
            r = rows[2 * i + 1]
            rz, rx = r.z, r.x
            nz, nx = az ^ rz, ax ^ rx
            acc_e += ((0 if r.sign == 1 else 2)
                      - (az & ax).bit_count() - (rz & rx).bit_count()
                      + 2 * (ax & rz).bit_count() + (nz & nx).bit_count())
            az, ax = nz, nx
    return PhasedPauli(t.n, az, ax, acc_e & 3)


def _row_phase_vector(t: Tableau) -> np.ndarray:
    return np.array(
        [(0 if r.sign == 1 else 2) + 3 * (r.z & r.x).bit_count() for r in t.rows],
        dtype=np.float32)


def _images_from_bits(rowbits: np.ndarray, row_e: np.ndarray, mpar: np.ndarray,
                      cz: np.ndarray, cx: np.ndarray, es):
    """Batch of conjugation products, word-parallel.

    rowbits: (2n, 2n) uint8 of the tableau rows as [z | x]; row_e: per-row
    phase contribution; mpar[k, l] = |x_k AND z_l| mod 2; cz/cx: (M, n) input
    bits; es: input phase exponents.  Returns (outbits (M, 2n) int64, phases
    (M,) int64), matching :func:`conjugate` row by row.
    """
    n = cz.shape[1]
    sel = np.empty((cz.shape[0], 2 * n), dtype=np.float32)
    sel[:, 0::2] = cz
    sel[:, 1::2] = cx
    outbits = np.rint(sel @ rowbits.astype(np.float32)).astype(np.int64) & 1
    lin = np.rint(sel @ row_e).astype(np.int64)
    quad = np.rint(((sel @ np.triu(mpar, 1).astype(np.float32)) * sel).sum(axis=1))
    quad = quad.astype(np.int64) & 1
    zx_in = (cz.astype(np.int64) & cx).sum(axis=1)
    zx_out = (outbits[:, :n] & outbits[:, n:]).sum(axis=1)
    phases = (np.asarray(es, dtype=np.int64) + 3 * zx_in + lin + 2 * quad + zx_out) % 4
    return outbits, phases


def compose(first: Tableau, then: Tableau) -> Tableau:
    """Tableau of the Clifford (then o first)."""
    if first.n != then.n:
        raise TableauError(f"qubit count mismatch: {first.n} vs {then.n}")
    n = first.n
    zbits, xbits = _bit_view(then)
    cz, cx = _bit_view(first)
    es = [0 if r.sign == 1 else 2 for r in first.rows]
    outbits, phases = _images_from_bits(
        np.hstack([zbits, xbits]), _row_phase_vector(then),
        _xz_parity(zbits, xbits).T, cz, cx, es)
    if (phases % 2).any():
        raise TableauError("conjugation produced a non-Hermitian row; "
                           "composed tableau is corrupt")
    out_z = pack_bits(outbits[:, :n].astype(np.uint8))
    out_x = pack_bits(outbits[:, n:].astype(np.uint8))
    rows = tuple(
        SignedPauli(n, out_z[k], out_x[k], 1 if phases[k] == 0 else -1)
        for k in range(2 * n))
    return Tableau(n, rows)


def invert(t: Tableau) -> Tableau:
    """Tableau of the inverse Clifford.

    Binary part by the symplectic block transpose; signs recovered through
    the generator product test (see module docstring).
    """
    n = t.n
    zbits, xbits = _bit_view(t)
    par = _xz_parity(zbits, xbits)
    violations = _violations(par ^ par.T, n)
    if violations:
        _raise_violations(violations)

    z_of_z, x_of_z = zbits[0::2], xbits[0::2]   # blocks from the Z rows
    z_of_x, x_of_x = zbits[1::2], xbits[1::2]   # blocks from the X rows
    # Inverse binary part: [[xX^T, xZ^T], [zX^T, zZ^T]] in interleaved order.
    cz = np.empty((2 * n, n), dtype=np.uint8)
    cx = np.empty((2 * n, n), dtype=np.uint8)
    cz[0::2] = x_of_x.T
    cx[0::2] = x_of_z.T
    cz[1::2] = z_of_x.T
    cx[1::2] = z_of_z.T

    outbits, phases = _images_from_bits(
        np.hstack([zbits, xbits]), _row_phase_vector(t), par.T,
        cz, cx, np.zeros(2 * n, dtype=np.int64))

    expected = np.zeros((2 * n, 2 * n), dtype=np.int64)
    expected[0::2, :n] = np.eye(n, dtype=np.int64)
    expected[1::2, n:] = np.eye(n, dtype=np.int64)
    bad = np.argwhere((outbits != expected).any(axis=1))
    if bad.size:
        raise TableauError(
            f"corrupt tableau: row {row_label(int(bad[0, 0]))} of the inverse "
            "does not conjugate back to its generator")
    odd = np.argwhere(phases % 2)
    if odd.size:
        raise TableauError(
            f"corrupt tableau: sign recovery for row {row_label(int(odd[0, 0]))} "
            "did not yield +/-identity")

    zs = pack_bits(cz)
    xs = pack_bits(cx)
    rows = tuple(
        SignedPauli(n, zs[k], xs[k], 1 if phases[k] == 0 else -1)
        for k in range(2 * n))
    return Tableau(n, rows)


# -- elementary gates --------------------------------------------------------------

def _check_gate(n: int, g: Gate):
    kind = g[0] if g else None
    if kind in ("H", "S"):
        if len(g) != 2:
            raise TableauError(f"gate {g!r} must have exactly one qubit")
        qubits = (g[1],)
    elif kind == "CNOT":
        if len(g) != 3:
            raise TableauError(f"gate {g!r} must have control and target")
        if g[1] == g[2]:
            raise TableauError(f"CNOT control and target coincide in {g!r}")
        qubits = (g[1], g[2])
    else:
        raise TableauError(f"unknown gate kind {kind!r}")
    for q in qubits:
        if not 1 <= q <= n:
            raise TableauError(f"qubit {q} out of range 1..{n} in gate {g!r}")


def apply_gate(t: Tableau, g: Gate) -> Tableau:
    """Tableau of (g o C): conjugate every row by the elementary gate g."""
    _check_gate(t.n, g)
    kind = g[0]
    rows = []
    for r in t.rows:
        z, x, sign = r.z, r.x, r.sign
        if kind == "H":
            bit = 1 << (g[1] - 1)
            zb, xb = z & bit, x & bit
            if zb and xb:
                sign = -sign
            if bool(zb) != bool(xb):
                z ^= bit
                x ^= bit
        elif kind == "S":
            bit = 1 << (g[1] - 1)
            if x & bit:
                if z & bit:
                    sign = -sign
                z ^= bit
        else:  # CNOT
            cbit = 1 << (g[1] - 1)
            tbit = 1 << (g[2] - 1)
            xc, zt = x & cbit, z & tbit
            if xc and zt and bool(x & tbit) == bool(z & cbit):
                sign = -sign
            if xc:
                x ^= tbit
            if zt:
                z ^= cbit
        rows.append(SignedPauli(t.n, z, x, sign))
    return Tableau(t.n, tuple(rows))


def _rows_from_columns(n: int, zc: np.ndarray, xc: np.ndarray,
                       sign: np.ndarray) -> Tableau:
    zrows = pack_bits(words_to_bits(zc, 2 * n).T)
    xrows = pack_bits(words_to_bits(xc, 2 * n).T)
    s = int.from_bytes(np.ascontiguousarray(sign).view(np.uint8).tobytes(), "little")
    rows = tuple(
        SignedPauli(n, zrows[r], xrows[r], -1 if (s >> r) & 1 else 1)
        for r in range(2 * n))
    return Tableau(n, rows)


def fold_gates(n: int, gates) -> Tableau:
    """Tableau of the gate sequence applied in order to the identity.

    Equivalent to folding :func:`apply_gate` over the list, but runs with the
    2n rows bit-packed per qubit column so every gate costs O(1) word updates.
    """
    gates = list(gates)
    for g in gates:
        _check_gate(n, g)
    kinds = np.array([_KIND_CODE[g[0]] for g in gates], dtype=np.int8)
    qa = np.array([g[1] - 1 for g in gates], dtype=np.int32)
    qb = np.array([g[2] - 1 if g[0] == "CNOT" else 0 for g in gates],
                  dtype=np.int32)
    return _rows_from_columns(n, *fold_columns(n, kinds, qa, qb))


def _random_gate_arrays(n: int, seed: int):
    rng = np.random.default_rng(seed)
    count = 5 * n * n
    nkinds = 3 if n > 1 else 2
    noff = n - 1 if n > 1 else 1
    # One uniform draw per gate over kind x qubit x CNOT-offset.
    v = rng.integers(0, nkinds * n * noff, size=count, dtype=np.int64)
    kinds = (v % nkinds).astype(np.int8)
    w = v // nkinds
    qa = (w % n).astype(np.int32)
    qb = ((qa + 1 + w // n) % n).astype(np.int32)   # distinct CNOT target
    return kinds, qa, qb


def random_tableau(n: int, seed: int) -> Tableau:
    """Tableau half of :func:`random_clifford`, skipping the gate-list build."""
    if n < 1:
        raise TableauError(f"qubit count must be positive, got {n}")
    kinds, qa, qb = _random_gate_arrays(n, seed)
    return _rows_from_columns(n, *fold_columns(n, kinds, qa, qb))


def random_clifford(n: int, seed: int):
    """Deterministic pseudo-random Clifford as (tableau, gate list).

    Draws 5*n**2 gates uniformly from {H, S, CNOT} with uniform qubits
    (H/S only when n == 1) and folds them onto the identity tableau.  Not
    uniform over the Clifford group; intended for coverage testing.
    """
    if n < 1:
        raise TableauError(f"qubit count must be positive, got {n}")
    kinds, qa, qb = _random_gate_arrays(n, seed)
    gates = []
    for k, a, b in zip(kinds.tolist(), qa.tolist(), qb.tolist()):
        if k == 0:
            gates.append(("H", a + 1))
        elif k == 1:
            gates.append(("S", a + 1))
        else:
            gates.append(("CNOT", a + 1, b + 1))
    return _rows_from_columns(n, *fold_columns(n, kinds, qa, qb)), gates


def tableau_weight(t: Tableau) -> int:
    """Total number of non-identity entries across all 2n rows."""
    return sum(weight(r) for r in t.rows)


# -- text formats --------------------------------------------------------------------

def serialize_tableau(t: Tableau) -> str:
    lines = [TABLEAU_MAGIC, f"n {t.n}"]
    for k, r in enumerate(t.rows):
        lines.append(f"{row_label(k)} -> {format_pauli(r)}")
    return "\n".join(lines) + "\n"


def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), 1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        yield lineno, stripped


def parse_tableau(text: str) -> Tableau:
    lines = list(_content_lines(text))
    if not lines:
        raise TableauFormatError(1, "empty tableau file")
    pos = 0
    lineno, header = lines[pos]
    if header != TABLEAU_MAGIC:
        raise TableauFormatError(lineno, f"expected header {TABLEAU_MAGIC!r}")
    pos += 1
    if pos >= len(lines):
        raise TableauFormatError(lineno, "missing 'n <N>' line")
    lineno, nline = lines[pos]
    parts = nline.split()
    if len(parts) != 2 or parts[0] != "n" or not parts[1].isdigit() or int(parts[1]) < 1:
        raise TableauFormatError(lineno, f"expected 'n <N>' with N >= 1, got {nline!r}")
    n = int(parts[1])
    pos += 1

    rows = []
    row_lines = []
    for k in range(2 * n):
        if pos >= len(lines):
            raise TableauFormatError(
                lines[-1][0], f"missing row {row_label(k)}: expected {2 * n} rows")
        lineno, line = lines[pos]
        pos += 1
        fields = line.split()
        if len(fields) != 3 or fields[1] != "->":
            raise TableauFormatError(lineno, f"expected '{row_label(k)} -> <pauli>'")
        if fields[0] != row_label(k):
            raise TableauFormatError(
                lineno, f"expected row {row_label(k)}, got {fields[0]!r}")
        try:
            p = parse_pauli(fields[2])
        except PauliError as exc:
            raise TableauFormatError(lineno, str(exc)) from None
        if p.n != n:
            raise TableauFormatError(
                lineno, f"row has {p.n} qubits, tableau declares {n}")
        rows.append(p)
        row_lines.append(lineno)
    if pos < len(lines):
        raise TableauFormatError(lines[pos][0], "unexpected content after last row")

    t = Tableau(n, tuple(rows))
    violations = check_symplectic(t)
    if violations:
        a, b, msg = violations[0]
        la = row_lines["ZX".index(a[0]) + 2 * (int(a[1:]) - 1)]
        lb = row_lines["ZX".index(b[0]) + 2 * (int(b[1:]) - 1)]
        raise TableauFormatError(
            lb, f"symplectic violation: rows {a} (line {la}) and {b} {msg}")
    return t


def serialize_gates(gates) -> str:
    return "".join(" ".join(str(f) for f in g) + "\n" for g in gates)


def parse_gates(text: str) -> list:
    gates = []
    for lineno, line in _content_lines(text):
        fields = line.split()
        kind = fields[0]
        if kind in ("H", "S") and len(fields) == 2 and fields[1].isdigit():
            gates.append((kind, int(fields[1])))
        elif kind == "CNOT" and len(fields) == 3 and all(f.isdigit() for f in fields[1:]):
            gates.append((kind, int(fields[1]), int(fields[2])))
        else:
            raise TableauFormatError(lineno, f"malformed gate line {line!r}")
    return gates
