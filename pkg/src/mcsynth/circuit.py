"""Staged circuit IR produced by the measurement-assisted synthesis procedure.

A synthesized circuit acts on n data qubits with 2n ancillas (labelled a1z,
a1x, ..., anz, anx) and 2n classical bits (m1z, ..., mnx) and always has the
five-stage shape

    A    prepare every ancilla in |+>
    CPn  for i = 1..n: the i-th Z row then the i-th X row of the inverse
         tableau, applied to the data register controlled on a_iz / a_ix
    CP1  single-qubit controlled Paulis X_i (from a_ix) and Z_i (from a_iz),
         emitted in descending qubit order
    MA   X-basis measurement of every ancilla into its classical bit
         (outcome +1 records 0, outcome -1 records 1)
    P1   corrections on the data register: X_i when m_iz reads 1, Z_i when
         m_ix reads 1

Controlled payloads keep their tableau-row signs; a controlled-(-P) is kept
abstract in the IR and simulators implement it exactly (it equals
controlled-(+P) followed by Z on the control ancilla).

Text format::

    mcs-circuit v1
    n 1
    prep+ a1z
    ...
    cp a1z +Z
    ...
    mx a1z -> m1z
    ...
    cpc m1z X@1

CP1 gates are written as full-width signed Pauli strings with exactly one
non-identity character; the first 2n ``cp`` lines form stage CPn and the
remaining 2n form stage CP1.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import chain

from .pauli import PauliError, SignedPauli, format_pauli, parse_pauli, single_pauli, weight
from .tableau import Tableau, check_symplectic, invert

STAGES = ("A", "CPn", "CP1", "MA", "P1")

CIRCUIT_MAGIC = "mcs-circuit v1"

_ANCILLA_RE = re.compile(r"^a([1-9][0-9]*)([zx])$")
_BIT_RE = re.compile(r"^m([1-9][0-9]*)([zx])$")


class CircuitError(ValueError):
    """Structurally invalid circuit."""


class CircuitFormatError(CircuitError):
    """Malformed circuit text; carries the offending line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


def ancilla_name(i: int, kind: str) -> str:
    return f"a{i}{kind}"


def bit_name(i: int, kind: str) -> str:
    return f"m{i}{kind}"


def parse_ancilla(label: str):
    """Split an ancilla label into (data qubit index, 'z'|'x')."""
    m = _ANCILLA_RE.match(label)
    if not m:
        raise CircuitError(f"bad ancilla label {label!r}")
    return int(m.group(1)), m.group(2)


def parse_bit(label: str):
    m = _BIT_RE.match(label)
    if not m:
        raise CircuitError(f"bad classical bit label {label!r}")
    return int(m.group(1)), m.group(2)


def outcome_index(label: str) -> int:
    """Position of a bit/ancilla in the outcome vector (m1z, m1x, ..., mnx)."""
    i, kind = parse_bit(label) if label[0] == "m" else parse_ancilla(label)
    return 2 * (i - 1) + (kind == "x")


@dataclass(frozen=True, slots=True)
class PrepPlus:
    ancilla: str


@dataclass(frozen=True, slots=True)
class ControlledPauli:
    control: str
    payload: SignedPauli


@dataclass(frozen=True, slots=True)
class MeasureX:
    ancilla: str
    bit: str


@dataclass(frozen=True, slots=True)
class ClassicalCorrection:
    bit: str
    correction: str      # "X" or "Z", applied when the bit reads 1
    qubit: int


@dataclass(frozen=True, slots=True)
class Circuit:
    n_data: int
    prep: tuple
    cpn: tuple
    cp1: tuple
    measure: tuple
    correct: tuple

    @property
    def n_ancilla(self) -> int:
        return 2 * self.n_data

    @property
    def gates(self) -> tuple:
        return tuple(chain(self.prep, self.cpn, self.cp1, self.measure, self.correct))

    def stage(self, name: str) -> tuple:
        try:
            return {"A": self.prep, "CPn": self.cpn, "CP1": self.cp1,
                    "MA": self.measure, "P1": self.correct}[name]
        except KeyError:
            raise CircuitError(f"unknown stage {name!r}") from None


def ancilla_labels(n: int) -> list:
    return [ancilla_name(i, kind) for i in range(1, n + 1) for kind in "zx"]


def synthesize_from_inverse(t_inv: Tableau) -> Circuit:
    """Build the staged circuit whose CPn payloads are the given tableau rows.

    The rows are meant to be the inverse tableau of the Clifford being
    implemented; the circuit then applies that Clifford to the data register
    on every measurement branch.
    """
    violations = check_symplectic(t_inv)
    if violations:
        a, b, msg = violations[0]
        raise CircuitError(f"payload tableau is not symplectic: ({a}, {b}) {msg}")
    n = t_inv.n
    prep = tuple(PrepPlus(a) for a in ancilla_labels(n))
    cpn = tuple(
        ControlledPauli(ancilla_name(i, kind), row)
        for i in range(1, n + 1)
        for kind, row in (("z", t_inv.z_row(i)), ("x", t_inv.x_row(i))))
    cp1 = tuple(
        ControlledPauli(ancilla_name(i, kind), single_pauli(n, i, letter))
        for i in range(n, 0, -1)
        for kind, letter in (("x", "X"), ("z", "Z")))
    measure = tuple(
        MeasureX(ancilla_name(i, kind), bit_name(i, kind))
        for i in range(1, n + 1) for kind in "zx")
    correct = tuple(
        ClassicalCorrection(bit_name(i, kind), letter, i)
        for i in range(1, n + 1)
        for kind, letter in (("z", "X"), ("x", "Z")))
    return Circuit(n, prep, cpn, cp1, measure, correct)


def synthesize(t_of_c: Tableau) -> Circuit:
    """Synthesize a circuit implementing the Clifford described by the tableau."""
    return synthesize_from_inverse(invert(t_of_c))


def validate_circuit(c: Circuit):
    """Check the structural invariants; raises CircuitError on violation."""
    n = c.n_data
    expected = ancilla_labels(n)
    for stage_name, count in (("A", 2 * n), ("CPn", 2 * n), ("CP1", 2 * n),
                              ("MA", 2 * n), ("P1", 2 * n)):
        got = len(c.stage(stage_name))
        if got != count:
            raise CircuitError(f"stage {stage_name} has {got} gates, expected {count}")
    if sorted(g.ancilla for g in c.prep) != sorted(expected):
        raise CircuitError("stage A must prepare every ancilla exactly once")
    for stage_name, gates in (("CPn", c.cpn), ("CP1", c.cp1)):
        if sorted(g.control for g in gates) != sorted(expected):
            raise CircuitError(
                f"stage {stage_name} must use every ancilla as control exactly once")
        for g in gates:
            if g.payload.n != n:
                raise CircuitError(
                    f"payload {format_pauli(g.payload)} does not act on {n} qubits")
    for g in c.cp1:
        if weight(g.payload) != 1:
            raise CircuitError(
                f"stage CP1 payload {format_pauli(g.payload)} must have exactly "
                "one non-identity factor")
    if sorted(g.ancilla for g in c.measure) != sorted(expected):
        raise CircuitError("stage MA must measure every ancilla exactly once")
    for g in c.measure:
        i, kind = parse_ancilla(g.ancilla)
        if g.bit != bit_name(i, kind):
            raise CircuitError(
                f"measurement of {g.ancilla} must record into {bit_name(i, kind)}")
    bits = [bit_name(i, kind) for i in range(1, n + 1) for kind in "zx"]
    if sorted(g.bit for g in c.correct) != sorted(bits):
        raise CircuitError("stage P1 must consume every classical bit exactly once")
    for g in c.correct:
        if g.correction not in ("X", "Z"):
            raise CircuitError(f"correction must be X or Z, got {g.correction!r}")
        if not 1 <= g.qubit <= n:
            raise CircuitError(f"correction qubit {g.qubit} out of range 1..{n}")


# -- metrics -----------------------------------------------------------------

def _selected(c: Circuit, stages):
    if stages is None:
        names = STAGES
    elif isinstance(stages, str):
        names = (stages,)
    else:
        names = tuple(stages)
    return tuple(chain.from_iterable(c.stage(s) for s in names))


def two_qubit_gate_count(c: Circuit, stages=None) -> int:
    """Two-qubit gate cost: each controlled Pauli contributes one gate per
    non-identity factor of its payload."""
    return sum(weight(g.payload) for g in _selected(c, stages)
               if isinstance(g, ControlledPauli))


def _gate_resources(c: Circuit, g):
    """(exclusive resources, shareable data qubits) used for layering.

    Controls, ancillas and classical bits are exclusive.  A data qubit is
    exclusive to a multi-qubit payload, but single-qubit conditional Paulis
    (single-target controlled Paulis and classical corrections) may share a
    layer on a common target: conditioned on its controls the combined action
    on that qubit is a single Pauli product.
    """
    if isinstance(g, PrepPlus):
        return (("a", g.ancilla),), ()
    if isinstance(g, MeasureX):
        return (("a", g.ancilla), ("m", g.bit)), ()
    if isinstance(g, ClassicalCorrection):
        return (("m", g.bit),), (g.qubit,)
    targets = tuple(q for q in range(1, c.n_data + 1)
                    if (g.payload.z >> (q - 1)) & 1 or (g.payload.x >> (q - 1)) & 1)
    if len(targets) > 1:
        return (("a", g.control),) + tuple(("q", q) for q in targets), ()
    return (("a", g.control),), targets


def depth(c: Circuit, stages=None) -> int:
    """Layer count under ASAP scheduling of the selected stages.

    Two gates may share a layer only if their resources are disjoint, except
    that co-targeted single-qubit conditional Paulis fuse (see
    :func:`_gate_resources`).
    """
    hard = {}    # resource -> last layer that used it at all
    soft = {}    # data qubit -> last layer with a shareable use
    depth_seen = 0
    for g in _selected(c, stages):
        exclusive, shared = _gate_resources(c, g)
        layer = 1
        for res in exclusive:
            layer = max(layer, hard.get(res, 0) + 1)
            if res[0] == "q":
                layer = max(layer, soft.get(res[1], 0) + 1)
        for q in shared:
            layer = max(layer, hard.get(("q", q), 0) + 1, soft.get(q, 0))
        for res in exclusive:
            hard[res] = max(hard.get(res, 0), layer)
        for q in shared:
            soft[q] = max(soft.get(q, 0), layer)
        depth_seen = max(depth_seen, layer)
    return depth_seen


def depth_by_stage(c: Circuit) -> dict:
    return {s: depth(c, s) for s in STAGES}


# -- text format ---------------------------------------------------------------

def serialize_circuit(c: Circuit) -> str:
    lines = [CIRCUIT_MAGIC, f"n {c.n_data}"]
    for g in c.prep:
        lines.append(f"prep+ {g.ancilla}")
    for g in chain(c.cpn, c.cp1):
        lines.append(f"cp {g.control} {format_pauli(g.payload)}")
    for g in c.measure:
        lines.append(f"mx {g.ancilla} -> {g.bit}")
    for g in c.correct:
        lines.append(f"cpc {g.bit} {g.correction}@{g.qubit}")
    return "\n".join(lines) + "\n"


def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), 1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        yield lineno, stripped


_STAGE_OF_KEYWORD = {"prep+": "A", "cp": "CP", "mx": "MA", "cpc": "P1"}
_STAGE_ORDER = ("A", "CP", "MA", "P1")


def parse_circuit(text: str) -> Circuit:
    lines = list(_content_lines(text))
    if not lines:
        raise CircuitFormatError(1, "empty circuit file")
    lineno, header = lines[0]
    if header != CIRCUIT_MAGIC:
        raise CircuitFormatError(lineno, f"expected header {CIRCUIT_MAGIC!r}")
    if len(lines) < 2:
        raise CircuitFormatError(lineno, "missing 'n <N>' line")
    lineno, nline = lines[1]
    parts = nline.split()
    if len(parts) != 2 or parts[0] != "n" or not parts[1].isdigit() or int(parts[1]) < 1:
        raise CircuitFormatError(lineno, f"expected 'n <N>' with N >= 1, got {nline!r}")
    n = int(parts[1])

    prep, cps, measure, correct = [], [], [], []
    stage_idx = 0
    for lineno, line in lines[2:]:
        fields = line.split()
        keyword = fields[0]
        stage = _STAGE_OF_KEYWORD.get(keyword)
        if stage is None:
            raise CircuitFormatError(lineno, f"unknown gate keyword {keyword!r}")
        want = _STAGE_ORDER.index(stage)
        if want < stage_idx:
            raise CircuitFormatError(
                lineno, f"{keyword!r} gate appears after stage "
                f"{_STAGE_ORDER[stage_idx]} began (stages must be in order)")
        stage_idx = want

        if keyword == "prep+":
            if len(fields) != 2:
                raise CircuitFormatError(lineno, "expected 'prep+ <ancilla>'")
            _checked_ancilla(lineno, fields[1], n)
            prep.append(PrepPlus(fields[1]))
        elif keyword == "cp":
            if len(fields) != 3:
                raise CircuitFormatError(lineno, "expected 'cp <ancilla> <pauli>'")
            _checked_ancilla(lineno, fields[1], n)
            try:
                payload = parse_pauli(fields[2])
            except PauliError as exc:
                raise CircuitFormatError(lineno, str(exc)) from None
            if payload.n != n:
                raise CircuitFormatError(
                    lineno, f"payload acts on {payload.n} qubits, circuit has {n}")
            cps.append(ControlledPauli(fields[1], payload))
        elif keyword == "mx":
            if len(fields) != 4 or fields[2] != "->":
                raise CircuitFormatError(lineno, "expected 'mx <ancilla> -> <bit>'")
            i, kind = _checked_ancilla(lineno, fields[1], n)
            if fields[3] != bit_name(i, kind):
                raise CircuitFormatError(
                    lineno, f"measurement of {fields[1]} must record into "
                    f"{bit_name(i, kind)}, got {fields[3]!r}")
            measure.append(MeasureX(fields[1], fields[3]))
        else:  # cpc
            if len(fields) != 3:
                raise CircuitFormatError(lineno, "expected 'cpc <bit> <X|Z>@<q>'")
            try:
                i, kind = parse_bit(fields[1])
            except CircuitError as exc:
                raise CircuitFormatError(lineno, str(exc)) from None
            if i > n:
                raise CircuitFormatError(lineno, f"bit {fields[1]!r} out of range")
            m = re.match(r"^([XZ])@([1-9][0-9]*)$", fields[2])
            if not m:
                raise CircuitFormatError(
                    lineno, f"expected correction '<X|Z>@<q>', got {fields[2]!r}")
            qubit = int(m.group(2))
            if qubit > n:
                raise CircuitFormatError(lineno, f"correction qubit {qubit} out of range")
            correct.append(ClassicalCorrection(fields[1], m.group(1), qubit))

    if len(cps) != 4 * n:
        raise CircuitFormatError(
            lines[-1][0], f"expected {4 * n} 'cp' gates (CPn then CP1), got {len(cps)}")
    c = Circuit(n, tuple(prep), tuple(cps[:2 * n]), tuple(cps[2 * n:]),
                tuple(measure), tuple(correct))
    try:
        validate_circuit(c)
    except CircuitError as exc:
        raise CircuitFormatError(lines[-1][0], str(exc)) from None
    return c


def _checked_ancilla(lineno: int, label: str, n: int):
    try:
        i, kind = parse_ancilla(label)
    except CircuitError as exc:
        raise CircuitFormatError(lineno, str(exc)) from None
    if i > n:
        raise CircuitFormatError(lineno, f"ancilla {label!r} out of range for n={n}")
    return i, kind
