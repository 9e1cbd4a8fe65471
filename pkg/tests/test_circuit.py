import numpy as np
import pytest

from mcsynth.circuit import (
    Circuit,
    CircuitError,
    CircuitFormatError,
    ClassicalCorrection,
    ControlledPauli,
    MeasureX,
    PrepPlus,
    depth,
    depth_by_stage,
    outcome_index,
    parse_circuit,
    serialize_circuit,
    synthesize,
    synthesize_from_inverse,
    two_qubit_gate_count,
    validate_circuit,
)
from mcsynth.pauli import SignedPauli, parse_pauli, weight
from mcsynth.tableau import (
    Tableau,
    fold_gates,
    identity_tableau,
    invert,
    random_clifford,
    random_tableau,
    tableau_weight,
)

from oracles import (
    asap_layers,
    controlled_on_ancilla,
    matrices_equal,
    signed_matrix,
    unitary_of_gates,
)


def tableau_from_rows(*texts):
    rows = tuple(parse_pauli(t) for t in texts)
    return Tableau(rows[0].n, rows)


H_TABLEAU = tableau_from_rows("+X", "+Z")
S_TABLEAU = tableau_from_rows("+Z", "+Y")


# -- synthesis ---------------------------------------------------------------------

def test_synthesize_payload_examples():
    assert [str(g.payload) for g in synthesize(identity_tableau(1)).cpn] == ["+Z", "+X"]
    assert [str(g.payload) for g in synthesize(H_TABLEAU).cpn] == ["+X", "+Z"]
    assert [str(g.payload) for g in synthesize(S_TABLEAU).cpn] == ["+Z", "-Y"]


def test_identity_circuit_gate_sequence():
    c = synthesize(identity_tableau(1))
    assert c.gates == (
        PrepPlus("a1z"), PrepPlus("a1x"),
        ControlledPauli("a1z", parse_pauli("+Z")),
        ControlledPauli("a1x", parse_pauli("+X")),
        ControlledPauli("a1x", parse_pauli("+X")),
        ControlledPauli("a1z", parse_pauli("+Z")),
        MeasureX("a1z", "m1z"), MeasureX("a1x", "m1x"),
        ClassicalCorrection("m1z", "X", 1), ClassicalCorrection("m1x", "Z", 1),
    )


def test_emission_orders_n2():
    t = random_tableau(2, 4)
    c = synthesize(t)
    ti = invert(t)
    assert [g.ancilla for g in c.prep] == ["a1z", "a1x", "a2z", "a2x"]
    assert [g.control for g in c.cpn] == ["a1z", "a1x", "a2z", "a2x"]
    assert [g.payload for g in c.cpn] == list(ti.rows)
    # CP1 descends through the qubits, X before Z on each
    assert [(g.control, str(g.payload)) for g in c.cp1] == [
        ("a2x", "+IX"), ("a2z", "+IZ"), ("a1x", "+XI"), ("a1z", "+ZI")]
    assert [(g.ancilla, g.bit) for g in c.measure] == [
        ("a1z", "m1z"), ("a1x", "m1x"), ("a2z", "m2z"), ("a2x", "m2x")]
    assert [(g.bit, g.correction, g.qubit) for g in c.correct] == [
        ("m1z", "X", 1), ("m1x", "Z", 1), ("m2z", "X", 2), ("m2x", "Z", 2)]


def test_synthesize_structure_random():
    for seed in range(8):
        n = 1 + seed % 4
        t = random_tableau(n, seed)
        c = synthesize(t)
        validate_circuit(c)
        assert len(c.gates) == 10 * n
        assert c.n_ancilla == 2 * n
        assert all(weight(g.payload) == 1 for g in c.cp1)
        # every qubit is targeted exactly twice in CP1 (one X, one Z)
        targets = {}
        for g in c.cp1:
            q = outcome_index(g.control) // 2 + 1
            targets.setdefault(q, []).append(str(g.payload))
        assert all(len(v) == 2 for v in targets.values())


def test_synthesize_rejects_bad_tableau():
    with pytest.raises(CircuitError):
        synthesize_from_inverse(tableau_from_rows("+X", "+X"))


# -- metrics -----------------------------------------------------------------------

def test_two_qubit_gate_count():
    for seed in range(6):
        n = 1 + seed % 5
        t = random_tableau(n, 50 + seed)
        ti = invert(t)
        c = synthesize_from_inverse(ti)
        assert two_qubit_gate_count(c, "CPn") == tableau_weight(ti)
        assert two_qubit_gate_count(c, "CP1") == 2 * n
        assert two_qubit_gate_count(c) == tableau_weight(ti) + 2 * n
        assert two_qubit_gate_count(c, ("A", "MA", "P1")) == 0
    cid = synthesize(identity_tableau(4))
    assert two_qubit_gate_count(cid, "CPn") == 8


def test_depth_parallel_stages():
    for seed in range(6):
        n = 1 + seed % 5
        c = synthesize(random_tableau(n, seed))
        stage_depths = depth_by_stage(c)
        assert stage_depths["A"] == 1
        assert stage_depths["CP1"] == 1
        assert stage_depths["MA"] == 1
        assert stage_depths["P1"] == 1
        assert depth(c) >= stage_depths["CPn"] + 2


def test_depth_cpn_cases():
    # weight-1 payloads on one shared qubit fuse into a single layer
    assert depth(synthesize(identity_tableau(3)), "CPn") == 1
    # multi-qubit payloads claim their data qubits exclusively: ZI fuses at
    # layer 1, XX and ZZ serialize, IX must follow ZZ
    cnot = tableau_from_rows("+ZI", "+XX", "+ZZ", "+IX")
    c = synthesize_from_inverse(cnot)
    assert depth(c, "CPn") == 4


def _conflict(c):
    from mcsynth.circuit import _gate_resources

    def conflict(a, b):
        (ea, sa), (eb, sb) = _gate_resources(c, a), _gate_resources(c, b)
        if set(ea) & set(eb):
            return True
        if {("q", q) for q in sa} & set(eb) or {("q", q) for q in sb} & set(ea):
            return True
        return False

    return conflict


def test_depth_matches_bruteforce_asap():
    for seed in range(10):
        n = 1 + seed % 4
        c = synthesize(random_tableau(n, 31 + seed))
        conflict = _conflict(c)
        for stages in (None, "CPn", "CP1", ("A", "CPn"), ("MA", "P1")):
            gates = c.gates if stages is None else sum(
                (c.stage(s) for s in ((stages,) if isinstance(stages, str) else stages)),
                ())
            expected = max(asap_layers(gates, conflict), default=0)
            assert depth(c, stages) == expected, (seed, stages)


# -- controlled-conjugation identity --------------------------------------------------

def test_controlled_conjugation_matrix_identity():
    rng = np.random.default_rng(13)
    for n in (1, 2, 3):
        t, gates = random_clifford(n, 60 + n)
        ti = invert(t)
        u = unitary_of_gates(n, gates)
        big = np.kron(np.eye(2), u)
        for _ in range(6):
            p = SignedPauli(n, int(rng.integers(1 << n)), int(rng.integers(1 << n)),
                            1 - 2 * int(rng.integers(2)))
            from mcsynth.tableau import conjugate
            q = conjugate(ti, p).signed()
            lhs = controlled_on_ancilla(signed_matrix(q))
            rhs = big.conj().T @ controlled_on_ancilla(signed_matrix(p)) @ big
            assert matrices_equal(lhs, rhs, 1e-12)


# -- serialization -----------------------------------------------------------------------

def test_serialize_parse_roundtrip():
    for seed in range(6):
        n = 1 + seed % 4
        c = synthesize(random_tableau(n, seed))
        text = serialize_circuit(c)
        assert parse_circuit(text) == c
        assert serialize_circuit(parse_circuit(text)) == text


def test_parse_circuit_comments():
    c = synthesize(identity_tableau(1))
    text = "# intro\n" + serialize_circuit(c).replace("mx a1z", "# mid\nmx a1z")
    assert parse_circuit(text) == c


def _lines(c):
    return serialize_circuit(c).splitlines()


def test_parse_circuit_stage_order_error():
    c = synthesize(identity_tableau(1))
    lines = _lines(c)
    # move a cp line after the measurements
    bad = lines[:4] + lines[5:10] + [lines[4]] + lines[10:]
    with pytest.raises(CircuitFormatError, match="after stage"):
        parse_circuit("\n".join(bad) + "\n")


def test_parse_circuit_payload_dimension_error():
    c = synthesize(identity_tableau(1))
    bad = serialize_circuit(c).replace("cp a1z +Z\n", "cp a1z +ZZ\n", 1)
    with pytest.raises(CircuitFormatError, match="qubits"):
        parse_circuit(bad)


def test_parse_circuit_reused_ancilla():
    c = synthesize(identity_tableau(1))
    bad = serialize_circuit(c).replace("prep+ a1x", "prep+ a1z")
    with pytest.raises(CircuitFormatError, match="exactly once"):
        parse_circuit(bad)


@pytest.mark.parametrize("needle, repl, match", [
    ("mcs-circuit v1", "mcs-circuit v2", "header"),
    ("mx a1z -> m1z", "mx a1z -> m1x", "must record into"),
    ("cpc m1z X@1", "cpc m1z Y@1", "correction"),
    ("cpc m1x Z@1", "cpc m1x Z@2", "out of range"),
    ("prep+ a1z", "prep a1z", "keyword"),
])
def test_parse_circuit_line_errors(needle, repl, match):
    text = serialize_circuit(synthesize(identity_tableau(1)))
    with pytest.raises(CircuitFormatError, match=match):
        parse_circuit(text.replace(needle, repl))


def test_parse_circuit_wrong_cp_count():
    c = synthesize(identity_tableau(1))
    lines = [ln for ln in _lines(c) if ln != "cp a1x +X"]
    with pytest.raises(CircuitFormatError):
        parse_circuit("\n".join(lines) + "\n")


def test_validate_circuit_catches_mutations():
    cnot = tableau_from_rows("+ZI", "+XX", "+ZZ", "+IX")
    c = synthesize_from_inverse(cnot)
    with pytest.raises(CircuitError, match="one non-identity"):
        validate_circuit(Circuit(c.n_data, c.prep, c.cpn, c.cpn,
                                 c.measure, c.correct))
    with pytest.raises(CircuitError, match="stage MA"):
        validate_circuit(Circuit(c.n_data, c.prep, c.cpn, c.cp1,
                                 c.measure[:-1], c.correct))
