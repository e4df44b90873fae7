"""Tests for the circuit IR, scheme builders and serialization."""

import pytest

from qstransfer.circuits import (
    Circuit,
    CircuitError,
    Conditional,
    Measure,
    Unitary,
    build_cluster,
    build_ghz,
    build_scheme,
    build_swap,
    build_teleport,
    parse_circuit,
    serialize_circuit,
    wrap_protocol,
)


@pytest.mark.parametrize("n", [2, 3, 5, 8])
def test_swap_cnot_count(n):
    c = build_swap(n)
    assert c.count(Unitary, "cx") == 3 * (n - 1)
    assert c.count(Measure) == 0
    assert c.n_cbits == 0


@pytest.mark.parametrize("n", [3, 5, 7])
def test_teleport_structure(n):
    c = build_teleport(n)
    hops = (n - 1) // 2
    assert c.count(Unitary, "cx") == n - 1
    assert c.count(Unitary, "h") == 2 * hops
    assert c.count(Measure) == 2 * hops
    assert c.n_cbits == 2 * hops


def test_teleport_rejects_even_chains():
    with pytest.raises(CircuitError, match="odd"):
        build_teleport(4)


@pytest.mark.parametrize("n", [3, 4, 6])
def test_ghz_structure(n):
    c = build_ghz(n)
    assert c.count(Unitary, "cx") == n - 1
    # one X fan-out target per channel qubit beyond the measured pair
    assert sum(1 for op in c.ops
               if isinstance(op, Conditional) and op.gate == "x") == n - 2
    assert c.count(Measure) == n - 1


@pytest.mark.parametrize("n", [2, 3, 5])
def test_cluster_structure(n):
    c = build_cluster(n)
    assert c.count(Unitary, "cx") == n - 1
    assert c.count(Unitary, "h") == n - 1
    assert c.count(Measure) == n - 1
    assert all(
        op.gate == "z" for op in c.ops if isinstance(op, Conditional)
    )


def test_ghz_teleport_same_ops_at_n3():
    """At n=3 the GHZ channel is the single teleportation hop: identical
    gate multisets once classical labels are canonicalized to the
    measured site."""

    def canon(c):
        site_of = {
            op.cbit: op.site for op in c.ops if isinstance(op, Measure)
        }
        events = []
        for op in c.ops:
            if isinstance(op, Unitary):
                events.append(("u", op.gate, op.sites))
            elif isinstance(op, Measure):
                events.append(("m", op.site))
            else:
                events.append(("c", op.gate, op.sites, site_of[op.cbit]))
        return sorted(map(repr, events))

    assert canon(build_ghz(3)) == canon(build_teleport(3))


def test_nearest_neighbor_enforced():
    with pytest.raises(CircuitError, match="non-neighboring"):
        Circuit(3, 0, (Unitary("cx", (0, 2)),))


def test_classical_bit_discipline():
    with pytest.raises(CircuitError, match="before write"):
        Circuit(2, 1, (Conditional("x", (1,), 0),))
    with pytest.raises(CircuitError, match="written twice"):
        Circuit(2, 1, (Measure(0, 0), Measure(1, 0)))
    with pytest.raises(CircuitError, match="undeclared"):
        Circuit(2, 0, (Measure(0, 0),))


def test_unknown_gate_rejected():
    with pytest.raises(CircuitError, match="unknown gate"):
        Circuit(2, 0, (Unitary("t", (0,)),))


def test_wrap_protocol_roles():
    c = wrap_protocol(build_swap(3), 0.5, 1.5)
    assert c.wrapped
    assert c.ops[0].role == "init" and c.ops[0].sites == (0,)
    assert c.ops[-2].role == "disentangler" and c.ops[-2].sites == (2,)
    assert isinstance(c.ops[-1], Measure) and c.ops[-1].site == 2
    with pytest.raises(CircuitError, match="already wrapped"):
        wrap_protocol(c, 0.5, 1.5)


def test_wrap_protocol_fidelity_mode():
    c = wrap_protocol(build_cluster(3), 0.5, 1.5, fidelity_mode=True)
    assert c.fidelity_mode
    assert not any(
        isinstance(op, Unitary) and op.role == "disentangler" for op in c.ops
    )


@pytest.mark.parametrize("scheme,n", [
    ("swap", 4), ("teleport", 5), ("ghz", 4), ("cluster", 3),
])
def test_serialize_round_trip(scheme, n):
    c = wrap_protocol(build_scheme(scheme, n), 0.81, 2.13)
    assert parse_circuit(serialize_circuit(c)) == c


def test_parse_rejects_garbage():
    with pytest.raises(CircuitError):
        parse_circuit("nonsense 1 2\n")
    with pytest.raises(CircuitError):
        parse_circuit("circuit swap qubits=2 cbits=0 wrapped=0 fidelity=0\n"
                      "frobnicate 0\n")


def test_build_scheme_dispatch():
    assert build_scheme("swap", 3).scheme == "swap"
    with pytest.raises(CircuitError, match="unknown scheme"):
        build_scheme("carrier-pigeon", 3)
