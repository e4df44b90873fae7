"""Circuit IR with mid-circuit measurement and classically conditioned
gates, plus builders for the four transfer schemes on a linear chain.

All two-qubit gates are nearest-neighbor CNOTs; conditional gates are
kept symbolic (no deferred-measurement compilation) because the schemes
are defined with real-time classical control.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

GATE_SITES = {"x": 1, "y": 1, "z": 1, "h": 1, "u": 1, "cx": 2, "cz": 2}

SCHEMES = ("swap", "teleport", "ghz", "cluster")


class CircuitError(ValueError):
    """Invalid circuit construction request."""


@dataclass(frozen=True)
class Unitary:
    gate: str
    sites: tuple
    params: tuple = ()
    role: str | None = None  # "init" / "disentangler" for protocol boundaries


@dataclass(frozen=True)
class Measure:
    site: int
    cbit: int


@dataclass(frozen=True)
class Conditional:
    gate: str
    sites: tuple
    cbit: int
    trigger: int = 1


@dataclass(frozen=True)
class Circuit:
    n_qubits: int
    n_cbits: int
    ops: tuple
    scheme: str = "custom"
    wrapped: bool = False
    fidelity_mode: bool = False

    def __post_init__(self):
        _validate(self)

    def count(self, kind, gate: str | None = None) -> int:
        return sum(
            1
            for op in self.ops
            if isinstance(op, kind) and (gate is None or op.gate == gate)
        )


def _validate(c: Circuit) -> None:
    written: set[int] = set()
    for op in c.ops:
        if isinstance(op, (Unitary, Conditional)):
            if op.gate not in GATE_SITES:
                raise CircuitError(f"unknown gate {op.gate!r}")
            if len(op.sites) != GATE_SITES[op.gate]:
                raise CircuitError(f"{op.gate} takes {GATE_SITES[op.gate]} sites")
            if any(s < 0 or s >= c.n_qubits for s in op.sites):
                raise CircuitError(f"sites {op.sites} out of range")
            if len(op.sites) == 2 and abs(op.sites[0] - op.sites[1]) != 1:
                raise CircuitError(
                    f"two-qubit gate on non-neighboring sites {op.sites}"
                )
        if isinstance(op, Measure):
            if not 0 <= op.site < c.n_qubits:
                raise CircuitError(f"measure site {op.site} out of range")
            if not 0 <= op.cbit < c.n_cbits:
                raise CircuitError(f"classical bit {op.cbit} undeclared")
            if op.cbit in written:
                raise CircuitError(f"classical bit {op.cbit} written twice")
            written.add(op.cbit)
        if isinstance(op, Conditional):
            if op.cbit not in written:
                raise CircuitError(
                    f"conditional reads classical bit {op.cbit} before write"
                )


def build_swap(n: int) -> Circuit:
    """(n-1) swap blocks, each the 3-CNOT alternating decomposition."""
    if n < 2:
        raise CircuitError("swap scheme needs n >= 2")
    ops = []
    for k in range(n - 1):
        ops += [
            Unitary("cx", (k, k + 1)),
            Unitary("cx", (k + 1, k)),
            Unitary("cx", (k, k + 1)),
        ]
    return Circuit(n, 0, tuple(ops), scheme="swap")


def build_teleport(n: int) -> Circuit:
    """(n-1)/2 hops of the standard Bell-pair teleportation block.

    Each hop consumes two ancilla qubits, so n must be odd.
    """
    if n < 3:
        raise CircuitError("teleport scheme needs n >= 3")
    if n % 2 == 0:
        raise CircuitError(
            "teleport scheme needs an odd chain length: each hop consumes "
            "two ancillas, so only odd n reaches the end of the chain"
        )
    ops = []
    cb = 0
    for hop in range((n - 1) // 2):
        s, a, t = 2 * hop, 2 * hop + 1, 2 * hop + 2
        ops += [
            Unitary("h", (a,)),
            Unitary("cx", (a, t)),
            Unitary("cx", (s, a)),
            Unitary("h", (s,)),
            Measure(a, cb),
            Measure(s, cb + 1),
            Conditional("x", (t,), cb),
            Conditional("z", (t,), cb + 1),
        ]
        cb += 2
    return Circuit(n, cb, tuple(ops), scheme="teleport")


def build_ghz(n: int) -> Circuit:
    """GHZ-channel transfer: prepare GHZ on qubits 1..n-1, Bell-measure
    the source against it, then fan out X corrections and chain Z
    corrections down to the last qubit."""
    if n < 3:
        raise CircuitError("ghz scheme needs n >= 3")
    ops = [Unitary("h", (1,))]
    ops += [Unitary("cx", (k, k + 1)) for k in range(1, n - 1)]
    ops += [
        Unitary("cx", (0, 1)),
        Unitary("h", (0,)),
        Measure(0, 0),
        Measure(1, 1),
    ]
    ops += [Conditional("x", (t,), 1) for t in range(2, n)]
    ops += [Conditional("z", (2,), 0)]
    cb = 2
    for k in range(2, n - 1):
        ops += [
            Unitary("h", (k,)),
            Measure(k, cb),
            Conditional("z", (k + 1,), cb),
        ]
        cb += 1
    return Circuit(n, cb, tuple(ops), scheme="ghz")


def build_cluster(n: int) -> Circuit:
    """Gate-teleportation chain in CNOT form: repeated
    {CNOT(k,k+1), H(k), measure k, conditional Z on k+1} blocks."""
    if n < 2:
        raise CircuitError("cluster scheme needs n >= 2")
    ops = []
    for k in range(n - 1):
        ops += [
            Unitary("cx", (k, k + 1)),
            Unitary("h", (k,)),
            Measure(k, k),
            Conditional("z", (k + 1,), k),
        ]
    return Circuit(n, n - 1, tuple(ops), scheme="cluster")


BUILDERS = {
    "swap": build_swap,
    "teleport": build_teleport,
    "ghz": build_ghz,
    "cluster": build_cluster,
}


def build_scheme(scheme: str, n: int) -> Circuit:
    if scheme not in BUILDERS:
        raise CircuitError(f"unknown scheme {scheme!r}")
    return BUILDERS[scheme](n)


def wrap_protocol(
    c: Circuit, theta: float, phi: float, fidelity_mode: bool = False
) -> Circuit:
    """Prepend the initializer on qubit 0 and, unless in fidelity mode,
    append the disentangler and final measurement on the last qubit."""
    if c.wrapped:
        raise CircuitError("circuit is already wrapped")
    last = c.n_qubits - 1
    ops = [Unitary("u", (0,), (float(theta), float(phi), 0.0), role="init")]
    ops += list(c.ops)
    n_cbits = c.n_cbits
    if not fidelity_mode:
        ops.append(
            Unitary(
                "u",
                (last,),
                (float(theta), float(phi), 0.0),
                role="disentangler",
            )
        )
        ops.append(Measure(last, n_cbits))
        n_cbits += 1
    return replace(
        c,
        ops=tuple(ops),
        n_cbits=n_cbits,
        wrapped=True,
        fidelity_mode=fidelity_mode,
    )


# --- line-oriented serialization -------------------------------------------


def serialize_circuit(c: Circuit) -> str:
    lines = [
        f"circuit {c.scheme} qubits={c.n_qubits} cbits={c.n_cbits} "
        f"wrapped={int(c.wrapped)} fidelity={int(c.fidelity_mode)}"
    ]
    for op in c.ops:
        if isinstance(op, Unitary):
            parts = ["unitary", op.gate, ",".join(map(str, op.sites))]
            if op.params:
                parts.append(";".join(repr(p) for p in op.params))
            if op.role:
                parts.append(f"role={op.role}")
            lines.append(" ".join(parts))
        elif isinstance(op, Measure):
            lines.append(f"measure {op.site} {op.cbit}")
        else:
            lines.append(
                f"cond {op.gate} {','.join(map(str, op.sites))} "
                f"{op.cbit} {op.trigger}"
            )
    return "\n".join(lines) + "\n"


def parse_circuit(text: str) -> Circuit:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    head = lines[0].split()
    if head[0] != "circuit":
        raise CircuitError("missing circuit header line")
    scheme = head[1]
    kv = dict(tok.split("=") for tok in head[2:])
    ops = []
    for ln in lines[1:]:
        toks = ln.split()
        if toks[0] == "unitary":
            gate = toks[1]
            sites = tuple(int(s) for s in toks[2].split(","))
            params: tuple = ()
            role = None
            for tok in toks[3:]:
                if tok.startswith("role="):
                    role = tok[5:]
                else:
                    params = tuple(float(x) for x in tok.split(";"))
            ops.append(Unitary(gate, sites, params, role))
        elif toks[0] == "measure":
            ops.append(Measure(int(toks[1]), int(toks[2])))
        elif toks[0] == "cond":
            ops.append(
                Conditional(
                    toks[1],
                    tuple(int(s) for s in toks[2].split(",")),
                    int(toks[3]),
                    int(toks[4]),
                )
            )
        else:
            raise CircuitError(f"unknown op line {ln!r}")
    return Circuit(
        int(kv["qubits"]),
        int(kv["cbits"]),
        tuple(ops),
        scheme=scheme,
        wrapped=bool(int(kv.get("wrapped", "0"))),
        fidelity_mode=bool(int(kv.get("fidelity", "0"))),
    )
