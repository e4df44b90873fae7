"""Demo: which transfer scheme wins as the chain grows?

Evaluates all four schemes with the exact engine at realistic error
rates and shows the crossover: gate noise alone favors the low-CNOT
measurement-based schemes, readout error alone favors the swap ladder.

Run:  python3 demos/scheme_comparison.py
"""

from qstransfer.circuits import SCHEMES, build_scheme
from qstransfer.engine import NoiseSpec, averaged_success

print(__doc__)

SETTINGS = [
    ("gate noise only      (p=0.01, q=0)  ", NoiseSpec(p=0.01, q=0.0)),
    ("readout error only   (p=0, q=0.05)  ", NoiseSpec(p=0.0, q=0.05)),
    ("both                 (p=0.01, q=0.05)", NoiseSpec(p=0.01, q=0.05)),
]

for label, spec in SETTINGS:
    print(f"\n{label}")
    print(f"  {'n':>3} " + "".join(f"{s:>10}" for s in SCHEMES))
    for n in (3, 5, 7):
        cells = []
        for scheme in SCHEMES:
            if scheme == "teleport" and n % 2 == 0:
                cells.append(f"{'--':>10}")
                continue
            r = averaged_success(build_scheme(scheme, n), spec, 8, 8)
            cells.append(f"{r.m0_recorded:>10.4f}")
        print(f"  {n:>3} " + "".join(cells))

print(
    """
Reading the tables:
 * Under pure gate noise the swap ladder falls off fastest -- it spends
   3(n-1) CNOTs where the others spend n-1.
 * Under pure readout error the ordering flips: swap measures once at
   the end, while teleport/ghz/cluster consume a measurement (and its
   misrecording risk) at every hop.
 * With both active, the winner depends on the p:q ratio -- the
   motivation for sweeping the full surface (see `qstransfer sweep`).
"""
)
