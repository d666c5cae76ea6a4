"""Precision of the corrected protocol against the noiseless 1/(4 N^2 T^2)."""
import numpy as np

from hnlsqec import ProtocolConfig, precision_report, scaling_sweep
from hnlsqec.protocol import ghz_input
from hnlsqec.scenarios import load_scenario

# three-level example: the gap to 1/36 closes like 1/D
sc = load_scenario("paper-3level")
code = sc.build_code(3)
print("D      crb        crb*36")
for D in (100, 200, 400, 800):
    rep = precision_report(ProtocolConfig(sc.model, 3, 1.0, D, code=code))
    print(f"{D:<6} {rep.crb:.6f}   {rep.crb * 36:.4f}")

# qubit probes: QFI grows like N^2 and T^2 when corrected
sc = load_scenario("qubit-dephasing-perp")
cfg = ProtocolConfig(sc.model, 3, 1.0, 1000, code=sc.build_code(3))
by_n = scaling_sweep(cfg, "N", [3, 4, 5], code_factory=sc.build_code)
print("\n" + by_n.to_csv() + f"log-log slope in N: {by_n.loglog_slope():.3f}")
by_t = scaling_sweep(cfg, "T", [0.5, 1.0, 2.0])
print("\n" + by_t.to_csv() + f"log-log slope in T: {by_t.loglog_slope():.3f}")

# same probes, same input, no correction: the information decays away
print("\nuncorrected")
for T in (0.25, 0.5, 1.0, 2.0):
    ucfg = ProtocolConfig(sc.model, 3, T, int(200 * T), input=ghz_input(cfg.code))
    print(f"T={T:<5} qfi={precision_report(ucfg).qfi:.4g}   noiseless={36 * T ** 2:.4g}")
