"""Which Hamiltonians survive the noise?

Build the real span of {1, L_j, L_j^dag L_k} (Hermitian and anti-Hermitian
parts) for each built-in model, split H into the in-span piece and the
perpendicular piece, and read off the verdict.
"""
import numpy as np

from hnlsqec import build_span, decompose, hnls_verdict, is_commuting
from hnlsqec.scenarios import BUILTIN_SCENARIOS

np.set_printoptions(precision=3, suppress=True)

for name, make in BUILTIN_SCENARIOS.items():
    model = make().model
    span = build_span(model)
    perp = decompose(model.H, span)
    verdict = hnls_verdict(model)
    print(f"--- {name}")
    print(f"generators: {len(span.generators)}, independent: {span.rank} of {model.d ** 2}")
    print(f"||H_perp|| = {perp.perp_norm:.6f}   holds: {verdict.holds}   "
          f"commuting: {is_commuting(model)}")

# The three-level model: the whole Hamiltonian is perpendicular to the noise,
# even though the noise and H do not commute.
model = BUILTIN_SCENARIOS["paper-3level"]().model
perp = decompose(model.H, build_span(model))
print("\nthree-level H_perp:\n", perp.H_perp)

# Sweeping the noise strength never changes the verdict; the span is a set of
# directions, not magnitudes.
for s in (0.01, 1.0, 100.0):
    print(f"noise x{s:>6}: holds = {hnls_verdict(model.scaled_noise(s)).holds}")
