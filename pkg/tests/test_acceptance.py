"""Exit criteria for the package, one test per criterion.

Each test prints a single PASS/FAIL line. Run standalone with
``python tests/test_acceptance.py`` or through pytest.
"""

import itertools
import time

import numpy as np
import pytest

from hnlsqec import operators as ops
from hnlsqec.code import (build_example_code, build_qubit_code, build_recovery, check_kl,
                          detected_errors)
from hnlsqec.hnls import build_span, decompose, hnls_verdict
from hnlsqec.lindblad import apply_product_channel, channel, kraus_first_order
from hnlsqec.protocol import (ProtocolConfig, ghz_input, precision_report, product_ghz,
                              run_protocol, scaling_sweep)
from hnlsqec.scenarios import load_scenario, qubit_dephasing

NOISY = ("paper-3level", "qubit-dephasing-perp", "qubit-rank1-noncommuting")


def line(number, ok, detail, capsys=None):
    text = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}"
    if capsys is not None:
        with capsys.disabled():
            print("\n" + text)
    else:
        print(text)
    return ok


def code_for(name, N=3):
    return load_scenario(name).build_code(N)


def perp_norm(model):
    return decompose(model.H, build_span(model)).perp_norm


def test_1_three_level_precision(capsys):
    sc = load_scenario("paper-3level")
    t0 = time.perf_counter()
    cfg = ProtocolConfig(sc.model, 3, 1.0, 400, 1.0, sc.build_code(3), channel_mode="exact")
    rep = precision_report(cfg)
    elapsed = time.perf_counter() - t0
    target = 1 / (4 * 3 ** 2 * 1 ** 2)
    rel = abs(rep.crb - target) / target
    ok = rel <= 0.02 and elapsed < 60
    line(1, ok, f"paper-3level N=3 T=1 D=400 crb={rep.crb:.6g} vs 1/36={target:.6g} "
                f"(rel dev {rel:.2%}, tol 2%), {elapsed:.1f}s (< 60s)", capsys)
    assert elapsed < 60
    assert rel <= 0.02


def test_2_hnls_verdicts(capsys):
    t0 = time.perf_counter()
    holds = hnls_verdict(load_scenario("paper-3level").model, tol=1e-9).holds
    fails = not hnls_verdict(load_scenario("hnls-fails").model, tol=1e-9).holds
    elapsed = time.perf_counter() - t0
    ok = holds and fails and elapsed < 1
    line(2, ok, f"paper-3level holds={holds}, hnls-fails fails={fails}, {elapsed * 1e3:.0f} ms", capsys)
    assert ok


def test_3_kl_verification(capsys):
    details, ok = [], True
    for name in NOISY:
        sc = load_scenario(name)
        rep = check_kl(sc.build_code(3), sc.model)
        gap_target = 2 * 3 * perp_norm(sc.model)
        good = (rep.cond1_residual <= 1e-10 and rep.cond2_residual <= 1e-10 and rep.signal_ok
                and abs(rep.signal_gap - gap_target) <= 1e-9)
        ok &= good
        details.append(f"{name}: r1={rep.cond1_residual:.1e} r2={rep.cond2_residual:.1e} "
                       f"gap={rep.signal_gap:.12g}/{gap_target:.12g}")
    line(3, ok, "; ".join(details), capsys)
    assert ok


def test_4_correctability_identity(capsys):
    dt = 1e-3
    worst = 0.0
    for name in NOISY:
        sc = load_scenario(name)
        code = sc.build_code(3)
        rep = check_kl(code, sc.model)
        E = detected_errors(code, sc.model, dt)
        for (n, j), (m, k) in itertools.product(E, repeat=2):
            lhs = code.Pi_C @ E[(n, j)].conj().T @ E[(m, k)] @ code.Pi_C
            coef = rep.mu[(n, m, j, k)] - np.conj(rep.lam[(n, j)]) * rep.lam[(m, k)]
            worst = max(worst, np.abs(lhs - coef * dt * code.Pi_C).max())
    ok = worst <= 1e-9
    line(4, ok, f"max entrywise deviation {worst:.2e} (tol 1e-9) over {len(NOISY)} scenarios", capsys)
    assert ok


def test_5_fast_control_convergence(capsys):
    ratios = {}
    for name in NOISY:
        sc = load_scenario(name)
        code = sc.build_code(3)
        err = {D: run_protocol(ProtocolConfig(sc.model, 3, 1.0, D, code=code)).per_step_error
               for D in (100, 200)}
        ratios[name] = err[100] / err[200]
    ok = all(3.6 <= r <= 4.4 for r in ratios.values())
    line(5, ok, "per-step error ratio D=100/D=200: "
         + ", ".join(f"{k}={v:.3f}" for k, v in ratios.items()) + " (band [3.6, 4.4])", capsys)
    assert ok


def test_6_heisenberg_scaling(capsys):
    sc = load_scenario("qubit-dephasing-perp")
    model = sc.model
    cfg = ProtocolConfig(model, 3, 1.0, 1000, code=sc.build_code(3))
    by_n = scaling_sweep(cfg, "N", [3, 4, 5], code_factory=sc.build_code)
    slope = by_n.loglog_slope()
    by_t = scaling_sweep(cfg, "T", [0.5, 1.0, 2.0])
    q = by_t.qfis()
    ratios = q / q[0]
    t_ok = np.allclose(ratios, [1, 4, 16], rtol=0.03, atol=0)

    # uncorrected: same probes and GHZ input, no recovery
    gamma = 1.0
    unc = {}
    for T in (1.0, 2.0, 4.0):
        ucfg = ProtocolConfig(qubit_dephasing(gamma), 3, T, int(200 * T), input=ghz_input(cfg.code))
        unc[T] = precision_report(ucfg).qfi
    snl_ok = unc[2.0] < 4 * unc[1.0] and unc[4.0] < 4 * unc[2.0]
    ok = 1.9 <= slope <= 2.1 and t_ok and snl_ok
    line(6, ok, f"N-slope={slope:.4f} (band [1.9, 2.1]); T ratios="
                f"{np.array2string(ratios, precision=4)} (1:4:16 within 3%); uncorrected "
                f"qfi(2)/qfi(1)={unc[2.0] / unc[1.0]:.3f}, qfi(4)/qfi(2)={unc[4.0] / unc[2.0]:.3f} (< 4)",
         capsys)
    assert ok


def test_7_exhaustive_single_error_recovery(capsys):
    worst = 1.0
    for name in NOISY:
        sc = load_scenario(name)
        code = sc.build_code(3)
        rec = build_recovery(code, sc.model)
        for psi in (code.logical0, code.logical1, ghz_input(code),
                    ops.normalize(code.logical0 + 1j * 0.5 * code.logical1)):
            for n in range(1, 4):
                for L in sc.model.lindblads:
                    bad = ops.lift(L, n, 3) @ psi
                    bad = bad / np.linalg.norm(bad)
                    out = rec.apply(np.outer(bad, bad.conj()))
                    worst = min(worst, ops.pure_fidelity(psi, out))
    ok = worst >= 1 - 1e-9
    line(7, ok, f"worst fidelity after recovery 1 - {1 - worst:.1e} (need >= 1 - 1e-9)", capsys)
    assert ok


def test_8_channel_expansion(capsys):
    rng = np.random.default_rng(8)
    ratios = {}
    for name in NOISY:
        sc = load_scenario(name)
        d = sc.model.d
        psi = ghz_input(sc.build_code(3))
        states = [np.outer(psi, psi.conj())]
        for _ in range(2):
            X = rng.normal(size=(d ** 3, 3)) + 1j * rng.normal(size=(d ** 3, 3))
            r = X @ X.conj().T
            states.append(r / np.trace(r))
        err = {}
        for dt in (1e-2, 5e-3):
            S = channel(sc.model, 1.0, dt)
            ks = kraus_first_order(sc.model, 1.0, 3, dt)
            err[dt] = max(ops.trace_distance(ks.apply(r), apply_product_channel(S, r, 3))
                          for r in states)
        ratios[name] = err[1e-2] / err[5e-3]
    ok = all(3.6 <= r <= 4.4 for r in ratios.values())
    line(8, ok, "Kraus vs exact per-step error ratio dt=1e-2/5e-3: "
         + ", ".join(f"{k}={v:.3f}" for k, v in ratios.items()) + " (band [3.6, 4.4])", capsys)
    assert ok


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
