"""Built-in probe models and scenario loading."""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .code import build_example_code, build_qubit_code
from .errors import ScenarioError
from .hnls import build_span, decompose
from .lindblad import LindbladModel

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)

THREE_LEVEL_H = np.array([[0, 0, 1j], [0, 0, 0], [-1j, 0, 0]])
THREE_LEVEL_L = (
    np.array([[0, 1, 0], [1, 0, 0], [0, 0, 0]], dtype=complex),
    np.array([[0, -1j, 0], [1j, 0, 0], [0, 0, 0]]),
    np.array([[0, 0, 1], [0, 0, 0], [1, 0, 0]], dtype=complex),
)

CODE_KINDS = ("auto-qubit", "paper-example", "none")


def three_level_model() -> LindbladModel:
    return LindbladModel(THREE_LEVEL_H, THREE_LEVEL_L, "paper-3level")


def qubit_dephasing(gamma: float = 1.0) -> LindbladModel:
    """``H = sigma_x`` probed under ``sigma_z`` dephasing at rate ``gamma``."""
    return LindbladModel(SX, (np.sqrt(gamma) * SZ,), "qubit-dephasing")


def qubit_rank1_pauli(gamma: float = 1.0) -> LindbladModel:
    """``H = sigma_y`` with the non-commuting rank-one Pauli jump ``(sigma_x + sigma_z)/sqrt2``."""
    return LindbladModel(SY, (np.sqrt(gamma) * (SX + SZ) / np.sqrt(2),), "qubit-rank1-pauli")


def hnls_failing_model() -> LindbladModel:
    return LindbladModel(SZ, (SZ,), "hnls-fails")


MODELS = {
    "paper-3level": three_level_model,
    "qubit-dephasing": qubit_dephasing,
    "qubit-rank1-pauli": qubit_rank1_pauli,
    "hnls-fails": hnls_failing_model,
}


def load_model(label: str) -> LindbladModel:
    try:
        return MODELS[label]()
    except KeyError:
        raise ScenarioError(f"unknown built-in model '{label}'") from None


@dataclass
class Scenario:
    name: str
    model: LindbladModel
    N: int = 3
    T: float = 1.0
    D: int = 200
    omega: float = 1.0
    code_kind: str = "auto-qubit"

    def __post_init__(self):
        if self.code_kind not in CODE_KINDS:
            raise ScenarioError(f"code_kind must be one of {CODE_KINDS}, got '{self.code_kind}'")
        if self.N < 1 or self.D < 1 or self.T <= 0:
            raise ScenarioError("scenario needs N >= 1, D >= 1 and T > 0")

    def build_code(self, N: int | None = None, min_probes: int = 3):
        """The scenario's code for ``N`` probes, or ``None`` when ``code_kind`` is 'none'."""
        N = self.N if N is None else N
        if self.code_kind == "none":
            return None
        if self.code_kind == "paper-example":
            return build_example_code(N, min_probes=min_probes)
        perp = decompose(self.model.H, build_span(self.model))
        return build_qubit_code(perp, N, min_probes=min_probes)

    def to_json(self) -> dict:
        return {"name": self.name, "model": self.model.to_json(), "N": self.N, "T": self.T,
                "D": self.D, "omega": self.omega, "code_kind": self.code_kind}


BUILTIN_SCENARIOS = {
    "paper-3level": lambda: Scenario("paper-3level", three_level_model(), N=3, D=400,
                                     code_kind="paper-example"),
    "qubit-dephasing-perp": lambda: Scenario("qubit-dephasing-perp", qubit_dephasing()),
    "qubit-rank1-noncommuting": lambda: Scenario("qubit-rank1-noncommuting", qubit_rank1_pauli()),
    "hnls-fails": lambda: Scenario("hnls-fails", hnls_failing_model()),
}


def scenario_from_json(obj, where: str = "scenario") -> Scenario:
    if not isinstance(obj, dict):
        raise ScenarioError(f"{where}: expected an object")
    for key in ("name", "model"):
        if key not in obj:
            raise ScenarioError(f"{where}: missing field '{key}'")
    m = obj["model"]
    try:
        model = load_model(m) if isinstance(m, str) else LindbladModel.from_json(m)
    except ScenarioError:
        raise
    except (ValueError, TypeError) as exc:
        raise ScenarioError(f"{where}.model: {exc}") from None
    kwargs = {}
    for key, typ in (("N", int), ("T", float), ("D", int), ("omega", float), ("code_kind", str)):
        if key in obj:
            try:
                kwargs[key] = typ(obj[key])
            except (TypeError, ValueError):
                raise ScenarioError(f"{where}.{key}: cannot convert {obj[key]!r} to {typ.__name__}") from None
    return Scenario(str(obj["name"]), model, **kwargs)


def load_scenario(spec: str, name: str | None = None) -> Scenario:
    """Load a built-in scenario by name or a JSON scenario file by path.

    A file may hold one scenario object, a list of them, or ``{"scenarios": [...]}``;
    with several, ``name`` selects one.
    """
    if spec in BUILTIN_SCENARIOS:
        return BUILTIN_SCENARIOS[spec]()
    try:
        with open(spec) as fh:
            text = fh.read()
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario '{spec}': {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{spec}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if isinstance(data, dict) and "scenarios" in data:
        data = data["scenarios"]
    items = data if isinstance(data, list) else [data]
    scenarios = [scenario_from_json(o, f"{spec}[{i}]") for i, o in enumerate(items)]
    names = [s.name for s in scenarios]
    if len(set(names)) != len(names):
        raise ScenarioError(f"{spec}: duplicate scenario names {names}")
    if name is not None:
        for s in scenarios:
            if s.name == name:
                return s
        raise ScenarioError(f"{spec}: no scenario named '{name}'")
    if len(scenarios) != 1:
        raise ScenarioError(f"{spec}: holds {len(scenarios)} scenarios; pick one with --name")
    return scenarios[0]
