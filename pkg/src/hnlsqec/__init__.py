"""Heisenberg-limited metrology under Markovian noise with ancilla-free error correction."""

from .code import (CodeSpace, EffectiveModel, KLReport, RecoveryChannel, build_example_code,
                   build_qubit_code, build_recovery, check_kl, effective_hamiltonian)
from .errors import (CodeConstructionError, DimensionCapError, HnlsQecError, KLViolationError,
                     NumericalError, ScenarioError)
from .hnls import (HnlsVerdict, LindbladSpan, PerpDecomposition, build_span, decompose,
                   hnls_verdict, is_commuting)
from .lindblad import (KrausSet, LindbladModel, apply_product_channel, evolve_exact,
                       kraus_first_order, liouvillian)
from .operators import (anti_hermitian_part, eig_hermitian, hermitian_part, hs_inner, lift,
                        operator_norm)
from .protocol import (PrecisionReport, ProtocolConfig, ScalingSeries, ghz_input,
                       precision_report, qfi, run_protocol, scaling_sweep)
from .scenarios import BUILTIN_SCENARIOS, Scenario, load_scenario

__version__ = "0.1.0"
