"""quditzx: qudit ZX/ZH diagram calculus with tunable discrete-integral semantics.

The package is organized bottom-up:

- :mod:`quditzx.measure` — signed residues mod D, the weighted counting
  measure, and the phase constants omega/tau.
- :mod:`quditzx.tensor` — dense complex tensors H^m -> H^n and the wire
  generators (identity, swap, cup, cap).
- :mod:`quditzx.generators` — amplitude functions and the semantic map
  for the eight dot/box generators.
- :mod:`quditzx.diagram` — open-graph diagrams and their evaluation by
  contraction.
- :mod:`quditzx.gauss` — quadratic Gauss sums and the normalized
  quadratic integral Gamma, in closed form with brute-force oracles.
- :mod:`quditzx.rewrite` — the machine-checkable rewrite-rule catalog,
  soundness checking, and anchored application.
- :mod:`quditzx.construct` — named gadget builders and the normal-form
  synthesizer.
- :mod:`quditzx.cli` — command-line interface.
"""

from quditzx.construct import build, gadget_id, normal_form, target_tensor
from quditzx.diagram import Diagram, DiagramBuilder, adjoint, evaluate
from quditzx.gauss import gamma, gauss_sum
from quditzx.generators import (
    Char,
    Generator,
    Indicator,
    One,
    Phase,
    PhaseVec,
    Stab,
    Table,
    UnitPow,
    eval_generator,
)
from quditzx.measure import MeasureContext, OverflowGuardError
from quditzx.rewrite import CATALOG, apply, check_all, check_soundness, get_rule
from quditzx.tensor import Tensor

__all__ = [
    "CATALOG",
    "Char",
    "Diagram",
    "DiagramBuilder",
    "Generator",
    "Indicator",
    "MeasureContext",
    "One",
    "OverflowGuardError",
    "Phase",
    "PhaseVec",
    "Stab",
    "Table",
    "Tensor",
    "UnitPow",
    "adjoint",
    "apply",
    "build",
    "check_all",
    "check_soundness",
    "eval_generator",
    "evaluate",
    "gadget_id",
    "gamma",
    "gauss_sum",
    "get_rule",
    "normal_form",
    "target_tensor",
]
__version__ = "0.1.0"
