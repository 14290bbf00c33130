"""Signed residues mod D, the weighted counting measure, and phase constants.

The residue ring Z_D is represented by the signed window
``[D] = {L_D, ..., U_D}`` with ``L_D = -floor((D-1)/2)`` and
``U_D = floor(D/2)``; note ``0`` is always in the window and for even D
the window is asymmetric (it contains ``D/2`` but not ``-D/2``).
Subsets carry the measure ``mu(S) = #S * nu**2`` for a tunable weight
``nu > 0``.  The default ``nu = D**(-1/4)`` is the unique choice that
makes the Fourier-box generators unitary; we call it the well-tempered
weight, and ``mu([D]) = sqrt(D)`` there.

Phase constants:

- ``omega = exp(2*pi*i/D)``, the principal D-th root of unity;
- ``tau = exp(pi*i*(D**2+1)/D)``, a square root of omega whose powers
  are well defined on residues (``tau**(2D) = 1`` for every D, odd or
  even, because ``D**2 + 1`` flips parity with D).

All integer exponents are reduced modulo D (for omega) or 2D (for tau)
before any floating-point exponentiation, so large labels never lose
precision.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

_I64_MAX = 2**63 - 1


class OverflowGuardError(OverflowError):
    """An integer product or power left the checked 64-bit range."""


def checked_i64(value: int, what: str = "value") -> int:
    """Pass `value` through, raising OverflowGuardError if it exceeds 64-bit range."""
    if not -_I64_MAX - 1 <= value <= _I64_MAX:
        raise OverflowGuardError(f"{what} = {value} exceeds the checked 64-bit range")
    return value


@dataclass(frozen=True)
class MeasureContext:
    """Dimension, measure weight, and derived constants. Immutable.

    Parameters
    ----------
    dim:
        Qudit dimension D > 1.
    nu:
        Positive measure weight; defaults to ``dim**(-1/4)``.
    """

    dim: int
    nu: float = field(default=None)  # type: ignore[assignment]

    def __post_init__(self) -> None:
        if self.dim < 2:
            raise ValueError(f"dimension must be at least 2, got {self.dim}")
        if self.nu is None:
            object.__setattr__(self, "nu", float(self.dim) ** -0.25)
        if not self.nu > 0:
            raise ValueError(f"nu must be positive, got {self.nu}")
        object.__setattr__(self, "nu", float(self.nu))

    # -- derived constants -------------------------------------------------

    @property
    def lower(self) -> int:
        """L_D, the smallest signed residue."""
        return -((self.dim - 1) // 2)

    @property
    def upper(self) -> int:
        """U_D, the largest signed residue."""
        return self.dim // 2

    @property
    def sigma(self) -> int:
        """1 for even D, 0 for odd D; the fixed offset of the `negate` involution."""
        return self.upper + self.lower

    @property
    def total_measure(self) -> float:
        """N = mu([D]) = D * nu**2."""
        return self.dim * self.nu**2

    @property
    def omega(self) -> complex:
        return complex(np.exp(2j * np.pi / self.dim))

    @property
    def tau(self) -> complex:
        return complex(np.exp(1j * np.pi * (self.dim**2 + 1) / self.dim))

    @property
    def is_well_tempered(self) -> bool:
        """True when nu is (numerically) the default D**(-1/4)."""
        return abs(self.nu - float(self.dim) ** -0.25) < 1e-12

    def residues(self) -> np.ndarray:
        """The window [D] as an int64 array, enumerated L_D..U_D."""
        return np.arange(self.lower, self.upper + 1, dtype=np.int64)

    # root tables, built lazily once per context
    def _omega_table(self) -> np.ndarray:
        tab = getattr(self, "_omega_tab", None)
        if tab is None:
            tab = np.exp(2j * np.pi * np.arange(self.dim) / self.dim)
            object.__setattr__(self, "_omega_tab", tab)
        return tab

    def _tau_table(self) -> np.ndarray:
        tab = getattr(self, "_tau_tab", None)
        if tab is None:
            e = np.arange(2 * self.dim)
            tab = np.exp(1j * np.pi * (((self.dim**2 + 1) * e) % (2 * self.dim)) / self.dim)
            object.__setattr__(self, "_tau_tab", tab)
        return tab


def residue(ctx: MeasureContext, t: int) -> int:
    """Reduce an integer into the signed window [D]."""
    return (int(t) - ctx.lower) % ctx.dim + ctx.lower


def residue_arr(ctx: MeasureContext, t: np.ndarray) -> np.ndarray:
    """Vectorized `residue`."""
    return (t - ctx.lower) % ctx.dim + ctx.lower


def negate(ctx: MeasureContext, x: int) -> int:
    """The involution x -> sigma - x on [D] (plain negation for odd D)."""
    return residue(ctx, ctx.sigma - x)


def integrate(ctx: MeasureContext, f: Callable[[int], complex]) -> complex:
    """Integrate f over [D]: nu**2 * sum of f on the window."""
    return ctx.nu**2 * sum(complex(f(int(x))) for x in ctx.residues())


def exp_integral(ctx: MeasureContext, E: int) -> complex:
    """Normalized exponential sum: D*nu**4 if E = 0 (mod D), else 0.

    This is nu**2 times the bare integral of omega**(E*k) over the
    measure; the extra nu**2 matches the point-mass pairing convention
    the generator tensors use, so that at the default weight the value
    is exactly 1 on the zero residue class.
    """
    if E % ctx.dim == 0:
        return complex(ctx.dim * ctx.nu**4)
    return 0j


def omega_pow(ctx: MeasureContext, e: int) -> complex:
    """omega**e with the exponent reduced mod D first."""
    return complex(ctx._omega_table()[int(e) % ctx.dim])


def tau_pow(ctx: MeasureContext, e: int) -> complex:
    """tau**e with the exponent reduced mod 2D first."""
    return complex(ctx._tau_table()[int(e) % (2 * ctx.dim)])


def omega_pow_arr(ctx: MeasureContext, e: np.ndarray) -> np.ndarray:
    """Vectorized `omega_pow` for int64 exponent arrays."""
    return ctx._omega_table()[np.asarray(e, dtype=np.int64) % ctx.dim]


def tau_pow_arr(ctx: MeasureContext, e: np.ndarray) -> np.ndarray:
    """Vectorized `tau_pow` for int64 exponent arrays."""
    return ctx._tau_table()[np.asarray(e, dtype=np.int64) % (2 * ctx.dim)]
