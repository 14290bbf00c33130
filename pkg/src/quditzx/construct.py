"""Named gadget diagrams and their closed-form target tensors.

Each gadget id names a small diagram (a state, a gate, or a scalar)
assembled from the calculus generators.  Alongside every builder there
is an independently computed target: ``build`` wires up generators and
never consults the closed forms, while ``target_tensor`` evaluates the
defining basis sums directly and never touches diagram code, so
agreement between the two routes is a genuine check rather than a
tautology.

Also here: the coefficient-selector gadget (``mbox_gadget``), whose
H-box fires a chosen amplitude exactly on the all-``U_D`` basis input,
and ``normal_form``, which writes an arbitrary small tensor as a
diagram of copy-dot fan-outs, not-dot index shifts, and one selector
per coefficient.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np

from quditzx.diagram import Diagram, DiagramBuilder
from quditzx.generators import (
    AmplitudeFn,
    Char,
    Generator,
    MBox,
    One,
    Stab,
    UnitPow,
)
from quditzx.measure import (
    MeasureContext,
    OverflowGuardError,
    checked_i64,
    omega_pow,
    omega_pow_arr,
    residue,
    tau_pow,
)
from quditzx.tensor import Tensor

# Coefficient cap for normal_form: one selector gadget per entry of the
# target tensor, so D**(m+n) may not exceed this.
_MAX_COEFFS = 4096


class GadgetError(ValueError):
    """Unknown gadget name or invalid parameter."""


_PARAMS: dict[str, tuple[str, ...]] = {
    "ket_a": ("a",),
    "ket_omega_a": ("a",),
    "pauli_x": (),
    "pauli_z": (),
    "s_gate": (),
    "fourier": (),
    "m_mult": ("u",),
    "cx": (),
    "cz": (),
    "cx_pow": ("c",),
    "cz_pow": ("c",),
    "ccx_pow": ("c",),
    "ccz_pow": ("c",),
    "multiplier": ("c",),
    "fourier_box": ("c",),
    "scalar": ("alpha",),
    "diag_theta": ("amp",),
    "diag_a2": ("amp",),
}

GADGET_NAMES: tuple[str, ...] = tuple(sorted(_PARAMS))


@dataclass(frozen=True)
class GadgetId:
    """A gadget name with its parameters, hashable and order-normalized."""

    name: str
    params: tuple[tuple[str, Any], ...] = ()

    def __post_init__(self) -> None:
        if self.name not in _PARAMS:
            raise GadgetError(f"unknown gadget {self.name!r}")
        object.__setattr__(self, "params", tuple(sorted(self.params)))
        got = tuple(k for k, _ in self.params)
        want = tuple(sorted(_PARAMS[self.name]))
        if got != want:
            raise GadgetError(f"gadget {self.name!r} takes parameters {want}, got {got}")

    def param(self, key: str) -> Any:
        for k, v in self.params:
            if k == key:
                return v
        raise KeyError(key)

    def __str__(self) -> str:
        if not self.params:
            return self.name
        inner = ", ".join(f"{k}={v}" for k, v in self.params)
        return f"{self.name}({inner})"


def gadget_id(name: str, **params: Any) -> GadgetId:
    """Convenience constructor: ``gadget_id("ket_a", a=1)``."""
    return GadgetId(name, tuple(params.items()))


def _int_param(gid: GadgetId, key: str) -> int:
    v = gid.param(key)
    if isinstance(v, bool) or not isinstance(v, (int, np.integer)):
        raise GadgetError(f"gadget {gid.name!r} parameter {key}={v!r} must be an integer")
    return int(v)

def _complex_param(gid: GadgetId, key: str) -> complex:
    v = gid.param(key)
    if isinstance(v, (str, bool)) or not isinstance(v, (int, float, complex, np.number)):
        raise GadgetError(f"gadget {gid.name!r} parameter {key}={v!r} must be a number")
    return complex(v)

def _amp_param(gid: GadgetId) -> AmplitudeFn:
    v = gid.param("amp")
    if not isinstance(v, AmplitudeFn):
        raise GadgetError(f"gadget {gid.name!r} parameter amp={v!r} must be an amplitude function")
    return v


# =====================================================================
# Diagram builders
# =====================================================================


def _antipode(b: DiagramBuilder) -> str:
    """Degree-2 flat red dot: D*nu^4 times the negation permutation."""
    return b.node(Generator.red(One(), 1, 1))


def build(gid: GadgetId, ctx: MeasureContext) -> Diagram:
    """Assemble the named gadget as a diagram over ctx.dim.

    At well-tempered nu the evaluation equals ``target_tensor`` for
    every gadget; several (the diagonal family, fourier, fourier_box,
    scalar, and both kets) match at any nu.
    """
    b = DiagramBuilder(ctx.dim)
    name = gid.name

    if name == "ket_a":
        # basis state through an antipode; red state alone lands on -a
        st = b.node(Generator.red(Char(_int_param(gid, "a")), 0, 1))
        anti = _antipode(b)
        b.wire(st, anti)
        b.wire(anti, "out")

    elif name == "ket_omega_a":
        # green phase state through an antipode gives the Fourier vector
        st = b.node(Generator.green(Char(_int_param(gid, "a")), 0, 1))
        anti = _antipode(b)
        b.wire(st, anti)
        b.wire(anti, "out")

    elif name == "pauli_x":
        # antipode then a phased red dot: the cyclic shift |t> -> |t+1>
        anti = _antipode(b)
        sh = b.node(Generator.red(Char(-1), 1, 1))
        b.wire("in", anti)
        b.wire(anti, sh)
        b.wire(sh, "out")

    elif name == "pauli_z":
        g = b.node(Generator.green(Char(1), 1, 1))
        b.wire("in", g)
        b.wire(g, "out")

    elif name == "s_gate":
        g = b.node(Generator.green(Stab(0, 1), 1, 1))
        b.wire("in", g)
        b.wire(g, "out")

    elif name == "fourier":
        h = b.node(Generator.hminus())
        b.wire("in", h)
        b.wire(h, "out")

    elif name == "m_mult":
        u = _int_param(gid, "u")
        copy = b.node(Generator.white(1, abs(u)))
        tot = b.node(Generator.red(One(), abs(u), 1))
        b.wire("in", copy)
        for _ in range(abs(u)):
            b.wire(copy, tot)
        if u > 0:
            # the summing red dot negates, so undo that with an antipode
            anti = _antipode(b)
            b.wire(tot, anti)
            b.wire(anti, "out")
        else:
            b.wire(tot, "out")

    elif name == "cx":
        ctrl = b.node(Generator.white(1, 2))
        tot = b.node(Generator.red(One(), 2, 1))
        anti = _antipode(b)
        b.wire(("in", 0), ctrl)
        b.wire(ctrl, ("out", 0))
        b.wire(ctrl, tot)
        b.wire(("in", 1), tot)
        b.wire(tot, anti)
        b.wire(anti, ("out", 1))

    elif name == "cz":
        c1 = b.node(Generator.white(1, 2))
        c2 = b.node(Generator.white(1, 2))
        h = b.node(Generator.hplus())
        b.wire(("in", 0), c1)
        b.wire(c1, ("out", 0))
        b.wire(c1, h)
        b.wire(("in", 1), c2)
        b.wire(c2, ("out", 1))
        b.wire(c2, h)

    elif name == "cx_pow":
        # control copy -> multiplier bridge -> summing red dot on target
        c = _int_param(gid, "c")
        ctrl = b.node(Generator.white(1, 2))
        box = b.node(Generator.hbox(Char(c), 1, 1))
        hm = b.node(Generator.hminus())
        tot = b.node(Generator.red(One(), 2, 1))
        anti = _antipode(b)
        b.wire(("in", 0), ctrl)
        b.wire(ctrl, ("out", 0))
        b.wire(ctrl, box)
        b.wire(box, hm)
        b.wire(hm, tot)
        b.wire(("in", 1), tot)
        b.wire(tot, anti)
        b.wire(anti, ("out", 1))

    elif name == "cz_pow":
        c = _int_param(gid, "c")
        c1 = b.node(Generator.white(1, 2))
        c2 = b.node(Generator.white(1, 2))
        box = b.node(Generator.hbox(Char(c), 1, 1))
        b.wire(("in", 0), c1)
        b.wire(c1, ("out", 0))
        b.wire(c1, box)
        b.wire(("in", 1), c2)
        b.wire(c2, ("out", 1))
        b.wire(c2, box)

    elif name == "ccx_pow":
        c = _int_param(gid, "c")
        w1 = b.node(Generator.white(1, 2))
        w2 = b.node(Generator.white(1, 2))
        box = b.node(Generator.hbox(Char(c), 2, 1))
        hm = b.node(Generator.hminus())
        tot = b.node(Generator.red(One(), 2, 1))
        anti = _antipode(b)
        b.wire(("in", 0), w1)
        b.wire(w1, ("out", 0))
        b.wire(w1, box)
        b.wire(("in", 1), w2)
        b.wire(w2, ("out", 1))
        b.wire(w2, box)
        b.wire(box, hm)
        b.wire(hm, tot)
        b.wire(("in", 2), tot)
        b.wire(tot, anti)
        b.wire(anti, ("out", 2))

    elif name == "ccz_pow":
        c = _int_param(gid, "c")
        box = b.node(Generator.hbox(Char(c), 3, 0))
        for j in range(3):
            w = b.node(Generator.white(1, 2))
            b.wire(("in", j), w)
            b.wire(w, ("out", j))
            b.wire(w, box)

    elif name == "multiplier":
        c = _int_param(gid, "c")
        box = b.node(Generator.hbox(Char(c), 1, 1))
        hm = b.node(Generator.hminus())
        b.wire("in", box)
        b.wire(box, hm)
        b.wire(hm, "out")

    elif name == "fourier_box":
        c = _int_param(gid, "c")
        box = b.node(Generator.hbox(Char(c), 1, 1))
        b.wire("in", box)
        b.wire(box, "out")

    elif name == "scalar":
        alpha = _complex_param(gid, "alpha")
        # UnitPow rejects 0; the selector amplitude covers that case
        amp = UnitPow(alpha) if alpha != 0 else MBox(0, alpha)
        b.node(Generator.hbox(amp, 0, 0))

    elif name == "diag_theta":
        g = b.node(Generator.green(_amp_param(gid), 1, 1))
        b.wire("in", g)
        b.wire(g, "out")

    elif name == "diag_a2":
        amp = _amp_param(gid)
        if amp.residues_only:
            raise GadgetError("diag_a2 needs an all-integers amplitude (its argument is a product)")
        c1 = b.node(Generator.white(1, 2))
        c2 = b.node(Generator.white(1, 2))
        box = b.node(Generator.hbox(amp, 2, 0))
        b.wire(("in", 0), c1)
        b.wire(c1, ("out", 0))
        b.wire(c1, box)
        b.wire(("in", 1), c2)
        b.wire(c2, ("out", 1))
        b.wire(c2, box)

    else:  # pragma: no cover - names are validated by GadgetId
        raise GadgetError(f"unknown gadget {name!r}")

    return b.build()


# =====================================================================
# Closed-form targets
# =====================================================================


def _pos(ctx: MeasureContext, x: int) -> int:
    """Axis index of the residue class of x."""
    return residue(ctx, int(x)) - ctx.lower


def _basis_kket(ctx: MeasureContext, x: int) -> np.ndarray:
    """The normalized basis vector: 1/nu at the residue class of x."""
    v = np.zeros(ctx.dim, dtype=complex)
    v[_pos(ctx, x)] = 1.0 / ctx.nu
    return v


def _fourier_kket(ctx: MeasureContext, k: int) -> np.ndarray:
    """The normalized Fourier vector: nu * omega^(-k x) over the window."""
    return ctx.nu * omega_pow_arr(ctx, (-int(k)) * ctx.residues())


def target_tensor(gid: GadgetId, ctx: MeasureContext) -> Tensor:
    """The gadget's defining sum, computed directly (no diagram code)."""
    D, nu = ctx.dim, ctx.nu
    res = [int(x) for x in ctx.residues()]
    name = gid.name

    if name == "ket_a":
        a = _int_param(gid, "a")
        vec = np.zeros(D, dtype=complex)
        for h in res:
            for k in res:
                inner = np.vdot(_fourier_kket(ctx, k), _fourier_kket(ctx, -h))
                vec += nu**4 * tau_pow(ctx, 2 * a * h) * inner * _fourier_kket(ctx, -k)
        return Tensor(D, 0, 1, vec)

    if name == "ket_omega_a":
        a = _int_param(gid, "a")
        vec = np.zeros(D, dtype=complex)
        for x in res:
            for k in res:
                inner = np.vdot(_fourier_kket(ctx, k), _basis_kket(ctx, x))
                vec += nu**4 * tau_pow(ctx, 2 * a * x) * inner * _fourier_kket(ctx, -k)
        return Tensor(D, 0, 1, vec)

    if name == "pauli_x":
        arr = np.zeros((D, D), dtype=complex)
        for h in res:
            f = _fourier_kket(ctx, h)
            arr += nu**2 * tau_pow(ctx, 2 * h) * np.outer(f, f.conj())
        return Tensor(D, 1, 1, arr)

    if name == "pauli_z":
        arr = np.zeros((D, D), dtype=complex)
        for x in res:
            e = _basis_kket(ctx, x)
            arr += nu**2 * tau_pow(ctx, 2 * x) * np.outer(e, e)
        return Tensor(D, 1, 1, arr)

    if name == "s_gate":
        arr = np.zeros((D, D), dtype=complex)
        for x in res:
            e = _basis_kket(ctx, x)
            arr += nu**2 * tau_pow(ctx, x * x) * np.outer(e, e)
        return Tensor(D, 1, 1, arr)

    if name == "fourier":
        arr = np.zeros((D, D), dtype=complex)
        for k in res:
            for x in res:
                arr += nu**4 * tau_pow(ctx, -2 * k * x) * np.outer(
                    _basis_kket(ctx, k), _basis_kket(ctx, x)
                )
        return Tensor(D, 1, 1, arr)

    if name in ("m_mult", "multiplier"):
        u = _int_param(gid, "u" if name == "m_mult" else "c")
        arr = np.zeros((D, D), dtype=complex)
        for x in res:
            arr += nu**2 * np.outer(_basis_kket(ctx, u * x), _basis_kket(ctx, x))
        return Tensor(D, 1, 1, arr)

    if name == "cx":
        arr = np.zeros((D,) * 4, dtype=complex)
        for x in res:
            for y in res:
                arr[_pos(ctx, x), _pos(ctx, x + y), _pos(ctx, x), _pos(ctx, y)] = 1.0
        return Tensor(D, 2, 2, arr)

    if name == "cz":
        arr = np.zeros((D,) * 4, dtype=complex)
        for x in res:
            for y in res:
                arr[_pos(ctx, x), _pos(ctx, y), _pos(ctx, x), _pos(ctx, y)] = omega_pow(ctx, x * y)
        return Tensor(D, 2, 2, arr)

    if name == "cx_pow":
        c = _int_param(gid, "c")
        arr = np.zeros((D,) * 4, dtype=complex)
        for x in res:
            for y in res:
                arr[_pos(ctx, x), _pos(ctx, y + c * x), _pos(ctx, x), _pos(ctx, y)] = 1.0
        return Tensor(D, 2, 2, arr)

    if name == "cz_pow":
        c = _int_param(gid, "c")
        arr = np.zeros((D,) * 4, dtype=complex)
        for x in res:
            for y in res:
                arr[_pos(ctx, x), _pos(ctx, y), _pos(ctx, x), _pos(ctx, y)] = omega_pow(
                    ctx, c * x * y
                )
        return Tensor(D, 2, 2, arr)

    if name == "ccx_pow":
        c = _int_param(gid, "c")
        arr = np.zeros((D,) * 6, dtype=complex)
        for x in res:
            for y in res:
                for z in res:
                    arr[
                        _pos(ctx, x),
                        _pos(ctx, y),
                        _pos(ctx, z + c * x * y),
                        _pos(ctx, x),
                        _pos(ctx, y),
                        _pos(ctx, z),
                    ] = 1.0
        return Tensor(D, 3, 3, arr)

    if name == "ccz_pow":
        c = _int_param(gid, "c")
        arr = np.zeros((D,) * 6, dtype=complex)
        for x in res:
            for y in res:
                for z in res:
                    arr[
                        _pos(ctx, x),
                        _pos(ctx, y),
                        _pos(ctx, z),
                        _pos(ctx, x),
                        _pos(ctx, y),
                        _pos(ctx, z),
                    ] = omega_pow(ctx, c * x * y * z)
        return Tensor(D, 3, 3, arr)

    if name == "fourier_box":
        c = _int_param(gid, "c")
        arr = np.zeros((D, D), dtype=complex)
        for x in res:
            for y in res:
                arr[_pos(ctx, y), _pos(ctx, x)] = nu**2 * omega_pow(ctx, c * x * y)
        return Tensor(D, 1, 1, arr)

    if name == "scalar":
        return Tensor.scalar(D, _complex_param(gid, "alpha"))

    if name == "diag_theta":
        amp = _amp_param(gid)
        arr = np.zeros((D, D), dtype=complex)
        for x in res:
            arr[_pos(ctx, x), _pos(ctx, x)] = amp.eval(ctx, x)
        return Tensor(D, 1, 1, arr)

    if name == "diag_a2":
        amp = _amp_param(gid)
        if amp.residues_only:
            raise GadgetError("diag_a2 needs an all-integers amplitude (its argument is a product)")
        arr = np.zeros((D,) * 4, dtype=complex)
        for x in res:
            for y in res:
                arr[_pos(ctx, x), _pos(ctx, y), _pos(ctx, x), _pos(ctx, y)] = amp.eval(ctx, x * y)
        return Tensor(D, 2, 2, arr)

    raise GadgetError(f"unknown gadget {name!r}")  # pragma: no cover


# =====================================================================
# Coefficient selector and normal form
# =====================================================================


def mbox_gadget(m: int, alpha: complex, ctx: MeasureContext) -> Diagram:
    """The m-input selector: all-U_D basis input maps to alpha, others to 1.

    Per input, a white dot copies the wire; one branch passes through a
    (1 - sigma)-not-dot; all 2m branches meet an H-box whose amplitude
    fires alpha exactly at the leg product U_D**(2m).  The evaluated
    effect carries the usual generator scaling nu**m.
    """
    if m < 0:
        raise GadgetError(f"selector needs m >= 0, got {m}")
    checked_i64(ctx.upper ** (2 * m), "selector pivot U_D^(2m)")
    alpha = complex(alpha)
    b = DiagramBuilder(ctx.dim)
    if m == 0:
        b.node(Generator.hbox(MBox(0, alpha), 0, 0))
        return b.build()
    box = b.node(Generator.hbox(MBox(2 * m, alpha), 2 * m, 0))
    flip = 1 - ctx.sigma
    for j in range(m):
        copy = b.node(Generator.white(1, 2))
        nd = b.node(Generator.not_dot(flip))
        b.wire(("in", j), copy)
        b.wire(copy, box)
        b.wire(copy, nd)
        b.wire(nd, box)
    return b.build()


def normal_form(omega: Tensor, ctx: MeasureContext) -> Diagram:
    """A diagram evaluating exactly to `omega`, one selector per entry.

    Every boundary wire gets a single white fan-out dot of degree
    D**(m+n) + 1.  Each tensor entry, enumerated in row-major order
    with output axes first, receives its own selector gadget; a
    not-dot on each branch shifts that entry's basis point onto the
    all-U_D input the selector fires on.  The fan-out, shift, and
    selector scalings cancel, so the construction is exact at any nu.
    """
    if omega.dim != ctx.dim:
        raise ValueError(f"tensor dimension {omega.dim} != context dimension {ctx.dim}")
    D = ctx.dim
    n_out, n_in = omega.out_legs, omega.in_legs
    wires = n_out + n_in
    n_coeffs = D**wires
    if n_coeffs > _MAX_COEFFS:
        raise OverflowGuardError(
            f"normal form needs D^(m+n) = {n_coeffs} selector gadgets (cap {_MAX_COEFFS})"
        )
    checked_i64(ctx.upper ** (2 * wires), "selector pivot U_D^(2(m+n))")

    b = DiagramBuilder(D)
    fans = []
    for w in range(wires):
        fan = b.node(Generator.white(1, n_coeffs), name=f"fan{w}")
        if w < n_out:
            b.wire(("out", w), fan)
        else:
            b.wire(("in", w - n_out), fan)
        fans.append(fan)

    scale = complex(ctx.nu) ** (-wires)
    flat = omega.data.reshape(-1)
    flip = 1 - ctx.sigma
    U = ctx.upper
    for k in range(n_coeffs):
        alpha = complex(flat[k]) * scale
        if wires == 0:
            b.node(Generator.hbox(MBox(0, alpha), 0, 0))
            continue
        point = np.unravel_index(k, omega.data.shape)
        box = b.node(Generator.hbox(MBox(2 * wires, alpha), 2 * wires, 0), name=f"sel{k}")
        for w in range(wires):
            t_star = ctx.lower + int(point[w])
            shift = b.node(Generator.not_dot(residue(ctx, -t_star - U)))
            copy = b.node(Generator.white(1, 2))
            nd = b.node(Generator.not_dot(flip))
            b.wire(fans[w], shift)
            b.wire(shift, copy)
            b.wire(copy, box)
            b.wire(copy, nd)
            b.wire(nd, box)
    return b.build()
