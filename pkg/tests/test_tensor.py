"""Wire generators, tensor algebra, and the dump format."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quditzx.measure import MeasureContext
from quditzx.tensor import (
    ShapeError,
    Tensor,
    cap,
    compose,
    cup,
    dump_json,
    identity_wire,
    load_json,
    max_abs_diff,
    swap,
    tensor_product,
)


def random_tensor(rng, dim, m, n):
    shape = (dim,) * (n + m)
    return Tensor(dim, m, n, rng.normal(size=shape) + 1j * rng.normal(size=shape))


# ---------------------------------------------------------------- wires


def test_identity_is_eye():
    assert np.allclose(identity_wire(MeasureContext(3)).data, np.eye(3))


def test_cap_after_cup_is_trace_of_identity():
    ctx = MeasureContext(2)
    loop = compose(cup(ctx), cap(ctx))
    assert loop.in_legs == loop.out_legs == 0
    assert abs(complex(loop.data) - 2.0) < 1e-12


def test_swap_involution():
    ctx = MeasureContext(4)
    two = tensor_product(identity_wire(ctx), identity_wire(ctx))
    assert max_abs_diff(compose(swap(ctx), swap(ctx)), two) < 1e-12


@pytest.mark.parametrize("D", [2, 3, 5])
def test_snake_equation(D):
    # (cup ; id x cap-style bending) straightens to the identity wire
    ctx = MeasureContext(D)
    ident = identity_wire(ctx)
    left = tensor_product(cup(ctx), ident)  # 1 -> 3
    right = tensor_product(ident, cap(ctx))  # 3 -> 1
    assert max_abs_diff(compose(left, right), ident) < 1e-12


# ---------------------------------------------------------------- algebra


def test_tensor_product_scalars():
    t = tensor_product(Tensor.scalar(2, 2.0), Tensor.scalar(2, 3j))
    assert abs(complex(t.data) - 6j) < 1e-12


def test_tensor_product_projectors():
    # |0><0| (x) |1><1| at D=2 projects onto |0,1>
    D = 2
    p0 = np.zeros((D, D))
    p0[0, 0] = 1
    p1 = np.zeros((D, D))
    p1[1, 1] = 1
    t = tensor_product(Tensor(D, 1, 1, p0), Tensor(D, 1, 1, p1))
    expect = np.zeros((D, D, D, D))
    expect[0, 1, 0, 1] = 1
    assert np.allclose(t.data, expect)


def test_compose_identity_neutral():
    rng = np.random.default_rng(7)
    ctx = MeasureContext(3)
    t = random_tensor(rng, 3, 1, 1)
    assert max_abs_diff(compose(identity_wire(ctx), t), t) < 1e-12
    assert max_abs_diff(compose(t, identity_wire(ctx)), t) < 1e-12


def test_compose_cup_cap_scalar_D():
    ctx = MeasureContext(5)
    val = compose(cup(ctx), cap(ctx))
    assert abs(complex(val.data) - 5.0) < 1e-12


def test_shape_errors():
    rng = np.random.default_rng(0)
    a = random_tensor(rng, 2, 1, 2)
    b = random_tensor(rng, 2, 1, 1)
    c = random_tensor(rng, 3, 1, 1)
    with pytest.raises(ShapeError):
        compose(a, a)  # 2 outputs into 1 input
    with pytest.raises(ShapeError):
        tensor_product(b, c)
    with pytest.raises(ShapeError):
        max_abs_diff(a, b)


@settings(max_examples=30)
@given(st.integers(2, 4), st.integers(0, 2**32 - 1))
def test_interchange_law(D, seed):
    rng = np.random.default_rng(seed)
    a = random_tensor(rng, D, 1, 1)
    b = random_tensor(rng, D, 2, 1)
    c = random_tensor(rng, D, 1, 2)
    d = random_tensor(rng, D, 1, 1)
    lhs = compose(tensor_product(a, b), tensor_product(c, d))
    rhs = tensor_product(compose(a, c), compose(b, d))
    assert max_abs_diff(lhs, rhs) < 1e-10


@settings(max_examples=30)
@given(st.integers(2, 4), st.integers(0, 2**32 - 1))
def test_cup_transposes_legs(D, seed):
    # feeding T into one side of a cup equals feeding its transpose into the other
    ctx = MeasureContext(D)
    rng = np.random.default_rng(seed)
    t = random_tensor(rng, D, 1, 1)
    tt = Tensor(D, 1, 1, t.data.T)
    ident = identity_wire(ctx)
    lhs = compose(cup(ctx), tensor_product(ident, t))
    rhs = compose(cup(ctx), tensor_product(tt, ident))
    assert max_abs_diff(lhs, rhs) < 1e-12


def test_adjoint_is_conjugate_transpose():
    rng = np.random.default_rng(3)
    t = random_tensor(rng, 3, 2, 1)
    ta = t.adjoint()
    assert (ta.in_legs, ta.out_legs) == (1, 2)
    assert np.allclose(ta.as_matrix(), t.as_matrix().conj().T)


# ---------------------------------------------------------------- dump format


@pytest.mark.parametrize("shape", [(2, 0, 0), (3, 1, 1), (2, 2, 1), (4, 0, 2)])
def test_dump_round_trip(shape):
    D, m, n = shape
    rng = np.random.default_rng(11)
    t = random_tensor(rng, D, m, n)
    back = load_json(dump_json(t))
    assert max_abs_diff(t, back) < 1e-15


def test_dump_axis_order_is_outputs_major():
    # 1->1 at D=2: flat order must be (out=L..U) major, (in=L..U) minor
    t = Tensor(2, 1, 1, np.array([[1, 2], [3, 4]], dtype=complex))
    entries = [complex(re, im) for re, im in __import__("json").loads(dump_json(t))["entries"]]
    assert entries == [1, 2, 3, 4]
