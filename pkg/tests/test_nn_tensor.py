# import libs
import numpy as np
import pytest
# local
from bitenet_ehr.errors import ShapeError
from bitenet_ehr.nn import Tensor, backward, concat, grad_check
from conftest import GRAD_TOL as TOL, leaf, weighted_sum


# SECTION: forward values
def test_broadcast_add_gradient_sums_back():
    a = Tensor(np.ones((2, 3)), requires_grad=True)
    b = Tensor(np.ones(3), requires_grad=True)
    (a + b).sum().backward()
    assert np.array_equal(b.grad, np.full(3, 2.0))
    assert np.array_equal(a.grad, np.ones((2, 3)))


def test_leaves_accumulate_until_zero_grad():
    x = Tensor(np.array([1.0, 2.0]), requires_grad=True)
    (x * 3.0).sum().backward()
    (x * 3.0).sum().backward()
    assert np.array_equal(x.grad, [6.0, 6.0])
    x.zero_grad()
    assert np.array_equal(x.grad, [0.0, 0.0])


def test_shared_node_gradients_add():
    x = Tensor(np.array(3.0), requires_grad=True)
    y = x * x
    backward(y + y)
    assert x.grad == pytest.approx(12.0)


def test_backward_needs_scalar():
    x = Tensor(np.ones(3), requires_grad=True)
    with pytest.raises(ShapeError):
        (x * 2.0).backward()


def test_matmul_shape_mismatch():
    with pytest.raises(ShapeError):
        Tensor(np.ones((2, 3))) @ Tensor(np.ones((2, 3)))


def test_gather_rows_out_of_range():
    table = Tensor(np.zeros((3, 2)), requires_grad=True)
    with pytest.raises(IndexError):
        table.gather_rows(np.array([0, 3]))


def test_sigmoid_is_stable_at_extremes():
    out = Tensor(np.array([-800.0, 0.0, 800.0])).sigmoid().data
    assert np.all(np.isfinite(out))
    assert out.tolist() == [0.0, 0.5, 1.0]


def test_softmax_rows_sum_to_one(rng):
    out = Tensor(rng.normal(size=(4, 5)) * 50).softmax(axis=-1).data
    assert np.allclose(out.sum(axis=-1), 1.0)


def test_gather_gradient_reaches_only_looked_up_rows():
    table = Tensor(np.arange(12.0).reshape(4, 3), requires_grad=True)
    table.gather_rows(np.array([[1, 1], [3, 1]])).sum().backward()
    assert table.grad[0].tolist() == [0.0, 0.0, 0.0]
    assert table.grad[2].tolist() == [0.0, 0.0, 0.0]
    assert table.grad[1].tolist() == [3.0, 3.0, 3.0]
    assert table.grad[3].tolist() == [1.0, 1.0, 1.0]


def test_one_hot_lookup_equals_matrix_product(rng):
    table = rng.normal(size=(5, 3))
    one_hot = np.zeros((1, 5))
    one_hot[0, 2] = 1.0
    looked_up = Tensor(table).gather_rows(np.array([2])).data
    assert np.allclose(looked_up, one_hot @ table)


# SECTION: gradient checks
def test_grad_arithmetic(rng):
    a = leaf(rng, 3, 4)
    b = leaf(rng, 4, low=0.5, high=1.5)
    assert grad_check(lambda a, b: weighted_sum(a * b + a / b - b + 2.0 - a), [a, b]) <= TOL


def test_grad_power_and_log(rng):
    a = leaf(rng, 5, low=0.5, high=2.0)
    assert grad_check(lambda a: weighted_sum(a ** 1.5 + a.log() + a ** -0.5), [a]) <= TOL


def test_grad_matmul_batched(rng):
    a = leaf(rng, 2, 3, 4)
    b = leaf(rng, 4, 5)
    assert grad_check(lambda a, b: weighted_sum(a @ b), [a, b]) <= TOL


def test_grad_nonlinearities(rng):
    a = leaf(rng, 6)
    # keep relu inputs away from the kink
    a.data[np.abs(a.data) < 0.05] = 0.3
    f = lambda a: weighted_sum(a.exp() + a.tanh() + a.sigmoid() + a.relu() + a.clip(-2.0, 2.0))
    assert grad_check(f, [a]) <= TOL


def test_grad_reductions_and_reshapes(rng):
    a = leaf(rng, 2, 3, 4)
    f = lambda a: weighted_sum(
        a.sum(axis=1) + a.mean(axis=1)) + weighted_sum(a.reshape(6, 4).transpose(1, 0)) + a.mean()
    assert grad_check(f, [a]) <= TOL


def test_grad_softmax(rng):
    a = leaf(rng, 3, 5)
    assert grad_check(lambda a: weighted_sum(a.softmax(axis=-1)), [a]) <= TOL


def test_grad_gather_and_concat(rng):
    table = leaf(rng, 5, 3)
    other = leaf(rng, 2, 2)
    ids = np.array([[0, 4], [4, 2]])
    f = lambda t, o: weighted_sum(concat([t.gather_rows(ids).reshape(2, 6), o], axis=-1))
    assert grad_check(f, [table, other]) <= TOL


def test_grad_check_compares_tiny_gradients_relatively(rng):
    # the detached term moves the output by 5e-8 per unit without any gradient
    a = leaf(rng, 3)
    f = lambda a: weighted_sum(a * 0.0) + Tensor(np.array(5e-8 * a.data.sum()))
    assert grad_check(f, [a]) > 0.5
    assert grad_check(f, [a], floor=1e-6) < 0.1
