"""Hand-checked cases for the reference oracle."""

import numpy as np
import pytest

from kernelprof.kernels import KernelId, SizeMismatchError, run_reference


def test_arradd_two_elements():
    a = np.array([1.0, 2.0])
    out = run_reference(KernelId.ArrayAddition, (a, np.array([3.0, 4.0])))
    assert np.array_equal(out, [4.0, 6.0])
    assert np.array_equal(a, [4.0, 6.0])


def test_hsum_hand_case():
    assert run_reference(KernelId.HorizontalSum, ([1.0, 2.0, 3.0, 4.0],)) == 10.0


def test_horner_degree_two_hand_case():
    # 1*x^2 + 1*x + 1 at x=2 -> 7, regardless of loop order
    coeffs = np.array([1.0, 1.0, 1.0])
    for kernel in (KernelId.HornerCoeff1st, KernelId.HornerData1st):
        y = run_reference(kernel, (coeffs, np.array([2.0]), np.zeros(1)))
        assert y[0] == 7.0


def test_horner_zero_padding_equivalence():
    # degree-64 polynomial with zero high terms equals the degree-2 one
    coeffs = np.zeros(65)
    coeffs[62:] = 1.0
    y = run_reference(KernelId.HornerData1st, (coeffs, np.array([2.0]), np.zeros(1)))
    assert y[0] == 7.0


def test_size_mismatch():
    with pytest.raises(SizeMismatchError):
        run_reference(KernelId.ArrayAddition, ([1.0, 2.0], [3.0]))
