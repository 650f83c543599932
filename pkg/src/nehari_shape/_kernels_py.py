"""Pure numpy implementations of the hot kernels.

These define the reference semantics; the compiled module ``_kernels`` must
reproduce them bit for bit (see ``tests/test_kernels.py``).
"""

import numpy as np


def pairwise_sum(values):
    """Sum a 1-D array with a fixed binary-tree reduction.

    Level by level, element ``2i`` is added to element ``2i+1``; an odd tail
    is carried up unchanged. The summation order depends only on the length,
    so results are reproducible regardless of how the input was produced.
    """
    x = np.ascontiguousarray(values, dtype=np.float64).ravel()
    n = x.shape[0]
    if n == 0:
        return 0.0
    x = x.copy()
    while n > 1:
        half = n // 2
        paired = x[0:2 * half:2] + x[1:2 * half:2]
        if n % 2:
            x[:half] = paired
            x[half] = x[n - 1]
            n = half + 1
        else:
            x[:half] = paired
            n = half
    return float(x[0])


def q1_local_stiffness(coef, dshape, qweights):
    """Local Q1 stiffness matrices for a symmetric coefficient field.

    Parameters
    ----------
    coef : (ncell, nq, 2, 2) array
        Coefficient matrix ``A`` at each quadrature point of each cell.
    dshape : (nq, 4, 2) array
        Physical gradients of the four bilinear shape functions.
    qweights : (nq,) array
        Physical quadrature weights (already scaled by the cell area).

    Returns
    -------
    (ncell, 4, 4) array with entries ``sum_q w_q grad(N_i) A grad(N_j)``.
    """
    coef = np.asarray(coef, dtype=np.float64)
    ag = np.einsum("cqab,qjb->cqja", coef, dshape)
    return np.einsum("q,qia,cqja->cij", qweights, dshape, ag)


def q1_local_mass(weight, shape, qweights):
    """Local Q1 mass matrices ``sum_q w_q c(x_q) N_i N_j``.

    ``weight`` has shape (ncell, nq), ``shape`` (nq, 4).
    """
    weight = np.asarray(weight, dtype=np.float64)
    return np.einsum("q,cq,qi,qj->cij", qweights, weight, shape, shape)
