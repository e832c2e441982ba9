import numpy as np
from scipy import sparse
from scipy.sparse.linalg import cg, spsolve

from settings import logger

from .base import LinearBackend, LinearSolve


class DirectBackend(LinearBackend):
    """Sparse LU (SuperLU) solve."""

    name = "direct"

    def solve(self, matrix: sparse.csr_matrix, rhs: np.ndarray) -> LinearSolve:
        if matrix.shape[0] == 0:
            return LinearSolve(np.zeros(0), 0, True)
        solution = np.atleast_1d(spsolve(matrix.tocsc(), rhs))
        ok = bool(np.all(np.isfinite(solution)))
        return LinearSolve(solution, 1, ok)


class ConjugateGradientBackend(LinearBackend):
    """Jacobi-preconditioned conjugate gradients."""

    name = "conjugate-gradient"

    def __init__(self, rtol: float = 1e-12, max_iterations: int = 100000):
        self.rtol = rtol
        self.max_iterations = max_iterations

    def solve(self, matrix: sparse.csr_matrix, rhs: np.ndarray) -> LinearSolve:
        if matrix.shape[0] == 0:
            return LinearSolve(np.zeros(0), 0, True)

        diagonal = matrix.diagonal()
        preconditioner = sparse.diags(1.0 / np.where(diagonal > 0, diagonal, 1.0))
        counter = {"iterations": 0}

        def _count(_):
            counter["iterations"] += 1

        solution, info = cg(matrix, rhs, rtol=self.rtol, atol=0.0, maxiter=self.max_iterations,
                            M=preconditioner, callback=_count)
        if info != 0:
            logger.warning("Conjugate gradients stopped before reaching tolerance", extra={
                "info": int(info),
                "iterations": counter["iterations"],
                "unknowns": int(matrix.shape[0])
            })
        return LinearSolve(solution, counter["iterations"], info == 0)
