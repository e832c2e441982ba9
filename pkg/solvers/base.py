from abc import ABC, abstractmethod
from typing import NamedTuple

import numpy as np
from scipy import sparse

from models.solver import GeneralBackend, P2Backend


class LinearSolve(NamedTuple):
    solution: np.ndarray
    iterations: int
    converged: bool


class LinearBackend(ABC):
    """Solver for symmetric positive definite systems L x = b."""

    name: str = ""

    @abstractmethod
    def solve(self, matrix: sparse.csr_matrix, rhs: np.ndarray) -> LinearSolve:
        """
        Solve the system.

        Args:
            matrix: Symmetric positive definite sparse matrix (a reduced weighted Laplacian)
            rhs: Right-hand side

        Returns:
            LinearSolve with the solution, iteration count and convergence flag
        """
        pass


class DescentBackend(ABC):
    """Curvature model for the smoothed p-energy descent loop.

    Each outer step solves L_w d = -g where L_w is the Laplacian of the
    free vertices weighted by `curvature_weights`.
    """

    name: str = ""

    @abstractmethod
    def curvature_weights(self, delta: np.ndarray, eps: float, p: float) -> np.ndarray:
        """Per-edge weights given edge differences and the smoothing parameter."""
        pass


class LinearBackendFactory:
    """Factory to create linear solvers for p = 2 and for inner descent steps."""

    @staticmethod
    def get_backend(backend: P2Backend) -> LinearBackend:
        if backend == P2Backend.DIRECT:
            from .linear import DirectBackend
            return DirectBackend()
        elif backend == P2Backend.CONJUGATE_GRADIENT:
            from .linear import ConjugateGradientBackend
            return ConjugateGradientBackend()
        else:
            raise ValueError(f"Unsupported p = 2 backend: {backend}")


class DescentBackendFactory:
    """Factory to create descent schemes for p != 2."""

    @staticmethod
    def get_backend(backend: GeneralBackend) -> DescentBackend:
        if backend == GeneralBackend.IRLS:
            from .irls import IRLSBackend
            return IRLSBackend()
        elif backend == GeneralBackend.DAMPED_NEWTON:
            from .newton import DampedNewtonBackend
            return DampedNewtonBackend()
        else:
            raise ValueError(f"Unsupported general backend: {backend}")
