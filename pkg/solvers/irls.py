import numpy as np

from .base import DescentBackend


class IRLSBackend(DescentBackend):
    """Iteratively reweighted least squares.

    Weights p (Δ² + ε²)^(p/2 - 1) give the majorizing quadratic for p <= 2;
    for p > 2 the line search expands the step instead.
    """

    name = "IRLS"

    def curvature_weights(self, delta: np.ndarray, eps: float, p: float) -> np.ndarray:
        return p * np.power(delta * delta + eps * eps, p / 2.0 - 1.0)
