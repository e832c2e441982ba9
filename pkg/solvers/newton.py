import numpy as np

from .base import DescentBackend


class DampedNewtonBackend(DescentBackend):
    """Exact Hessian of the smoothed edge term (Δ² + ε²)^(p/2)."""

    name = "damped-Newton"

    def curvature_weights(self, delta: np.ndarray, eps: float, p: float) -> np.ndarray:
        squared = delta * delta
        smoothed = squared + eps * eps
        return p * np.power(smoothed, p / 2.0 - 2.0) * ((p - 1.0) * squared + eps * eps)
