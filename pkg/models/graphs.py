from enum import Enum


class AdjacencyMode(str, Enum):
    """Which pairs of same-level cells are joined by an edge."""
    NONEMPTY_INTERSECTION = "NonemptyIntersection"  # Q ∩ Q' ≠ ∅
    SHARED_AT_LEAST_EDGE = "SharedAtLeastEdge"  # intersection is more than a point
    SHARED_FACE = "SharedFace"  # intersection is a (d-1)-face
