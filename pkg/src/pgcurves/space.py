"""Vectors and the degenerate scalar product of pseudo-Galilean 3-space.

The geometry splits R^3 into a non-isotropic direction (the x axis) and the
isotropic plane x = 0.  Generic vectors are measured through their x
components alone; vectors confined to the isotropic plane carry a
Minkowski-type product of signature (+, -) in (y, z).  The product is
therefore degenerate on the whole space and the causal vocabulary
(spacelike / timelike / lightlike) only applies inside the isotropic plane.
"""

import math
from dataclasses import dataclass
from enum import Enum


class CausalCharacter(Enum):
    """Causal type of a vector under the degenerate metric."""

    NON_ISOTROPIC = "non-isotropic"
    ISOTROPIC_SPACELIKE = "isotropic-spacelike"
    ISOTROPIC_TIMELIKE = "isotropic-timelike"
    ISOTROPIC_LIGHTLIKE = "isotropic-lightlike"


@dataclass(frozen=True)
class PGVector3:
    """Immutable vector with non-isotropic coordinate x and isotropic plane (y, z).

    Components must be finite; NaN or infinities are rejected at construction
    so the kernel never has to re-check.
    """

    x: float
    y: float
    z: float

    def __post_init__(self):
        for name in ("x", "y", "z"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"non-finite component {name}={value!r}")

    def __add__(self, other: "PGVector3") -> "PGVector3":
        return PGVector3(self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other: "PGVector3") -> "PGVector3":
        return PGVector3(self.x - other.x, self.y - other.y, self.z - other.z)

    def __neg__(self) -> "PGVector3":
        return PGVector3(-self.x, -self.y, -self.z)

    def __mul__(self, scale: float) -> "PGVector3":
        return PGVector3(self.x * scale, self.y * scale, self.z * scale)

    __rmul__ = __mul__

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.x, self.y, self.z)


ORIGIN = PGVector3(0.0, 0.0, 0.0)


def pg_inner(u: PGVector3, v: PGVector3) -> float:
    """Degenerate scalar product of pseudo-Galilean space.

    If either argument has a nonzero x component the product is u.x * v.x
    (so a mixed isotropic / non-isotropic pair yields 0).  For two isotropic
    vectors it is the signature (+, -) product u.y * v.y - u.z * v.z.

    The branch test is an exact comparison with zero: frame machinery builds
    isotropic vectors with a literal 0.0 first component, and measured data
    must be snapped by the caller before entering the kernel.
    """
    if u.x != 0.0 or v.x != 0.0:
        return u.x * v.x
    return u.y * v.y - u.z * v.z


def causal_character(u: PGVector3) -> CausalCharacter:
    """Classify a vector as non-isotropic or by its isotropic causal type."""
    if u.x != 0.0:
        return CausalCharacter.NON_ISOTROPIC
    w = u.y * u.y - u.z * u.z
    if w > 0.0:
        return CausalCharacter.ISOTROPIC_SPACELIKE
    if w < 0.0:
        return CausalCharacter.ISOTROPIC_TIMELIKE
    return CausalCharacter.ISOTROPIC_LIGHTLIKE


def det3(u: PGVector3, v: PGVector3, w: PGVector3) -> float:
    """Determinant of the 3x3 matrix with rows u, v, w."""
    return (
        u.x * (v.y * w.z - v.z * w.y)
        - u.y * (v.x * w.z - v.z * w.x)
        + u.z * (v.x * w.y - v.y * w.x)
    )
