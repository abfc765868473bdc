"""Unit-circle deformation parameter and the amplitude factor it induces.

The deformation is a single real angle ``s``; the associated complex
parameter ``q = exp(i s)`` stays on the unit circle, and ``s = 0`` is the
undeformed limit.  Every closed-form consequence of the deformation enters
through ``sinc(s/2) = sin(s/2)/(s/2)``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field


def sinc(x: float) -> float:
    """sin(x)/x with the removable singularity filled in at x = 0."""
    if x == 0.0:
        return 1.0
    return math.sin(x) / x


@dataclass(frozen=True)
class Deformation:
    """Real deformation angle ``s`` with derived ``q = exp(is)``.

    ``abs(q) == 1`` holds by construction.  ``s = 0`` is permitted and is
    treated as the undeformed (standard Heisenberg) limit by the rate
    operators.
    """

    s: float
    q: complex = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "q", cmath.exp(1j * self.s))

    @property
    def is_classical_limit(self) -> bool:
        return self.s == 0.0
