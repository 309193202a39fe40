"""Result record shared by the estimators."""
from __future__ import annotations

import math
from dataclasses import dataclass, field


@dataclass(frozen=True)
class CertifiedLog:
    """An estimate of a logarithm together with a certified error radius.

    ``error_radius`` is ``math.inf`` when no certificate is available.
    ``per_node`` marks values already divided by the node count.
    """

    value: object
    error_radius: float = math.inf
    per_node: bool = False
    valid: bool = True
    details: dict = field(default_factory=dict, compare=False)

    @property
    def bounded(self) -> bool:
        return math.isfinite(self.error_radius)

    def contains(self, exact: float, slack: float = 0.0) -> bool:
        """True if ``exact`` lies within the radius (plus ``slack``) of the value."""
        return abs(float(exact) - float(self.value)) <= self.error_radius + slack
