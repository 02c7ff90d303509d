"""Per-qubit reservoir parameters.

A qubit couples to its own Markovian bath described by the spontaneous
emission rate ``gamma``, the mean photon number ``n``, and a two-photon
correlation of magnitude ``m_abs`` and phase ``theta`` (a thermal bath is
``m_abs = 0``).  Physicality requires m_abs <= sqrt(n (n+1)); that bound
is exactly the complete-positivity condition of the dissipator.

Two derived rates appear throughout the channel amplitudes:

    zeta = (gamma / 2) (2 n + 1),    eta = gamma * m_abs,

and the bound forces zeta >= eta.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import OutOfRange


def squeeze_bound(n: float) -> float:
    """Largest physical two-photon correlation magnitude for photon number n."""
    if n < 0.0:
        raise OutOfRange(f"mean photon number must be >= 0, got {n}")
    return math.sqrt(n * (n + 1.0))


@dataclass(frozen=True)
class ReservoirParams:
    gamma: float = 1.0
    n: float = 0.0
    m_abs: float = 0.0
    theta: float = 0.0

    def __post_init__(self):
        if not self.gamma > 0.0:
            raise OutOfRange(f"gamma must be > 0 (no dynamics at 0), got {self.gamma}")
        if self.n < 0.0:
            raise OutOfRange(f"mean photon number must be >= 0, got {self.n}")
        if self.m_abs < 0.0:
            raise OutOfRange(f"two-photon correlation magnitude must be >= 0, got {self.m_abs}")
        bound = squeeze_bound(self.n)
        if self.m_abs > bound + 1e-12:
            raise OutOfRange(
                f"m_abs={self.m_abs} exceeds the physicality bound sqrt(n(n+1))={bound:.12g}"
            )
        if self.zeta < self.eta - 1e-12:
            # algebraically impossible once the bound holds; defensive only
            raise OutOfRange(f"zeta={self.zeta} < eta={self.eta}")

    @property
    def zeta(self) -> float:
        return 0.5 * self.gamma * (2.0 * self.n + 1.0)

    @property
    def eta(self) -> float:
        return self.gamma * self.m_abs

    @property
    def m(self) -> complex:
        """Complex two-photon correlation m_abs * exp(i theta)."""
        return self.m_abs * cmath.exp(1j * self.theta)

    @classmethod
    def from_fraction(
        cls, gamma: float = 1.0, n: float = 0.0, m_frac: float = 0.0, theta: float = 0.0
    ) -> "ReservoirParams":
        """Build with the correlation given as a fraction of its physical bound."""
        if not 0.0 <= m_frac <= 1.0:
            raise OutOfRange(f"m fraction must lie in [0, 1], got {m_frac}")
        return cls(gamma=gamma, n=n, m_abs=m_frac * squeeze_bound(n), theta=theta)
