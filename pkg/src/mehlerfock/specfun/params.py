"""Parameter types shared by the kernels and transforms."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal


class RegimeError(ValueError):
    """A parameter lies outside the range where a representation holds."""


@dataclass(frozen=True)
class MuParameter:
    """The Legendre order mu with the validity regime it must satisfy.

    ``broad`` requires Re mu < 1/2, ``strict`` requires |Re mu| < 1/2.
    """

    mu: complex
    regime: Literal["broad", "strict"] = "broad"

    def __post_init__(self):
        object.__setattr__(self, "mu", complex(self.mu))
        if self.regime == "broad":
            if not self.mu.real < 0.5:
                raise RegimeError(f"Re mu must be < 1/2 (got mu={self.mu})")
        elif self.regime == "strict":
            if not abs(self.mu.real) < 0.5:
                raise RegimeError(f"|Re mu| must be < 1/2 (got mu={self.mu})")
        else:
            raise ValueError(f"unknown regime {self.regime!r}")

    @property
    def real(self) -> float:
        return self.mu.real

    @property
    def is_real(self) -> bool:
        return self.mu.imag == 0


def as_mu(mu, regime: str = "broad") -> MuParameter:
    """Coerce a number or MuParameter, re-validating against ``regime``."""
    if isinstance(mu, MuParameter):
        if regime == "strict" and mu.regime != "strict":
            return MuParameter(mu.mu, "strict")
        return mu
    return MuParameter(complex(mu), regime)


@dataclass(frozen=True)
class KernelDegree:
    """Degree nu = i*tau - 1/2 of a conical kernel.

    Discrete transforms use ``tau = n`` for positive integers ``n``; the
    kernel evaluators also accept ``tau = 0`` and continuous ``tau >= 0``.
    """

    tau: float
    discrete: bool = True

    def __post_init__(self):
        if self.tau < 0:
            raise ValueError("degree index must be >= 0")
        if self.discrete and float(self.tau) != int(self.tau):
            raise ValueError("discrete degree index must be an integer")

    @classmethod
    def discrete_index(cls, n: int) -> "KernelDegree":
        if n < 1:
            raise ValueError("discrete index n must be >= 1")
        return cls(float(n), True)

    @classmethod
    def continuous(cls, tau: float) -> "KernelDegree":
        return cls(float(tau), False)

    @property
    def nu(self) -> complex:
        return 1j * self.tau - 0.5


def tau_of(degree) -> float:
    if isinstance(degree, KernelDegree):
        return degree.tau
    tau = float(degree)
    if tau < 0:
        raise ValueError("degree index must be >= 0")
    return tau
