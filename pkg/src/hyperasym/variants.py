"""Algebraic forms of the k^-1 and k^-2 brackets, as interchangeable strategies."""

from abc import ABC, abstractmethod
from typing import Dict, Sequence

from .models import DerivedParams, Variant


class ExpansionVariant(ABC):
    """Abstract base class for a truncated large-k expansion of S(x;t).

    Every variant consumes the same F_m values, so two variants evaluated
    on one parameter set differ only through their coefficient algebra.
    """

    variant: Variant

    @abstractmethod
    def first_bracket(
        self, p: DerivedParams, F: Sequence[float], A: Sequence[float]
    ) -> float:
        """
        Coefficient T1 of 1/k.

        Args:
            p: Derived parameters
            F: F_0 .. F_m values (at least up to F_2)
            A: Exact Pochhammer weights A_0 .. A_m

        Returns:
            T1 such that S ~ F_0 + T1/k + ...
        """
        pass

    @abstractmethod
    def second_bracket(
        self, p: DerivedParams, F: Sequence[float], A: Sequence[float]
    ) -> float:
        """Coefficient T2 of 1/k^2 (needs F up to F_4)."""
        pass

    @abstractmethod
    def get_name(self) -> str:
        pass

    def supports(self, p: DerivedParams) -> bool:
        return True


class ExactAmVariant(ExpansionVariant):
    """Brackets written with the exact weights A_m = (ak)_m / (tk + 1)_m."""

    variant = Variant.EXACT_AM

    def first_bracket(self, p, F, A):
        a, c, x = p.a, p.c, p.x
        return 0.5 * (1 - 2 * a) * x * A[1] * F[1] + c * x ** 2 * A[2] * F[2]

    def second_bracket(self, p, F, A):
        a, c, x = p.a, p.c, p.x
        return (
            0.5 * (2 * a - 1) * x * A[1] * F[1]
            + 0.25 * (3 - 20 * c) * x ** 2 * A[2] * F[2]
            + 3.5 * (1 - 2 * a) * c * x ** 3 * A[3] * F[3]
            + 3 * c ** 2 * x ** 4 * A[4] * F[4]
        )

    def get_name(self) -> str:
        return "Exact Pochhammer weights"


class ExpandedAmVariant(ExpansionVariant):
    """Brackets with A_m re-expanded in 1/k and X = ax/t (uses 2a - 1 = t)."""

    variant = Variant.EXPANDED_AM

    def first_bracket(self, p, F, A):
        X = p.X
        return -(0.5 * p.t * X * F[1] - p.c * X ** 2 * F[2])

    def second_bracket(self, p, F, A):
        a, c, t, X = p.a, p.c, p.t, p.X
        return (
            a * X * F[1]
            + 0.25 * (3 - (20 + p.alpha) * c) * X ** 2 * F[2]
            - 3.5 * c * t * X ** 3 * F[3]
            + 3 * c ** 2 * X ** 4 * F[4]
        )

    def get_name(self) -> str:
        return "Expanded Pochhammer weights"

    def supports(self, p: DerivedParams) -> bool:
        return p.t < 1.0


class UnitTVariant(ExpansionVariant):
    """The a = 1, c = 0 reduction; X = x."""

    variant = Variant.T_EQUALS_1

    def first_bracket(self, p, F, A):
        return -0.5 * p.X * F[1]

    def second_bracket(self, p, F, A):
        X = p.X
        return X * F[1] + 0.75 * X ** 2 * F[2]

    def get_name(self) -> str:
        return "Unit t reduction"

    def supports(self, p: DerivedParams) -> bool:
        return p.t == 1.0


DEFAULT_VARIANTS: Dict[Variant, ExpansionVariant] = {
    v.variant: v for v in (ExactAmVariant(), ExpandedAmVariant(), UnitTVariant())
}


def get_variant(variant: Variant) -> ExpansionVariant:
    return DEFAULT_VARIANTS[variant]
