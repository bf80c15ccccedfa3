"""Uniform three-state wrapper for criterion outcomes."""

from __future__ import annotations

from dataclasses import dataclass, field

from .config import MARGINAL_BAND

HOLDS = "holds"
VIOLATED = "violated"
MARGINAL = "marginal"


def verdict_state(margin: float, band: float = MARGINAL_BAND) -> str:
    if abs(margin) <= band:
        return MARGINAL
    return HOLDS if margin > 0 else VIOLATED


@dataclass(frozen=True)
class CriterionVerdict:
    """One criterion outcome; positive margin means satisfied slack."""

    id: str
    holds: str
    margin: float
    kind: str
    parts: dict = field(default_factory=dict, compare=False)

    @classmethod
    def from_margin(cls, cid: str, margin: float, kind: str, parts: dict | None = None):
        return cls(cid, verdict_state(margin), float(margin), kind, parts or {})

    @property
    def is_violated(self) -> bool:
        return self.holds == VIOLATED

    @property
    def is_marginal(self) -> bool:
        return self.holds == MARGINAL


def signs_agree(a: float, b: float, band: float = MARGINAL_BAND) -> bool:
    """Sign agreement with a dead band around zero on either side."""
    if abs(a) <= band or abs(b) <= band:
        return True
    return (a > 0) == (b > 0)
