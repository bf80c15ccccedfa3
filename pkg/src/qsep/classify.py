"""Fuse criterion verdicts into constraints on the separability class lattice.

Permutation invariance restricts the family to classes 3, 2.8, 2.1 and 1.
Criteria only ever exclude classes: a violated full-separability criterion
removes class 3, a violated criterion for the intersection of the
bipartition-separable sets removes {3, 2.8}, and a violated biseparability
criterion removes {3, 2.8, 2.1}.  Nothing can certify membership, so class 1
is never removed; the one exception is the GHZ-white-noise line w = 0 where
exact published results pin the class down.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import bipartite, tripartite
from .exceptions import ConsistencyError
from .states import SimplexPoint
from .verdict import HOLDS, MARGINAL, VIOLATED, CriterionVerdict

CLASSES = ("3", "2.8", "2.1", "1")

GHZ_TYPE = "GHZ-type"
W_TYPE_OR_LESS = "W-type-or-less"
SLOCC_UNDETERMINED = "undetermined"

_SLOCC_FROM_BOUND = {
    tripartite.DEFINITELY_GHZ: GHZ_TYPE,
    tripartite.NOT_GHZ: W_TYPE_OR_LESS,
    tripartite.UNDETERMINED: SLOCC_UNDETERMINED,
}

# which classes a violated criterion excludes
_FULLSEP_EXCLUDES = ("3",)
_INTERSECT_EXCLUDES = ("3", "2.8")
_BISEP_EXCLUDES = ("3", "2.8", "2.1")

_FULLSEP_IDS = frozenset(
    {"gs3", "perm222", "huber_ghz_k3", "huber_w_k3", "su3_set1", "su3_set2", "su3_set3",
     "su3_custom"}
)
_INTERSECT_IDS = frozenset(
    {"maj_rho1", "maj_rho23", "ppt", "reduction", "resh24", "su283_set1", "su283_set2",
     "su283_set3", "su283_custom"}
)
_BISEP_IDS = frozenset(
    {"gs2", "gs2_ghz", "gs2_w", "huber_ghz_k2", "huber_w_k2", "su2_set1", "su2_set2",
     "su2_set3", "su2_custom", "w_w1", "w_w2"}
)


def excluded_classes(criterion_id: str) -> tuple[str, ...]:
    """Classes a violation of this criterion rules out (possibly none)."""
    if criterion_id in _FULLSEP_IDS:
        return _FULLSEP_EXCLUDES
    if criterion_id in _INTERSECT_IDS or criterion_id.startswith("entropy_"):
        return _INTERSECT_EXCLUDES
    if criterion_id in _BISEP_IDS:
        return _BISEP_EXCLUDES
    return ()


def exact_w0_classification(g: float) -> str:
    """Published exact class on the GHZ-white-noise line (closed boundaries)."""
    if not 0.0 <= g <= 1.0:
        raise ValueError(f"g must lie in [0, 1], got {g}")
    if g <= 1.0 / 5.0:
        return "3"
    if g <= 3.0 / 7.0:
        return "2.1"
    return "1"


@dataclass(frozen=True)
class ClassReport:
    g: float
    w: float
    possible_classes: tuple[str, ...]
    slocc: str
    exclusions: tuple[tuple[str, str], ...]
    exact: bool
    pptes_certified: bool
    marginal: tuple[str, ...]

    def to_dict(self) -> dict:
        return {
            "g": self.g,
            "w": self.w,
            "possible_classes": list(self.possible_classes),
            "slocc": self.slocc,
            "exclusions": [list(pair) for pair in self.exclusions],
            "exact": self.exact,
            "pptes_certified": self.pptes_certified,
            "marginal": list(self.marginal),
        }


def su_verdicts_for_setting(p: SimplexPoint, setting_index: int) -> list[CriterionVerdict]:
    """All three level verdicts for one published setting (0-indexed)."""
    setting = tripartite.PUBLISHED_SETTINGS[setting_index]
    return [tripartite.criterion_su(p, (setting,) * 3, level) for level in tripartite.LEVELS]


def evaluate_all_criteria(p: SimplexPoint) -> list[CriterionVerdict]:
    """Every criterion the toolkit knows, at one point."""
    verdicts: list[CriterionVerdict] = []
    verdicts.extend(bipartite.criterion_majorization(p))
    for alpha in bipartite.ALPHA_GRID:
        verdicts.extend(bipartite.criterion_entropy(p, alpha))
    verdicts.append(bipartite.criterion_ppt(p))
    verdicts.append(bipartite.criterion_reduction(p))
    verdicts.append(bipartite.criterion_reshuffling_24(p))
    verdicts.append(tripartite.criterion_permutation_222(p))
    for idx in range(3):
        verdicts.extend(su_verdicts_for_setting(p, idx))
    verdicts.append(tripartite.criterion_huber(p, tripartite.phi_ghz(), 2, cid="huber_ghz_k2"))
    verdicts.append(tripartite.criterion_huber(p, tripartite.phi_ghz(), 3, cid="huber_ghz_k3"))
    verdicts.append(tripartite.criterion_huber(p, tripartite.phi_w(), 2, cid="huber_w_k2"))
    verdicts.append(tripartite.criterion_huber(p, tripartite.phi_w(), 3, cid="huber_w_k3"))
    gs2 = tripartite.criterion_gs_biseparable(p)
    for cid, margin in gs2.parts.items():
        verdicts.append(CriterionVerdict.from_margin(cid, margin, gs2.kind))
    verdicts.append(tripartite.criterion_gs_fullsep(p))
    for cid, value in tripartite.witness_expectations(p).items():
        verdicts.append(CriterionVerdict.from_margin(cid, value, "witness expectation"))
    return verdicts


def classify_from_verdicts(
    p: SimplexPoint, verdicts: list[CriterionVerdict]
) -> ClassReport:
    """Build the class report for a point from an arbitrary verdict collection."""
    excluded: set[str] = set()
    exclusions: list[tuple[str, str]] = []
    marginal: list[str] = []
    ppt_state = None
    for verdict in verdicts:
        if verdict.id == "ppt":
            ppt_state = verdict.holds
        if verdict.holds == MARGINAL:
            marginal.append(verdict.id)
            continue
        if verdict.holds != VIOLATED:
            continue
        for cls in excluded_classes(verdict.id):
            excluded.add(cls)
            exclusions.append((cls, verdict.id))
    derived = tuple(cls for cls in CLASSES if cls not in excluded)
    if not derived:
        raise ConsistencyError(f"all classes excluded at {p}; class 1 can never be excluded")
    # nested removal rules cannot skip a level; verify anyway
    for stronger, weaker in (("3", "2.8"), ("2.8", "2.1")):
        if weaker in excluded and stronger not in excluded:
            raise ConsistencyError(
                f"contradictory exclusions at {p}: {weaker} removed while {stronger} stays"
            )
    exact = p.w == 0.0
    if exact:
        truth = exact_w0_classification(p.g)
        if truth not in derived:
            raise ConsistencyError(
                f"criteria exclude the exact class {truth} on the w=0 line at {p}"
            )
        possible = (truth,)
    else:
        possible = derived
    pptes = ppt_state == HOLDS and "3" in excluded
    slocc = _SLOCC_FROM_BOUND[tripartite.ghz_class_bounds(p)]
    return ClassReport(
        g=p.g,
        w=p.w,
        possible_classes=possible,
        slocc=slocc,
        exclusions=tuple(exclusions),
        exact=exact,
        pptes_certified=pptes,
        marginal=tuple(marginal),
    )


def classify_point(p: SimplexPoint) -> ClassReport:
    """Evaluate every criterion at the point and fuse the verdicts."""
    return classify_from_verdicts(p, evaluate_all_criteria(p))
