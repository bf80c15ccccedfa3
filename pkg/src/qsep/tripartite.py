"""Genuinely three-partite criteria and the fully-entangled class bounds.

Covers the 2-3 reshuffling criterion, the spin-observable inequalities for
biseparability and for the intersection of the bipartition-separable sets,
the two-copy swap criterion (evaluated on the explicit 64-dimensional
doubled space), the matrix-element criteria with their substitution family,
the witness operators, and the GHZ-class triangle bound.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement

import numpy as np

from . import linalg, states
from .config import MARGINAL_BAND
from .exceptions import ConsistencyError
from .states import SimplexPoint
from .verdict import CriterionVerdict, signs_agree

SQRT2 = float(np.sqrt(2.0))

PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=np.complex128)
PAULI_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=np.complex128)
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=np.complex128)
ID2 = np.eye(2, dtype=np.complex128)

SETTING_I = (PAULI_X, PAULI_Y, PAULI_Z)
SETTING_II = (PAULI_Y, PAULI_Z, PAULI_X)
SETTING_III = (PAULI_Z, PAULI_X, PAULI_Y)
PUBLISHED_SETTINGS = (SETTING_I, SETTING_II, SETTING_III)

LEVELS = ("2sep", "28cap3", "3sep")
_LEVEL_TAG = {"2sep": "2", "28cap3": "283", "3sep": "3"}
_LEVEL_CAP = {"28cap3": 0.25, "3sep": 1.0 / 16.0}


def validate_triad(triad, tol: float = 1e-12) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Check an orthogonal spin triad: Hermitian, squares to I, anticommuting."""
    if len(triad) != 3:
        raise ValueError("a setting triad needs exactly three observables")
    ops = tuple(np.asarray(t, dtype=np.complex128) for t in triad)
    for op in ops:
        if op.shape != (2, 2):
            raise ValueError("triad observables must be 2x2")
        if linalg.hermiticity_defect(op) > tol:
            raise ValueError("triad observable is not Hermitian")
        if np.max(np.abs(op @ op - ID2)) > tol:
            raise ValueError("triad observable does not square to the identity")
    for a in range(3):
        b = (a + 1) % 3
        if np.max(np.abs(ops[a] @ ops[b] + ops[b] @ ops[a])) > tol:
            raise ValueError("triad observables do not pairwise anticommute")
    return ops


def build_spin_observables(t1, t2, t3) -> dict[str, list[np.ndarray]]:
    """Four sets of three-qubit observables (X_x, Y_x, Z_x, I_x), x = 0..3.

    ``t1`` acts on qubit 1; ``t2`` and ``t3`` enter the two-qubit layer on
    qubits 2 and 3.
    """
    x1, y1, z1 = validate_triad(t1)
    x2, y2, z2 = validate_triad(t2)
    x3, y3, z3 = validate_triad(t3)
    # two sets of two-qubit observables on qubits 2 (x) 3
    x2q = [
        (np.kron(x2, x3) - np.kron(y2, y3)) / 2.0,
        (np.kron(x2, x3) + np.kron(y2, y3)) / 2.0,
    ]
    y2q = [
        (np.kron(y2, x3) + np.kron(x2, y3)) / 2.0,
        (np.kron(y2, x3) - np.kron(x2, y3)) / 2.0,
    ]
    z2q = [
        (np.kron(z2, ID2) + np.kron(ID2, z3)) / 2.0,
        (np.kron(z2, ID2) - np.kron(ID2, z3)) / 2.0,
    ]
    i2q = [
        (np.kron(ID2, ID2) + np.kron(z2, z3)) / 2.0,
        (np.kron(ID2, ID2) - np.kron(z2, z3)) / 2.0,
    ]
    obs = {"X": [None] * 4, "Y": [None] * 4, "Z": [None] * 4, "I": [None] * 4}
    id4 = np.eye(4, dtype=np.complex128)
    for y in (0, 2):
        lvl = y // 2
        obs["X"][y] = (np.kron(x1, x2q[lvl]) - np.kron(y1, y2q[lvl])) / 2.0
        obs["X"][y + 1] = (np.kron(x1, x2q[lvl]) + np.kron(y1, y2q[lvl])) / 2.0
        obs["Y"][y] = (np.kron(y1, x2q[lvl]) + np.kron(x1, y2q[lvl])) / 2.0
        obs["Y"][y + 1] = (np.kron(y1, x2q[lvl]) - np.kron(x1, y2q[lvl])) / 2.0
        obs["Z"][y] = (np.kron(z1, i2q[lvl]) + np.kron(ID2, z2q[lvl])) / 2.0
        obs["Z"][y + 1] = (np.kron(z1, i2q[lvl]) - np.kron(ID2, z2q[lvl])) / 2.0
        obs["I"][y] = (np.kron(ID2, i2q[lvl]) + np.kron(z1, z2q[lvl])) / 2.0
        obs["I"][y + 1] = (np.kron(ID2, i2q[lvl]) - np.kron(z1, z2q[lvl])) / 2.0
    return obs


def su_closed_margin(g, w, setting_index: int, level: str):
    """Published polynomial margin for Settings I-III (0-indexed)."""
    g = np.asarray(g, dtype=float)
    w = np.asarray(w, dtype=float)
    if level == "2sep":
        polys = (
            -7 * g**2 - 6 * g * w - 15 * w**2 - 18 * g + 6 * w + 9,
            -9 * g**2 - 5 * w**2 - 12 * w + 9,
            -(g**2) - 5 * w**2 - 12 * w + 9,
        )
    elif level in ("28cap3", "3sep"):
        # the cap inequality is slack on the whole simplex for these settings
        polys = (
            -45 * g**2 - 2 * g * w - 5 * w**2 - 6 * g + 2 * w + 3,
            -9 * g**2 - 77 * w**2 - 12 * w + 9,
            -9 * g**2 - 77 * w**2 - 12 * w + 9,
        )
    else:
        raise ValueError(f"unknown level {level!r}")
    return polys[setting_index]


def _published_setting_index(triads) -> int | None:
    sites = [tuple(np.asarray(t, dtype=np.complex128) for t in triad) for triad in triads]
    for idx, setting in enumerate(PUBLISHED_SETTINGS):
        if all(np.array_equal(site[k], setting[k]) for site in sites for k in range(3)):
            return idx
    return None


def su_margins_from_expectations(ex, ey, ez, ei, level: str):
    """Criterion margin from the four expectation quadruples (arrays allowed)."""
    ex, ey, ez, ei = (np.asarray(v, dtype=float) for v in (ex, ey, ez, ei))
    xy = ex**2 + ey**2
    iz = ei**2 - ez**2
    if level == "2sep":
        terms = np.sqrt(np.clip(iz, 0.0, None))
        total = np.sum(terms, axis=0)
        margins = (total - terms) - np.sqrt(xy)
        return np.min(margins, axis=0)
    cap = _LEVEL_CAP[level]
    min_iz = np.min(iz, axis=0)
    gap = min_iz - np.max(xy, axis=0)
    return np.minimum(gap, cap - min_iz)


def criterion_su(p: SimplexPoint, triads, level: str) -> CriterionVerdict:
    """Spin-observable criterion for one of the three separability levels.

    ``triads`` is a (t1, t2, t3) tuple of per-site setting triads.  For the
    three published settings the matching closed-form polynomial is evaluated
    alongside and must agree in sign.
    """
    if level not in LEVELS:
        raise ValueError(f"unknown level {level!r}, want one of {LEVELS}")
    obs = build_spin_observables(*triads)
    rho = states.build_rho(p)
    ev = {
        key: np.array([float(np.trace(o @ rho).real) for o in obs[key]])
        for key in ("X", "Y", "Z", "I")
    }
    margin = float(su_margins_from_expectations(ev["X"], ev["Y"], ev["Z"], ev["I"], level))
    idx = _published_setting_index(triads)
    if idx is None:
        cid = f"su{_LEVEL_TAG[level]}_custom"
    else:
        cid = f"su{_LEVEL_TAG[level]}_set{idx + 1}"
        closed = float(su_closed_margin(p.g, p.w, idx, level))
        if not signs_agree(margin, closed):
            raise ConsistencyError(
                f"{cid} at {p}: numeric margin {margin:.3e} vs closed form {closed:.3e}"
            )
    return CriterionVerdict.from_margin(cid, margin, "spin-observable inequality slack")


_SU_COEFF_CACHE: dict[tuple[int, str], np.ndarray] = {}


def su_margins_grid(g, w, setting_index: int, level: str) -> np.ndarray:
    """Criterion margins over weight arrays for one published setting.

    Expectation values are linear in the mixing weights, so each observable
    contributes a cached coefficient triple (identity, GHZ, W); the margins
    are then identical to per-point traces up to rounding.  The published
    polynomial is checked for sign agreement on every cell.
    """
    g = np.asarray(g, dtype=float)
    w = np.asarray(w, dtype=float)
    coeffs = {}
    for key in ("X", "Y", "Z", "I"):
        cache_key = (setting_index, key)
        if cache_key not in _SU_COEFF_CACHE:
            obs = build_spin_observables(*(PUBLISHED_SETTINGS[setting_index],) * 3)
            ghz = states.ghz_vector()
            wv = states.w_vector()
            for name in ("X", "Y", "Z", "I"):
                triple = np.array(
                    [
                        [
                            float(np.trace(o).real) / 8.0,
                            float((np.conj(ghz) @ (o @ ghz)).real),
                            float((np.conj(wv) @ (o @ wv)).real),
                        ]
                        for o in obs[name]
                    ]
                )
                _SU_COEFF_CACHE[(setting_index, name)] = triple
        coeffs[key] = _SU_COEFF_CACHE[cache_key]
    d = np.maximum(1.0 - g - w, 0.0)
    ev = {
        key: (
            coeffs[key][:, 0][:, None] * d[None, :]
            + coeffs[key][:, 1][:, None] * g[None, :]
            + coeffs[key][:, 2][:, None] * w[None, :]
        )
        for key in coeffs
    }
    margins = su_margins_from_expectations(ev["X"], ev["Y"], ev["Z"], ev["I"], level)
    closed = su_closed_margin(g, w, setting_index, level)
    dead = (np.abs(margins) <= MARGINAL_BAND) | (np.abs(closed) <= MARGINAL_BAND)
    agree = dead | ((margins > 0) == (closed > 0))
    if not np.all(agree):
        idx = int(np.argmax(~agree))
        raise ConsistencyError(
            f"su{_LEVEL_TAG[level]}_set{setting_index + 1} at (g={g[idx]}, w={w[idx]}): "
            f"numeric {margins[idx]:.3e} vs closed {float(np.ravel(closed)[idx]):.3e}"
        )
    return margins


# ---------------------------------------------------------------------------
# permutation criterion (2-3 reshuffling)


def criterion_permutation_222(p: SimplexPoint) -> CriterionVerdict:
    """Trace-norm permutation criterion for the 2-3 reshuffle; numeric only."""
    tn = float(linalg.trace_norm(states.reshuffle_222(p)))
    return CriterionVerdict.from_margin("perm222", 1.0 - tn, "1 - trace norm")


# ---------------------------------------------------------------------------
# two-copy swap criterion


def _swap_matrix(positions: tuple[int, ...]) -> np.ndarray:
    """Permutation matrix on 6 qubit slots swapping slot a and a+3 for a in positions."""
    dim = 64
    m = np.zeros((dim, dim))
    for src in range(dim):
        bits = [(src >> (5 - k)) & 1 for k in range(6)]
        for a in positions:
            bits[a], bits[a + 3] = bits[a + 3], bits[a]
        dst = 0
        for b in bits:
            dst = (dst << 1) | b
        m[dst, src] = 1.0
    return m


_SWAP_CACHE: dict[tuple[int, ...], np.ndarray] = {}


def swap_operator(subsystems: tuple[int, ...]) -> np.ndarray:
    """P_S for S a subset of {1, 2, 3}: swaps those subsystems between copies."""
    key = tuple(sorted(int(a) for a in subsystems))
    if any(a not in (1, 2, 3) for a in key):
        raise ValueError(f"subsystem labels must be in {{1,2,3}}, got {subsystems}")
    if key not in _SWAP_CACHE:
        _SWAP_CACHE[key] = _swap_matrix(tuple(a - 1 for a in key))
    return _SWAP_CACHE[key]


BIPARTITE_SPLITS = (((1,), (2, 3)), ((2,), (1, 3)), ((3,), (1, 2)))
TRIPARTITE_SPLIT = ((1,), (2,), (3,))


def phi_ghz() -> np.ndarray:
    """Detection vector |000111> on the doubled space."""
    v = np.zeros(64, dtype=np.complex128)
    v[0b000111] = 1.0
    return v


def phi_w() -> np.ndarray:
    """Hadamard-rotated detection vector H^(x6) |000111>."""
    h = states.hadamard()
    h6 = h
    for _ in range(5):
        h6 = np.kron(h6, h)
    return h6 @ phi_ghz()


def _require_product_vector(phi: np.ndarray) -> None:
    phi = np.asarray(phi)
    if phi.shape != (64,):
        raise ValueError("detection vector must live on the 64-dimensional doubled space")
    norm = float(np.linalg.norm(phi))
    if abs(norm - 1.0) > 1e-12:
        raise ValueError(f"detection vector norm is {norm}, not 1")
    tensor = phi.reshape((2,) * 6)
    for site in range(6):
        moved = np.moveaxis(tensor, site, 0).reshape(2, 32)
        marginal = moved @ np.conj(moved.T)
        purity = float(np.trace(marginal @ marginal).real)
        if purity < 1.0 - 1e-10:
            raise ValueError(
                f"detection vector is not a product of single-qubit states "
                f"(site {site} purity {purity:.12f})"
            )


def criterion_huber(p: SimplexPoint, phi: np.ndarray, k: int, cid: str | None = None) -> CriterionVerdict:
    """Two-copy swap criterion for k-separability, k in {2, 3}.

    Left side sqrt(<Phi| rho(x)rho P_tot |Phi>); right side sums the 2k-th
    root products over all k-partite splits.  Everything is evaluated with
    explicit 64x64 swap operators.
    """
    if k not in (2, 3):
        raise ValueError(f"k must be 2 or 3, got {k}")
    phi = np.asarray(phi, dtype=np.complex128)
    _require_product_vector(phi)
    rho = states.build_rho(p)
    rr = np.kron(rho, rho)
    ptot = swap_operator((1, 2, 3))
    lhs = float(np.sqrt(max(0.0, float(np.real(np.conj(phi) @ (rr @ (ptot @ phi)))))))

    def q(subsys: tuple[int, ...]) -> float:
        shifted = swap_operator(subsys) @ phi
        return max(0.0, float(np.real(np.conj(shifted) @ (rr @ shifted))))

    if k == 2:
        rhs = sum((q(s1) * q(s2)) ** 0.25 for s1, s2 in BIPARTITE_SPLITS)
    else:
        rhs = (q((1,)) * q((2,)) * q((3,))) ** (1.0 / 6.0)
    if cid is None:
        cid = f"huber_k{k}"
    return CriterionVerdict.from_margin(cid, float(rhs - lhs), "swap-criterion slack")


_HUBER_COEFF_CACHE: dict[str, dict[tuple, np.ndarray]] = {}
_HUBER_PHIS = {"ghz": phi_ghz, "w": phi_w}


def _huber_coefficients(phi_tag: str) -> dict[tuple, np.ndarray]:
    """3x3 weight-bilinear coefficient matrices of every swap expectation.

    rho (x) rho is bilinear in the mixing weights, so each quantity
    <Phi_S| rho(x)rho |Phi_S> (and the left side with P_tot) is a quadratic
    form c^T Q c in c = (d, g, w); the Q are contractions of the explicit
    64-dimensional swap operators and are cached per detection vector.
    """
    if phi_tag not in _HUBER_COEFF_CACHE:
        phi = _HUBER_PHIS[phi_tag]()
        ghz = states.ghz_vector()
        wv = states.w_vector()
        basis = (
            np.eye(8, dtype=np.complex128) / 8.0,
            np.outer(ghz, np.conj(ghz)),
            np.outer(wv, np.conj(wv)),
        )
        coeffs: dict[tuple, np.ndarray] = {}
        subsets = [(1,), (2,), (3,), (2, 3), (1, 3), (1, 2)]
        for subset in subsets:
            shifted = swap_operator(subset) @ phi
            q = np.empty((3, 3), dtype=np.complex128)
            for a in range(3):
                for b in range(3):
                    q[a, b] = np.conj(shifted) @ (np.kron(basis[a], basis[b]) @ shifted)
            coeffs[subset] = q
        ptot = swap_operator((1, 2, 3))
        q = np.empty((3, 3), dtype=np.complex128)
        for a in range(3):
            for b in range(3):
                q[a, b] = np.conj(phi) @ (np.kron(basis[a], basis[b]) @ (ptot @ phi))
        coeffs[("tot",)] = q
        _HUBER_COEFF_CACHE[phi_tag] = coeffs
    return _HUBER_COEFF_CACHE[phi_tag]


def huber_margins_grid(g, w, phi_tag: str, k: int) -> np.ndarray:
    """Swap-criterion margins over weight arrays for the named detection vector."""
    if k not in (2, 3):
        raise ValueError(f"k must be 2 or 3, got {k}")
    g = np.asarray(g, dtype=float)
    w = np.asarray(w, dtype=float)
    coeffs = _huber_coefficients(phi_tag)
    c = np.stack([np.maximum(1.0 - g - w, 0.0), g, w], axis=0)

    def quad(key) -> np.ndarray:
        q = coeffs[key]
        return np.clip(np.real(np.einsum("an,ab,bn->n", c, q, c)), 0.0, None)

    lhs = np.sqrt(quad(("tot",)))
    if k == 2:
        rhs = sum(
            (quad(s1) * quad(tuple(sorted(s2)))) ** 0.25 for s1, s2 in BIPARTITE_SPLITS
        )
    else:
        rhs = (quad((1,)) * quad((2,)) * quad((3,))) ** (1.0 / 6.0)
    return rhs - lhs


# ---------------------------------------------------------------------------
# matrix-element criteria and the substitution family


# printed right-hand sides of the sixth-order and fourth-order full-separability
# inequalities, as diagonal index multisets (value (prod rho_mm)^(1/len) vs |rho_07|)
GS3_SIXTH = (
    (0, 0, 0, 7, 7, 7),
    (1, 2, 3, 4, 5, 6),
    (0, 1, 2, 4, 7, 7),
    (0, 0, 3, 5, 6, 7),
    (0, 1, 1, 6, 6, 7),
    (0, 0, 1, 6, 7, 7),
    (1, 1, 2, 4, 6, 7),
    (0, 1, 3, 5, 6, 6),
)
GS3_FOURTH = (
    (0, 0, 7, 7),
    (2, 3, 4, 5),
    (0, 1, 6, 7),
    (1, 2, 4, 7),
    (0, 3, 5, 6),
)

# permutation-invariance equivalence classes of the diagonal indices
_INDEX_CLASS = {0: "a", 7: "a", 1: "b", 2: "b", 4: "b", 3: "c", 5: "c", 6: "c"}


def _class_signature(multiset) -> tuple[int, int, int]:
    labels = [_INDEX_CLASS[m] for m in multiset]
    return (labels.count("a"), labels.count("b"), labels.count("c"))


def _column_sums(multiset) -> tuple[int, int, int]:
    return tuple(sum((m >> k) & 1 for m in multiset) for k in (2, 1, 0))


def gs3_generate_families() -> tuple[list[tuple], list[tuple]]:
    """Enumerate the substitution images of the sixth-order inequality.

    Single-position index swaps between two members conserve the per-qubit
    ones count, which is (3, 3, 3) for the starting multiset {1..6}; a
    breadth-first closure over the swap moves confirms every conserving
    multiset is reachable.  Squaring and regrouping into four third powers
    yields the fourth-order family, whose quadruples conserve (2, 2, 2).
    """
    sixth = [
        ms for ms in combinations_with_replacement(range(8), 6) if _column_sums(ms) == (3, 3, 3)
    ]
    start = (1, 2, 3, 4, 5, 6)
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for ms in frontier:
            lst = list(ms)
            for a in range(6):
                for b in range(a + 1, 6):
                    for pos in range(3):
                        bit = 1 << pos
                        xa = (lst[a] & ~bit) | (lst[b] & bit)
                        xb = (lst[b] & ~bit) | (lst[a] & bit)
                        cand = tuple(sorted(lst[:a] + [xa] + lst[a + 1 : b] + [xb] + lst[b + 1 :]))
                        if cand not in seen:
                            seen.add(cand)
                            nxt.append(cand)
        frontier = nxt
    if seen != set(sixth):
        raise ConsistencyError("swap closure disagrees with the ones-count enumeration")
    fourth = [
        ms for ms in combinations_with_replacement(range(8), 4) if _column_sums(ms) == (2, 2, 2)
    ]
    return sixth, fourth


def gs3_deduplicated_signatures() -> tuple[set, set]:
    """Distinct (class-a, class-b, class-c) count signatures of the two families."""
    sixth, fourth = gs3_generate_families()
    return (
        {_class_signature(ms) for ms in sixth},
        {_class_signature(ms) for ms in fourth},
    )


def _gs2_raw_margins(rho: np.ndarray) -> tuple[float, float]:
    d = rho.real.diagonal()
    m_ghz = (
        np.sqrt(d[6] * d[1]) + np.sqrt(d[5] * d[2]) + np.sqrt(d[3] * d[4]) - abs(rho[0, 7])
    )
    lhs = abs(rho[1, 2]) + abs(rho[1, 4]) + abs(rho[2, 4])
    m_w = (
        np.sqrt(d[0] * d[3]) + np.sqrt(d[0] * d[5]) + np.sqrt(d[0] * d[6])
        + (d[1] + d[2] + d[4]) / 2.0 - lhs
    )
    return float(m_ghz), float(m_w)


def gs2_closed_margins(g, w):
    """(GHZ-flavoured, W-flavoured) biseparability margins in matrix-element units."""
    g = np.asarray(g, dtype=float)
    w = np.asarray(w, dtype=float)
    dt, gt, wt = states.renormalized_weights(g, w)
    m_ghz = 3.0 * np.sqrt(dt * (dt + wt)) - gt
    m_w = 3.0 * (np.sqrt((dt + gt) * dt) + (dt + wt) / 2.0 - wt)
    return m_ghz, m_w


def criterion_gs_biseparable(p: SimplexPoint) -> CriterionVerdict:
    """Matrix-element biseparability criterion (both published inequalities)."""
    rho = states.build_rho(p)
    m_ghz, m_w = _gs2_raw_margins(rho)
    c_ghz, c_w = gs2_closed_margins(p.g, p.w)
    if abs(m_ghz - float(c_ghz)) > 1e-12 or abs(m_w - float(c_w)) > 1e-12:
        raise ConsistencyError(f"gs2 closed forms disagree with matrix elements at {p}")
    parts = {"gs2_ghz": m_ghz, "gs2_w": m_w}
    return CriterionVerdict.from_margin(
        "gs2", min(m_ghz, m_w), "matrix-element inequality slack", parts
    )


def gs3_closed_margins(g, w) -> dict[str, np.ndarray]:
    """All 14 full-separability margins in matrix-element units, plus the aggregate."""
    g = np.asarray(g, dtype=float)
    w = np.asarray(w, dtype=float)
    dt, gt, wt = states.renormalized_weights(g, w)
    a, b, c = dt + gt, dt + wt, dt
    out: dict[str, np.ndarray] = {}
    for ms in GS3_SIXTH:
        na, nb, nc = _class_signature(ms)
        out[f"gs3_six_{''.join(str(m) for m in ms)}"] = (
            a**na * b**nb * c**nc
        ) ** (1.0 / 6.0) - gt
    for ms in GS3_FOURTH:
        na, nb, nc = _class_signature(ms)
        out[f"gs3_four_{''.join(str(m) for m in ms)}"] = (
            a**na * b**nb * c**nc
        ) ** (1.0 / 4.0) - gt
    out["gs3_offdiag"] = 3.0 * (np.sqrt(a * c) - wt)
    stacked = np.stack(list(out.values()), axis=0)
    out["gs3"] = np.min(stacked, axis=0)
    return out


def criterion_gs_fullsep(p: SimplexPoint) -> CriterionVerdict:
    """Matrix-element full-separability family; holds only if every member holds."""
    rho = states.build_rho(p)
    d = rho.real.diagonal()
    corner = abs(rho[0, 7])
    parts: dict[str, float] = {}
    for ms in GS3_SIXTH:
        rhs = float(np.prod(d[list(ms)])) ** (1.0 / 6.0)
        parts[f"gs3_six_{''.join(str(m) for m in ms)}"] = rhs - corner
    for ms in GS3_FOURTH:
        rhs = float(np.prod(d[list(ms)])) ** (1.0 / 4.0)
        parts[f"gs3_four_{''.join(str(m) for m in ms)}"] = rhs - corner
    lhs = abs(rho[1, 2]) + abs(rho[1, 4]) + abs(rho[2, 4])
    parts["gs3_offdiag"] = float(
        np.sqrt(d[0] * d[3]) + np.sqrt(d[0] * d[5]) + np.sqrt(d[0] * d[6]) - lhs
    )
    closed = gs3_closed_margins(p.g, p.w)
    for key, value in parts.items():
        if abs(value - float(closed[key])) > 1e-12:
            raise ConsistencyError(f"gs3 member {key} at {p}: closed form deviates")
    margin = min(parts.values())
    return CriterionVerdict.from_margin("gs3", margin, "matrix-element inequality slack", parts)


# ---------------------------------------------------------------------------
# witnesses and the GHZ-class bounds


def witness_matrices() -> dict[str, np.ndarray]:
    ghz = states.ghz_vector()
    wv = states.w_vector()
    p_ghz = np.outer(ghz, np.conj(ghz))
    p_w = np.outer(wv, np.conj(wv))
    eye = np.eye(8, dtype=np.complex128)
    return {
        "w_ghz": 0.75 * eye - p_ghz,
        "w_w1": (2.0 / 3.0) * eye - p_w,
        "w_w2": 0.5 * eye - p_ghz,
    }


def witness_closed_forms(g, w) -> dict[str, np.ndarray]:
    g = np.asarray(g, dtype=float)
    w = np.asarray(w, dtype=float)
    return {
        "w_ghz": (5.0 - 7.0 * g + w) / 8.0,
        "w_w1": (13.0 + 3.0 * g - 21.0 * w) / 24.0,
        "w_w2": (3.0 - 7.0 * g + w) / 8.0,
    }


def witness_expectations(p: SimplexPoint) -> dict[str, float]:
    """Tr(W rho) for the three witnesses, checked against the closed forms."""
    rho = states.build_rho(p)
    closed = witness_closed_forms(p.g, p.w)
    out = {}
    for name, matrix in witness_matrices().items():
        value = float(np.trace(matrix @ rho).real)
        if abs(value - float(closed[name])) > 1e-12:
            raise ConsistencyError(
                f"witness {name} at {p}: trace {value:.15e} vs closed {float(closed[name]):.15e}"
            )
        out[name] = value
    return out


G0 = 4.0 * 2.0 ** (1.0 / 3.0) / (3.0 + 4.0 * 2.0 ** (1.0 / 3.0))
GHZ_TANGLE_SLOPE = 3.0 / (4.0 * 2.0 ** (1.0 / 3.0))
GHZ_TRIANGLE = ((3.0 / 7.0, 0.0), (1.0, 0.0), (G0, 1.0 - G0))

DEFINITELY_GHZ = "definitely-ghz-type"
NOT_GHZ = "definitely-not-ghz-type"
UNDETERMINED = "undetermined"


def _inside_triangle(g: float, w: float, eps: float = 1e-12) -> bool:
    (ax, ay), (bx, by), (cx, cy) = GHZ_TRIANGLE
    def cross(ox, oy, px, py, qx, qy):
        return (px - ox) * (qy - oy) - (py - oy) * (qx - ox)
    return (
        cross(ax, ay, bx, by, g, w) >= -eps
        and cross(bx, by, cx, cy, g, w) >= -eps
        and cross(cx, cy, ax, ay, g, w) >= -eps
    )


def ghz_class_bounds(p: SimplexPoint) -> str:
    """Three-way SLOCC constraint from the witness and the zero-tangle bound."""
    witness = witness_expectations(p)["w_ghz"]
    zero_tangle = p.w >= GHZ_TANGLE_SLOPE * p.g - 1e-15
    outside = not _inside_triangle(p.g, p.w)
    if witness < 0.0:
        if zero_tangle or outside:
            raise ConsistencyError(
                f"GHZ witness negative at {p} but the zero-tangle bound excludes GHZ type"
            )
        return DEFINITELY_GHZ
    if zero_tangle or outside:
        return NOT_GHZ
    return UNDETERMINED


# ---------------------------------------------------------------------------
# random setting search


@dataclass(frozen=True)
class RandomSearchResult:
    verdict: CriterionVerdict
    samples: int
    seed: int
    reference_margin: float | None
    beats_reference: bool


def _random_triad(rng) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    frame = rng.normal(size=(3, 3))
    q, r = np.linalg.qr(frame)
    q = q * np.sign(np.diag(r))[None, :]
    axes = q.T  # rows are orthonormal
    paulis = (PAULI_X, PAULI_Y, PAULI_Z)
    return tuple(sum(axes[k, i] * paulis[i] for i in range(3)) for k in range(3))


def random_setting_search(
    p: SimplexPoint, samples: int, seed: int, level: str = "2sep"
) -> RandomSearchResult:
    """Most-violating spin-observable verdict over randomly sampled triads.

    Deterministic under a fixed seed.  On the two published axes the best
    sampled margin is compared with the reference setting (Setting I on w=0,
    Setting II on g=0) and flagged if it is strictly more violating; the
    published search never found such settings on the axes.
    """
    if samples < 1:
        raise ValueError("need at least one sample")
    rng = np.random.default_rng(seed)
    best: CriterionVerdict | None = None
    for _ in range(samples):
        triads = tuple(_random_triad(rng) for _ in range(3))
        verdict = criterion_su(p, triads, level)
        if best is None or verdict.margin < best.margin:
            best = verdict
    reference = None
    if p.w == 0.0:
        reference = criterion_su(p, (SETTING_I,) * 3, level).margin
    elif p.g == 0.0:
        reference = criterion_su(p, (SETTING_II,) * 3, level).margin
    beats = reference is not None and best.margin < reference - 1e-12
    return RandomSearchResult(best, samples, seed, reference, beats)
