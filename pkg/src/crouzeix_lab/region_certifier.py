"""Region classification and per-point certificates for the (rho, r) domain.

The admissible domain {rho > 1, 1/sqrt(rho) < r <= 1} splits into four
regions, each carrying its own similarity construction and bound:

    Diagonalizable  2 y^2 <= x^2 + (5/2) x; kappa alone certifies
    SmallR          r <= r1(rho); norm bound rho/2 against c < 2/rho
    Strip           rho >= 10, r <= 0.77; norm bound y/2.02
    LargeRhoR       the rest; norm^2 = psi(x, y) against the closed c bound

with x = r^2 + 1/r^2 and y = rho + 1/rho.  `certify` emits a replayable
Certificate per point; `replay_proofs` re-runs every displayed inequality
chain behind the two hardest regions on documented grids.
"""

from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .conformal_map import c_upper_closed, q_sign_chain_check
from .core_matrix import NormalizedParams, q_from_rho
from .errors import DomainError
from .similarity import (
    SimilarityX,
    build_X_critical,
    build_X_diagonalizing,
    build_X_smallr,
    build_X_strip,
    canonical_G,
    check_mu_bound,
    norm_from_P,
    psi,
    singular_spectrum,
)

__all__ = [
    "Certificate",
    "ChainCheck",
    "ProofReplayReport",
    "RegionId",
    "certify",
    "classify",
    "figure2_data",
    "p_smallr",
    "r1",
    "r3",
    "replay_proofs",
    "sweep_grid",
]

_PRODUCT_TOL = 1e-12
_KAPPA_TOL = 1e-9


class RegionId(enum.Enum):
    SMALL_R = "SmallR"
    STRIP = "Strip"
    DIAGONALIZABLE = "Diagonalizable"
    LARGE_RHO_R = "LargeRhoR"
    OUT_OF_DOMAIN = "OutOfDomain"


def p_smallr(r: float, rho: float) -> float:
    """Defining polynomial of the small-r boundary curve; increasing in r."""
    r4 = r**4
    return 12.0 * r4 * r4 + r4 * (3.0 * rho * rho + 16.0 + 4.0 / (rho * rho)) - 4.0 - rho * rho


_THIRD_ROOT = 3.0 ** (-0.25)


@functools.lru_cache(maxsize=4096)
def r1(rho: float, tol: float = 1e-13) -> float:
    """Unique positive root of p_smallr(., rho), by bisection in (0, 3^(-1/4)).

    The bracket is unconditional: p(0) = -4 - rho^2 < 0 and
    p(3^(-1/4), rho) = 4(1 + 2 rho^2)/(3 rho^2) > 0.
    """
    if not rho > 1.0:
        raise DomainError(f"rho must exceed 1, got {rho}")
    if not tol > 0.0:
        raise DomainError(f"tol must be positive, got {tol}")
    lo, hi = 0.0, _THIRD_ROOT
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if p_smallr(mid, rho) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def r3(rho: float) -> float:
    """Right edge of the diagonalizable region; 1 below sqrt2, then falls
    to 1/sqrt2 at rho = 2."""
    if not (1.0 < rho <= 2.0):
        raise DomainError(f"r3 is defined for 1 < rho <= 2, got {rho}")
    if rho < math.sqrt(2.0):
        return 1.0
    y = rho + 1.0 / rho
    x0 = math.sqrt(25.0 / 16.0 + 2.0 * y * y) - 1.25
    # at rho = sqrt(2) exactly x0 = 2; the sqrt below would turn the
    # rounding noise of x0 into a ~1e-8 dip, so clip the knife edge
    if x0 <= 2.0 + 1e-12:
        return 1.0
    return math.sqrt(x0 / 2.0 - math.sqrt(x0 * x0 / 4.0 - 1.0))


def classify(rho: float, r: float) -> RegionId:
    """Assign (rho, r) to its certifying region.

    Precedence: Diagonalizable, then SmallR, then Strip, then LargeRhoR;
    the diagonalizable certificate is the strongest (no conformal bound
    enters), the rest follow the order of the regional propositions.
    """
    if not (rho > 1.0) or not (0.0 < r <= 1.0) or r * r * rho <= 1.0:
        return RegionId.OUT_OF_DOMAIN
    x = r * r + 1.0 / (r * r)
    y = rho + 1.0 / rho
    if 2.0 * y * y <= x * x + 2.5 * x:
        return RegionId.DIAGONALIZABLE
    if r <= r1(rho):
        return RegionId.SMALL_R
    if rho >= 10.0 and r <= 0.77:
        return RegionId.STRIP
    return RegionId.LARGE_RHO_R


@dataclass(frozen=True)
class Certificate:
    """Replayable record of one certified point.

    For product regions the content is c_upper * sqrt(norm_sq_upper) <= 1;
    the diagonalizable region certifies through kappa alone and stores 0.0
    for the two conformal fields.  crouzeix_constant is 2.0 exactly when
    the verdict holds and 0.0 (nothing certified) otherwise.
    """

    region: RegionId
    rho: float
    r: float
    X: SimilarityX
    kappa: float
    norm_sq_upper: float
    c_upper: float
    product: float
    crouzeix_constant: float
    verdict: bool
    failure_reason: str = ""

    def to_json(self) -> dict:
        return {
            "region": self.region.value,
            "rho": self.rho,
            "r": self.r,
            "X": {"s": self.X.s, "t": self.X.t, "u": self.X.u, "v": self.X.v, "w": self.X.w},
            "kappa": self.kappa,
            "norm_sq_upper": self.norm_sq_upper,
            "c_upper": self.c_upper,
            "product": self.product,
            "crouzeix_constant": self.crouzeix_constant,
            "verdict": self.verdict,
            "failure_reason": self.failure_reason,
        }

    @classmethod
    def from_json(cls, d: dict) -> "Certificate":
        return cls(
            region=RegionId(d["region"]),
            rho=d["rho"],
            r=d["r"],
            X=SimilarityX(**d["X"]),
            kappa=d["kappa"],
            norm_sq_upper=d["norm_sq_upper"],
            c_upper=d["c_upper"],
            product=d["product"],
            crouzeix_constant=d["crouzeix_constant"],
            verdict=d["verdict"],
            failure_reason=d["failure_reason"],
        )


def _kappa_of(X: SimilarityX) -> float:
    # split-off quadratic rather than an SVD: sigma_{+-}^2 solve
    # lambda^2 - xi lambda + eta = 0 whose discriminant has no cancellation,
    # so the quotient is exact where the dense route loses digits near
    # sw = 1/2; the SVD cross-check lives in the tests
    return singular_spectrum(X).kappa


def certify(rho: float, r: float) -> Certificate:
    """Certificate for one admissible point; raises on OutOfDomain input."""
    region = classify(rho, r)
    if region is RegionId.OUT_OF_DOMAIN:
        raise DomainError(f"(rho={rho}, r={r}) is not in the admissible domain")
    q = q_from_rho(rho, r)
    params = NormalizedParams(q=q, r=r)
    y = rho + 1.0 / rho
    x = r * r + 1.0 / (r * r)
    failure = ""

    if region is RegionId.DIAGONALIZABLE:
        X = build_X_diagonalizing(params)
        kappa = _kappa_of(X)
        verdict = kappa <= 2.0 + _KAPPA_TOL
        if not verdict:
            failure = f"kappa = {kappa!r} exceeds 2"
        return Certificate(
            region=region, rho=rho, r=r, X=X, kappa=kappa,
            norm_sq_upper=1.0, c_upper=0.0, product=0.0,
            crouzeix_constant=2.0 if verdict else 0.0,
            verdict=verdict, failure_reason=failure,
        )

    if region is RegionId.SMALL_R:
        X = build_X_smallr(params)
        mu = rho / 2.0
        c_up = 2.0 / rho
    elif region is RegionId.STRIP:
        X = build_X_strip(r)
        mu = y / 2.02
        c_up = 2.0 / rho
    else:
        X = build_X_critical(params)
        mu = math.sqrt(psi(x, y))
        c_up = c_upper_closed(rho)

    kappa = _kappa_of(X)
    g = canonical_G(X, params)
    if region is RegionId.LARGE_RHO_R:
        norm_sq = psi(x, y)
        mu_ok = True
    else:
        norm_sq = norm_from_P(g)
        mu_ok = check_mu_bound(g, mu)
        if not mu_ok:
            failure = f"||G|| bound mu = {mu!r} not certified by the norm polynomial"
    product = c_up * math.sqrt(norm_sq)
    verdict = mu_ok and product <= 1.0 + _PRODUCT_TOL
    if verdict and kappa > 2.0 + _KAPPA_TOL:
        verdict = False
        failure = f"kappa = {kappa!r} exceeds 2"
    if not verdict and not failure:
        failure = f"product = {product!r} exceeds 1"
    return Certificate(
        region=region, rho=rho, r=r, X=X, kappa=kappa,
        norm_sq_upper=norm_sq, c_upper=c_up, product=product,
        crouzeix_constant=2.0 if verdict else 0.0,
        verdict=verdict, failure_reason=failure,
    )


def sweep_grid(
    n_rho: int = 500,
    n_r: int = 500,
    rho_min: float = 1.0,
    rho_max: float = 50.0,
    workers: int = 1,
) -> dict:
    """Certify an n_rho x n_r grid over {1 < rho <= rho_max, 1/sqrt(rho) < r <= 1}.

    rho runs over the open-left grid (rho_min, rho_max]; r over
    (1/sqrt(rho) + 1e-6, 1] per rho.  Returns counts per region, the worst
    product and kappa seen, and every failing point (empty on success).
    """
    if n_rho < 1 or n_r < 1:
        raise DomainError("grid sizes must be positive")
    rhos = [rho_min + (rho_max - rho_min) * (i + 1) / n_rho for i in range(n_rho)]
    if workers > 1:
        import multiprocessing as mp

        with mp.Pool(workers) as pool:
            rows = pool.map(functools.partial(_sweep_row, n_r=n_r), rhos)
    else:
        rows = [_sweep_row(rho, n_r=n_r) for rho in rhos]

    summary = {
        "total": 0,
        "verdict_true": 0,
        "by_region": {rid.value: 0 for rid in RegionId if rid is not RegionId.OUT_OF_DOMAIN},
        "worst_product": 0.0,
        "worst_kappa": 0.0,
        "failures": [],
    }
    for row in rows:
        summary["total"] += row["total"]
        summary["verdict_true"] += row["verdict_true"]
        for k, v in row["by_region"].items():
            summary["by_region"][k] += v
        summary["worst_product"] = max(summary["worst_product"], row["worst_product"])
        summary["worst_kappa"] = max(summary["worst_kappa"], row["worst_kappa"])
        summary["failures"].extend(row["failures"])
    return summary


def _sweep_row(rho: float, n_r: int) -> dict:
    lo = 1.0 / math.sqrt(rho) + 1e-6
    row = {
        "total": 0,
        "verdict_true": 0,
        "by_region": {rid.value: 0 for rid in RegionId if rid is not RegionId.OUT_OF_DOMAIN},
        "worst_product": 0.0,
        "worst_kappa": 0.0,
        "failures": [],
    }
    if lo >= 1.0:
        return row
    for j in range(n_r):
        # the last node is r = 1 exactly; guard the rounding of lo + (1 - lo)
        r = min(1.0, lo + (1.0 - lo) * (j + 1) / n_r)
        cert = certify(rho, r)
        row["total"] += 1
        row["by_region"][cert.region.value] += 1
        row["worst_product"] = max(row["worst_product"], cert.product)
        row["worst_kappa"] = max(row["worst_kappa"], cert.kappa)
        if cert.verdict:
            row["verdict_true"] += 1
        else:
            row["failures"].append((rho, r, cert.region.value, cert.failure_reason))
    return row


def figure2_data(grid: int) -> list[tuple[float, float]]:
    """Norm-to-bound quotient 4 psi / rho^2 along the curve r = r1(rho),
    rho in [5/2, 10]; every value is expected to stay at or below 1."""
    if grid < 2:
        raise DomainError("grid must be at least 2")
    out = []
    for i in range(grid):
        rho = 2.5 + (10.0 - 2.5) * i / (grid - 1)
        rr = r1(rho)
        x = rr * rr + 1.0 / (rr * rr)
        y = rho + 1.0 / rho
        out.append((rho, 4.0 * psi(x, y) / (rho * rho)))
    return out


# ---------------------------------------------------------------------------
# Proof replay: the displayed inequality chains of the two hardest regions.
# Ascending-order integer coefficient lists, exactly as displayed.

_P1 = (2, 0, -4, -60, -20, 240, -20, 0, -6)
_P2 = (-2, 10, -4, 0, -2)
_P3 = (1, 0, -7, 0, 7, 0, 24, 0, 9)  # (1+t^2)(1-8t^2+15t^4+9t^6) expanded
_P4 = (2, -10, 2, 10, 19, 410, -812, -1020, 2435, -810, 84, 0, 18)
_P5 = (-2, 10, -44, 20, 212, -270, 20, 0, 6)
_P9 = (-140, 120, 496, -3116, 4400, 10364, -38295, 12584, 77722, -69288, 9009, 1728, 1728)


def _poly_eval(coeffs, t):
    """Horner evaluation; works for float, numpy array, and Fraction t."""
    acc = t * 0
    for c in reversed(coeffs):
        acc = acc * t + c
    return acc


def _poly_deriv(coeffs):
    return tuple(k * c for k, c in enumerate(coeffs) if k > 0)


def _poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return out


def B_of(r: float, rho: float) -> float:
    """The curve-level obstruction; nonpositive exactly where the small-r
    norm bound extends to psi <= rho^2/4."""
    r2 = r * r
    r4 = r2 * r2
    r8 = r4 * r4
    rho2 = rho * rho
    return (
        rho2 * rho2 * (5.0 - 10.0 * r2 + 2.0 * r4 + r8)
        + 4.0 * (5.0 * r2 - 4.0) * (7.0 * r4 - 1.0) * rho2
        + 12.0 * r4 * (64.0 * r4 - 13.0)
    )


def F_of(y: float) -> float:
    """Gap between the two endpoint norms of the last-patch reduction."""
    return (61.0 * y * y - 75.0 * y * math.sqrt(max(0.0, y * y - 4.0)) - 50.0) / 200.0


def _strip_P_mu2(x: float, y: float) -> float:
    """P(mu^2) for the strip similarity at mu = y/2.02, in (x, y) variables."""
    mu2 = (y / 2.02) ** 2
    b = (x / 2.0 - 1.0) ** 2 + y * y / x
    c = 0.25 * (2.0 - x + y * y / x) ** 2
    return (mu2 - b) * mu2 + c


def _H_interval(rho_minus: float, rho_plus: float) -> float:
    """Interval bound H(rho-, rho+) controlling Q(rho^2/4) at r = 0.77."""
    x = 0.77**2 + 1.0 / 0.77**2
    y_m = rho_minus + 1.0 / rho_minus
    y_p = rho_plus + 1.0 / rho_plus
    alpha_m = rho_minus**2 / y_m**2
    a_plus = x**4 * alpha_m**2 - 40.0 * x * alpha_m + 64.0
    b_minus = (64.0 - 20.0 * x) * x * x
    return 100.0 * x * x - b_minus * y_m * y_m + a_plus * y_p**4


def _Q_at_quarter_rho_sq(rho: float, r: float = 0.77) -> float:
    x = r * r + 1.0 / (r * r)
    y = rho + 1.0 / rho
    lam = rho * rho / 4.0
    return 4.0 * (
        4.0 * x**4 * lam * lam
        - 20.0 * x * (2.0 * y * y - x * x) * lam
        + 25.0 * x * x
        + 16.0 * y**4
        - 16.0 * x * x * y * y
    )


@dataclass(frozen=True)
class ChainCheck:
    """One replayed inequality chain: its verdict, the worst margin seen
    (sign convention: negative margins are the safe side unless stated),
    and where it occurred."""

    passed: bool
    worst_margin: float
    worst_point: tuple

    def __post_init__(self):
        # numpy scalars sneak in from grid reductions; pin plain types so
        # serialization and equality behave
        object.__setattr__(self, "passed", bool(self.passed))
        object.__setattr__(self, "worst_margin", float(self.worst_margin))
        object.__setattr__(self, "worst_point", tuple(float(t) for t in self.worst_point))

    def to_json(self) -> dict:
        return {
            "pass": self.passed,
            "worst_margin": self.worst_margin,
            "worst_point": list(self.worst_point),
        }


@dataclass(frozen=True)
class ProofReplayReport:
    q_chain: ChainCheck
    strip_P: ChainCheck
    p1_p2_p3_chain: ChainCheck
    p4_p5_chain: ChainCheck
    p6_p7: ChainCheck
    p8_p9_chain: ChainCheck
    B_sign: ChainCheck
    F_sign: ChainCheck
    Q_sign: ChainCheck
    H_table: ChainCheck

    @property
    def all_passed(self) -> bool:
        return all(
            getattr(self, name).passed
            for name in (
                "q_chain", "strip_P", "p1_p2_p3_chain", "p4_p5_chain",
                "p6_p7", "p8_p9_chain", "B_sign", "F_sign", "Q_sign", "H_table",
            )
        )

    def to_json(self) -> dict:
        return {
            name: getattr(self, name).to_json()
            for name in (
                "q_chain", "strip_P", "p1_p2_p3_chain", "p4_p5_chain",
                "p6_p7", "p8_p9_chain", "B_sign", "F_sign", "Q_sign", "H_table",
            )
        }


_GRID_1D = 10001
_GRID_2D = 200


def _grid_min(vals: np.ndarray, ts: np.ndarray) -> tuple[float, float]:
    k = int(np.argmin(vals))
    return float(vals[k]), float(ts[k])


def replay_proofs() -> ProofReplayReport:
    """Re-run every displayed inequality chain on documented grids.

    These are confidence checks of the displayed algebra, not formal
    certificates; margins are reported so a reader can judge the slack.
    """
    # (a) q(t) <= 0 for t >= 4
    qres = q_sign_chain_check(t_max=1000.0, grid_points=20001)
    q_chain = ChainCheck(
        passed=bool(qres), worst_margin=qres.grid_max, worst_point=(qres.worst_t,)
    )

    # (b) strip: P(mu^2) positive at the anchor and increasing in x and y
    x0, y0 = 2.2795, 10.0
    anchor = _strip_P_mu2(x0, y0)
    xs = np.linspace(2.2795, 2.35, _GRID_2D)
    ys = np.linspace(10.0, 30.0, _GRID_2D)
    h = 1e-6
    worst = math.inf
    worst_pt = (x0, y0)
    for x in xs:
        for y in ys:
            dx = (_strip_P_mu2(x + h, y) - _strip_P_mu2(x, y)) / h
            dy = (_strip_P_mu2(x, y + h) - _strip_P_mu2(x, y)) / h
            m = min(dx, dy)
            if m < worst:
                worst, worst_pt = m, (float(x), float(y))
    strip_P = ChainCheck(
        passed=anchor > 0.0 and worst > 0.0,
        worst_margin=min(anchor, worst),
        worst_point=worst_pt,
    )

    # (c) p1, p2, p3 increasing on [1/2, 1/sqrt3); exact root identity at 1/2
    half = Fraction(1, 2)
    p3_half = _poly_eval(_P3, half)
    exact_ok = (
        p3_half == Fraction(25, 256)
        and _poly_eval(_P1, half) + _poly_eval(_P2, half) * Fraction(5, 16) == 0
        and _poly_eval(_poly_deriv(_P3), half) == Fraction(25, 16)
    )
    ts = np.linspace(0.5, 1.0 / math.sqrt(3.0) - 1e-12, _GRID_1D)
    worst123 = math.inf
    worst_t = 0.5
    for coeffs in (_P1, _P2, _P3):
        dvals = _poly_eval(_poly_deriv(coeffs), ts)
        m, t_at = _grid_min(dvals, ts)
        if m < worst123:
            worst123, worst_t = m, t_at
    p123 = ChainCheck(
        passed=exact_ok and worst123 > 0.0, worst_margin=worst123, worst_point=(worst_t,)
    )

    # (d) p5 < 0 and increasing on [1/2, 4/7]
    ts = np.linspace(0.5, 4.0 / 7.0, _GRID_1D)
    p5_vals = _poly_eval(_P5, ts)
    p5_max, p5_at = _grid_min(-p5_vals, ts)  # max value = -min(-v)
    p5_max = -p5_max
    dmin, d_at = _grid_min(_poly_eval(_poly_deriv(_P5), ts), ts)
    p5_end = _poly_eval(_P5, Fraction(4, 7))
    p45 = ChainCheck(
        passed=p5_max < 0.0 and dmin > 0.0 and p5_end < 0,
        worst_margin=max(p5_max, -dmin),
        worst_point=(p5_at if p5_max >= -dmin else d_at,),
    )

    # (d') p6 > 0 on [1/2, 0.5327] and p7 > 0 on [0.5327, 4/7] give p4 > 0
    p6 = list(_P4)
    p6[12] -= 2
    p7 = list(_P4)
    p7[12] -= 1
    ts6 = np.linspace(0.5, 0.5327, _GRID_1D)
    ts7 = np.linspace(0.5327, 4.0 / 7.0, _GRID_1D)
    m6, at6 = _grid_min(_poly_eval(tuple(p6), ts6), ts6)
    m7, at7 = _grid_min(_poly_eval(tuple(p7), ts7), ts7)
    m4, at4 = _grid_min(_poly_eval(_P4, np.linspace(0.5, 4.0 / 7.0, _GRID_1D)),
                        np.linspace(0.5, 4.0 / 7.0, _GRID_1D))
    p67 = ChainCheck(
        passed=m6 > 0.0 and m7 > 0.0 and m4 > 0.0,
        worst_margin=min(m6, m7, m4),
        worst_point=(at6 if m6 <= min(m7, m4) else (at7 if m7 <= m4 else at4),),
    )

    # (e)+(f) p8 = p4^2 - p5^2 p3 factors exactly; p9 <= p9(4/7) < 0
    p8_direct = [a - b for a, b in zip(
        _poly_mul(_P4, _P4) + [0] * 40,
        _poly_mul(_poly_mul(_P5, _P5), _P3) + [0] * 40,
    )]
    while p8_direct and p8_direct[-1] == 0:
        p8_direct.pop()
    prefactor = _poly_mul(_poly_mul([0, 0, 1], _poly_mul([-1, 2], [-1, 2])),
                          _poly_mul([1, 0, -3], [1, 0, -3]))
    p8_factored = _poly_mul(prefactor, list(_P9))
    identity_ok = p8_direct == p8_factored
    p9_end = _poly_eval(_P9, Fraction(4, 7))
    ts = np.linspace(0.5, 4.0 / 7.0, _GRID_1D)
    p9_vals = _poly_eval(_P9, ts)
    p9_max = float(p9_vals.max())
    p9_at = float(ts[int(np.argmax(p9_vals))])
    p89 = ChainCheck(
        passed=identity_ok and p9_end < 0 and p9_max <= float(p9_end) + 1e-9,
        worst_margin=p9_max,
        worst_point=(p9_at,),
    )

    # (g) B <= 0 along r = r1(rho), rho in [5/2, 10]
    worstB = -math.inf
    worstB_at = (2.5,)
    for i in range(_GRID_1D):
        rho = 2.5 + 7.5 * i / (_GRID_1D - 1)
        b = B_of(r1(rho), rho)
        if b > worstB:
            worstB, worstB_at = b, (rho,)
    B_sign = ChainCheck(passed=worstB <= 0.0, worst_margin=worstB, worst_point=worstB_at)

    # (h) F' < 0 on (2, 2.96] and F(2.96) > 0
    ys = np.linspace(2.0 + 1e-9, 2.96, _GRID_1D)
    s = np.sqrt(np.maximum(ys * ys - 4.0, 1e-30))
    fprime = (122.0 * ys - 75.0 * s - 75.0 * ys * ys / s) / 200.0
    fp_max = float(fprime.max())
    fp_at = float(ys[int(np.argmax(fprime))])
    f_end = F_of(2.96)
    F_sign = ChainCheck(
        passed=fp_max < 0.0 and f_end > 0.0,
        worst_margin=fp_max if fp_max >= -f_end else -f_end,
        worst_point=(fp_at,),
    )

    # (i) Q(rho^2/4) <= 0 at r = 0.77: direct on [10, 50], a < 0 for rho >= 21
    worstQ = -math.inf
    worstQ_at = (10.0,)
    for i in range(_GRID_1D):
        rho = 10.0 + 40.0 * i / (_GRID_1D - 1)
        qv = _Q_at_quarter_rho_sq(rho)
        if qv > worstQ:
            worstQ, worstQ_at = qv, (rho,)
    x077 = 0.77**2 + 1.0 / 0.77**2

    def a_of(rho: float) -> float:
        alpha = rho * rho / (rho + 1.0 / rho) ** 2
        return x077**4 * alpha * alpha - 40.0 * x077 * alpha + 64.0

    a_branch_ok = a_of(21.0) < 0.0 and a_of(20.0) > 0.0
    a_grid = np.array([a_of(rho) for rho in np.linspace(21.0, 1000.0, 2001)])
    a_branch_ok = a_branch_ok and bool(np.all(a_grid < 0.0)) and bool(
        np.all(np.diff([a_of(rho) for rho in np.linspace(10.0, 1000.0, 2001)]) < 0.0)
    )
    Q_sign = ChainCheck(
        passed=worstQ <= 0.0 and a_branch_ok, worst_margin=worstQ, worst_point=worstQ_at
    )

    # (j) the five interval values H(rho-, rho+), each within 1% of the
    # displayed approximations and all negative
    displayed = {
        (16.0, 21.0): -2524.0,
        (14.0, 16.0): -5167.0,
        (12.0, 14.0): -274.0,
        (11.0, 12.0): -1994.0,
        (10.0, 11.0): -721.0,
    }
    worstH = -math.inf
    worstH_at = (10.0, 11.0)
    h_ok = True
    for (rm, rp), ref in displayed.items():
        val = _H_interval(rm, rp)
        if not (val < 0.0 and abs(val - ref) <= 0.01 * abs(ref)):
            h_ok = False
        if val > worstH:
            worstH, worstH_at = val, (rm, rp)
    H_table = ChainCheck(passed=h_ok, worst_margin=worstH, worst_point=worstH_at)

    return ProofReplayReport(
        q_chain=q_chain,
        strip_P=strip_P,
        p1_p2_p3_chain=p123,
        p4_p5_chain=p45,
        p6_p7=p67,
        p8_p9_chain=p89,
        B_sign=B_sign,
        F_sign=F_sign,
        Q_sign=Q_sign,
        H_table=H_table,
    )
