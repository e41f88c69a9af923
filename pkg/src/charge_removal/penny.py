"""Two-plane, two-species Buckingham-Coulomb instances built from penny graphs."""
from __future__ import annotations

import itertools
import math
from dataclasses import asdict, dataclass
from typing import Dict, List, Sequence, Tuple

import numpy as np

from .clique import ReductionOutput
from .core import INF, BuckinghamCoulomb, CrystalGraph, ForceField, Ion
from .errors import NotOrthogonalError, OverlapError, ScalingError
from .graphs import SimpleGraph
from .verification import RemovalInstance, Variant

MIN_N = 6
POS, NEG = "pos", "neg"
SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class PennyRealization:
    centers: Tuple[Tuple[float, float], ...]
    radius: float

    def __post_init__(self):
        object.__setattr__(
            self, "centers", tuple((float(x), float(y)) for x, y in self.centers)
        )
        if not self.radius > 0:
            raise ValueError("radius must be positive")

    @property
    def n(self) -> int:
        return len(self.centers)

    @property
    def eps_geom(self) -> float:
        return 1e-9 * self.radius


def validate_penny_realization(p: PennyRealization) -> SimpleGraph:
    """Tangency graph of the discs; overlapping discs are rejected."""
    touch = 2.0 * p.radius
    edges = set()
    for a, b in itertools.combinations(range(p.n), 2):
        d = math.dist(p.centers[a], p.centers[b])
        if d < touch - p.eps_geom:
            raise OverlapError(a, b, d, touch)
        if abs(d - touch) <= p.eps_geom:
            edges.add((a, b))
    return SimpleGraph(p.n, frozenset(edges))


@dataclass(frozen=True)
class PennyParams:
    a11: float
    b11: float
    c11: float
    a12: float
    b12: float
    c12: float
    log_a11: float
    n: int

    def field11(self) -> ForceField:
        return ForceField(self.a11, self.b11, self.c11, log_a=self.log_a11)

    def field12(self) -> ForceField:
        return ForceField(self.a12, self.b12, self.c12)

    def buckingham11(self, r):
        r = np.asarray(r, dtype=float)
        return np.exp(self.log_a11 - self.b11 * r) - self.c11 / r**6

    def buckingham12(self, r):
        r = np.asarray(r, dtype=float)
        return self.a12 * np.exp(-self.b12 * r) - self.c12 / r**6

    def within_pair(self) -> float:
        """Opposite-species energy at unit distance (one vertical pair)."""
        return self.a12 * math.exp(-self.b12) - self.c12 - 1.0

    def half_pair_interaction(self, r):
        """Same-plane plus cross-plane energy between one ion and a pair at centre distance r.

        Two full pairs at distance r interact with twice this value.
        """
        r = np.asarray(r, dtype=float)
        rh = np.sqrt(r * r + 1.0)
        return self.buckingham11(r) + 1.0 / r + self.buckingham12(rh) - 1.0 / rh


def synthesize_penny_params(n: int) -> PennyParams:
    """Parameters making tangent same-species ions cost 1 and the zero at sqrt(2) n.

    B11 = n; A11 and C11 then solve A11 e^{-n^2} - C11/n^6 = 1 and
    A11 e^{-sqrt2 n^2} = C11 / (8 n^6). Cross-species parameters give -1
    for a vertical pair at unit distance.
    """
    if n < MIN_N:
        raise ValueError(f"penny parameters need n >= {MIN_N}, got {n}")
    x = (SQRT2 - 1.0) * n * n
    log_e_minus_8 = x + math.log1p(-8.0 * math.exp(-x))
    c11 = math.exp(math.log(8.0) + 6.0 * math.log(n) - log_e_minus_8)
    log_a11 = n * n + math.log1p(c11 / n**6)
    a11 = math.exp(log_a11) if log_a11 < 709.0 else INF
    a12 = c12 = 1.0 / (2.0 * n * n)
    return PennyParams(a11, float(n), c11, a12, 0.0, c12, log_a11, n)


def penny_goal_energy(k: int, params: PennyParams) -> float:
    if k < 1:
        raise ValueError("k must be at least 1")
    return (k - 1) * params.within_pair()


@dataclass(frozen=True)
class InequalityResult:
    passed: bool
    worst_margin: float
    at_r: float


@dataclass(frozen=True)
class PennyCertificate:
    n: int
    r_max: float
    points: int
    ineq1: InequalityResult
    ineq2: InequalityResult
    ineq3: InequalityResult
    repulsion_bound: InequalityResult
    dispersion_bound: InequalityResult

    @property
    def passed(self) -> bool:
        return self.ineq1.passed and self.ineq2.passed and self.ineq3.passed

    def to_dict(self) -> Dict:
        d = asdict(self)
        d["passed"] = self.passed
        return d


def _worst(r: np.ndarray, margin: np.ndarray, strict: bool) -> InequalityResult:
    i = int(np.argmin(margin))
    m = float(margin[i])
    return InequalityResult(bool(m > 0 if strict else m >= 0), m, float(r[i]))


def certify_inequalities(
    params: PennyParams, n: int, r_max: float, points: int = 10_000
) -> PennyCertificate:
    """Numerically check the three separation inequalities.

    (1) at the tangency distance r = n, (2) and (3) on a dense grid over
    [sqrt(2) n, r_max] including both endpoints. This is a sampled
    certificate, not an interval-arithmetic proof. The two per-term bounds
    used to argue (2) and (3) analytically are reported alongside.
    """
    points = max(int(points), 2)
    r_min = SQRT2 * n
    if not r_max >= r_min:
        raise ValueError(f"r_max={r_max} is below sqrt(2)*n={r_min}")
    target = abs(params.within_pair())

    r1 = np.array([float(n)])
    m1 = params.half_pair_interaction(r1) - target
    grid = np.linspace(r_min, r_max, points)
    f = params.half_pair_interaction(grid)
    m2 = target - n * n * np.abs(f)
    m3 = f

    rh = np.sqrt(grid * grid + 1.0)
    rep = np.exp(params.log_a11 - params.b11 * grid)
    disp = params.c11 / grid**6
    m_rep = (1.0 / (2.0 * n * n) - 1.0 / grid + 1.0 / rh) - rep
    m_disp = (1.0 / grid - 1.0 / rh) - disp

    return PennyCertificate(
        n=n,
        r_max=float(r_max),
        points=points,
        ineq1=_worst(r1, m1, strict=False),
        ineq2=_worst(grid, m2, strict=False),
        ineq3=_worst(grid, m3, strict=True),
        repulsion_bound=_worst(grid, m_rep, strict=False),
        dispersion_bound=_worst(grid, m_disp, strict=False),
    )


def _padding_centers(centers: Sequence[Tuple[float, float]], pad: int, n: float):
    """Isolated pennies at least 2n from every centre and from each other."""
    if centers:
        x0 = max(x for x, _ in centers)
        y0 = max(y for _, y in centers)
    else:
        x0 = y0 = 0.0
    return [(x0 + 2.0 * n * (j + 1), y0 + 2.0 * n) for j in range(pad)]


def build_two_plane_instance(
    p: PennyRealization, k: int, rescale: bool = True, min_n: int = MIN_N
) -> ReductionOutput:
    """Exact-k instance meeting goal -(k-1) iff the pennies have an independent k-set.

    Realizations with fewer than ``min_n`` pennies are padded with isolated
    pennies, and ``k`` grows by the pad count. With ``rescale`` the centres
    are scaled so the tangency distance equals the padded penny count;
    otherwise a mismatch raises :class:`ScalingError`.
    """
    adjacency = validate_penny_realization(p)
    n_real = p.n
    if not 1 <= k <= n_real:
        raise ValueError(f"need 1 <= k <= {n_real}, got k={k}")
    pad = max(0, min_n - n_real)
    n = n_real + pad
    touch = 2.0 * p.radius
    if rescale:
        scale = n / touch
    elif abs(touch - n) > p.eps_geom:
        raise ScalingError(f"tangency distance {touch} != n = {n}")
    else:
        scale = 1.0
    centers = [(x * scale, y * scale) for x, y in p.centers]
    eps = 1e-9 * n
    for a, b in itertools.combinations(range(n_real), 2):
        if adjacency.adjacent(a, b):
            continue
        d = math.dist(centers[a], centers[b])
        if d < SQRT2 * n - eps:
            raise NotOrthogonalError(
                f"non-adjacent pennies {a} and {b} are {d:.6g} apart (< sqrt(2)*{n})"
            )
    centers += _padding_centers(centers, pad, n)

    # shift into a cell whose walls are a radius away from every disc centre
    half = n / 2.0
    xs = [x for x, _ in centers]
    ys = [y for _, y in centers]
    dx, dy = half - min(xs), half - min(ys)
    centers = [(x + dx, y + dy) for x, y in centers]
    cell = (max(xs) + dx + half, max(ys) + dy + half, 1.0)

    params = synthesize_penny_params(n)
    ions: List[Ion] = []
    for a, (x, y) in enumerate(centers):
        ions.append(Ion(a, POS, 1, (x, y, 0.0), f"p{a}"))
    for a, (x, y) in enumerate(centers):
        ions.append(Ion(n + a, NEG, -1, (x, y, 1.0), f"p{a}"))
    f11, f12 = params.field11(), params.field12()
    energy = BuckinghamCoulomb({(POS, POS): f11, (NEG, NEG): f11, (POS, NEG): f12})
    graph = CrystalGraph(tuple(ions), energy, cell)

    k_padded = k + pad
    k_prime = n - k_padded
    goal = penny_goal_energy(k_padded, params)
    inst = RemovalInstance(graph, Variant.EXACT_K, k_prime, goal)
    decode = {a: a % n for a in range(2 * n)}
    notes = {
        "n": n,
        "n_real": n_real,
        "pad": pad,
        "pad_pennies": list(range(n_real, n)),
        "k": k,
        "k_padded": k_padded,
        "k_prime": k_prime,
        "goal": goal,
        "scale": scale,
        "edges": sorted(list(e) for e in adjacency.edges),
        "params": asdict(params),
    }
    return ReductionOutput(inst, decode, notes)
