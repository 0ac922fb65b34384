"""Seeded verification campaigns and figure tables.

Every sample ``i`` draws from its own generator seeded by ``(seed, i)``, so a
campaign's result does not depend on how samples are sharded across
workers. Shards are merged in sample order and ties in the worst case go to
the lowest sample index.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import bounds as bd
from .bounds import BoundSpec, EntanglementProfile, Family
from .gsd import SchmidtParams, gsd_analytic_measures, make_gsd_state, sample_params
from .measures import concurrence_pure, pair_concurrence, tripartite_measures

THREADS_ENV = "MONOGAMY_THREADS"
DEFAULT_BETA_GRID = (4.0, 12.0, 0.05)
DEFAULT_K_GRID = (0.1, 1.0, 0.1)
DEFAULT_X_GRID = (2.0, 12.0, 0.1)
DEFAULT_LEMMA_K_GRID = (0.01, 1.0, 0.01)


def grid(spec: tuple[float, float, float]) -> list[float]:
    """Inclusive arithmetic grid ``lo, lo+step, ..., <= hi`` rounded to 10 decimals."""
    lo, hi, step = (float(v) for v in spec)
    if step <= 0 or lo > hi:
        raise ValueError(f"invalid grid {spec}: need step > 0 and min <= max")
    n = int(math.floor((hi - lo) / step + 1e-9))
    return [round(lo + i * step, 10) for i in range(n + 1)]


@dataclass(frozen=True)
class CampaignConfig:
    seed: int = 0
    sample_count: int = 1000
    beta_grid: tuple[float, float, float] = DEFAULT_BETA_GRID
    k_grid: tuple[float, float, float] = DEFAULT_K_GRID
    tolerance: float = 1e-9
    # explicit value lists override the arithmetic grids when given
    betas: tuple[float, ...] | None = None
    ks: tuple[float, ...] | None = None
    x_grid: tuple[float, float, float] = DEFAULT_X_GRID
    t_points: int = 101
    measure: str = "concurrence"
    workers: int | None = None

    def __post_init__(self):
        if self.sample_count < 1:
            raise ValueError("sample_count must be >= 1")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be > 0")
        if self.t_points < 2:
            raise ValueError("t_points must be >= 2")
        for g in (self.beta_grid, self.k_grid, self.x_grid):
            grid(g)
        if self.measure not in ("concurrence", "negativity"):
            raise ValueError(f"unknown measure {self.measure!r}")

    def beta_values(self) -> list[float]:
        return list(self.betas) if self.betas is not None else grid(self.beta_grid)

    def k_values(self) -> list[float]:
        return list(self.ks) if self.ks is not None else grid(self.k_grid)


@dataclass
class CampaignResult:
    kind: str
    checked: int = 0
    violations: int = 0
    min_slack: float = math.inf
    worst_case: dict | None = None
    extra: dict = field(default_factory=dict)

    def record(self, slack: float, tolerance: float, case) -> None:
        self.checked += 1
        if slack < -tolerance:
            self.violations += 1
        if slack < self.min_slack:
            self.min_slack = slack
            self.worst_case = case() if callable(case) else case

    def merge(self, other: "CampaignResult") -> None:
        self.checked += other.checked
        self.violations += other.violations
        if other.min_slack < self.min_slack:
            self.min_slack = other.min_slack
            self.worst_case = other.worst_case

    def as_dict(self) -> dict:
        out = asdict(self)
        if not math.isfinite(out["min_slack"]):
            out["min_slack"] = None
        return out


def worker_count(requested: int | None = None) -> int:
    if requested is not None:
        return max(1, int(requested))
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def sample_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng([int(seed) & (2**64 - 1), int(index)])


def sample_haar_pure(n_qubits: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random pure state: complex Gaussian amplitudes, normalized."""
    if not 2 <= n_qubits <= 5:
        raise ValueError(f"n_qubits must lie in [2, 5], got {n_qubits}")
    dim = 2 ** n_qubits
    z = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return z / np.linalg.norm(z)


def random_feasible_profile(rng: np.random.Generator, n_parties: int, k: float,
                            m: int | None = None) -> tuple[EntanglementProfile, int]:
    """Random profile meeting the split hypotheses for ``k`` at split ``m``.

    Built from the last party backwards: tail steps pick ``e_j`` with
    ``e_j^2 <= k t_{j+1}^2``, head steps pick ``e_i`` with
    ``k e_i^2 >= t_{i+1}^2``, and each tail is inflated above
    ``sqrt(e^2 + t_next^2)``. The result is rescaled so ``t_1 <= 1``.
    """
    steps = n_parties - 2
    if steps < 1:
        raise ValueError("need at least three parties")
    if m is None:
        m = int(rng.integers(0, steps + 1))
    e = [0.0] * (steps + 1)
    t = [0.0] * (steps + 1)
    e[-1] = t[-1] = rng.uniform(0.2, 1.0)
    for j in range(steps - 1, -1, -1):
        if j >= m:
            e[j] = math.sqrt(k) * t[j + 1] * rng.uniform(0.05, 1.0)
        else:
            e[j] = t[j + 1] / math.sqrt(k) * rng.uniform(1.0, 2.0)
        t[j] = math.hypot(e[j], t[j + 1]) * rng.uniform(1.0, 1.2)
    scale = 1.0 / t[0] * rng.uniform(0.5, 1.0)
    prof = EntanglementProfile(tuple(x * scale for x in e), tuple(x * scale for x in t))
    return prof, m


def _run_sharded(cfg: CampaignConfig, kind: str, per_sample) -> CampaignResult:
    n = cfg.sample_count
    workers = min(worker_count(cfg.workers), n)
    bounds_idx = np.linspace(0, n, workers + 1).astype(int)

    def shard(lo: int, hi: int) -> CampaignResult:
        res = CampaignResult(kind)
        for i in range(lo, hi):
            per_sample(i, res)
        return res

    total = CampaignResult(kind)
    if workers == 1:
        return shard(0, n)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(shard, bounds_idx[:-1], bounds_idx[1:]))
    for part in parts:
        total.merge(part)
    return total


def _gsd_truth(params: SchmidtParams, measure: str) -> dict[str, float]:
    return tripartite_measures(make_gsd_state(params), measure)


def run_ckw_campaign(cfg: CampaignConfig) -> CampaignResult:
    """``C_A|BC^2 - C_AB^2 - C_AC^2`` on Haar-random three-qubit states."""

    def one(i: int, res: CampaignResult) -> None:
        psi = sample_haar_pure(3, sample_rng(cfg.seed, i))
        m = tripartite_measures(psi)
        slack = m["A|BC"] ** 2 - m["AB"] ** 2 - m["AC"] ** 2
        res.record(slack, cfg.tolerance, lambda: {
            "sample": i, "seed": cfg.seed,
            "amplitudes": [[float(z.real), float(z.imag)] for z in psi],
            "measures": m,
        })

    return _run_sharded(cfg, "ckw", one)


def ckw_slack_numeric(params: SchmidtParams) -> float:
    psi = make_gsd_state(params)
    a_bc = concurrence_pure(psi, [0])
    return a_bc ** 2 - pair_concurrence(psi, 0, 1) ** 2 - pair_concurrence(psi, 0, 2) ** 2


def run_lemma_scan(cfg: CampaignConfig, exploratory: bool = False,
                   k_grid: tuple[float, float, float] | None = None) -> CampaignResult:
    """Minimum of the Lemma-1 gap over an ``(x, k, t)`` grid.

    ``t`` takes ``cfg.t_points`` evenly spaced values in ``[0, k]``
    (endpoints exact). ``exploratory=True`` allows ``x < 2`` and never
    counts violations.
    """
    xs = np.array(grid(cfg.x_grid))
    ks = np.array(grid(k_grid or DEFAULT_LEMMA_K_GRID)) if cfg.ks is None else np.array(cfg.ks)
    if not exploratory and xs.min() < 2:
        raise ValueError("x grid must start at >= 2 outside exploratory mode")
    frac = np.linspace(0.0, 1.0, cfg.t_points)

    res = CampaignResult("lemma")
    endpoint_dev = 0.0
    for k in ks:
        ts = frac * k
        ts[-1] = k
        gap = bd.lemma1_gap(ts[None, :], k, xs[:, None], check=not exploratory)
        endpoint_dev = max(endpoint_dev, float(np.max(np.abs(gap[:, [0, -1]]))))
        res.checked += gap.size
        if not exploratory:
            res.violations += int(np.count_nonzero(gap < -1e-12))
        ix, it = np.unravel_index(int(np.argmin(gap)), gap.shape)
        if gap[ix, it] < res.min_slack:
            res.min_slack = float(gap[ix, it])
            res.worst_case = {"x": float(xs[ix]), "k": float(k), "t": float(ts[it]),
                              "t_index": int(it), "at_t_equals_k": bool(it == len(ts) - 1)}
    res.extra = {"endpoint_max_abs_gap": endpoint_dev, "exploratory": exploratory,
                 "tolerance": 1e-12}
    return res


def _family_holds(fam: Family, e_ab: float, e_ac: float, k: float) -> bool:
    if fam is Family.POWER_SUM:
        return True
    kk = k if fam.uses_k else 1.0
    return e_ac * e_ac <= kk * e_ab * e_ab + bd.COND_TOL


def run_bound_validity(cfg: CampaignConfig, family: Family | str = Family.NEW) -> CampaignResult:
    """``truth^beta - bound`` on random GSD states where the hypotheses hold."""
    fam = family if isinstance(family, Family) else Family.parse(family)
    betas = [b for b in cfg.beta_values() if b >= fam.min_beta]
    ks = cfg.k_values() if fam.uses_k else [1.0]

    def one(i: int, res: CampaignResult) -> None:
        params = sample_params(sample_rng(cfg.seed, i))
        m = _gsd_truth(params, cfg.measure)
        e_ab, e_ac, truth = m["AB"], m["AC"], m["A|BC"]
        if e_ab == 0.0 and e_ac > 0.0:
            return
        for beta in betas:
            for k in ks:
                if not _family_holds(fam, e_ab, e_ac, k):
                    continue
                rep = bd.tripartite_family(e_ab, e_ac, BoundSpec(fam, beta, k))
                slack = truth ** beta - rep.value
                res.record(slack, cfg.tolerance, lambda: {
                    "sample": i, "seed": cfg.seed, "lambdas": list(params.lambdas),
                    "phi": params.phi, "beta": beta, "k": k, "measures": m,
                    "bound": rep.value,
                })

    res = _run_sharded(cfg, f"validity:{fam.value}", one)
    res.extra = {"family": fam.value, "measure": cfg.measure}
    return res


# (stronger, weaker) pairs checked by the dominance campaign
DOMINANCE_PAIRS = (
    ("NEW", "TAO"), ("NEW", "YLM"), ("TAO", "FEI"), ("YLM", "FEI"),
    ("FEI", "HALF_BETA"), ("HALF_BETA", "POWER_SUM"),
)
_ALL_FAMILIES = (Family.POWER_SUM, Family.HALF_BETA, Family.FEI, Family.YLM, Family.TAO, Family.NEW)


def _dominance_on(profile: EntanglementProfile, beta: float, k: float, m: int,
                  res: CampaignResult, tol: float, case: dict) -> None:
    vals = {f.value: bd.evaluate(profile, BoundSpec(f, beta, k, None if f is Family.POWER_SUM else m)).value
            for f in _ALL_FAMILIES}
    for hi, lo in DOMINANCE_PAIRS:
        res.record(vals[hi] - vals[lo], tol, lambda: {**case, "beta": beta, "k": k, "m": m,
                                                      "pair": [hi, lo], "values": vals})
    new_k1 = bd.chain_new(profile, BoundSpec(Family.NEW, beta, 1.0, m)).value
    collapse = -abs(new_k1 - vals["TAO"])
    res.record(collapse, tol, lambda: {**case, "beta": beta, "m": m, "pair": ["NEW(k=1)", "TAO"]})


def run_dominance(cfg: CampaignConfig, tolerance: float = 1e-12) -> CampaignResult:
    """Pairwise ordering of the bound families where the NEW hypotheses hold.

    Each sample contributes the three-party profile of a random GSD state
    plus one random feasible profile with 4, 5 or 6 parties.
    """
    betas = [b for b in cfg.beta_values() if b >= 4]
    ks = cfg.k_values()

    def one(i: int, res: CampaignResult) -> None:
        rng = sample_rng(cfg.seed, i)
        params = sample_params(rng)
        g = gsd_analytic_measures(params)
        if g.ab > 0.0:
            prof = EntanglementProfile.tripartite(g.ab, g.ac, g.a_bc)
            for k in ks:
                cond = bd.check_conditions(prof, k)
                if 1 not in cond.feasible_m:
                    continue
                for beta in betas:
                    _dominance_on(prof, beta, k, 1, res, tolerance,
                                  {"sample": i, "source": "gsd", "lambdas": list(params.lambdas)})
        n_parties = 4 + i % 3
        k = ks[int(rng.integers(0, len(ks)))]
        prof, m = random_feasible_profile(rng, n_parties, k)
        for beta in betas:
            _dominance_on(prof, beta, k, m, res, tolerance,
                          {"sample": i, "source": "profile", "pairwise": list(prof.pairwise),
                           "tails": list(prof.tails)})

    res = _run_sharded(cfg, "dominance", one)
    res.extra = {"pairs": [list(p) for p in DOMINANCE_PAIRS], "tolerance": tolerance}
    return res


FIGURE_PROFILES = {
    # (E_AB, E_AC, E_A|BC) plotted in the two figures
    "fig1": (0.5, 1 / (2 * math.sqrt(2)), math.sqrt(2) / 2),
    "fig2": (4 / 9, 2 * math.sqrt(3) / 9, 2 * math.sqrt(10) / 9),
}
TABLE_COLUMNS = ("beta", "ylm", "fei", "tao", "new", "truth")


def bound_table(e_ab: float, e_ac: float, truth: float, k: float, betas) -> list[tuple[float, ...]]:
    """Rows ``(beta, YLM, FEI, TAO, NEW, truth^beta)`` for a three-party profile."""
    rows = []
    for beta in betas:
        vals = [bd.tripartite_family(e_ab, e_ac, BoundSpec(f, beta, k)).value
                for f in (Family.YLM, Family.FEI, Family.TAO, Family.NEW)]
        rows.append((beta, *vals, truth ** beta))
    return rows


def reproduce_figure(which: str, k: float = 0.8,
                     beta_grid: tuple[float, float, float] = DEFAULT_BETA_GRID) -> list[tuple[float, ...]]:
    if which not in FIGURE_PROFILES:
        raise ValueError(f"unknown figure {which!r}; choose from {sorted(FIGURE_PROFILES)}")
    e_ab, e_ac, truth = FIGURE_PROFILES[which]
    return bound_table(e_ab, e_ac, truth, k, grid(beta_grid))
