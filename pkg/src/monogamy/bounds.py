"""Monogamy lower bounds on ``E^beta`` across the ``A|B1...B_{N-1}`` cut.

Everything here works on an :class:`EntanglementProfile`, i.e. on measure
values rather than states, so the same code serves concurrence and CREN.
Indices in reports are 1-based to match the ``B_1 ... B_{N-1}`` labels.

Families
--------
POWER_SUM  sum_i e_i^beta
HALF_BETA  chained weights (beta/2)^i
FEI        chained weights (2^(beta/2) - 1)^i
YLM        chained weights h^i, h = ((1+k)^(beta/2) - 1) / k^(beta/2)
TAO        state-dependent products with 2^(beta/2) - ratio^beta
NEW        state-dependent products with M(k, beta) - ratio^beta

All chained families share one shape. For a split ``m`` the first ``m``
steps peel off a pair term (``k e_i^2 >= t_{i+1}^2``) and the remaining
steps peel off a tail term (``e_j^2 <= k t_{j+1}^2``)::

    value = sum_{i=1}^{m} (prod_{j<i} A_j) e_i^beta
            + (prod_{i<=m} A_i) (sum_{j=m+1}^{N-2} B_j e_j^beta + e_{N-1}^beta)
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

COND_TOL = 1e-12
PROFILE_TOL = 1e-12


class DomainError(ValueError):
    """A parameter lies outside the range where a bound or lemma applies."""


class InfeasibleConditionError(ValueError):
    """A ratio coefficient would divide by a zero measure value."""


class Family(str, enum.Enum):
    POWER_SUM = "POWER_SUM"
    HALF_BETA = "HALF_BETA"
    FEI = "FEI"
    YLM = "YLM"
    TAO = "TAO"
    NEW = "NEW"

    @property
    def min_beta(self) -> float:
        return 4.0 if self in (Family.TAO, Family.NEW) else 2.0

    @property
    def uses_k(self) -> bool:
        return self in (Family.YLM, Family.NEW)

    @classmethod
    def parse(cls, name: str) -> "Family":
        try:
            return cls(name.strip().upper().replace("-", "_"))
        except ValueError:
            raise ValueError(f"unknown bound family {name!r}") from None


@dataclass(frozen=True)
class EntanglementProfile:
    """Pairwise values ``e_i = E(A B_i)`` and tails ``t_i = E(A | B_i ... B_{N-1})``."""

    pairwise: tuple[float, ...]
    tails: tuple[float, ...]
    from_state: bool = False

    def __post_init__(self):
        e = tuple(float(x) for x in self.pairwise)
        t = tuple(float(x) for x in self.tails)
        if len(e) < 2 or len(e) != len(t):
            raise ValueError("pairwise and tails must have equal length >= 2")
        if any(not math.isfinite(x) or x < 0 for x in e + t):
            raise ValueError("profile entries must be finite and nonnegative")
        if abs(t[-1] - e[-1]) > PROFILE_TOL:
            raise ValueError("last tail must equal the last pairwise value")
        if self.from_state and t[0] ** 2 < math.fsum(x * x for x in e) - 1e-9:
            raise ValueError("profile flagged from-state violates t_1^2 >= sum e_i^2")
        object.__setattr__(self, "pairwise", e)
        object.__setattr__(self, "tails", t)

    @classmethod
    def tripartite(cls, e_ab: float, e_ac: float, total: float | None = None) -> "EntanglementProfile":
        if total is None:
            total = math.hypot(e_ab, e_ac)
        return cls((e_ab, e_ac), (total, e_ac))

    @property
    def n_parties(self) -> int:
        return len(self.pairwise) + 1


@dataclass(frozen=True)
class BoundSpec:
    family: Family
    beta: float
    k: float = 1.0
    m: int | None = None

    def __post_init__(self):
        fam = self.family if isinstance(self.family, Family) else Family.parse(str(self.family))
        object.__setattr__(self, "family", fam)
        if not math.isfinite(self.beta) or self.beta < fam.min_beta:
            raise DomainError(f"{fam.value} needs beta >= {fam.min_beta:g}, got {self.beta}")
        if not 0.0 < self.k <= 1.0:
            raise DomainError(f"k must lie in (0, 1], got {self.k}")


@dataclass
class BoundReport:
    family: Family
    beta: float
    k: float | None
    m: int | None
    value: float
    coefficients: list[float]
    conditions_ok: bool
    condition_details: list[dict] = field(default_factory=list)
    literal: bool = False

    def as_dict(self) -> dict:
        return {
            "family": self.family.value,
            "beta": self.beta,
            "k": self.k,
            "m": self.m,
            "value": self.value,
            "coefficients": list(self.coefficients),
            "conditions_ok": self.conditions_ok,
            "condition_details": list(self.condition_details),
            "literal": self.literal,
        }


def lemma1_gap(t, k, x, check: bool = True):
    """``(1+t)^x - 1 - [((1+k)^x - 1)/k^x + k^x - t^x] t^x``.

    Nonnegative for ``0 <= t <= k <= 1``, ``k > 0`` and ``x >= 2``. Accepts
    scalars or broadcastable arrays; ``check=False`` skips the domain test
    for exploratory scans.
    """
    t = np.asarray(t, dtype=float)
    k = np.asarray(k, dtype=float)
    x = np.asarray(x, dtype=float)
    if check:
        if np.any(k <= 0) or np.any(k > 1):
            raise DomainError("k must lie in (0, 1]")
        if np.any(t < 0) or np.any(t > k):
            raise DomainError("t must lie in [0, k]")
        if np.any(x < 2):
            raise DomainError("x must be >= 2")
    tx = t ** x
    coeff = ((1 + k) ** x - 1) / k ** x + k ** x - tx
    gap = (1 + t) ** x - 1 - coeff * tx
    return float(gap) if gap.ndim == 0 else gap


def monotone_f(x, y):
    """``(1+y)^x - y^x + y^-x``, increasing in ``y >= 1`` for ``x >= 2``."""
    return (1 + y) ** x - y ** x + y ** (-x)


def _check_k(k: float) -> None:
    if not 0.0 < k <= 1.0:
        raise DomainError(f"k must lie in (0, 1], got {k}")


def ylm_weight(k: float, beta: float) -> float:
    _check_k(k)
    half = beta / 2
    return ((1 + k) ** half - 1) / k ** half


def fei_weight(beta: float) -> float:
    return 2 ** (beta / 2) - 1


def coefficient_M(k: float, beta: float) -> float:
    """``((1+k)^(beta/2) - 1)/k^(beta/2) + k^(beta/2)``; equals ``2^(beta/2)`` at ``k = 1``."""
    _check_k(k)
    if beta < 4:
        raise DomainError(f"beta must be >= 4, got {beta}")
    half = beta / 2
    return ((1 + k) ** half - 1) / k ** half + k ** half


def _ratio_pow(num: float, den: float, beta: float, what: str) -> float:
    if den == 0.0:
        if num == 0.0:
            return 0.0
        raise InfeasibleConditionError(f"{what}: zero denominator with nonzero numerator")
    return (num / den) ** beta


def tripartite_new(e_ab: float, e_ac: float, k: float, beta: float) -> BoundReport:
    """``e_ab^beta + [M - (e_ac/e_ab)^beta] e_ac^beta``, certified when ``e_ac^2 <= k e_ab^2``."""
    if beta < 4:
        raise DomainError(f"beta must be >= 4, got {beta}")
    M = coefficient_M(k, beta)
    slack = k * e_ab * e_ab - e_ac * e_ac
    if e_ab == 0.0 and e_ac == 0.0:
        coeff = M
        value = 0.0
    else:
        coeff = M - _ratio_pow(e_ac, e_ab, beta, "tripartite bound")
        value = 0.0 + 1.0 * e_ab ** beta + coeff * e_ac ** beta
    return BoundReport(
        family=Family.NEW, beta=beta, k=k, m=1, value=value,
        coefficients=[1.0, coeff],
        conditions_ok=slack >= -COND_TOL,
        condition_details=[{"index": 1, "kind": "head", "slack": slack}],
    )


def tripartite_family(e_ab: float, e_ac: float, spec: BoundSpec) -> BoundReport:
    """Three-party specialization of each family (pair term ``A B`` peeled first)."""
    fam, beta = spec.family, spec.beta
    if fam is Family.NEW:
        return tripartite_new(e_ab, e_ac, spec.k, beta)
    k_eff = spec.k if fam.uses_k else 1.0
    slack = k_eff * e_ab * e_ab - e_ac * e_ac
    if fam is Family.POWER_SUM:
        coeff = 1.0
    elif fam is Family.HALF_BETA:
        coeff = beta / 2
    elif fam is Family.FEI:
        coeff = fei_weight(beta)
    elif fam is Family.YLM:
        coeff = ylm_weight(spec.k, beta)
    else:  # TAO
        coeff = 2 ** (beta / 2) - _ratio_pow(e_ac, e_ab, beta, "tripartite bound")
    value = 0.0 + 1.0 * e_ab ** beta + coeff * e_ac ** beta
    ok = True if fam is Family.POWER_SUM else slack >= -COND_TOL
    details = [] if fam is Family.POWER_SUM else [{"index": 1, "kind": "head", "slack": slack}]
    return BoundReport(
        family=fam, beta=beta, k=spec.k if fam.uses_k else None,
        m=None if fam is Family.POWER_SUM else 1, value=value,
        coefficients=[1.0, coeff], conditions_ok=ok, condition_details=details,
    )


@dataclass(frozen=True)
class ConditionReport:
    k: float
    head_slack: tuple[float, ...]  # k e_i^2 - t_{i+1}^2, i = 1..N-2
    tail_slack: tuple[float, ...]  # k t_{j+1}^2 - e_j^2, j = 1..N-2
    feasible_m: tuple[int, ...]
    m: int | None = None
    ok: bool = False

    def details(self, m: int) -> list[dict]:
        out = [{"index": i + 1, "kind": "head", "slack": s}
               for i, s in enumerate(self.head_slack[:m])]
        out += [{"index": j + 1, "kind": "tail", "slack": s}
                for j, s in enumerate(self.tail_slack) if j + 1 > m]
        return out


def _split_ok(head, tail, m: int) -> bool:
    return all(s >= -COND_TOL for s in head[:m]) and all(s >= -COND_TOL for s in tail[m:])


def check_conditions(profile: EntanglementProfile, k: float, m: int | None = None) -> ConditionReport:
    """Signed slacks of the split hypotheses and the set of admissible splits ``m``.

    ``m`` ranges over ``0 .. N-2``; ``m = N-2`` is the all-pairs-first case.
    """
    _check_k(k)
    e, t = profile.pairwise, profile.tails
    steps = len(e) - 1
    head = tuple(k * e[i] ** 2 - t[i + 1] ** 2 for i in range(steps))
    tail = tuple(k * t[j + 1] ** 2 - e[j] ** 2 for j in range(steps))
    feasible = tuple(mm for mm in range(steps + 1) if _split_ok(head, tail, mm))
    ok = m in feasible if m is not None else bool(feasible)
    return ConditionReport(k=k, head_slack=head, tail_slack=tail,
                           feasible_m=feasible, m=m, ok=ok)


def _default_m(cond: ConditionReport, steps: int) -> int:
    return max(cond.feasible_m) if cond.feasible_m else steps


def _chain(profile: EntanglementProfile, beta: float, m: int, head_coef, tail_coef) -> list[float]:
    e, t = profile.pairwise, profile.tails
    steps = len(e) - 1
    coeffs = []
    prod = 1.0
    for i in range(m):
        coeffs.append(prod)
        prod *= head_coef(e[i], t[i + 1])
    for j in range(m, steps):
        coeffs.append(prod * tail_coef(e[j], t[j + 1]))
    coeffs.append(prod)
    return coeffs


def _dot(coeffs, profile: EntanglementProfile, beta: float) -> float:
    value = 0.0
    for c, x in zip(coeffs, profile.pairwise):
        value += c * x ** beta
    return value


def _resolve_m(profile: EntanglementProfile, m: int | None, cond: ConditionReport) -> int:
    steps = len(profile.pairwise) - 1
    if m is None:
        return _default_m(cond, steps)
    if not 0 <= m <= steps:
        raise DomainError(f"split m must lie in [0, {steps}], got {m}")
    return m


def chain_new(profile: EntanglementProfile, spec: BoundSpec, literal: bool = False) -> BoundReport:
    """Chained bound with ``M(k, beta)``-based state-dependent coefficients.

    By default the value is the full expansion of the recursive argument,
    including the leading ``e_1^beta`` term. ``literal=True`` drops that
    term (coefficient 0), matching the shorter displayed sum.
    """
    if spec.family is not Family.NEW:
        raise ValueError("chain_new evaluates the NEW family only")
    beta, k = spec.beta, spec.k
    M = coefficient_M(k, beta)
    cond = check_conditions(profile, k)
    m = _resolve_m(profile, spec.m, cond)
    coeffs = _chain(
        profile, beta, m,
        head_coef=lambda ei, tn: M - _ratio_pow(tn, ei, beta, "head coefficient"),
        tail_coef=lambda ej, tn: M - _ratio_pow(ej, tn, beta, "tail coefficient"),
    )
    if literal and m >= 1:
        coeffs[0] = 0.0
    return BoundReport(
        family=Family.NEW, beta=beta, k=k, m=m, value=_dot(coeffs, profile, beta),
        coefficients=coeffs, conditions_ok=m in cond.feasible_m,
        condition_details=cond.details(m), literal=literal,
    )


def chain_prior(profile: EntanglementProfile, spec: BoundSpec) -> BoundReport:
    """Chained bound for the POWER_SUM, HALF_BETA, FEI, YLM and TAO families."""
    fam, beta = spec.family, spec.beta
    if fam is Family.NEW:
        raise ValueError("use chain_new for the NEW family")
    n_terms = len(profile.pairwise)
    if fam is Family.POWER_SUM:
        coeffs = [1.0] * n_terms
        return BoundReport(fam, beta, None, None, _dot(coeffs, profile, beta), coeffs, True)

    k = spec.k if fam.uses_k else 1.0
    cond = check_conditions(profile, k)
    m = _resolve_m(profile, spec.m, cond)
    if fam is Family.TAO:
        base = 2 ** (beta / 2)
        head = lambda ei, tn: base - _ratio_pow(tn, ei, beta, "head coefficient")  # noqa: E731
        tail = lambda ej, tn: base - _ratio_pow(ej, tn, beta, "tail coefficient")  # noqa: E731
    else:
        w = {Family.HALF_BETA: beta / 2, Family.FEI: fei_weight(beta)}.get(fam)
        if w is None:
            w = ylm_weight(k, beta)
        head = tail = lambda *_: w  # noqa: E731
    coeffs = _chain(profile, beta, m, head, tail)
    return BoundReport(
        family=fam, beta=beta, k=spec.k if fam.uses_k else None, m=m,
        value=_dot(coeffs, profile, beta), coefficients=coeffs,
        conditions_ok=m in cond.feasible_m, condition_details=cond.details(m),
    )


def evaluate(profile: EntanglementProfile, spec: BoundSpec, literal: bool = False) -> BoundReport:
    """Dispatch to :func:`chain_new` or :func:`chain_prior`."""
    if spec.family is Family.NEW:
        return chain_new(profile, spec, literal=literal)
    return chain_prior(profile, spec)
