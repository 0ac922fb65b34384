"""Three-qubit generalized Schmidt decomposition family.

    |psi> = l0 |0>|00> + l1 e^{i phi} |1>|00> + l2 |1>|b=1,c=0>
            + l3 |1>|b=0,c=1> + l4 |1>|11>

Qubit A is the most significant index. The amplitudes are placed so that the
closed forms

    C_AB = 2 l0 l2,   C_AC = 2 l0 l3,   C_A|BC = 2 l0 sqrt(l2^2 + l3^2 + l4^2)

hold for the marginals ``tr_C`` and ``tr_B`` respectively; by the two-qubit
CREN identity they are also the negativity-type values of the family.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import ContractError

PARAM_TOL = 1e-12
MAX_REJECTION_TRIES = 100_000


@dataclass(frozen=True)
class SchmidtParams:
    lambdas: tuple[float, float, float, float, float]
    phi: float = 0.0

    def __post_init__(self):
        lam = tuple(float(x) for x in self.lambdas)
        if len(lam) != 5:
            raise ContractError(f"need five lambdas, got {len(lam)}")
        if any(not math.isfinite(x) or x < 0.0 for x in lam):
            raise ContractError(f"lambdas must be finite and nonnegative, got {lam}")
        norm2 = math.fsum(x * x for x in lam)
        if abs(norm2 - 1.0) > PARAM_TOL:
            raise ContractError(f"sum of squared lambdas is {norm2!r}, expected 1")
        if not math.isfinite(self.phi):
            raise ContractError("phi must be finite")
        object.__setattr__(self, "lambdas", lam)
        object.__setattr__(self, "phi", float(self.phi) % (2 * math.pi))

    @classmethod
    def normalized(cls, lambdas, phi: float = 0.0) -> "SchmidtParams":
        """Rescale ``lambdas`` to unit norm, e.g. for rounded decimal input."""
        lam = np.abs(np.asarray(lambdas, dtype=float))
        norm = float(np.linalg.norm(lam))
        if lam.size != 5 or norm == 0.0:
            raise ContractError("need five lambdas, not all zero")
        return cls(tuple(lam / norm), phi)


@dataclass(frozen=True)
class GSDMeasures:
    ab: float
    ac: float
    a_bc: float

    def as_dict(self) -> dict[str, float]:
        return {"AB": self.ab, "AC": self.ac, "A|BC": self.a_bc}


# Example parameter sets. The first one yields (C_AB, C_AC, C_A|BC) =
# (sqrt(2)/2, 1/2, sqrt(3)/2); the second realization below yields
# (1/2, 1/(2 sqrt 2), sqrt(2)/2).
EXAMPLE1 = SchmidtParams((0.5, 0.0, math.sqrt(2) / 2, 0.5, 0.0))
EXAMPLE1_REALIZATION = SchmidtParams((1 / math.sqrt(2), 0.5, math.sqrt(2) / 4, 0.25, 0.25))
EXAMPLE2 = SchmidtParams((math.sqrt(2) / 3, math.sqrt(2) / 3, math.sqrt(2) / 3, 1 / math.sqrt(6), 1 / math.sqrt(6)))

# basis indices (A most significant) for l0..l4
_SLOTS = (0b000, 0b100, 0b110, 0b101, 0b111)


def make_gsd_state(p: SchmidtParams) -> np.ndarray:
    l0, l1, l2, l3, l4 = p.lambdas
    psi = np.zeros(8, dtype=complex)
    for slot, amp in zip(_SLOTS, (l0, l1 * np.exp(1j * p.phi), l2, l3, l4)):
        psi[slot] = amp
    return psi


def gsd_analytic_measures(p: SchmidtParams) -> GSDMeasures:
    l0, _, l2, l3, l4 = p.lambdas
    return GSDMeasures(
        ab=2 * l0 * l2,
        ac=2 * l0 * l3,
        a_bc=2 * l0 * math.sqrt(l2 * l2 + l3 * l3 + l4 * l4),
    )


def ckw_slack_analytic(p: SchmidtParams) -> float:
    """``C_A|BC^2 - C_AB^2 - C_AC^2``, which is exactly ``4 l0^2 l4^2``."""
    l0, l4 = p.lambdas[0], p.lambdas[4]
    return 4 * l0 * l0 * l4 * l4


def sample_params(rng: np.random.Generator) -> SchmidtParams:
    """Random params: |standard normal| lambdas normalized, phi uniform."""
    lam = np.abs(rng.standard_normal(5))
    lam /= np.linalg.norm(lam)
    phi = rng.uniform(0.0, 2 * math.pi)
    # renormalize via fsum so the 1e-12 invariant survives rounding
    norm = math.sqrt(math.fsum(float(x) ** 2 for x in lam))
    return SchmidtParams(tuple(float(x) / norm for x in lam), phi)


def sample_params_conditional(rng: np.random.Generator, k: float,
                              max_tries: int = MAX_REJECTION_TRIES) -> SchmidtParams:
    """Rejection-sample params with ``C_AC^2 <= k C_AB^2``."""
    if not 0.0 < k <= 1.0:
        raise ContractError(f"k must lie in (0, 1], got {k}")
    for _ in range(max_tries):
        p = sample_params(rng)
        m = gsd_analytic_measures(p)
        if m.ab > 0.0 and m.ac * m.ac <= k * m.ab * m.ab:
            return p
    raise RuntimeError(f"no sample met C_AC^2 <= {k} C_AB^2 in {max_tries} tries")


def parse_params(text: str, phi: float = 0.0) -> SchmidtParams:
    """Parse ``"l0,l1,l2,l3,l4"`` decimals, renormalizing small rounding.

    Input must be normalized to within 1e-6; the vector is then rescaled to
    unit norm exactly.
    """
    parts = [s.strip() for s in text.split(",")]
    if len(parts) != 5:
        raise ContractError(f"expected five comma-separated lambdas, got {len(parts)}")
    try:
        lam = [float(s) for s in parts]
    except ValueError as exc:
        raise ContractError(f"malformed lambda list {text!r}") from exc
    if any(not math.isfinite(x) or x < 0 for x in lam):
        raise ContractError("lambdas must be finite nonnegative decimals")
    norm2 = math.fsum(x * x for x in lam)
    if abs(norm2 - 1.0) > 1e-6:
        raise ContractError(f"lambdas are not normalized (sum of squares {norm2:.9g})")
    return SchmidtParams.normalized(lam, phi)
