"""Closed-form potential families for inflationary / cold-dark-matter scalar
fields, with audit operations that certify the algebraic hypotheses used by
the decay diagnostics.

Families (all vanish at the origin together with their force f = F'):

    E(n)          (1 - e^{-s})^{2n},  n >= 1
    T(n)          tanh^{2n}(s),       n >= 1
    natural       1 - cos(s)
    axion         cos(s) - 1          (value at infinity removed; F <= 0)
    dbrane(n)     1 - (1+v)^{-2n} - 2nv,  n in {1,2}, domain v > -1
    hilltop(n)    -s^{2n},            n in {1,2}
    monodromy(q)  ((1+s^2)^{q/2} - 1)/q,  q in [-1,1], q != 0
    log           log(1+s^2)/2

The audits sample densely (default 1e4 points) and report the observed
extrema; the sampling resolution is recorded so results are reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

__all__ = [
    "DomainViolation",
    "PotentialSpec",
    "PotentialAuditReport",
    "parse_family",
    "eval_F",
    "eval_f",
    "eval_fprime",
    "virial_sign_margin",
    "quartic_flatness_constant",
    "lipschitz_bound",
    "defocusing_min",
    "dbrane_virial_closed_form",
    "audit_potential",
    "classify_theorem",
    "EXPECTED_CLASS",
]

_FAMILIES = ("E", "T", "natural", "axion", "dbrane", "hilltop", "monodromy", "log")

# Sign tolerance used throughout classification: inequalities audited by
# sampling are accepted down to -1e-12 to absorb roundoff in cancellations.
SIGN_TOL = 1e-12

# A flatness ratio exceeding this near s=0 is reported as unbounded.
_DIVERGENCE_CAP = 1e6


class DomainViolation(ValueError):
    """Potential evaluated outside its domain (dbrane with v <= -1)."""


@dataclass(frozen=True)
class PotentialSpec:
    """One potential family with its parameters.

    ``n`` is required for E/T/dbrane/hilltop, ``q`` for monodromy.
    """

    family: str
    n: int | None = None
    q: float | None = None

    def __post_init__(self) -> None:
        if self.family not in _FAMILIES:
            raise ValueError(f"unknown potential family {self.family!r}")
        if self.family in ("E", "T"):
            if self.n is None or self.n < 1:
                raise ValueError(f"{self.family} model requires integer n >= 1")
        elif self.family in ("dbrane", "hilltop"):
            if self.n not in (1, 2):
                raise ValueError(f"{self.family} model requires n in {{1, 2}}")
        elif self.family == "monodromy":
            if self.q is None or self.q == 0 or not (-1.0 <= self.q <= 1.0):
                raise ValueError("monodromy requires q in [-1, 1], q != 0")
        elif self.n is not None or (self.q is not None and self.family != "monodromy"):
            raise ValueError(f"{self.family} takes no parameters")

    @property
    def domain_lo(self) -> float:
        """Lower end of the admissible argument range (-1 for dbrane)."""
        return -1.0 if self.family == "dbrane" else -math.inf

    @property
    def label(self) -> str:
        if self.family in ("E", "T"):
            return f"{self.family}{self.n}"
        if self.family in ("dbrane", "hilltop"):
            return f"{self.family}{self.n}"
        if self.family == "monodromy":
            return f"monodromy:q={self.q:g}"
        return self.family


def parse_family(name: str) -> PotentialSpec:
    """Build a spec from its config-file string form.

    Accepted: ``E1``, ``E2``, ..., ``T1``, ..., ``natural``, ``axion``,
    ``dbrane1``, ``dbrane2``, ``hilltop2``, ``monodromy:q=<val>``, ``log``.
    """
    name = name.strip()
    if name in ("natural", "axion", "log"):
        return PotentialSpec(name)
    for fam in ("E", "T", "dbrane", "hilltop"):
        if name.startswith(fam) and name[len(fam):].isdigit():
            return PotentialSpec(fam, n=int(name[len(fam):]))
    if name.startswith("monodromy:q="):
        try:
            q = float(name[len("monodromy:q="):])
        except ValueError:
            raise ValueError(f"bad monodromy parameter in {name!r}") from None
        return PotentialSpec("monodromy", q=q)
    raise ValueError(f"unrecognized potential name {name!r}")


def _check_dbrane_domain(v: np.ndarray) -> None:
    if np.any(v <= -1.0):
        raise DomainViolation("dbrane potential requires v > -1")


def _omexp(s: np.ndarray) -> np.ndarray:
    # 1 - e^{-s}, accurate near 0
    return -np.expm1(-s)


def _ipow(x: np.ndarray, k: int):
    # small integer powers by squaring; avoids libm pow() in solver hot loops
    if k == 0:
        return np.ones_like(x)
    out = None
    base = x
    while k:
        if k & 1:
            out = base if out is None else out * base
        k >>= 1
        if k:
            base = base * base
    return out


def eval_F(spec: PotentialSpec, s) -> float | np.ndarray:
    """Potential value F(s); exact closed form per family."""
    s = np.asarray(s, dtype=float)
    fam = spec.family
    if fam == "E":
        out = _ipow(_omexp(s), 2 * spec.n)
    elif fam == "T":
        out = _ipow(np.tanh(s), 2 * spec.n)
    elif fam == "natural":
        # 2 sin^2(s/2) = 1 - cos(s) without cancellation near 0
        half = np.sin(0.5 * s)
        out = 2.0 * half * half
    elif fam == "axion":
        half = np.sin(0.5 * s)
        out = -2.0 * half * half
    elif fam == "dbrane":
        _check_dbrane_domain(s)
        out = 1.0 - 1.0 / _ipow(1.0 + s, 2 * spec.n) - 2.0 * spec.n * s
    elif fam == "hilltop":
        out = -_ipow(s, 2 * spec.n)
    elif fam == "monodromy":
        # ((1+s^2)^{q/2} - 1)/q via expm1 for accuracy near 0
        out = np.expm1(0.5 * spec.q * np.log1p(s * s)) / spec.q
    else:  # log
        out = 0.5 * np.log1p(s * s)
    return float(out) if out.ndim == 0 else out


def eval_f(spec: PotentialSpec, s) -> float | np.ndarray:
    """Force f = F'(s), hand-derived closed form."""
    s = np.asarray(s, dtype=float)
    fam = spec.family
    n = spec.n
    if fam == "E":
        out = 2.0 * n * _ipow(_omexp(s), 2 * n - 1) * np.exp(-s)
    elif fam == "T":
        th = np.tanh(s)
        out = 2.0 * n * _ipow(th, 2 * n - 1) * (1.0 - th * th)
    elif fam == "natural":
        out = np.sin(s)
    elif fam == "axion":
        out = -np.sin(s)
    elif fam == "dbrane":
        _check_dbrane_domain(s)
        out = 2.0 * n * (1.0 / _ipow(1.0 + s, 2 * n + 1) - 1.0)
    elif fam == "hilltop":
        out = -2.0 * n * _ipow(s, 2 * n - 1)
    elif fam == "monodromy":
        out = s * (1.0 + s * s) ** (0.5 * spec.q - 1.0)
    else:  # log
        out = s / (1.0 + s * s)
    return float(out) if out.ndim == 0 else out


def eval_fprime(spec: PotentialSpec, s) -> float | np.ndarray:
    """Second derivative F''(s), hand-derived closed form."""
    s = np.asarray(s, dtype=float)
    fam = spec.family
    n = spec.n
    if fam == "E":
        e = np.exp(-s)
        g = _omexp(s)
        out = 2.0 * n * e * _ipow(g, 2 * n - 2) * ((2 * n - 1) * e - g)
    elif fam == "T":
        th = np.tanh(s)
        sech2 = 1.0 - th * th
        out = 2.0 * n * _ipow(th, 2 * n - 2) * sech2 * ((2 * n - 1) * sech2 - 2.0 * th * th)
    elif fam == "natural":
        out = np.cos(s)
    elif fam == "axion":
        out = -np.cos(s)
    elif fam == "dbrane":
        _check_dbrane_domain(s)
        out = -2.0 * n * (2 * n + 1) / _ipow(1.0 + s, 2 * n + 2)
    elif fam == "hilltop":
        out = -2.0 * n * (2 * n - 1) * _ipow(s, 2 * n - 2)
    elif fam == "monodromy":
        out = (1.0 + s * s) ** (0.5 * spec.q - 2.0) * (1.0 + (spec.q - 1.0) * s * s)
    else:  # log
        s2 = s * s
        out = (1.0 - s2) / (1.0 + s2) ** 2
    return float(out) if out.ndim == 0 else out


def dbrane_virial_closed_form(n: int, v) -> float | np.ndarray:
    """Closed form of 2F - v f for the renormalized dbrane family."""
    if n not in (1, 2):
        raise ValueError("dbrane closed form requires n in {1, 2}")
    v = np.asarray(v, dtype=float)
    _check_dbrane_domain(v)
    if n == 1:
        out = -2.0 * v**3 * (v + 2.0) / (1.0 + v) ** 3
    else:
        out = -2.0 * v**3 * (10.0 + 15.0 * v + 9.0 * v * v + 2.0 * v**3) / (1.0 + v) ** 5
    return float(out) if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# audits


def _clip_interval(spec: PotentialSpec, lo: float, hi: float) -> tuple[float, float]:
    # stay away from the dbrane pole at v = -1
    lo_eff = max(lo, spec.domain_lo + 0.1)
    if not lo_eff < hi:
        raise ValueError(f"empty audit interval [{lo}, {hi}] for {spec.label}")
    return lo_eff, hi


def _sample(spec: PotentialSpec, lo: float, hi: float, n_samples: int) -> np.ndarray:
    if n_samples < 2:
        raise ValueError("need n_samples >= 2")
    lo, hi = _clip_interval(spec, lo, hi)
    return np.linspace(lo, hi, n_samples)


def virial_sign_margin(spec: PotentialSpec, interval: tuple[float, float],
                       n_samples: int = 10_000) -> float:
    """min over samples of 2 F(s) - s f(s); >= 0 is the defocusing virial sign."""
    s = _sample(spec, interval[0], interval[1], n_samples)
    return float(np.min(2.0 * eval_F(spec, s) - s * eval_f(spec, s)))


def defocusing_min(spec: PotentialSpec, delta: float, n_samples: int = 10_000) -> float:
    """min over (-delta, delta) samples of s f(s); >= 0 rules out focusing."""
    if delta <= 0:
        raise ValueError("delta must be positive")
    s = _sample(spec, -delta, delta, n_samples)
    return float(np.min(s * eval_f(spec, s)))


def quartic_flatness_constant(spec: PotentialSpec, delta: float,
                              n_samples: int = 10_000) -> float:
    """sup over (-delta, delta) \\ {0} of s f(s) / s^4.

    Returns ``math.inf`` when the sampled condition 0 <= s f(s) <= C s^4 is
    violated: either s f(s) < 0 somewhere, or the ratio grows without bound
    as s -> 0 (probed on a log-spaced mesh down to 1e-8 * delta).
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    lo, hi = _clip_interval(spec, -delta, delta)
    lin = np.linspace(lo, hi, n_samples)
    # log-spaced probes of the s -> 0 limit, mirrored about the origin
    mag = np.geomspace(1e-8 * delta, delta, 200)
    pts = np.concatenate([lin, mag, np.maximum(-mag, lo + 0.0)])
    pts = pts[pts != 0.0]
    sf = pts * eval_f(spec, pts)
    if np.min(sf) < -SIGN_TOL:
        return math.inf
    ratio = sf / pts**4
    near = np.abs(pts) <= 1e-4 * delta
    if np.any(near) and np.max(ratio[near]) > _DIVERGENCE_CAP:
        return math.inf
    return float(np.max(ratio))


def lipschitz_bound(spec: PotentialSpec, interval: tuple[float, float],
                    n_samples: int = 10_000) -> float:
    """sup of |f'| over samples; a lower estimate of the Lipschitz constant."""
    s = _sample(spec, interval[0], interval[1], n_samples)
    return float(np.max(np.abs(eval_fprime(spec, s))))


@dataclass(frozen=True)
class PotentialAuditReport:
    """Sampled certificates for one potential family.

    ``interval`` is the wide window used for the global (any data size)
    hypotheses; ``delta`` bounds the local window used for the small-data
    hypotheses. ``quartic_constant`` is ``inf`` when flatness is violated;
    serialization maps that to an explicit ``"unbounded"`` marker rather
    than a float infinity.
    """

    label: str
    interval: tuple[float, float]
    delta: float
    n_samples: int
    sample_spacing: float
    local_spacing: float
    virial_sign_min: float
    local_sign_min: float
    potential_min: float
    quartic_constant: float
    lipschitz_bound: float
    defocusing_min: float
    theorem_class: str = field(default="None")

    @property
    def quartic_bounded(self) -> bool:
        return math.isfinite(self.quartic_constant)

    def to_dict(self) -> dict:
        d = {
            "label": self.label,
            "interval": list(self.interval),
            "delta": self.delta,
            "n_samples": self.n_samples,
            "sample_spacing": self.sample_spacing,
            "local_spacing": self.local_spacing,
            "virial_sign_min": self.virial_sign_min,
            "local_sign_min": self.local_sign_min,
            "potential_min": self.potential_min,
            "quartic_constant": self.quartic_constant if self.quartic_bounded else "unbounded",
            "lipschitz_bound": self.lipschitz_bound,
            "defocusing_min": self.defocusing_min,
            "theorem_class": self.theorem_class,
        }
        return d


def audit_potential(spec: PotentialSpec, interval: tuple[float, float] = (-10.0, 10.0),
                    delta: float = 1.0, n_samples: int = 10_000) -> PotentialAuditReport:
    """Run every audit and classify which decay theorem the family satisfies."""
    lo, hi = _clip_interval(spec, interval[0], interval[1])
    llo, lhi = _clip_interval(spec, -delta, delta)
    s_glob = np.linspace(lo, hi, n_samples)
    report = PotentialAuditReport(
        label=spec.label,
        interval=(lo, hi),
        delta=delta,
        n_samples=n_samples,
        sample_spacing=(hi - lo) / (n_samples - 1),
        local_spacing=(lhi - llo) / (n_samples - 1),
        virial_sign_min=virial_sign_margin(spec, (lo, hi), n_samples),
        local_sign_min=virial_sign_margin(spec, (llo, lhi), n_samples),
        potential_min=float(np.min(eval_F(spec, s_glob))),
        quartic_constant=quartic_flatness_constant(spec, delta, n_samples),
        lipschitz_bound=lipschitz_bound(spec, (lo, hi), n_samples),
        defocusing_min=defocusing_min(spec, delta, n_samples),
    )
    return replace(report, theorem_class=classify_theorem(spec, report))


def classify_theorem(spec: PotentialSpec, report: PotentialAuditReport) -> str:
    """Map audit results to the decay-theorem hypothesis table.

    Thm1 (any data size): F >= 0, 2F - sf >= 0 on the wide window, f' bounded.
    Thm2-flatness (small data): 0 <= s f(s) <= C s^4 near the origin.
    Thm2-sign (small data): 2F - sf >= 0 near the origin.
    """
    del spec  # classification is a pure function of the sampled report
    if (report.virial_sign_min >= -SIGN_TOL
            and report.potential_min >= -SIGN_TOL
            and math.isfinite(report.lipschitz_bound)):
        return "Thm1"
    if report.quartic_bounded and report.defocusing_min >= -SIGN_TOL:
        return "Thm2-flatness"
    if report.local_sign_min >= -SIGN_TOL:
        return "Thm2-sign"
    return "None"


def _expected_class(label: str) -> str | None:
    """Builtin expectation table used by the audit CLI gate."""
    if label in ("T1", "log") or label.startswith("monodromy:"):
        return "Thm1"
    if label in ("natural", "hilltop2"):
        return "Thm2"
    if label[:1] in ("E", "T") and label[1:].isdigit():
        return "None" if label == "E1" else "Thm2"
    if label in ("E1", "axion", "dbrane1", "dbrane2"):
        return "None"
    return None


class _ExpectedTable:
    """Read-only mapping label -> expected coarse class (Thm1/Thm2/None)."""

    def __getitem__(self, label: str) -> str:
        cls = _expected_class(label)
        if cls is None:
            raise KeyError(label)
        return cls

    def get(self, label: str, default=None):
        cls = _expected_class(label)
        return default if cls is None else cls


EXPECTED_CLASS = _ExpectedTable()


def coarse_class(theorem_class: str) -> str:
    """Collapse Thm2-flatness / Thm2-sign to Thm2 for table comparison."""
    return "Thm2" if theorem_class.startswith("Thm2") else theorem_class
