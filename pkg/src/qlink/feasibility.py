"""Scenario engine: combine loss, background and geometry into a link verdict."""

from __future__ import annotations

import csv
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path

from . import background as bg
from . import beam
from . import channels as ch
from . import extinction as ext
from .channels import Constraint, ErasureBudget, Tier
from .tabular import DataError, resolve_data_path
from .units import CONSTANTS, Dimension, UnitError, parse_quantity, si_string

SCHEMA_VERSION = 1
SCAN_HEADER = ("lambda_m", "eps_ext", "eps_atm", "eps_beam", "eps_depol", "verdict", "min_diameter_m")


class Site(str, Enum):
    GROUND = "ground"
    SPACE = "space"


class Policy(str, Enum):
    COMBINED = "combined"
    PER_MECHANISM = "per_mechanism"


class HopMode(str, Enum):
    ACCUMULATE = "accumulate"
    IDEAL = "ideal"


@dataclass(frozen=True)
class Scenario:
    distance: float
    wavelength: float
    d1: float
    d2: float
    extinction_curve: ext.ExtinctionCurve
    receiver_site: Site = Site.SPACE
    n_H: float = CONSTANTS.n_H_default
    relay_n: int = 1
    relay_mode: HopMode = HopMode.ACCUMULATE
    policy: Policy = Policy.COMBINED
    atmosphere_bands: ext.AtmosphereBands | None = None
    background: bg.BackgroundModel = field(default_factory=bg.BackgroundModel)
    thresholds: bg.DepolarizationThresholds = field(default_factory=bg.DepolarizationThresholds)
    name: str = ""

    def __post_init__(self):
        for attr in ("distance", "wavelength", "d1", "d2"):
            v = getattr(self, attr)
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"{attr} must be a positive length, got {v!r}")
        if self.n_H < 0:
            raise ValueError("n_H must be non-negative")
        if int(self.relay_n) != self.relay_n or self.relay_n < 1:
            raise ValueError("relay_n must be an integer >= 1")
        object.__setattr__(self, "receiver_site", Site(self.receiver_site))
        object.__setattr__(self, "policy", Policy(self.policy))
        object.__setattr__(self, "relay_mode", HopMode(self.relay_mode))
        if self.receiver_site is Site.GROUND and self.atmosphere_bands is None:
            raise ValueError("a ground receiver needs atmosphere bands")

    @property
    def hop_distance(self) -> float:
        return self.distance / self.relay_n


@dataclass(frozen=True)
class LinkReport:
    scenario: Scenario
    budget: ErasureBudget
    beam_eps_per_hop: float
    depol_eps: float
    background_intensity: float
    background_photons: float
    verdict: ch.ChannelVerdict
    min_diameter_required: float
    min_diameter_per_hop: float
    max_wavelength_q: float
    max_wavelength_q2: float
    max_wavelength_q_planck: float
    max_wavelength_q2_planck: float
    q2_delay: float
    sender_intensity_floor: float

    @property
    def depolarization_gate_disagreement(self) -> bool:
        """True when the closed-form wavelength bound and the measured background disagree on Q > 0."""
        closed = self.scenario.wavelength < self.max_wavelength_q
        measured = self.depol_eps <= self.scenario.thresholds.eps_q
        return closed != measured

    def to_dict(self) -> dict:
        s = self.scenario
        L = Dimension.LENGTH
        return {
            "schema": SCHEMA_VERSION,
            "scenario": {
                "name": s.name,
                "distance": si_string(s.distance, L),
                "wavelength": si_string(s.wavelength, L),
                "d1": si_string(s.d1, L),
                "d2": si_string(s.d2, L),
                "receiver_site": s.receiver_site.value,
                "n_H_m3": s.n_H,
                "relay_n": s.relay_n,
                "relay_mode": s.relay_mode.value,
                "policy": s.policy.value,
                "extinction_curve": s.extinction_curve.name,
                "background_components": list(s.background.names),
            },
            "budget": self.budget.as_dict(),
            "beam_eps_per_hop": self.beam_eps_per_hop,
            "depol_eps": self.depol_eps,
            "background_intensity_si": self.background_intensity,
            "background_photons": self.background_photons,
            "verdict": {
                "tier": self.verdict.tier.value,
                "q_positive": self.verdict.q_positive,
                "q2_positive": self.verdict.q2_positive,
                "q_rate_bound": self.verdict.q_rate_bound,
                "binding_constraint": self.verdict.binding_constraint.value,
            },
            "depolarization_gates_disagree": self.depolarization_gate_disagreement,
            "min_diameter_required": si_string(self.min_diameter_required, L),
            "min_diameter_per_hop": si_string(self.min_diameter_per_hop, L),
            "max_wavelength_q": si_string(self.max_wavelength_q, L),
            "max_wavelength_q2": si_string(self.max_wavelength_q2, L),
            "max_wavelength_q_planck": si_string(self.max_wavelength_q_planck, L),
            "max_wavelength_q2_planck": si_string(self.max_wavelength_q2_planck, L),
            "q2_delay": si_string(self.q2_delay, Dimension.TIME),
            "sender_intensity_floor_si": self.sender_intensity_floor,
        }


def erasure_budget(s: Scenario) -> tuple[ErasureBudget, float]:
    """Per-mechanism erasure probabilities and the single-hop beam loss."""
    eps_ext = ext.extinction_probability(s.extinction_curve, s.wavelength, s.distance, s.n_H)
    blocked = s.receiver_site is Site.GROUND and ext.atmosphere_blocked(s.atmosphere_bands, s.wavelength)
    eps_atm = 1.0 if blocked else 0.0
    p_hop = beam.joint_catch_probability(beam.AperturePair(s.d1, s.d2), s.wavelength, s.hop_distance)
    eps_hop = 1.0 - p_hop
    if s.relay_mode is HopMode.IDEAL:
        eps_beam = eps_hop
    else:
        eps_beam = -math.expm1(s.relay_n * math.log1p(-eps_hop)) if eps_hop < 1.0 else 1.0
    return ErasureBudget(eps_ext, eps_atm, eps_beam), eps_hop


def _erasure_ok(budget: ErasureBudget, policy: Policy, limit: float) -> bool:
    if policy is Policy.COMBINED:
        return budget.combined < limit
    return all(e < limit for e in (budget.beam_eps, budget.extinction_eps, budget.atmosphere_eps))


def _erasure_culprit(budget: ErasureBudget, limit: float) -> Constraint:
    ordered = [
        (Constraint.BEAM, budget.beam_eps),
        (Constraint.EXTINCTION, budget.extinction_eps),
        (Constraint.ATMOSPHERE, budget.atmosphere_eps),
    ]
    for name, eps in ordered:
        if eps >= limit:
            return name
    # only the combination fails: blame the largest contributor
    return max(ordered, key=lambda item: item[1])[0]


def evaluate_scenario(s: Scenario) -> LinkReport:
    budget, eps_hop = erasure_budget(s)
    th = s.thresholds
    T = s.background.T_cmb

    I_bg = s.background.total(s.wavelength)
    n_bg = bg.background_photon_count(I_bg, s.wavelength)
    eps_depol = bg.depolarizing_epsilon(n_bg)
    depol_tier = ch.depolarizing_feasibility(eps_depol, th.eps_q, th.eps_q2)

    lam_q = bg.max_wavelength(th.eps_q, T)
    lam_q2 = bg.max_wavelength(th.eps_q2, T)

    q_gates = [
        (Constraint.WAVELENGTH_BOUND, s.wavelength < lam_q),
        (Constraint.DEPOLARIZATION, depol_tier is Tier.Q_POSITIVE),
        (None, _erasure_ok(budget, s.policy, th.eps_erasure)),
    ]
    q2_ok = (
        s.wavelength < lam_q2
        and depol_tier is not Tier.INFEASIBLE
        and _erasure_ok(budget, s.policy, 1.0)
    )
    binding = Constraint.NONE
    for name, ok in q_gates:
        if not ok:
            binding = name if name is not None else _erasure_culprit(budget, th.eps_erasure)
            break
    q_ok = binding is Constraint.NONE

    if not q_ok:
        rate = 0.0
    elif s.policy is Policy.COMBINED:
        rate = ch.erasure_capacity(budget.combined)
    else:
        rate = min(ch.erasure_capacity(e) for e in (budget.beam_eps, budget.extinction_eps, budget.atmosphere_eps))

    verdict = ch.ChannelVerdict(q_ok, q_ok or q2_ok, rate, binding)
    return LinkReport(
        scenario=s,
        budget=budget,
        beam_eps_per_hop=eps_hop,
        depol_eps=eps_depol,
        background_intensity=I_bg,
        background_photons=n_bg,
        verdict=verdict,
        min_diameter_required=beam.min_diameter(s.wavelength, s.distance),
        min_diameter_per_hop=beam.min_diameter(s.wavelength, s.hop_distance),
        max_wavelength_q=lam_q,
        max_wavelength_q2=lam_q2,
        max_wavelength_q_planck=bg.max_wavelength_planck(th.eps_q, T),
        max_wavelength_q2_planck=bg.max_wavelength_planck(th.eps_q2, T),
        q2_delay=ch.q2_roundtrip_delay(s.distance),
        sender_intensity_floor=bg.min_sender_intensity(I_bg, th.eps_q),
    )


@dataclass(frozen=True)
class ScanRow:
    wavelength: float
    eps_ext: float
    eps_atm: float
    eps_beam: float
    eps_depol: float
    verdict: Tier
    min_diameter: float

    def as_csv(self) -> list[str]:
        return [
            repr(self.wavelength),
            repr(self.eps_ext),
            repr(self.eps_atm),
            repr(self.eps_beam),
            repr(self.eps_depol),
            self.verdict.value,
            repr(self.min_diameter),
        ]


def _scan_one(template: Scenario, wavelength: float) -> ScanRow:
    r = evaluate_scenario(replace(template, wavelength=wavelength))
    return ScanRow(
        wavelength,
        r.budget.extinction_eps,
        r.budget.atmosphere_eps,
        r.budget.beam_eps,
        r.depol_eps,
        r.verdict.tier,
        r.min_diameter_required,
    )


def scan_wavelengths(template: Scenario, grid, workers: int | None = None) -> list[ScanRow]:
    """Evaluate ``template`` at each wavelength of ``grid``; rows come back in grid order."""
    grid = [float(x) for x in grid]
    if workers is None or workers <= 1:
        return [_scan_one(template, lam) for lam in grid]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda lam: _scan_one(template, lam), grid))


def log_grid(lo: float, hi: float, points: int) -> list[float]:
    if points < 1 or not 0 < lo <= hi:
        raise ValueError("need 0 < lo <= hi and points >= 1")
    if points == 1:
        return [lo]
    step = math.log(hi / lo) / (points - 1)
    grid = [lo * math.exp(i * step) for i in range(points)]
    grid[-1] = hi
    return grid


def write_scan_csv(rows, fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(SCAN_HEADER)
    for row in rows:
        w.writerow(row.as_csv())


@dataclass(frozen=True)
class MinDesign:
    distance: float
    wavelength: float
    d_min: float
    relay_options: tuple[tuple[int, float], ...]


def solve_min_design(distance: float, wavelength: float, hop_counts=None) -> MinDesign:
    """Direct-link minimum diameter and per-element diameters for relay chains.

    Each chain of ``n`` hops needs elements of ``sqrt(c1 lambda L / n)``.
    """
    if hop_counts is None:
        hop_counts = [1] + [10**k for k in range(1, 9)]
    d_min = beam.min_diameter(wavelength, distance)
    options = tuple((int(n), beam.min_diameter(wavelength, distance / n)) for n in hop_counts)
    return MinDesign(distance, wavelength, d_min, options)


# -- scenario files --------------------------------------------------------

_REQUIRED_KEYS = {"distance", "wavelength", "d1", "d2", "receiver_site", "extinction_curve"}
_OPTIONAL_KEYS = {
    "name",
    "n_H",
    "relay_n",
    "relay_mode",
    "policy",
    "atmosphere_bands",
    "background_components",
    "include_cmb",
    "cmb_law",
}


def _length_field(data: dict, key: str) -> float:
    value = data[key]
    if not isinstance(value, str):
        raise DataError(f"scenario key {key!r} must be a quantity string such as '1 pc'")
    q = parse_quantity(value)
    if q.dimension is not Dimension.LENGTH:
        raise DataError(f"scenario key {key!r} must be a length, got {value!r}")
    return q.value


def scenario_from_dict(data: dict, base: Path | None = None, policy: str | None = None) -> Scenario:
    """Build a Scenario from parsed JSON; data paths resolve against ``base``."""
    if not isinstance(data, dict):
        raise DataError("scenario must be a JSON object")
    unknown = set(data) - _REQUIRED_KEYS - _OPTIONAL_KEYS
    if unknown:
        raise DataError(f"unknown scenario keys: {', '.join(sorted(unknown))}")
    missing = _REQUIRED_KEYS - set(data)
    if missing:
        raise DataError(f"missing scenario keys: {', '.join(sorted(missing))}")
    try:
        n_H = CONSTANTS.n_H_default
        if data.get("n_H") is not None:
            q = parse_quantity(str(data["n_H"]))
            if q.dimension is not Dimension.NUMBER_DENSITY:
                raise DataError(f"n_H must be a number density such as '1.146 cm^-3', got {data['n_H']!r}")
            n_H = q.value

        curve_path = resolve_data_path(data["extinction_curve"], "extinction", base)
        curve = ext.load_extinction_curve(curve_path, name=str(data["extinction_curve"]))
        bands = None
        if data.get("atmosphere_bands") is not None:
            bands = ext.load_atmosphere_bands(resolve_data_path(data["atmosphere_bands"], "atmosphere", base))
        comps = [
            bg.load_background_component(resolve_data_path(p, "background", base), name=str(p))
            for p in data.get("background_components") or []
        ]
        model = bg.BackgroundModel.from_components(
            comps,
            include_cmb=bool(data.get("include_cmb", True)),
            cmb_law=str(data.get("cmb_law", "planck")),
        )

        return Scenario(
            distance=_length_field(data, "distance"),
            wavelength=_length_field(data, "wavelength"),
            d1=_length_field(data, "d1"),
            d2=_length_field(data, "d2"),
            extinction_curve=curve,
            receiver_site=data["receiver_site"],
            n_H=n_H,
            relay_n=int(data.get("relay_n", 1)),
            relay_mode=data.get("relay_mode", HopMode.ACCUMULATE.value),
            policy=policy or data.get("policy", Policy.COMBINED.value),
            atmosphere_bands=bands,
            background=model,
            name=str(data.get("name", "")),
        )
    except (UnitError, TypeError) as exc:
        raise DataError(str(exc)) from exc
    except ValueError as exc:
        if isinstance(exc, DataError):
            raise
        raise DataError(f"invalid scenario: {exc}") from exc


def load_scenario(ref: str | Path, policy: str | None = None) -> Scenario:
    """Read a scenario JSON file, or a bundled one via ``builtin:<name>``."""
    path = resolve_data_path(ref, "scenario", None, suffix=".json") if str(ref).startswith("builtin:") else Path(ref)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise DataError(f"{path}: {exc.strerror or exc}") from exc
    except json.JSONDecodeError as exc:
        raise DataError(f"{path}:{exc.lineno}: invalid JSON: {exc.msg}") from exc
    return scenario_from_dict(data, base=path.parent, policy=policy)
