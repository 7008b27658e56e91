"""Seeded photon-level simulation of the erasure and depolarization mechanisms.

Random numbers come from numpy's Philox-4x64 counter-based generator. Photons
are processed in fixed blocks of ``BLOCK_SIZE``; block ``b`` draws from
``Philox(key=seed).jumped(b)``, a substream 2**128 draws away from every other
block. Results therefore depend only on (seed, n_photons), never on how many
workers ran the blocks.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import background as bg
from . import beam
from . import extinction as ext
from .feasibility import Scenario

BLOCK_SIZE = 1 << 16
GENERATOR = "numpy.random.Philox(key=seed).jumped(block_index)"


def block_rng(seed: int, block: int) -> np.random.Generator:
    if not 0 <= seed < 2**64:
        raise ValueError("seed must be a 64-bit unsigned integer")
    return np.random.Generator(np.random.Philox(key=seed).jumped(block))


def _blocks(n: int):
    for b, start in enumerate(range(0, n, BLOCK_SIZE)):
        yield b, min(BLOCK_SIZE, n - start)


def _run_blocks(fn, n: int, workers: int | None):
    """Apply ``fn(block_index, size)`` to every block and return results in block order."""
    jobs = list(_blocks(n))
    if workers is None or workers <= 1:
        return [fn(b, size) for b, size in jobs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda job: fn(*job), jobs))


def radial_samples(rng: np.random.Generator, sigma: float, size: int) -> np.ndarray:
    """Inverse-CDF draw from the radial Gaussian, ``P(r <= R) = 1 - exp(-R^2 / 2 sigma^2)``."""
    # 1 - random() lies in (0, 1], so the log is finite
    u = 1.0 - rng.random(size)
    return sigma * np.sqrt(-2.0 * np.log(u))


@dataclass(frozen=True)
class Estimate:
    empirical: float
    analytic: float
    n: int

    @property
    def stderr(self) -> float:
        return math.sqrt(self.empirical * (1.0 - self.empirical) / self.n)

    @property
    def z_score(self) -> float:
        """Standardized deviation from the analytic value.

        When the empirical rate is 0 or 1 its own standard error vanishes;
        the analytic rate's binomial standard error is used instead.
        """
        se = self.stderr
        if se == 0.0:
            se = math.sqrt(self.analytic * (1.0 - self.analytic) / self.n)
        diff = self.empirical - self.analytic
        if se == 0.0:
            return 0.0 if diff == 0.0 else math.copysign(math.inf, diff)
        return diff / se

    def as_dict(self) -> dict:
        return {
            "empirical": self.empirical,
            "analytic": self.analytic,
            "stderr": self.stderr,
            "z_score": self.z_score,
        }


@dataclass(frozen=True)
class SimConfig:
    scenario: Scenario
    n_photons: int
    seed: int

    def __post_init__(self):
        if int(self.n_photons) != self.n_photons or self.n_photons < 1:
            raise ValueError("n_photons must be an integer >= 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


@dataclass(frozen=True)
class SimReport:
    n_photons: int
    seed: int
    eps_ext: Estimate
    eps_beam: Estimate
    eps_depol: Estimate
    eps_loss: Estimate

    def to_dict(self) -> dict:
        return {
            "schema": 1,
            "generator": GENERATOR,
            "block_size": BLOCK_SIZE,
            "n_photons": self.n_photons,
            "seed": self.seed,
            "eps_ext": self.eps_ext.as_dict(),
            "eps_beam": self.eps_beam.as_dict(),
            "eps_depol": self.eps_depol.as_dict(),
            "eps_loss_ext_or_beam": self.eps_loss.as_dict(),
        }


def simulate_link(cfg: SimConfig, workers: int | None = None) -> SimReport:
    """Follow ``cfg.n_photons`` photons through extinction, every hop's apertures, and the background.

    Depolarization is drawn as Bernoulli(N / (1 + N)) with N the mean background
    count in the signal mode. A "K ~ Poisson(N) rivals, pick one at random" model
    gives ``1 - (1 - exp(-N)) / N`` instead, which does not match.
    """
    s = cfg.scenario
    p_ext = ext.extinction_probability(s.extinction_curve, s.wavelength, s.distance, s.n_H)
    dx1, dx2, p_hop = beam.optimal_split(beam.AperturePair(s.d1, s.d2), s.wavelength, s.hop_distance)
    n_bg = bg.background_photon_count(s.background.total(s.wavelength), s.wavelength)
    p_depol = bg.depolarizing_epsilon(n_bg)
    r1_max, r2_max = s.d1 / 2.0, s.d2 / 2.0
    hops = s.relay_n

    def run(block: int, size: int):
        rng = block_rng(cfg.seed, block)
        extinct = rng.random(size) < p_ext
        caught = np.ones(size, dtype=bool)
        for _ in range(hops):
            caught &= radial_samples(rng, dx1, size) <= r1_max
            caught &= radial_samples(rng, dx2, size) <= r2_max
        depol = rng.random(size) < p_depol
        lost = ~caught
        return (
            int(np.count_nonzero(extinct)),
            int(np.count_nonzero(lost)),
            int(np.count_nonzero(depol)),
            int(np.count_nonzero(extinct | lost)),
        )

    totals = np.zeros(4, dtype=np.int64)
    for counts in _run_blocks(run, cfg.n_photons, workers):
        totals += counts
    n = cfg.n_photons
    # whole-path beam loss, independent of the report's hop-aggregation mode
    p_beam = 1.0 - p_hop**hops
    p_loss = 1.0 - (1.0 - p_ext) * (1.0 - p_beam)
    return SimReport(
        n_photons=n,
        seed=cfg.seed,
        eps_ext=Estimate(float(totals[0]) / n, p_ext, n),
        eps_beam=Estimate(float(totals[1]) / n, p_beam, n),
        eps_depol=Estimate(float(totals[2]) / n, p_depol, n),
        eps_loss=Estimate(float(totals[3]) / n, p_loss, n),
    )


def simulate_catch(d: float, sigma: float, n: int, seed: int, workers: int | None = None) -> float:
    """Empirical fraction of radial Gaussian samples landing within ``d / 2`` of the axis."""
    if d <= 0 or sigma <= 0 or n < 1:
        raise ValueError("need positive d, sigma and n")
    r_max = d / 2.0

    def run(block: int, size: int) -> int:
        return int(np.count_nonzero(radial_samples(block_rng(seed, block), sigma, size) <= r_max))

    return sum(_run_blocks(run, n, workers)) / n
