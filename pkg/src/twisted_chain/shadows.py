"""Compare finite-chain excitation gaps with the thermodynamic branch energies."""
from __future__ import annotations

import logging
from dataclasses import dataclass

from .bae import RootSet, classify_roots, solve_bae
from .chain import ModelParams
from .errors import ChainError
from .spectrum import extract_states, joint_eigenbasis
from .thermo import ThermoParams, excitation

log = logging.getLogger(__name__)

TOLERANCE = {"type-I": 0.15, "type-II": 0.15, "type-III": 0.20}


@dataclass(frozen=True)
class Shadow:
    state: int
    kind: str
    n: int | None
    lam: float
    gap: float
    delta_e: float

    @property
    def rel_error(self) -> float:
        return abs(self.gap - self.delta_e) / abs(self.delta_e)

    @property
    def tolerance(self) -> float:
        return TOLERANCE[self.kind]

    @property
    def ok(self) -> bool:
        return self.rel_error < self.tolerance


def classified_states(p: ModelParams, refine: bool = True, seed: int = 0):
    """[(eigenfunction, RootSet, classification)] for every joint eigenstate."""
    basis = joint_eigenbasis(p, seed=seed)
    out = []
    for ef in extract_states(p, basis):
        roots = RootSet.from_eigenfunction(ef)
        if refine:
            try:
                roots = solve_bae(roots, p)
            except ChainError as exc:
                log.info("state %d: keeping ED roots (%s)", ef.state_id, exc)
        out.append((ef, roots, classify_roots(roots, p)))
    return out


def finite_size_shadows(p: ModelParams, states=None):
    """One Shadow per distinct (energy, kind) among type-I/II/III classified states."""
    if p.gamma is None:
        raise ValueError("needs imaginary eta")
    states = states if states is not None else classified_states(p)
    t = ThermoParams(float(p.a.real), p.gamma)
    e0 = min(ef.energy for ef, _, _ in states)
    seen = {}
    for ef, _, c in states:
        if not c.kind.startswith("type-"):
            continue
        key = (round(ef.energy, 6), c.kind, c.n, round(abs(c.lam), 4))
        if key in seen:
            continue
        label = {"type-I": "I", "type-II": "II", "type-III": "III"}[c.kind]
        de, _k = excitation(label, abs(c.lam), t, c.n)
        seen[key] = Shadow(ef.state_id, c.kind, c.n, float(c.lam), float(ef.energy - e0), de)
    return sorted(seen.values(), key=lambda s: (s.kind, s.gap))


def summary(shadows):
    """Per-kind list of (gap, delta_e, relative error)."""
    out = {}
    for s in shadows:
        out.setdefault(s.kind, []).append((s.gap, s.delta_e, s.rel_error))
    return out


__all__ = ["Shadow", "classified_states", "finite_size_shadows", "summary", "TOLERANCE"]
