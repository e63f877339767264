from dataclasses import dataclass

import numpy as np
import pytest

from polyedge import ProblemSpec, SynthesisOperator, make_basis2d, make_standard_basis

import oracles


@dataclass(frozen=True)
class SmallInstance:
    """A frozen small problem used by both solver and acceptance tests."""

    name: str
    operator: SynthesisOperator
    y: np.ndarray
    lam: float
    delta: float

    def problem(self) -> ProblemSpec:
        return ProblemSpec(y=self.y, operator=self.operator, lam=self.lam, delta=self.delta)


def _standard_operator(degree: int, m: int, n: int) -> SynthesisOperator:
    return SynthesisOperator(
        make_basis2d(make_standard_basis(degree, m), make_standard_basis(degree, n))
    )


def make_small_instance(name: str) -> SmallInstance:
    """Frozen 8x8 instances; seeds and parameters are pinned so reference
    solutions stay comparable across test runs."""
    rng = np.random.default_rng(20240 if name == "k0" else 20241)
    m = n = 8
    if name == "k0":
        y = np.full((m, n), 30.0)
        y[:, 4:] = 110.0
        y[5:, :] += 25.0
        y += 6.0 * rng.normal(size=(m, n))
        return SmallInstance(name, _standard_operator(0, m, n), y, 1.0, 14.0)
    if name == "k1":
        t = np.linspace(0, 1, m)[:, None]
        s = np.linspace(0, 1, n)[None, :]
        y = 40.0 + 70.0 * t + 20.0 * s
        y[:, 5:] += 60.0
        y += 5.0 * rng.normal(size=(m, n))
        return SmallInstance(name, _standard_operator(1, m, n), y, 0.8, 12.0)
    raise ValueError(name)


SMALL_INSTANCE_NAMES = ("k0", "k1")


@pytest.fixture(scope="session")
def small_instances():
    return {name: make_small_instance(name) for name in SMALL_INSTANCE_NAMES}


@pytest.fixture(scope="session")
def subgrad_references(small_instances):
    """Brute-force solutions (projected subgradient, 1e6 iterations) of
    the frozen instances; computed once per session."""
    refs = {}
    for name, inst in small_instances.items():
        xref, fref = oracles.projected_subgradient(
            inst.operator.basis.images, inst.y, inst.lam, inst.delta, iters=1_000_000
        )
        refs[name] = (xref, fref)
    return refs
