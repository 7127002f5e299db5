"""Shared pytest fixtures."""

from __future__ import annotations

import pytest

import parasim

from helpers import F_C, LAMBDA


@pytest.fixture(scope="session")
def half_wave_spec() -> parasim.DipoleSpec:
    return parasim.DipoleSpec.half_wave(F_C)


@pytest.fixture(scope="session")
def paper_geometry(half_wave_spec) -> parasim.ArrayGeometry:
    """Planar layout used throughout the efficiency comparisons."""
    return parasim.ArrayGeometry(
        n_active=6, n_parasitic_per_active=2, dx=0.4 * LAMBDA,
        dy=0.5 * LAMBDA, dipole=half_wave_spec)


@pytest.fixture(scope="session")
def paper_impedance(paper_geometry) -> parasim.PartitionedImpedance:
    return parasim.assemble_impedance(paper_geometry)


@pytest.fixture(scope="session")
def link_value(half_wave_spec) -> float:
    return parasim.link_constant(parasim.LinkBudget(), half_wave_spec)
