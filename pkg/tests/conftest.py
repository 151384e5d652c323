"""Shared test fixtures for cfleap."""

import sys
from pathlib import Path

import pytest

# Fix ModuleNotFoundError when running locally without editable install
sys.path.insert(0, str(Path(__file__).parents[1] / "src"))

from cfleap.cf import QuasiPeriodicCF, parse_cf  # noqa: E402
from cfleap.exact import LFT, M, Matrix2x2  # noqa: E402


# ──────────────────────────────────────────────────────────────
# Continued fractions
# ──────────────────────────────────────────────────────────────


@pytest.fixture
def e_cf() -> QuasiPeriodicCF:
    """e = [2; 1, 2, 1, 1, 4, 1, 1, 6, …]."""
    return parse_cf("[2; 1, 2*k, 1 @ k=1..]")


@pytest.fixture
def h41() -> QuasiPeriodicCF:
    """h(4, 1) = [4, 8, 12, …], class CF1."""
    return parse_cf("[; 4*(1+k) @ k=0..]")


@pytest.fixture
def h32() -> QuasiPeriodicCF:
    """h(3, 2) = [3, 9, 15, …], class CF2."""
    return parse_cf("[; 3*(1+2*k) @ k=0..]")


@pytest.fixture
def h55() -> QuasiPeriodicCF:
    """h(5, 5) = [5, 30, 55, …], class CF3."""
    return parse_cf("[; 5*(1+5*k) @ k=0..]")


@pytest.fixture
def t2_233() -> QuasiPeriodicCF:
    """t2(2, 3, 3) = [6, 9, 18, 27, …], class CF4."""
    return parse_cf("[; 2*3^k, 3*3^k @ k=1..]")


# ──────────────────────────────────────────────────────────────
# Transforms, one per decomposition case with T = I
# ──────────────────────────────────────────────────────────────


@pytest.fixture
def sigma_tm() -> LFT:
    return LFT(M)


@pytest.fixture
def sigma_tmr() -> LFT:
    return LFT(Matrix2x2(1, 2, 1, 0))


@pytest.fixture
def sigma_tmrj() -> LFT:
    return LFT(Matrix2x2(2, 1, 0, 1))
