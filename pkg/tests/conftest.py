"""Provides fixtures for homoclinic-covers testing."""
from __future__ import annotations

import io
from typing import TYPE_CHECKING

import numpy as np
import pytest

from covers.cli import dispatch
from covers.homoclinic import build_homoclinic
from covers.laurent import parse_poly
from covers.spectra import compute_spectrum
from covers.symcover import CoverSeq, haar_point

if TYPE_CHECKING:
    from collections.abc import Callable, Sequence

    from covers.homoclinic import HomoclinicData
    from covers.laurent import LaurentPoly
    from covers.spectra import Spectrum
    from covers.symcover import XfPoint


@pytest.fixture(name="poly")
def poly_from_marker(request: pytest.FixtureRequest) -> LaurentPoly:
    """The polynomial named by the closest `poly` marker."""
    marker = request.node.get_closest_marker("poly")
    if not marker:
        pytest.fail("No poly marker found")
    return parse_poly(marker.args[0])


@pytest.fixture(name="spectrum")
def spectrum_fixture(poly: LaurentPoly) -> Spectrum:
    """The spectrum of the marked polynomial."""
    return compute_spectrum(poly)


@pytest.fixture(name="hdata")
def hdata_fixture(poly: LaurentPoly, spectrum: Spectrum) -> HomoclinicData:
    """Homoclinic data for the marked polynomial on [-64, 64]."""
    return build_homoclinic(poly, spectrum, 64)


@pytest.fixture(name="rng")
def rng_fixture() -> np.random.Generator:
    """A generator with a fixed seed."""
    return np.random.default_rng(20240607)


@pytest.fixture(name="haar")
def haar_factory(
    poly: LaurentPoly, rng: np.random.Generator
) -> Callable[[int, int], XfPoint]:
    """Haar-random points of X_f for the marked polynomial."""

    def _haar(lo: int = -64, hi: int = 64) -> XfPoint:
        """A point on [lo, hi]."""
        return haar_point(poly, lo, hi, rng)

    return _haar


@pytest.fixture(name="cover")
def cover_factory() -> Callable[..., CoverSeq]:
    """Finitely supported cover sequences."""

    def _cover(values: Sequence[int], lo: int = 0, bound: int | None = None) -> CoverSeq:
        """Symbols `values` starting at `lo`, zero elsewhere."""
        return CoverSeq.finite(values, lo, bound)

    return _cover


@pytest.fixture(name="run_cli")
def run_cli_factory(
    monkeypatch: pytest.MonkeyPatch,
) -> Callable[..., tuple[int, str]]:
    """Run the `homoclinic` program and capture standard output."""
    monkeypatch.delenv("HOMOCLINIC_SEED", raising=False)

    def _run(*argv: str) -> tuple[int, str]:
        """Exit code and output for one invocation."""
        stream = io.StringIO()
        code = dispatch(list(argv), stream)
        return code, stream.getvalue()

    return _run
