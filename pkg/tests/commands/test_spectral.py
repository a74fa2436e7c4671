"""Tests related to the spectral commands."""
import json
import math

import pytest

from covers.commands import ClassifyCommand, PeriodicCommand
from covers.config import RunConfig


class TestClassify:
    """Tests related to `ClassifyCommand`."""

    def test_rows(self):
        """One row per root with its tag."""
        artifact = ClassifyCommand().handle(RunConfig(poly="u^4-u^3-u^2-u+1"))
        assert len(artifact.rows) == 4
        assert sorted(row[4] for row in artifact.rows).count("circle") == 2
        assert artifact.meta["salem"]
        assert not artifact.meta["expansive"]

    def test_cli(self, run_cli):
        """The summary names the class and the entropy."""
        code, out = run_cli("classify", "5u^2-6u+5")
        assert code == 0
        assert out.startswith("nonhyperbolic")
        assert f"{math.log(5):.9f}" in out


def test_entropy(run_cli):
    """Roots and integral agree."""
    code, out = run_cli("entropy", "u^2-3u+1", "--format", "json")
    assert code == 0
    (row,) = json.loads(out)["rows"]
    assert row["roots"] == pytest.approx(2 * math.log((1 + math.sqrt(5)) / 2))
    assert row["difference"] < 1e-6


class TestPeriodic:
    """Tests related to `PeriodicCommand`."""

    def test_matrix_checked(self):
        """Unimodular f is cross-checked against the companion matrix."""
        artifact = PeriodicCommand().handle(RunConfig(poly="u^2-3u+1", extra={"kmax": 5}))
        assert artifact.meta["matrix_checked"]
        assert [row[1] for row in artifact.rows] == [1, 5, 16, 45, 121]

    def test_not_unimodular(self):
        """3-2u is counted by the resultant alone."""
        artifact = PeriodicCommand().handle(RunConfig(poly="3-2u", extra={"kmax": 2}))
        assert not artifact.meta["matrix_checked"]
        assert [row[1] for row in artifact.rows] == [1, 5]
