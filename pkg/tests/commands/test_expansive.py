"""Tests related to the expansive commands."""
import json

import pytest

from covers.commands import ReduceCommand, ShadowCommand
from covers.config import RunConfig
from covers.homoclinic import build_homoclinic, torus_distance
from covers.laurent import parse_poly
from covers.symcover import specification_gap


class TestHomoclinic:
    """Tests related to `HomoclinicCommand`."""

    def test_exact(self, run_cli):
        """Exact one-sided values are printed as fractions."""
        code, out = run_cli("homoclinic", "5u^2-6u+5", "--exact", "--window", "8")
        assert code == 0
        assert "1/5, 6/25, 11/125, -84/625" in out

    def test_table(self, run_cli):
        """w⁺, w⁻ and w∘ on [-window, window]."""
        code, out = run_cli("homoclinic", "u^2-3u+1", "--window", "8", "--format", "json")
        assert code == 0
        rows = json.loads(out)["rows"]
        assert len(rows) == 17
        assert all(row["w_plus"] == pytest.approx(row["w_minus"]) for row in rows)
        assert all(row["w_circ"] == 0 for row in rows)


def test_generate(run_cli):
    """Finitely supported h gives a decaying point."""
    code, out = run_cli("generate", "u^2-3u+1", "--h", "u+1")
    assert code == 0
    assert "decays on both sides: yes" in out


class TestEncodeDecode:
    """Tests related to `EncodeCommand` and `DecodeCommand`."""

    def test_encode(self, run_cli):
        """Symbols fill [-window - low, window - degree] inside the alphabet."""
        code, out = run_cli(
            "encode", "u^2-3u+1", "--point", "0.25,0.5", "--window", "16", "--format", "json"
        )
        assert code == 0
        document = json.loads(out)
        symbols = [row["symbol"] for row in document["rows"]]
        assert len(symbols) == 31
        assert max(abs(s) for s in symbols) <= 5
        assert document["meta"]["alphabet_bound"] >= 2

    def test_beta(self, run_cli):
        """--beta writes golden-mean digits."""
        code, out = run_cli(
            "encode", "u^2-u-1", "--point", "0.3,0.7", "--window", "16", "--beta", "--csv"
        )
        assert code == 0
        digits = [int(line.split(",")[1]) for line in out.splitlines()[2:]]
        assert set(digits) <= {0, 1}
        assert "1,1" not in ",".join(map(str, digits))

    def test_kappa(self, run_cli):
        """--kappa writes the symbols of the lift into [-1/10, 9/10)."""
        code, out = run_cli(
            "encode", "u^2+3u+1", "--point", "0.95,0.5", "--window", "16", "--kappa", "--csv"
        )
        assert code == 0
        symbols = [int(line.split(",")[1]) for line in out.splitlines()[2:]]
        assert len(symbols) == 31
        assert max(abs(s) for s in symbols) <= 5

    def test_one_lift(self, run_cli, capsys):
        """--beta and --kappa exclude each other."""
        code, _ = run_cli("encode", "u^2-u-1", "--point", "0.3,0.7", "--beta", "--kappa")
        assert code == 1
        assert "not allowed" in capsys.readouterr().err

    def test_decode(self, run_cli):
        """δ_0 decodes to the fundamental homoclinic point."""
        code, out = run_cli(
            "decode", "u^2-3u+1", "--symbols", "1", "--window", "16", "--format", "json"
        )
        assert code == 0
        rows = json.loads(out)["rows"]
        assert len(rows) == 33
        data = build_homoclinic(parse_poly("u^2-3u+1"), window=16)
        x = {row["n"]: row["x"] for row in rows}
        assert torus_distance(x[0], data.x_delta.at(0)) < 1e-12

    def test_missing_symbols(self, run_cli):
        """decode needs --symbols."""
        assert run_cli("decode", "u^2-3u+1")[0] == 1

    def test_missing_point(self, run_cli):
        """encode needs --point."""
        assert run_cli("encode", "u^2-3u+1")[0] == 1


def test_roundtrip(run_cli):
    """Every trial is recovered to 1e-8."""
    code, out = run_cli(
        "roundtrip", "u^2-3u+1", "--trials", "3", "--window", "32", "--format", "json"
    )
    assert code == 0
    document = json.loads(out)
    assert len(document["rows"]) == 3
    assert document["meta"]["max_error"] < 1e-8
    assert document["meta"]["one_norm"] == 5


class TestShadow:
    """Tests related to `ShadowCommand`."""

    def test_blocks(self, tmp_path, run_cli):
        """Two blocks N(ε) apart are shadowed."""
        data = build_homoclinic(parse_poly("u^2-3u+1"), window=64)
        gap, _ = specification_gap(data, 1e-3)
        blocks = [
            {"lo": 0, "hi": 5, "point": [0.1, 0.2]},
            {"lo": 5 + gap, "hi": 10 + gap, "point": [0.7, 0.4]},
        ]
        path = tmp_path / "blocks.json"
        path.write_text(json.dumps(blocks))
        code, out = run_cli("shadow", "u^2-3u+1", "--blocks", str(path), "--format", "json")
        assert code == 0
        document = json.loads(out)
        assert document["meta"]["gap"] == gap
        assert max(row["error"] for row in document["rows"]) < 1e-3

    def test_periodic(self):
        """Blocks from the config file, made periodic."""
        data = build_homoclinic(parse_poly("u^2-3u+1"), window=64)
        gap, _ = specification_gap(data, 1e-3)
        blocks = [
            {"lo": 0, "hi": 5, "point": [0.1, 0.2]},
            {"lo": 5 + gap, "hi": 10 + gap, "point": [0.7, 0.4]},
        ]
        config = RunConfig(poly="u^2-3u+1", extra={"blocks": blocks, "period": 2 * gap + 12})
        artifact = ShadowCommand().handle(config)
        assert artifact.meta["periodicity_error"] < 1e-8

    def test_bad_file(self, tmp_path, run_cli):
        """Blocks must be a list of objects."""
        path = tmp_path / "blocks.json"
        path.write_text(json.dumps({"lo": 0}))
        assert run_cli("shadow", "u^2-3u+1", "--blocks", str(path))[0] == 1
        assert run_cli("shadow", "u^2-3u+1")[0] == 1


class TestReduce:
    """Tests related to `ReduceCommand`."""

    def test_cli(self, run_cli):
        """The reduced word and h are printed."""
        code, out = run_cli("reduce", "u-2", "--symbols", "0,0,0", "--alphabet", "3")
        assert code == 0
        assert out.strip() == "reduced: -2,3,2 (h: +2@1 +1@2)"

    def test_alphabet_too_small(self, run_cli, capsys):
        """An alphabet whose full shift has less entropy than α_f is refused."""
        code, out = run_cli("reduce", "u-2", "--symbols", "0,0", "--alphabet", "0")
        assert code == 1
        assert out == ""
        assert "too small" in capsys.readouterr().err

    def test_budget(self):
        """An exhausted search is flagged."""
        config = RunConfig(poly="u-2", extra={"symbols": "0,0,0", "alphabet": 3, "budget": 1})
        artifact = ReduceCommand().handle(config)
        assert artifact.meta["exhausted"]
        assert artifact.summary.endswith("[budget exhausted]")
