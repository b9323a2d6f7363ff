"""End-to-end tests of the command-line interface and its exit codes."""

import csv
import io
import json
import math

import numpy as np
import pytest

from bogofock import (
    BogoliubovTransform,
    Displacement,
    Squeezing,
    from_elementary,
    transform_to_dict,
)
from bogofock.cli import main


def write_transform(tmp_path, transform, name="transform.json"):
    path = tmp_path / name
    path.write_text(json.dumps(transform_to_dict(transform)))
    return str(path)


def write_ops(tmp_path, ops, name="ops.json"):
    path = tmp_path / name
    path.write_text(json.dumps(ops))
    return str(path)


@pytest.fixture
def identity_file(tmp_path):
    return write_transform(tmp_path, BogoliubovTransform.identity(1))


class TestValidate:
    def test_identity_passes(self, identity_file, capsys):
        code = main(["validate", "--transform", identity_file])
        out = json.loads(capsys.readouterr().out)
        assert code == 0
        assert out["pass"] is True
        assert all(v == 0.0 for v in out["residuals"].values())

    def test_broken_transform_fails(self, tmp_path, capsys):
        broken = BogoliubovTransform(np.eye(1), np.eye(1), [0.0], validate=False)
        path = write_transform(tmp_path, broken)
        code = main(["validate", "--transform", path])
        out = json.loads(capsys.readouterr().out)
        assert code == 2
        assert out["pass"] is False

    def test_malformed_json_is_input_error(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        code = main(["validate", "--transform", str(path)])
        assert code == 1
        assert "JSON" in capsys.readouterr().err

    def test_requires_exactly_one_source(self, identity_file, capsys):
        assert main(["validate"]) == 1
        assert main(["validate", "--transform", identity_file, "--ops", identity_file]) == 1


class TestElement:
    def test_identity_element(self, identity_file, capsys):
        code = main(["element", "--transform", identity_file, "--m", "0", "--n", "0"])
        assert code == 0
        row = json.loads(capsys.readouterr().out.strip())
        assert row["m"] == [0] and row["n"] == [0]
        assert row["re"] == pytest.approx(1.0)
        assert row["im"] == pytest.approx(0.0)

    def test_displacement_element(self, tmp_path, capsys):
        ops = {"ops": [{"type": "displacement", "t": [[0.5, 0.0]]}]}
        path = write_ops(tmp_path, ops)
        code = main(["element", "--ops", path, "--m", "2", "--n", "0"])
        assert code == 0
        row = json.loads(capsys.readouterr().out.strip())
        expected = math.exp(-0.125) * 0.25 / math.sqrt(2)
        assert row["re"] == pytest.approx(expected, abs=1e-12)
        assert row["im"] == pytest.approx(0.0, abs=1e-14)

    def test_squeezing_odd_element_vanishes(self, tmp_path, capsys):
        ops = {"ops": [{"type": "squeezing", "sigma": [0.5]}]}
        path = write_ops(tmp_path, ops)
        code = main(["element", "--ops", path, "--m", "1", "--n", "0"])
        assert code == 0
        row = json.loads(capsys.readouterr().out.strip())
        assert abs(complex(row["re"], row["im"])) <= 1e-13

    def test_quadrature_element(self, identity_file, capsys):
        code = main([
            "element", "--transform", identity_file,
            "--m", "0", "--n", "0", "--k", "2", "--kind", "position",
        ])
        assert code == 0
        row = json.loads(capsys.readouterr().out.strip())
        assert row["k"] == [2] and row["kind"] == "position"
        assert row["re"] == pytest.approx(0.5, abs=1e-12)

    def test_multiple_tuples_stream(self, identity_file, capsys):
        code = main([
            "element", "--transform", identity_file,
            "--m", "0", "--n", "0", "--m", "1", "--n", "1",
        ])
        assert code == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert len(lines) == 2
        assert json.loads(lines[1])["m"] == [1]

    def test_mismatched_counts_rejected(self, identity_file, capsys):
        assert main([
            "element", "--transform", identity_file, "--m", "0", "--m", "1", "--n", "0",
        ]) == 1

    def test_k_requires_kind(self, identity_file):
        assert main([
            "element", "--transform", identity_file, "--m", "0", "--n", "0", "--k", "1",
        ]) == 1


class TestBlock:
    def test_csv_block_with_column_norms(self, tmp_path, capsys):
        transform = from_elementary([Squeezing([0.4])])
        path = write_transform(tmp_path, transform)
        code = main(["block", "--transform", path, "--max-m", "6", "--max-n", "0"])
        assert code == 0
        out = capsys.readouterr().out
        rows = [r for r in out.splitlines() if not r.startswith("#")]
        parsed = list(csv.reader(io.StringIO("\n".join(rows))))
        assert parsed[0] == ["m_1", "n_1", "re", "im"]
        assert len(parsed) == 8  # header + 7 rows
        # cells are plain machine-readable floats and round-trip exactly
        values = {int(r[0]): complex(float(r[2]), float(r[3])) for r in parsed[1:]}
        assert values[0] == pytest.approx(np.cosh(0.4) ** -0.5)
        norm_lines = [r for r in out.splitlines() if r.startswith("# column_norm")]
        assert len(norm_lines) == 1
        assert float(norm_lines[0].split(":")[1]) == pytest.approx(1.0, abs=1e-3)

    def test_json_block(self, identity_file, capsys):
        code = main([
            "block", "--transform", identity_file,
            "--max-m", "1", "--max-n", "1", "--format", "json",
        ])
        assert code == 0
        data = json.loads(capsys.readouterr().out)
        assert len(data["elements"]) == 4
        assert data["column_norms"][0]["norm_sq"] == pytest.approx(1.0)

    def test_lattice_cap_exit_code(self, tmp_path, capsys):
        transform = BogoliubovTransform.identity(2)
        path = write_transform(tmp_path, transform)
        code = main([
            "block", "--transform", path,
            "--max-m", "80,80", "--max-n", "80,80", "--lattice-cap", "1000",
        ])
        assert code == 3


class TestVerify:
    def test_identity_matches_oracle_exactly(self, identity_file, capsys):
        code = main(["verify", "--transform", identity_file, "--cutoff", "10", "--max-photons", "4"])
        out = json.loads(capsys.readouterr().out)
        assert code == 0
        assert out["pass"] is True
        assert out["max_abs_deviation"] <= 1e-12
        assert out["phase"][0] == pytest.approx(1.0)

    def test_random_two_mode(self, tmp_path, capsys):
        code = main([
            "random", "--n-modes", "2", "--max-squeeze", "0.5",
            "--max-displacement", "0.6", "--seed", "7",
            "--out", str(tmp_path / "t.json"),
        ])
        assert code == 0
        code = main([
            "verify", "--transform", str(tmp_path / "t.json"),
            "--cutoff", "24", "--max-photons", "4",
        ])
        out = json.loads(capsys.readouterr().out)
        assert code == 0, out
        assert out["max_abs_deviation"] <= 1e-7
        assert out["phase_modulus"] == pytest.approx(1.0, abs=1e-7)

    def test_quadrature_verify(self, identity_file, capsys):
        code = main([
            "verify", "--transform", identity_file, "--cutoff", "12",
            "--max-photons", "3", "--quadrature",
        ])
        out = json.loads(capsys.readouterr().out)
        assert code == 0
        assert out["pass"] is True

    def test_truncation_guard_exit(self, tmp_path, capsys):
        ops = {"ops": [{"type": "squeezing", "sigma": [1.3]}]}
        path = write_ops(tmp_path, ops)
        code = main(["verify", "--ops", path, "--cutoff", "16", "--max-photons", "2"])
        assert code == 3

    def test_details_table(self, identity_file, capsys):
        code = main([
            "verify", "--transform", identity_file, "--cutoff", "8",
            "--max-photons", "2", "--details",
        ])
        out = json.loads(capsys.readouterr().out)
        assert code == 0
        assert len(out["elements"]) == out["n_elements"]


class TestProfile:
    def test_identity_single_stick(self, identity_file, capsys):
        code = main(["profile", "--transform", identity_file, "--max-photons", "3"])
        assert code == 0
        rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
        by_m = {r["m_1"]: float(r["intensity"]) for r in rows}
        assert by_m["0"] == pytest.approx(1.0)
        assert all(v <= 1e-20 for m, v in by_m.items() if m != "0")

    def test_displacement_poisson_sticks(self, tmp_path, capsys):
        transform = from_elementary([Displacement([1.0])])
        path = write_transform(tmp_path, transform)
        code = main(["profile", "--transform", path, "--max-photons", "6"])
        assert code == 0
        rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
        for row in rows:
            k = int(row["m_1"])
            assert float(row["intensity"]) == pytest.approx(
                math.exp(-1.0) / math.factorial(k), abs=1e-10
            )

    def test_squeezing_odd_sticks_vanish(self, tmp_path, capsys):
        transform = from_elementary([Squeezing([0.5])])
        path = write_transform(tmp_path, transform)
        code = main(["profile", "--transform", path, "--max-photons", "7"])
        rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
        assert code == 0
        for row in rows:
            if int(row["m_1"]) % 2 == 1:
                assert float(row["intensity"]) <= 1e-22

    def test_sorted_by_total(self, tmp_path, capsys):
        transform = from_elementary([Displacement([0.4, -0.2])])
        path = write_transform(tmp_path, transform)
        main(["profile", "--transform", path, "--max-photons", "3"])
        rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
        totals = [int(r["total"]) for r in rows]
        assert totals == sorted(totals)


class TestRandomCommand:
    def test_deterministic_output(self, capsys):
        main(["random", "--n-modes", "2", "--seed", "9"])
        first = capsys.readouterr().out
        main(["random", "--n-modes", "2", "--seed", "9"])
        second = capsys.readouterr().out
        assert first == second

    def test_round_trip_through_validate(self, tmp_path, capsys):
        path = str(tmp_path / "r.json")
        assert main(["random", "--n-modes", "3", "--seed", "11", "--out", path]) == 0
        assert main(["validate", "--transform", path]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["pass"] is True

    def test_emitted_transform_reparses_bit_identically(self, tmp_path):
        from bogofock import transform_from_json

        path = tmp_path / "r.json"
        main(["random", "--n-modes", "2", "--seed", "13", "--out", str(path)])
        text = path.read_text()
        transform = transform_from_json(text)
        assert json.loads(json.dumps(transform_to_dict(transform))) == json.loads(text)
