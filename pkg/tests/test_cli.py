import json

import pytest

from flatcusps.bieberbach import catalog
from flatcusps.cli import main
from flatcusps.serialize import form_to_dict, group_to_dict
from flatcusps.exactlin import SymmetricForm


def write_json(path, payload):
    path.write_text(json.dumps(payload), encoding="utf-8")
    return str(path)


@pytest.fixture
def torus2_file(tmp_path):
    return write_json(tmp_path / "torus2.json", group_to_dict(catalog("torus-2")))


@pytest.fixture
def id2_form_file(tmp_path):
    return write_json(tmp_path / "id2.json", form_to_dict(SymmetricForm.identity(2)))


class TestCatalogCommand:
    def test_list(self, capsys):
        assert main(["catalog", "list"]) == 0
        out = capsys.readouterr().out
        assert "klein" in out and "torus-4" in out and "hantzsche-wendt" in out

    def test_show_klein(self, capsys):
        assert main(["catalog", "show", "klein"]) == 0
        out = capsys.readouterr().out
        assert "holonomy order: 2" in out
        assert "torsion-free: true" in out
        assert "1/2" in out

    def test_show_unknown(self, capsys):
        assert main(["catalog", "show", "nope"]) == 1
        assert "unknown catalog group" in capsys.readouterr().err


class TestVerifyGroup:
    def test_catalog_name(self, capsys):
        assert main(["verify-group", "-g", "hantzsche-wendt"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["holonomy_order"] == 4
        assert payload["torsion_free"] is True

    def test_group_with_torsion_exits_two(self, tmp_path, capsys):
        data = {
            "dim": 2,
            "generators": [
                {"linear": [["1", "0"], ["0", "1"]], "translation": ["1", "0"]},
                {"linear": [["1", "0"], ["0", "1"]], "translation": ["0", "1"]},
                {"linear": [["1", "0"], ["0", "-1"]], "translation": ["0", "0"]},
            ],
        }
        path = write_json(tmp_path / "torsion.json", data)
        assert main(["verify-group", "-g", path]) == 2
        payload = json.loads(capsys.readouterr().out)
        assert payload["torsion_free"] is False

    def test_malformed_json(self, tmp_path, capsys):
        path = tmp_path / "broken.json"
        path.write_text("{not json", encoding="utf-8")
        assert main(["verify-group", "-g", str(path)]) == 1
        assert "malformed JSON" in capsys.readouterr().err

    def test_field_path_in_error(self, tmp_path, capsys):
        path = write_json(
            tmp_path / "bad.json",
            {"dim": 2, "generators": [{"linear": [["1", "0"], ["0", "1"]], "translation": [0.5, "0"]}]},
        )
        assert main(["verify-group", "-g", path]) == 1
        err = capsys.readouterr().err
        assert "generators[0].translation[0]" in err


class TestAverage:
    def test_klein_average(self, tmp_path, capsys):
        form_path = write_json(
            tmp_path / "form.json",
            {"dim": 2, "matrix": [["2", "1"], ["1", "3"]]},
        )
        assert main(["average", "-g", "klein", "-f", form_path]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["matrix"] == [["2", "0"], ["0", "3"]]


class TestApproximate:
    def test_decimal_target(self, tmp_path, capsys):
        target_path = write_json(
            tmp_path / "target.json",
            {"dim": 2, "matrix": [[1.0, 0.2], [0.2, 2.0]]},
        )
        assert main(["approximate", "-g", "torus-2", "-t", target_path, "-d", "100"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["form"] == [["1", "1/5"], ["1/5", "2"]]

    def test_indefinite_target_exits_two(self, tmp_path, capsys):
        target_path = write_json(
            tmp_path / "target.json",
            {"dim": 2, "matrix": [[1.0, 2.0], [2.0, 1.0]]},
        )
        assert main(["approximate", "-g", "torus-2", "-t", target_path, "-d", "100"]) == 2


class TestEmbed:
    def test_report_all_true(self, torus2_file, id2_form_file, capsys):
        assert main(["embed", "-g", torus2_file, "-f", id2_form_file, "--report"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["report"]["overall"] is True
        assert len(payload["embedding"]["images"]) == 2
        assert payload["embedding"]["v_inf"] == ["0", "0", "1", "1"]

    def test_integralize_scale_in_output(self, capsys, tmp_path):
        form_path = write_json(
            tmp_path / "even.json", form_to_dict(SymmetricForm.diagonal([2, 2]))
        )
        assert main(["embed", "-g", "klein", "-f", form_path, "--integralize", "--report"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["embedding"]["scale"] == 2
        assert payload["report"]["overall"] is True

    def test_non_invariant_form_exits_two(self, capsys, tmp_path):
        form_path = write_json(
            tmp_path / "skew.json",
            {"dim": 2, "matrix": [["2", "1"], ["1", "3"]]},
        )
        assert main(["embed", "-g", "klein", "-f", form_path]) == 2
        assert "verification failed" in capsys.readouterr().err


class TestSelberg:
    def test_worked_example(self, tmp_path, capsys):
        lam = write_json(
            tmp_path / "lam.json",
            {"n": 2, "generators": [[["1", "1"], ["0", "1"]], [["-1", "0"], ["0", "-1"]]]},
        )
        gam = write_json(
            tmp_path / "gam.json",
            {"n": 2, "generators": [[["1", "1"], ["0", "1"]]]},
        )
        assert main(["selberg", "-l", lam, "-u", gam]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["prime"] == 5
        assert sorted(payload["bad_primes"]) == ["2", "3"]

        assert main(["selberg", "-l", lam, "-u", gam, "--verify-words", "6"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["verified"] is True

    def test_non_unipotent_gamma_exits_one(self, tmp_path, capsys):
        lam = write_json(
            tmp_path / "lam.json",
            {"n": 2, "generators": [[["1", "1"], ["0", "1"]]]},
        )
        gam = write_json(
            tmp_path / "gam.json",
            {"n": 2, "generators": [[["-1", "0"], ["0", "-1"]]]},
        )
        assert main(["selberg", "-l", lam, "-u", gam]) == 1


class TestDensity:
    def test_end_to_end(self, tmp_path, capsys):
        out_csv = tmp_path / "rows.csv"
        out_json = tmp_path / "rows.json"
        code = main(
            [
                "density", "-g", "torus-2", "--samples", "4", "--denoms", "10,100",
                "--seed", "8", "--pipeline", "--torus-manifold",
                "-o", str(out_csv), "--json", str(out_json),
            ]
        )
        assert code == 0
        lines = out_csv.read_text(encoding="utf-8").splitlines()
        assert lines[0] == "sample_id,denom_bound,error,pipeline_ok,selberg_prime"
        assert len(lines) == 9
        assert all(line.endswith(",true,7") for line in lines[1:])
        payload = json.loads(out_json.read_text(encoding="utf-8"))
        assert len(payload) == 8
        assert payload[0]["pipeline_ok"] is True

    def test_same_seed_byte_identical(self, tmp_path):
        paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
        for path in paths:
            assert main(
                ["density", "-g", "torus-2", "--samples", "3", "--denoms", "10,1000",
                 "--seed", "8", "-o", str(path)]
            ) == 0
        assert paths[0].read_bytes() == paths[1].read_bytes()

    def test_bad_denoms_rejected(self, tmp_path, capsys):
        assert main(
            ["density", "-g", "torus-2", "--samples", "1", "--denoms", "100,10",
             "--seed", "1", "-o", str(tmp_path / "x.csv")]
        ) == 1
        assert "strictly increasing" in capsys.readouterr().err

    def test_failed_pipeline_rows_exit_two(self, tmp_path, capsys):
        # the torus-manifold leg needs unipotent images; the Klein bottle
        # has a reflection, so every row fails and is recorded as such
        out_csv = tmp_path / "klein.csv"
        code = main(
            ["density", "-g", "klein", "--samples", "2", "--denoms", "10",
             "--seed", "8", "--pipeline", "--torus-manifold", "-o", str(out_csv)]
        )
        assert code == 2
        lines = out_csv.read_text(encoding="utf-8").splitlines()
        assert all(line.endswith(",false,") for line in lines[1:])


class TestUsageErrors:
    def test_unknown_subcommand(self, capsys):
        assert main(["frobnicate"]) == 1

    def test_missing_required_option(self, capsys):
        assert main(["verify-group"]) == 1

    def test_unknown_group_spec(self, capsys):
        assert main(["verify-group", "-g", "not-a-thing"]) == 1
        assert "neither a catalog name nor an existing file" in capsys.readouterr().err
