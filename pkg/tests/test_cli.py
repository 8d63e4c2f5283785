import json

import pytest

from relhyp_hub.cli.interface import EXIT_FAIL, EXIT_OK, EXIT_USAGE, RelHypCLI
from relhyp_hub.core.graphs import cayley_ball
from relhyp_hub.core.groups import FreeGroup
from relhyp_hub.core.schemas import dump_complex
from relhyp_hub.infra.storage import dumps


@pytest.fixture
def cli():
    return RelHypCLI()


@pytest.fixture
def amalgam_file(tmp_path, amalgam_cog):
    path = tmp_path / "amalgam.json"
    path.write_text(dumps(dump_complex(amalgam_cog)), encoding="utf-8")
    return str(path)


def _stdout_json(capsys) -> dict:
    return json.loads(capsys.readouterr().out)


def test_unknown_command(cli):
    assert cli.run(["frobnicate"]) == EXIT_USAGE


def test_help(cli):
    assert cli.run(["--help"]) == EXIT_OK


def test_format_only_for_graph_commands(cli, amalgam_file):
    assert cli.run(["validate-cog", "--complex", amalgam_file, "--format", "dot"]) == EXIT_USAGE


def test_build_cusped_from_inline_json(cli, capsys):
    code = cli.run(["build-cusped", "--group", '{"backend": "free", "generators": ["a"]}',
                    "--peripheral", '[["a"]]', "--radius", "3", "--depth", "2"])
    assert code == EXIT_OK
    data = _stdout_json(capsys)
    assert len(data["graph"]["vertices"]) == 21
    assert data["schema_version"] == 1


def test_build_cusped_rejects_negative_radius(cli):
    code = cli.run(["build-cusped", "--group", '{"backend": "free", "generators": ["a"]}', "--radius", "-1", "--depth", "1"])
    assert code == EXIT_USAGE


def test_estimate_delta_of_tree(cli, capsys, tmp_path):
    graph_file = tmp_path / "tree.json"
    graph_file.write_text(dumps(cayley_ball(FreeGroup(["a", "b"]), 1).to_dict()), encoding="utf-8")
    assert cli.run(["estimate-delta", "--in", str(graph_file)]) == EXIT_OK
    assert _stdout_json(capsys)["delta"] == "0"
    assert cli.run(["estimate-delta", "--in", str(graph_file), "--mode", "sampled"]) == EXIT_USAGE


def test_validate_and_present(cli, capsys, amalgam_file):
    assert cli.run(["validate-cog", "--complex", amalgam_file]) == EXIT_OK
    assert _stdout_json(capsys)["valid"] is True
    assert cli.run(["present", "--complex", amalgam_file]) == EXIT_OK
    assert _stdout_json(capsys)["abelianization"] == {"free_rank": 0, "torsion": [12]}


def test_invalid_cocycle_exit_code(cli, capsys, tmp_path, complex_variant):
    path = tmp_path / "broken.json"
    path.write_text(dumps(dump_complex(complex_variant("amalgam-4-2-6", {"e/v": "y^2"}))), encoding="utf-8")
    assert cli.run(["validate-cog", "--complex", str(path)]) == EXIT_FAIL
    capsys.readouterr()
    assert cli.run(["develop", "--complex", str(path), "--radius", "2"]) == EXIT_FAIL
    assert _stdout_json(capsys)["status"] == "FAIL"


def test_develop_then_verify(cli, capsys, tmp_path, amalgam_file):
    dev_file = tmp_path / "dev.json"
    assert cli.run(["develop", "--complex", amalgam_file, "--radius", "4", "--out", str(dev_file)]) == EXIT_OK
    assert json.loads(dev_file.read_text(encoding="utf-8"))["object_count"] == 13
    capsys.readouterr()
    assert cli.run(["verify-action", "--dev", str(dev_file)]) == EXIT_OK
    assert _stdout_json(capsys)["passed"] is True

    dot_file = tmp_path / "dev.dot"
    assert cli.run(["develop", "--complex", amalgam_file, "--radius", "2", "--format", "dot", "--out", str(dot_file)]) == EXIT_OK
    assert dot_file.exists()


def test_missing_input_file(cli, tmp_path):
    assert cli.run(["verify-action", "--dev", str(tmp_path / "nope.json")]) == EXIT_USAGE


def test_example_writes_artifacts(cli, capsys, tmp_path):
    out = tmp_path / "amalgam"
    assert cli.run(["example", "amalgam-4-2-6", "--out", str(out)]) == EXIT_OK
    summary = _stdout_json(capsys)
    assert summary["status"] == "PASS"
    assert summary["object_count"] == 13
    for name in ("cocycles.json", "presentation.json", "dev.json", "action.json", "embed.json", "toc.json"):
        assert (out / name).exists()


def test_cusped_example(cli, capsys, tmp_path):
    assert cli.run(["example", "zz-horoball", "--out", str(tmp_path)]) == EXIT_OK
    summary = _stdout_json(capsys)
    assert summary["vertex_count"] == 21
    assert (tmp_path / "delta.json").exists()


def test_unknown_example(cli, tmp_path):
    assert cli.run(["example", "nowhere", "--out", str(tmp_path)]) == EXIT_USAGE


def test_failed_example_exit_code(cli, mocker, tmp_path):
    run = mocker.patch("relhyp_hub.cli.interface.ExampleManager.run", return_value={"status": "FAIL"})
    assert cli.run(["example", "genus2", "--out", str(tmp_path)]) == EXIT_FAIL
    run.assert_called_once()


def test_surface_example_verifies_on_its_own_truncation(cli, capsys, tmp_path):
    assert cli.run(["example", "genus2", "--out", str(tmp_path)]) == EXIT_OK
    summary = _stdout_json(capsys)
    assert summary["action"] == "PASS"
    assert summary["spread_check"] == "PASS"
    assert summary["embed_check"] == "PASS"
    action = json.loads((tmp_path / "action.json").read_text(encoding="utf-8"))
    assert (action["bound"], action["radius"]) == (2, 3)
    assert action["checks"]["orbits"]["missing_bases"] == []


def test_glue_reports_spread(cli, capsys, tmp_path, amalgam_file):
    dev_file = tmp_path / "dev.json"
    assert cli.run(["develop", "--complex", amalgam_file, "--radius", "2", "--out", str(dev_file)]) == EXIT_OK
    capsys.readouterr()
    assert cli.run(["glue", "--dev", str(dev_file), "--A", "2"]) == EXIT_OK
    assert _stdout_json(capsys)["spread"]["status"] == "PASS"
    assert cli.run(["glue", "--dev", str(dev_file), "--A", "-1"]) == EXIT_USAGE
