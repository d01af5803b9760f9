import json

import pytest

from branchcover.cli import main
from branchcover.errors import SpecFileError
from branchcover.specfile import load_spec, parse_spec_text, spec_to_dict, spec_to_text
from branchcover.fixtures import circle_cover_data


def write_fixture(tmp_path, name, *extra):
    out = tmp_path / f"{name}.json"
    rc = main(["fixture", name, *extra, "--out", str(out)])
    assert rc == 0
    return out


# ---------------------------------------------------------------------------
# spec file parsing


def test_parse_minimal():
    data = parse_spec_text('{"complex": [[0], [1], [0, 1]]}')
    loaded = load_spec(data)
    assert loaded.base.dim == 1
    assert loaded.branch is None


def test_parse_rejects_bad_json():
    with pytest.raises(SpecFileError):
        parse_spec_text("not json")


def test_parse_rejects_unknown_key():
    with pytest.raises(SpecFileError):
        parse_spec_text('{"complex": [[0]], "monodromy_typo": {}}')


def test_parse_rejects_bad_options():
    with pytest.raises(SpecFileError):
        parse_spec_text('{"complex": [[0]], "options": {"perversity": "middle"}}')
    with pytest.raises(SpecFileError):
        parse_spec_text('{"complex": [[0]], "options": {"subdivisions": 5}}')


def test_parse_rejects_bad_assignment_key():
    text = json.dumps({
        "complex": [[0], [1], [0, 1]],
        "monodromy": {"degree": 2, "assignments": {"1-0": [1, 0]}},
    })
    with pytest.raises(SpecFileError):
        load_spec(parse_spec_text(text))


def test_roundtrip_circle_cover():
    y, r, rep, pres = circle_cover_data(3, (1, 2, 0))
    text = spec_to_text(spec_to_dict(y, r, rep, pres))
    loaded = load_spec(parse_spec_text(text))
    spec = loaded.cover_spec()
    assert spec.degree == 3
    assert spec.monodromy.images == ((1, 2, 0),)


def test_subdivisions_option():
    text = json.dumps({
        "complex": [[0], [1], [2], [0, 1], [0, 2], [1, 2]],
        "options": {"subdivisions": 1},
    })
    loaded = load_spec(parse_spec_text(text))
    assert loaded.base.complex.n_simplices(0) == 6  # subdivided 3-cycle


# ---------------------------------------------------------------------------
# CLI commands with fixture-backed golden outputs


def test_cli_fixture_roundtrip_and_verify(tmp_path, capsys):
    path = write_fixture(tmp_path, "sphere-branched", "--points", "6", "--degree", "2")
    rc = main(["verify", str(path)])
    out = capsys.readouterr().out
    assert rc == 0
    assert "b(cover)          = [1, 4, 1]" in out
    assert "ih(base; trivial) = [1, 0, 1]" in out
    assert "ih(base; kernel)  = [0, 4, 0]" in out
    assert "per-degree equality: HOLDS" in out


def test_cli_verify_json_deterministic(tmp_path):
    path = write_fixture(tmp_path, "sphere-branched", "--points", "4", "--degree", "2")
    out1, out2 = tmp_path / "r1.json", tmp_path / "r2.json"
    assert main(["verify", str(path), "--format", "json", "--out", str(out1)]) == 0
    assert main(["verify", str(path), "--format", "json", "--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    payload = json.loads(out1.read_text())
    assert payload["all_equal"] is True
    assert payload["betti_cover"] == [1, 2, 1]


def test_cli_generators_hexagon(tmp_path, capsys):
    path = write_fixture(tmp_path, "circle-cover", "--degree", "2")
    rc = main(["generators", str(path)])
    out = capsys.readouterr().out
    assert rc == 0
    assert out == ("basepoint: 0\n"
                   "vertices: 6\n"
                   "tree-edges: 5\n"
                   "generators (1):\n"
                   "  g0: 3->4\n"
                   "relators: 0\n")


def test_cli_generators_disconnected(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({
        "complex": [[0], [1], [2], [3], [0, 1], [2, 3]],
        "monodromy": {"degree": 1, "assignments": {}},
    }))
    rc = main(["generators", str(path)])
    err = capsys.readouterr().err
    assert rc == 1
    assert "not connected" in err


def test_cli_corrupted_monodromy_exit_code(tmp_path, capsys):
    path = write_fixture(tmp_path, "sphere-branched", "--points", "6", "--degree", "2")
    raw = json.loads(path.read_text())
    key = sorted(raw["monodromy"]["assignments"])[0]
    raw["monodromy"]["assignments"][key] = [0, 0]
    path.write_text(json.dumps(raw))
    rc = main(["verify", str(path)])
    capsys.readouterr()
    assert rc == 1


def test_cli_homology(tmp_path, capsys):
    path = write_fixture(tmp_path, "circle-cover", "--degree", "3")
    rc = main(["homology", str(path)])
    assert rc == 0
    assert capsys.readouterr().out == "betti: [1, 1]\n"


def test_cli_twisted(tmp_path, capsys):
    path = write_fixture(tmp_path, "circle-cover", "--degree", "3", "--perm", "1,2,0")
    rc = main(["twisted", str(path)])
    out = capsys.readouterr().out
    assert rc == 0
    assert "complement betti:          [1, 1]" in out
    assert "pushforward twisted betti: [1, 1]" in out
    assert "kernel twisted betti:      [0, 0]" in out


def test_cli_ih_fixtures(tmp_path, capsys):
    path = write_fixture(tmp_path, "suspension-torus")
    assert main(["ih", str(path), "--perversity", "upper"]) == 0
    assert capsys.readouterr().out == "ih (upper): [1, 0, 2, 1]\n"
    assert main(["ih", str(path), "--perversity", "lower"]) == 0
    assert capsys.readouterr().out == "ih (lower): [1, 2, 0, 1]\n"

    path = write_fixture(tmp_path, "pinched-torus")
    assert main(["ih", str(path)]) == 0
    assert capsys.readouterr().out == "ih (lower): [1, 0, 1]\n"


def test_cli_fibers(tmp_path, capsys):
    path = write_fixture(tmp_path, "sphere-branched", "--points", "2", "--degree", "2")
    rc = main(["fibers", str(path)])
    out = capsys.readouterr().out
    assert rc == 0
    assert out.count("| ok") == 2
    assert "codimension check" in out


def test_cli_cone_check(tmp_path, capsys):
    path = tmp_path / "hexagon.json"
    path.write_text(json.dumps(
        {"complex": [[i] for i in range(6)]
         + [[0, 1], [1, 2], [2, 3], [3, 4], [4, 5], [0, 5]]}))
    rc = main(["cone-check", str(path)])
    out = capsys.readouterr().out
    assert rc == 0
    assert "link ih: [1, 1]" in out
    assert "cone ih: [1, 0, 0]" in out
    assert "cone formula: HOLDS" in out


def test_cli_unknown_fixture(capsys):
    rc = main(["fixture", "klein-bottle"])
    assert rc == 1
    assert "unknown fixture" in capsys.readouterr().err


def test_cli_fixture_s3_runs_verify(tmp_path, capsys):
    path = write_fixture(tmp_path, "s3-unknot-double")
    rc = main(["verify", str(path), "--format", "json"])
    out = capsys.readouterr().out
    assert rc == 0
    payload = json.loads(out)
    assert payload["betti_cover"] == [1, 0, 0, 1]
    assert payload["ih_kernel"] == [0, 0, 0, 0]


def test_cli_byte_identical_reports(tmp_path):
    path = write_fixture(tmp_path, "circle-cover", "--degree", "2")
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    main(["generators", str(path), "--out", str(a)])
    main(["generators", str(path), "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


FIXTURE_ARGS = {
    "sphere-branched": ("--points", "4", "--degree", "2"),
    "s3-unknot-double": (),
    "suspension-torus": (),
    "pinched-torus": (),
    "circle-cover": ("--degree", "3", "--perm", "1,2,0"),
}


def test_every_fixture_roundtrips_and_is_deterministic(tmp_path):
    for name, extra in FIXTURE_ARGS.items():
        a = tmp_path / f"{name}-a.json"
        b = tmp_path / f"{name}-b.json"
        assert main(["fixture", name, *extra, "--out", str(a)]) == 0
        assert main(["fixture", name, *extra, "--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()
        loaded = load_spec(parse_spec_text(a.read_text()))  # validates
        if loaded.monodromy is not None:
            loaded.cover_spec()  # full validation including relators


def test_parse_requires_complex_key():
    with pytest.raises(SpecFileError):
        parse_spec_text('{"branch": []}')
