import json

from treecodes import cli


def run(capsys, *args):
    rc = cli.main(list(args))
    out = capsys.readouterr().out
    return rc, out


def test_build_trivial_and_verify_distance(tmp_path, capsys):
    rc, _ = run(
        capsys,
        "build",
        "--recipe-json",
        '{"kind":"trivial","n":6}',
        "--out-dir",
        str(tmp_path),
    )
    assert rc == 0
    emitted = json.loads((tmp_path / "code.json").read_text())
    assert emitted["kind"] == "table" and len(emitted["table"]) == 2 + 4 + 8 + 16 + 32 + 64
    rc, out = run(
        capsys, "verify", "--code", str(tmp_path / "code.json"), "--property", "distance",
        "--delta", "1",
    )
    assert rc == 0
    assert json.loads(out)["passed"] is True


def test_verify_failure_exit_code(tmp_path, capsys):
    (tmp_path / "code.json").write_text('{"kind":"identity","n":4}')
    run(capsys, "build", "--recipe-json", '{"kind":"eks_partition","k":2}', "--out-dir", str(tmp_path))
    rc, out = run(
        capsys,
        "verify",
        "--code",
        str(tmp_path / "code.json"),
        "--property",
        "neighborhood",
        "--partition",
        str(tmp_path / "partition.json"),
    )
    assert rc == 2
    assert json.loads(out)["witness"] is not None


def test_cap_exit_code(tmp_path, capsys):
    run(capsys, "build", "--recipe-json", '{"kind":"trivial","n":8}', "--out-dir", str(tmp_path))
    rc, _ = run(
        capsys, "verify", "--code", str(tmp_path / "code.json"), "--property", "distance",
        "--delta", "1", "--cap", "100",
    )
    assert rc == 3


def test_usage_error_exit_code(tmp_path, capsys):
    rc, _ = run(capsys, "build", "--recipe-json", '{"kind":"wat"}', "--out-dir", str(tmp_path))
    assert rc == 1
    rc = cli.main(["verify", "--code", str(tmp_path / "missing.json"), "--property", "distance"])
    assert rc == 1


def test_build_partition_recipes(tmp_path, capsys):
    rc, _ = run(
        capsys,
        "build",
        "--recipe-json",
        '{"kind":"imm_partition","imm":"exp","delta":"1/2","ell":2}',
        "--out-dir",
        str(tmp_path / "imm"),
    )
    assert rc == 0
    obj = json.loads((tmp_path / "imm" / "partition.json").read_text())
    assert obj["n"] == 128 and obj["alpha"] == "1/8"

    rc, _ = run(
        capsys,
        "build",
        "--recipe-json",
        '{"kind":"chs_partition","m":1,"l1":4,"shift":0}',
        "--out-dir",
        str(tmp_path / "chs"),
    )
    assert rc == 0
    assert json.loads((tmp_path / "chs" / "ledger.json").read_text()) == [
        {"level": 1, "blocks": [1]}
    ]


def test_bound_subcommand(capsys):
    rc, out = run(
        capsys, "bound", "--formula", "eq27", "--params", '{"delta":"1/2","n":128}'
    )
    assert rc == 0
    assert json.loads(out)["bound_value"] == "4"
    rc, out = run(
        capsys,
        "bound",
        "--formula",
        "eq11",
        "--params",
        '{"n":65536,"m":512,"delta":"1/16384","ratio":"1/100000"}',
    )
    assert rc == 2  # unsatisfied ratio


def test_audit_subcommand(tmp_path, capsys):
    run(capsys, "build", "--recipe-json", '{"kind":"eks","k":2,"delta":"1/2","seed":0}',
        "--out-dir", str(tmp_path))
    rc, out = run(
        capsys,
        "audit",
        "--code",
        str(tmp_path / "code.json"),
        "--partition",
        str(tmp_path / "partition.json"),
    )
    assert rc == 0
    payload = json.loads(out)
    assert payload["bound"]["satisfied"] is True
    assert payload["entropy"]["passed"] is True
    assert payload["entropy"]["slacks"]


def test_verify_remaining_properties(tmp_path, capsys):
    run(capsys, "build", "--recipe-json", '{"kind":"trivial","n":8}', "--out-dir", str(tmp_path))
    code = str(tmp_path / "code.json")
    rc, _ = run(capsys, "verify", "--code", code, "--property", "imm_function",
                "--imm", "unit", "--delta", "1")
    assert rc == 0
    rc, _ = run(capsys, "verify", "--code", code, "--property", "chs",
                "--m", "1", "--l1", "4", "--shift", "1")
    assert rc == 0
    # aligned-window property needs lg n a power of two: use n = 4
    run(capsys, "build", "--recipe-json", '{"kind":"trivial","n":4}',
        "--out-dir", str(tmp_path / "g"))
    rc, _ = run(capsys, "verify", "--code", str(tmp_path / "g" / "code.json"),
                "--property", "ghk", "--k0", "1", "--epsilon", "1", "--delta", "3/4")
    assert rc == 0


def test_search_deterministic_files(tmp_path, capsys):
    args = ["search", "--n", "3", "--sigma", "4", "--trials", "40", "--seed", "3"]
    run(capsys, *args, "--out-dir", str(tmp_path / "a"))
    run(capsys, *args, "--out-dir", str(tmp_path / "b"))
    assert (tmp_path / "a" / "search.json").read_bytes() == (
        tmp_path / "b" / "search.json"
    ).read_bytes()


def test_selftest_list_and_ablate(capsys):
    rc, out = run(capsys, "selftest", "--list")
    assert rc == 0 and out.count("criterion") == 10
    rc, out = run(capsys, "selftest", "--ablate")
    assert rc == 0 and "expected failures observed" in out


def test_text_format_rendering(capsys):
    rc, out = run(
        capsys, "--format", "text", "bound", "--formula", "eq25",
        "--params", '{"kind":"exp","delta":"1/2","n":128}',
    )
    assert rc == 0
    assert "bound_value: 1/4" in out
