import os
import subprocess

import pytest

BIN = os.environ.get("PROJLAB_BIN", "projlab")


def run(*args, env=None, cwd=None):
    full_env = dict(os.environ)
    full_env.pop("PROJLAB_CAP", None)
    full_env.update(env or {})
    return subprocess.run([BIN, *args], capture_output=True, text=True, env=full_env, cwd=cwd, timeout=300)


def test_help_exits_zero():
    r = run("--help")
    assert r.returncode == 0
    assert "verify" in r.stdout


@pytest.mark.parametrize(
    "args",
    [
        [],
        ["nosuch"],
        ["verify"],
        ["sweep", "--directions", "abc"],
        ["sweep", "--construction", "nosuch"],
        ["sweep", "--kmin", "5", "--kmax", "2"],
        ["bounds", "eval", "--formula", "nosuch", "--gamma", "1"],
        ["bounds", "eval", "--formula", "pss"],
        ["construct", "--construction", "setE", "--t", "x"],
        ["--config", "/nonexistent/projlab.ini", "bounds", "eval"],
    ],
)
def test_config_errors_exit_two(args):
    assert run(*args).returncode == 2


def test_bounds_eval_example():
    r = run("bounds", "eval", "--formula", "estimate1", "--gamma", "1", "--sigma", "0.5")
    assert r.returncode == 0
    assert r.stdout == "formula,params,value\nestimate1,gamma=1;sigma=0.5,0.5\n"


def test_bounds_error_writes_no_partial_csv():
    r = run("bounds", "eval", "--formula", "pss")
    assert r.returncode == 2 and r.stdout == ""


def test_verify_grid_passes():
    r = run("verify", "grid", "--pmax", "5", "--qmax", "5", "--nmax", "64")
    assert r.returncode == 0
    assert " 0 violations" in r.stdout


def test_verify_line_intersect():
    r = run("verify", "line-intersect", "--n", "3", "--d", "3")
    assert r.returncode == 0
    assert "every meeting line hits S_n^+ in 6 points" in r.stdout


def test_verify_bigex_depth_two_fails_with_witnesses():
    r = run("verify", "bigex", "--depth", "2")
    assert r.returncode == 1
    assert "witness:" in r.stdout and "FAILED" in r.stdout


def test_verify_suites_pass():
    for args in (["setE"], ["product", "--unions", "20"], ["incidence", "--grid-max", "6", "--random-sets", "10"]):
        r = run("verify", *args)
        assert r.returncode == 0, r.stdout + r.stderr


def test_witness_csv_header(tmp_path):
    w = tmp_path / "w.csv"
    r = run("verify", "incidence", "--grid-max", "4", "--random-sets", "0", "--witness", str(w))
    assert r.returncode == 0
    assert w.read_text().startswith("a,b,cardinality\n")


def test_construct_generation_format():
    r = run("construct", "--construction", "block-b", "--n", "2", "--d", "3")
    assert r.returncode == 0
    lines = r.stdout.splitlines()
    assert lines[0] == "#balls 0 1/64"
    assert lines[-1] == "#arcs 0"
    centers = lines[1:-1]
    assert len(centers) == 2**3 * 4
    assert all(len(line.split()) == 2 for line in centers)


def test_construct_setE_arcs_format():
    r = run("construct", "--construction", "setE", "--t", "1/2")
    assert r.returncode == 0
    lines = r.stdout.splitlines()
    assert lines[0] == "#arcs 0"
    assert lines.count("#arcs 1") == 1
    assert all(len(line.split()) == 3 for line in lines if not line.startswith("#"))


def test_sweep_is_deterministic_across_threads():
    args = ["sweep", "--construction", "random", "--n", "300", "--seed", "7", "--directions", "5", "--kmax", "6"]
    a = run("--threads", "1", *args)
    b = run("--threads", "3", *args)
    assert a.returncode == b.returncode == 0
    assert a.stdout == b.stdout
    assert a.stdout.startswith("direction_index,delta_index,ex,ey,delta,N,P\n")
    c = run(*args[:-6], "--seed", "8", *args[-4:])
    assert c.stdout != a.stdout


def test_energy_csv_and_determinism():
    args = ["energy", "--n", "150", "--delta", "0.0625", "--seed", "3"]
    a, b = run(*args), run("--threads", "2", *args)
    assert a.returncode == 0
    assert a.stdout == b.stdout
    assert a.stdout.startswith("direction_index,ex,ey,occupied_tubes,energy,cs_lower\n")


def test_dimest_profile_roundtrip(tmp_path):
    prof = tmp_path / "p.csv"
    r = run("dimest", "--construction", "grid", "--n", "32", "--kmin", "1", "--kmax", "4", "-o", str(prof))
    assert r.returncode == 0
    assert prof.read_text().startswith("delta,N,P\n")
    assert "slope" in r.stderr
    again = run("dimest", "--profile", str(prof))
    assert again.returncode == 0
    assert again.stdout == prof.read_text()


def test_config_file_and_flag_override(tmp_path):
    cfg = tmp_path / "c.ini"
    cfg.write_text("[bounds.eval]\nformula = pss\ngamma = 0.5\n")
    r = run("--config", str(cfg), "bounds", "eval")
    assert r.stdout == "formula,params,value\npss,gamma=0.5,0.5\n"
    r = run("--config", str(cfg), "bounds", "eval", "--gamma", "0.9")
    assert r.stdout == "formula,params,value\npss,gamma=0.9,0.9\n"


def test_env_cap(tmp_path):
    args = ["construct", "--construction", "block-b", "--n", "3", "--d", "3"]
    r = run(*args, env={"PROJLAB_CAP": "10"})
    assert r.returncode == 2 and "cap" in r.stderr
    # the flag wins over the environment
    assert run("--cap", "100000", *args, env={"PROJLAB_CAP": "10"}).returncode == 0
    # the environment wins over the config file
    cfg = tmp_path / "c.ini"
    cfg.write_text("cap = 100000\n")
    assert run("--config", str(cfg), *args, env={"PROJLAB_CAP": "10"}).returncode == 2
    assert run("--config", str(cfg), *args).returncode == 0
    assert run(*args, env={"PROJLAB_CAP": "ten"}).returncode == 2


def test_svg_is_flag_gated_and_embeds_data(tmp_path):
    svg = tmp_path / "s.svg"
    args = ["sweep", "--construction", "block-u", "--n", "3", "--directions", "2", "--kmax", "4"]
    r = run(*args, cwd=tmp_path)
    assert r.returncode == 0 and not list(tmp_path.glob("*.svg"))
    r = run(*args, "--svg", str(svg))
    assert r.returncode == 0
    text = svg.read_text()
    assert text.lstrip().startswith("<?xml") and "</svg>" in text
    expected = set()
    for line in r.stdout.splitlines()[1:]:
        d, _, _, _, delta, n, _ = line.split(",")
        expected.add(f"<!-- direction {d},{1 / float(delta):g},{n} -->")
    embedded = {line for line in text.splitlines() if line.startswith("<!-- direction ")}
    assert embedded == expected
