import json

import pytest
from click.testing import CliRunner

from tentlab.cli import main, read_config

from conftest import GOLDEN


def run(*args):
    res = CliRunner().invoke(main, list(args), catch_exceptions=False)
    return res


def test_kneading_json():
    res = run("--json", "--depth", "9", "kneading")
    env = json.loads(res.output)
    assert env["schema"] == "tentlab/1"
    assert env["result"] == {"lambda": GOLDEN, "depth": 9, "word": "101101101", "epsilon": 1, "ambiguous": False}
    assert "workers" not in env["config_echo"]


def test_height_and_classify_text():
    assert run("height").output.strip() == "height 1/3 (EndpointMinus, exact)"
    assert run("classify").output.startswith("RationalEndpointMinus")
    assert run("--lambda", "1.9", "height").output.startswith("height 1/4")


def test_sweep_csv(tmp_path):
    out = tmp_path / "h.csv"
    res = run("sweep", "--from", "1.5", "--to", "1.6", "--steps", "3", "--out", str(out))
    assert res.exit_code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "lambda,kind,m,n,height,bracket_lo,bracket_hi,type"
    assert lines[1].startswith("1.5000000000,Rational,3,7,")


def test_fiber_json():
    env = json.loads(run("--json", "--depth", "12", "fiber", "--x", "0.61").output)
    res = env["result"]
    assert len(res["threads"]) == 377
    assert res["extremes"]["lower"]["word"] == res["threads"][0]["word"]
    assert res["extremes"]["upper"]["word"] == res["threads"][-1]["word"]
    assert len(res["consecutive_pairs"]) == 7


def test_arc_and_density():
    assert run("arc", "--x", "0.61").output.startswith("377 threads, 7 identified pairs")
    out = run("density", "--markov", "--rows", "2").output.splitlines()
    assert out[0] == "x,phi" and len(out) == 3


def test_chart_and_streamline(tmp_path):
    out = tmp_path / "patch.csv"
    run("chart", "--K", "0.62,0.66", "--samples", "3", "--out", str(out))
    assert out.read_text().startswith("x,word,psi\n")
    svg = tmp_path / "s.svg"
    res = run("--depth", "12", "streamline", "--seed-x", "0.61", "--branch-word", "011011011011", "--steps", "3",
              "--svg", str(svg))
    assert res.exit_code == 0 and svg.read_text().startswith("<svg")


def test_verify_exit_codes():
    assert run("verify", "preimages").exit_code == 0
    res = CliRunner().invoke(main, ["verify", "nope"])
    assert res.exit_code == 2


def test_domain_errors_exit_2():
    res = CliRunner().invoke(main, ["--lambda", "2.5", "height"])
    assert res.exit_code == 2 and "DomainError" in res.output


def test_config_file(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment\nlambda = 1.62\ndepth = 5\n")
    assert read_config(str(cfg)) == {"lambda": "1.62", "depth": "5"}
    env = json.loads(run("--config", str(cfg), "--depth", "7", "--json", "kneading").output)
    assert env["config_echo"]["lambda"] == "1.62"
    assert env["result"]["depth"] == 7
    bad = tmp_path / "bad.cfg"
    bad.write_text("colour = blue\n")
    assert CliRunner().invoke(main, ["--config", str(bad), "kneading"]).exit_code != 0


@pytest.mark.parametrize("kind", ["tentgraph", "outsidegraph", "fiberarc", "chart", "streamlines"])
def test_render(tmp_path, kind):
    out = tmp_path / f"{kind}.svg"
    res = run("render", kind, "--out", str(out))
    assert res.exit_code == 0
    text = out.read_text()
    assert text.startswith("<svg") and text.rstrip().endswith("</svg>")


def test_render_staircase(tmp_path):
    out = tmp_path / "stairs.svg"
    run("render", "staircase", "--steps", "20", "--out", str(out))
    assert out.exists() and (tmp_path / "stairs.csv").read_text().startswith("lambda,")
