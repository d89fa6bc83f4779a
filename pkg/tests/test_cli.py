import json
import xml.etree.ElementTree as ET
from pathlib import Path

import pytest

from meek import config, series, svg
from meek.cli import main

DATA = Path(__file__).parent / "data"
LOSS_SCORE = "model,loss,score\n" + "".join(
    f"m{i},{1.8 + 0.05 * i!r},{0.8 - 0.5 / (1 + 2.718281828 ** (-8 * (1.8 + 0.05 * i - 2.2)))!r}\n"
    for i in range(20))


def run(capsys, *argv):
    code = main(list(argv))
    cap = capsys.readouterr()
    return code, cap.out, cap.err


@pytest.fixture
def loss_csv(tmp_path):
    p = tmp_path / "loss.csv"
    p.write_text(LOSS_SCORE)
    return str(p)


COMMANDS = [
    ("trajectory",),
    ("trajectory", "--gi-sweep", "2,3.6,5"),
    ("trajectory", "--capital-sweep", "1e4,1e6"),
    ("trajectory", "--stagnate-after", "5"),
    ("inflection",),
    ("inflection", "--alpha", "0.057"),
    ("inference",),
    ("benchmark", "--p", "1,2,5"),
    ("sprt", "--delta-l", "0.8"),
    ("sprt", "--delta-l", "0.5", "--monte-carlo", "200", "--seed", "3"),
    ("sprt", "--series"),
    ("empirical", str(DATA / "leaderboard_10.csv")),
    ("empirical", str(DATA / "leaderboard_10.csv"), "--param-threshold", "7e9", "--bucket", "quarterly"),
]


@pytest.mark.parametrize("argv", COMMANDS, ids=lambda a: " ".join(a)[:40])
@pytest.mark.parametrize("fmt", ["csv", "json"])
def test_commands_deterministic(capsys, argv, fmt):
    first = run(capsys, *argv, "--format", fmt)
    second = run(capsys, *argv, "--format", fmt)
    assert first[0] == 0, first[2]
    assert first[1] and first[1] == second[1]


def test_fit_sigmoid(capsys, loss_csv):
    code, out, _ = run(capsys, "fit-sigmoid", loss_csv, "--format", "json")
    assert code == 0
    fit = json.loads(out)
    assert fit["x0"] == pytest.approx(2.2, rel=1e-6)
    assert fit["amplitude"] + fit["b"] == pytest.approx(0.8, rel=1e-6)


def test_fit_feeds_benchmark(capsys, loss_csv, tmp_path):
    fit = tmp_path / "fit.json"
    assert main(["fit-sigmoid", loss_csv, "--format", "json", "--out", str(fit)]) == 0
    code, out, _ = run(capsys, "benchmark", "--fit", str(fit), "--p", "2")
    assert code == 0 and out.startswith("t,p,gap\n")


def test_trajectory_csv_roundtrip(capsys):
    _, out, _ = run(capsys, "trajectory", "--step", "0.5")
    recs = series.from_csv(out)
    assert len(recs) == 41 and recs[0]["delta"] == 0.0
    assert series.to_csv(recs) == out


def test_json_roundtrip(capsys):
    _, out, _ = run(capsys, "sprt", "--series", "--format", "json")
    recs = series.from_json(out)
    assert recs[0]["expected_tokens"] == float("inf")
    assert series.to_json(recs) == out


def test_inflection_values(capsys):
    _, out, err = run(capsys, "inflection", "--format", "json")
    (rec,) = json.loads(out)
    assert rec["inflection_time"] == pytest.approx(3.3372307264539037, rel=1e-14)
    assert abs(rec["numeric_peak_time"] - rec["inflection_time"]) < 1e-6
    assert "3.337 years" in err


def test_inference_reports_crossover(capsys):
    _, _, err = run(capsys, "inference")
    assert "crossover: 0.432304 years" in err


def test_sweep_files(tmp_path, capsys):
    out = tmp_path / "traj.csv"
    assert main(["trajectory", "--gi-sweep", "2,5", "--out", str(out)]) == 0
    names = sorted(p.name for p in tmp_path.iterdir())
    assert names == ["traj_g_i-2.0.csv", "traj_g_i-5.0.csv"]


def test_plot(tmp_path, capsys):
    plot = tmp_path / "delta.svg"
    assert main(["trajectory", "--plot", str(plot)]) == 0
    root = ET.fromstring(plot.read_text())
    assert root.tag.endswith("svg")
    assert root.iter("{http://www.w3.org/2000/svg}polyline")


def test_plot_without_series(tmp_path, capsys):
    code, _, err = run(capsys, "inflection", "--plot", str(tmp_path / "x.svg"))
    assert code == 2 and "series" in err


@pytest.mark.parametrize("argv,code", [
    (("trajectory", "--preset", "nope"), 2),
    (("sprt",), 2),
    (("sprt", "--delta-l", "0.5", "--alpha", "0.7"), 2),
    (("inflection", "--alpha", "0"), 2),
    (("trajectory", "--horizon", "-1"), 2),
    (("empirical", "/does/not/exist.csv"), 3),
    (("trajectory", "--gi-sweep", "2", "--capital-sweep", "1"), 2),
])
def test_exit_codes(capsys, argv, code):
    assert run(capsys, *argv)[0] == code


def test_bad_leaderboard_rows(tmp_path, capsys):
    p = tmp_path / "lb.csv"
    p.write_text("name,date,price_usd_per_mtok,score\na,2024-01-01,0,0.5\nb,2024-02-01,1,0.5\n")
    code, _, err = run(capsys, "empirical", str(p))
    assert code == 3 and "line 2" in err
    assert run(capsys, "empirical", str(p), "--lenient")[0] == 0


def test_bad_fit_input(tmp_path, capsys):
    p = tmp_path / "few.csv"
    p.write_text("model,loss,score\na,2.0,0.5\nb,2.1,0.4\n")
    assert run(capsys, "fit-sigmoid", str(p))[0] == 3


def test_empty_band_warns(capsys):
    code, _, err = run(capsys, "empirical", str(DATA / "leaderboard_10.csv"), "--band", "100:200")
    assert code == 0 and "warning" in err


# --- config -------------------------------------------------------------------

def test_presets_available():
    assert {"defaults", "invest-3.6x", "pre-chinchilla", "stagnation-5y"} <= set(config.available_presets())


def test_preset_values():
    rc = config.load()
    assert rc.scenario.rates.g_i == pytest.approx(5 / 1.4)
    assert config.load("invest-3.6x").scenario.rates.g_i == 3.6
    assert config.load("pre-chinchilla").scenario.law.alpha == 0.057
    sched = config.load("stagnation-5y").scenario.schedule
    assert sched.multiplier(10.0) == pytest.approx(sched.multiplier(5.0))


def test_env_preset_dir(tmp_path, monkeypatch, capsys):
    (tmp_path / "mine.yaml").write_text("extends: defaults\nrates:\n  g_i: 2.0\n")
    monkeypatch.setenv("MEEK_PRESET_DIR", str(tmp_path))
    assert "mine" in config.available_presets()
    assert config.load("mine").scenario.rates.g_i == 2.0
    code, out, _ = run(capsys, "inflection", "--preset", "mine", "--format", "json")
    assert code == 0 and json.loads(out)[0]["g_i"] == 2.0


def test_preset_cycle(tmp_path, monkeypatch):
    (tmp_path / "a.yaml").write_text("extends: b\n")
    (tmp_path / "b.yaml").write_text("extends: a\n")
    monkeypatch.setenv("MEEK_PRESET_DIR", str(tmp_path))
    with pytest.raises(config.ConfigError, match="cycle"):
        config.load("a")


def test_config_file_layers(tmp_path, capsys):
    p = tmp_path / "c.yaml"
    p.write_text("law:\n  alpha: 0.057\noutput:\n  format: json\n")
    rc = config.load(path=p, overrides={"scenario": {"horizon": 40.0}})
    assert rc.scenario.law.alpha == 0.057 and rc.scenario.horizon == 40.0 and rc.format == "json"
    code, out, _ = run(capsys, "inflection", "--config", str(p))
    assert code == 0 and json.loads(out)[0]["inflection_time"] == pytest.approx(9.0749256596552, rel=1e-12)


@pytest.mark.parametrize("text,msg", [
    ("law:\n  alpha: fast\n", "law.alpha"),
    ("rates:\n  g_x: 1\n", "rates.g_x"),
    ("bogus: {}\n", "bogus"),
    ("output:\n  format: xml\n", "output.format"),
    ("law:\n  alpha: 2\n", "law"),
    ("scenario:\n  schedule: [[1, -2]]\n", "scenario.schedule"),
    ("sprt:\n  slowdown: true\n", "sprt.slowdown"),
    (": : :\n", "invalid YAML"),
])
def test_config_errors(tmp_path, text, msg):
    p = tmp_path / "bad.yaml"
    p.write_text(text)
    with pytest.raises(config.ConfigError, match=msg):
        config.load(path=p)


def test_missing_config_file(capsys):
    code, _, err = run(capsys, "trajectory", "--config", "/nope.yaml")
    assert code == 2 and "not found" in err


# --- series and svg ----------------------------------------------------------------

def test_series_fixpoint():
    recs = [{"t": 0.1, "x": 1e-300, "flag": True, "name": "a", "none": None, "n": 3}]
    text = series.to_csv(recs)
    assert series.to_csv(series.from_csv(text)) == text
    assert series.from_csv(text) == recs
    assert series.from_json(series.to_json(recs)) == recs
    with pytest.raises(ValueError):
        series.dump(recs, "xml")


def test_svg_handles_nonfinite():
    doc = svg.line_chart({"a": [(0, 1), (1, float("inf")), (2, 3)], "b": [(0, -1), (2, 2)]},
                         title="t", logy=True)
    root = ET.fromstring(doc)
    texts = [e.text for e in root.iter("{http://www.w3.org/2000/svg}text")]
    assert "t" in texts and "a" in texts and "b" in texts
