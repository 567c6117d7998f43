import csv
import re
import subprocess
import sys

import pytest

from momd import harness, ingest
from momd.cli import main
from momd.errors import ConfigInvalid, MismatchedInputs
from momd.harness import ExperimentConfig, RunLog, partition_work, run_experiment
from momd.synth import SynthSpec, generate

from conftest import grid


@pytest.mark.parametrize(
    "total,workers,expected",
    [(10, 3, [3, 3, 4]), (10_000, 8, [1250] * 8), (2, 4, [0, 0, 0, 2]), (0, 2, [0, 0]), (7, 1, [7])],
)
def test_partition_examples(total, workers, expected):
    assert partition_work(total, workers) == expected


def test_partition_invalid():
    with pytest.raises(ConfigInvalid):
        partition_work(5, 0)


def test_slices_preserve_order():
    items = list(range(11))
    parts = harness.slices(items, 3)
    assert [len(p) for p in parts] == [3, 3, 5]
    assert [x for p in parts for x in p] == items


@pytest.fixture
def workspace(tmp_path):
    g = generate(SynthSpec("small_world", 400, p=0.1, rng_seed=3))
    ingest.write_compact(g, tmp_path / "g.txt")
    ingest.write_od(ingest.sample_od_pairs(g, 24, 5), tmp_path / "od.txt")
    return tmp_path


def masked(path):
    rows = list(csv.reader(open(path)))
    col = rows[0].index("time")
    return [r[:col] + r[col + 1:] for r in rows]


def test_results_identical_across_worker_counts(workspace):
    outs = {}
    for workers in (1, 3, 8):
        cfg = ExperimentConfig(
            workspace / "g.txt", workspace / "od.txt", workspace / f"w{workers}", (0.0, 150.0), workers=workers
        )
        outs[workers] = run_experiment(cfg)
    for key, path in outs[1].result_files.items():
        for workers in (3, 8):
            other = outs[workers].result_files[key]
            assert masked(path) == masked(other)
            assert harness.meta_path(path).read_text() == harness.meta_path(other).read_text()


def test_result_file_layout(workspace):
    cfg = ExperimentConfig(workspace / "g.txt", workspace / "od.txt", workspace / "out", (100.0,), limit=10)
    outcome = run_experiment(cfg)
    assert set(outcome.result_files) == {("collapse", 100.0), ("brute_force", 100.0)}
    path = outcome.result_files[("collapse", 100.0)]
    assert path.name == "collapse_r100.csv"
    rows = harness.read_results(path)
    assert len(rows) == 10
    for r in rows:
        assert r["status"] in harness.STATUS_LABELS.values()
        assert int(r["time"]) >= 0
        hops = r["path"].split("-")
        assert int(r["hops"]) == len(hops) - 1
    meta = list(csv.DictReader(open(harness.meta_path(path))))
    assert all(m["searches_executed"] == "1" for m in meta)


def test_run_log_monotone(workspace):
    cfg = ExperimentConfig(workspace / "g.txt", workspace / "od.txt", workspace / "out", (50.0, 100.0), workers=2)
    outcome = run_experiment(cfg)
    lines = outcome.log_path.read_text().splitlines()
    states = [re.search(r"state=(\w+)", ln).group(1) for ln in lines]
    progress = [int(re.search(r"progress=(\d+)/(\d+)", ln).group(1)) for ln in lines]
    assert states[0] == "Started" and states[-1] == "Finished"
    assert progress == sorted(progress)
    assert progress[-1] == 24 * 2 * 2
    order = {"Started": 0, "Running": 1, "Finished": 2}
    assert [order[s] for s in states] == sorted(order[s] for s in states)


def test_run_log_rejects_backwards_state(tmp_path):
    log = RunLog(tmp_path / "x.log", total=3)
    log.set_state(RunLog.STARTED)
    log.set_state(RunLog.RUNNING)
    with pytest.raises(ValueError):
        log.set_state(RunLog.STARTED)
    log.advance(5)
    assert log.progress == 3
    log.set_state(RunLog.FINISHED)
    with pytest.raises(ValueError):
        log.set_state(RunLog.ERROR)
    log.close()


def test_config_validation(tmp_path):
    with pytest.raises(ConfigInvalid):
        ExperimentConfig(tmp_path, tmp_path, tmp_path, (100.0,), strategy="both_ways")
    with pytest.raises(ConfigInvalid):
        ExperimentConfig(tmp_path, tmp_path, tmp_path, ())
    with pytest.raises(ConfigInvalid):
        ExperimentConfig(tmp_path, tmp_path, tmp_path, (-1.0,))


def test_analyze_tables(workspace):
    cfg = ExperimentConfig(workspace / "g.txt", workspace / "od.txt", workspace / "out", (0.0, 100.0))
    files = run_experiment(cfg).result_files
    pairs = [(r, files[("collapse", r)], files[("brute_force", r)]) for r in (100.0, 0.0)]
    rows = harness.analyze(pairs, workspace / "analysis")
    assert [r["radius"] for r in rows] == [0.0, 100.0]
    assert rows[0]["accuracy"] == 1.0 and rows[0]["max_error"] == 0.0
    assert rows[1]["brute_force_searches"] >= rows[1]["collapse_searches"] == 24
    for name in ["summary.csv", *harness.PANELS]:
        assert (workspace / "analysis" / name).exists()


def test_analyze_mismatched_inputs(workspace):
    cfg = ExperimentConfig(workspace / "g.txt", workspace / "od.txt", workspace / "a", (100.0,), limit=5)
    a = run_experiment(cfg).result_files
    cfg = ExperimentConfig(workspace / "g.txt", workspace / "od.txt", workspace / "b", (100.0,), limit=6)
    b = run_experiment(cfg).result_files
    with pytest.raises(MismatchedInputs):
        harness.summarize_pair(100.0, a[("collapse", 100.0)], b[("brute_force", 100.0)])


def test_od_pair_outside_graph(workspace):
    (workspace / "od_bad.txt").write_text("0 99999\n")
    cfg = ExperimentConfig(workspace / "g.txt", workspace / "od_bad.txt", workspace / "out", (100.0,))
    with pytest.raises(ConfigInvalid):
        run_experiment(cfg)


# ------------------------------------------------------------------- CLI


def test_cli_pipeline(tmp_path, capsys):
    osm = tmp_path / "city.osm"
    osm.write_text(
        '<osm><node id="1" lat="0" lon="0"/><node id="2" lat="0" lon="0.001"/>'
        '<node id="3" lat="0.001" lon="0.001"/><node id="7" lat="1" lon="1"/><node id="8" lat="1" lon="1.001"/>'
        '<way id="1"><nd ref="1"/><nd ref="2"/><nd ref="3"/><tag k="highway" v="primary"/></way>'
        '<way id="2"><nd ref="7"/><nd ref="8"/><tag k="highway" v="primary"/></way></osm>'
    )
    assert main(["ingest", str(osm), str(tmp_path / "raw.txt")]) == 0
    assert main(["clean", str(tmp_path / "raw.txt"), str(tmp_path / "g.txt")]) == 0
    assert ingest.read_compact(tmp_path / "g.txt").n_vertices == 3
    assert (tmp_path / "g.txt.idmap").read_text().split() == ["0", "1", "1", "2", "2", "3"]
    assert main(["sample-od", str(tmp_path / "g.txt"), "5", "1", str(tmp_path / "od.txt")]) == 0
    assert main(["run", str(tmp_path / "g.txt"), str(tmp_path / "od.txt"), "--radii", "0,50", "--out", str(tmp_path / "res")]) == 0
    assert main(["analyze", str(tmp_path / "res"), str(tmp_path / "res"), "--out", str(tmp_path / "an")]) == 0
    assert (tmp_path / "an" / "summary.csv").exists()
    assert main(["profile", str(tmp_path / "g.txt")]) == 0
    out = capsys.readouterr().out
    assert "name,n,m,entropy" in out


def test_cli_gen(tmp_path):
    assert main(["gen", "scale_free", "100", "2", str(tmp_path / "sf.txt")]) == 0
    assert ingest.read_compact(tmp_path / "sf.txt").n_vertices == 100


def test_cli_exit_codes(tmp_path):
    assert main(["gen", "small_world", "100", "1", str(tmp_path / "x.txt"), "--p", "3"]) == 1
    with pytest.raises(SystemExit) as exc:
        main(["run"])
    assert exc.value.code == 1
    assert main(["clean", str(tmp_path / "missing.txt"), str(tmp_path / "o.txt")]) == 2
    (tmp_path / "bad.txt").write_text("9 9 planar\n")
    assert main(["profile", str(tmp_path / "bad.txt")]) == 2
    (tmp_path / "bad.osm").write_text("<osm><node")
    assert main(["ingest", str(tmp_path / "bad.osm"), str(tmp_path / "o.txt")]) == 2


def test_console_script_entry_point(tmp_path):
    ingest.write_compact(grid(3), tmp_path / "g.txt")
    proc = subprocess.run(
        [sys.executable, "-m", "momd.cli", "profile", str(tmp_path / "g.txt")], capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0].startswith("name,n,m")
