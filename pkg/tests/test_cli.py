import json

import numpy as np
import pytest

from asdplanner import cli
from asdplanner.inference import KIND_RISKMAP2, random_weights, save_weights
from asdplanner.riskmap import RiskMap, load_map, save_map


@pytest.fixture
def fig2_path(tmp_path, fig2_map):
    p = tmp_path / "fig2.riskmap"
    save_map(fig2_map, p)
    return str(p)


class TestGenMaps:
    def test_writes_and_reloads(self, tmp_path):
        out = tmp_path / "maps"
        rc = cli.main(["gen-maps", "--size", "16", "--count", "3",
                       "--seed", "7", "--out-dir", str(out)])
        assert rc == 0
        files = sorted(out.iterdir())
        assert [f.name for f in files] == ["map_0.riskmap", "map_1.riskmap",
                                           "map_2.riskmap"]
        for f in files:
            load_map(f)

    def test_rerun_byte_identical(self, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        for out in (a, b):
            cli.main(["gen-maps", "--size", "8", "--count", "2",
                      "--seed", "5", "--out-dir", str(out)])
        assert (a / "map_0.riskmap").read_bytes() == (b / "map_0.riskmap").read_bytes()

    def test_usage_error_on_zero_size(self, tmp_path):
        with pytest.raises(SystemExit) as exc:
            cli.main(["gen-maps", "--size", "0", "--count", "1",
                      "--out-dir", str(tmp_path)])
        assert exc.value.code == cli.EXIT_USAGE


class TestSolve:
    def test_fig2(self, fig2_path, capsys):
        rc = cli.main(["solve", "--map", fig2_path, "--start", "1,0",
                       "--dest", "0,1"])
        assert rc == 0
        out = capsys.readouterr().out
        assert "path_length: 2" in out
        assert "0.9025" in out

    def test_start_equals_dest(self, fig2_path, capsys):
        rc = cli.main(["solve", "--map", fig2_path, "--start", "1,1",
                       "--dest", "1,1"])
        assert rc == 0
        assert "path_length: 0" in capsys.readouterr().out

    def test_nopath_exit_code(self, tmp_path, capsys):
        m = RiskMap(1, 2, np.array([[0.0], [0.2]]))
        p = tmp_path / "m.riskmap"
        save_map(m, p)
        rc = cli.main(["solve", "--map", str(p), "--start", "0,0",
                       "--dest", "0,1"])
        assert rc == cli.EXIT_NOPATH

    def test_oracle_explores_no_more_than_manhattan(self, fig2_path, capsys):
        def nodes(heuristic):
            cli.main(["solve", "--map", fig2_path, "--start", "1,0",
                      "--dest", "0,1", "--heuristic", heuristic])
            out = capsys.readouterr().out
            return int(next(l for l in out.splitlines()
                            if l.startswith("nodes_explored")).split()[1])
        assert nodes("oracle") <= nodes("manhattan")

    def test_missing_map_is_io_error(self, tmp_path):
        rc = cli.main(["solve", "--map", str(tmp_path / "nope"),
                       "--start", "0,0", "--dest", "1,1"])
        assert rc == cli.EXIT_IO

    def test_bad_map_is_format_error(self, tmp_path):
        p = tmp_path / "junk.riskmap"
        p.write_text("not a map\n")
        rc = cli.main(["solve", "--map", str(p), "--start", "0,0",
                       "--dest", "1,1"])
        assert rc == cli.EXIT_FORMAT


class TestGenDataset:
    def test_deterministic_and_reports(self, tmp_path, capsys):
        a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        for out in (a, b):
            rc = cli.main(["gen-dataset", "--kind", "state", "--size", "8",
                           "--count", "10", "--seed", "2", "--out", str(out)])
            assert rc == 0
            assert "written: 10" in capsys.readouterr().out
        assert a.read_bytes() == b.read_bytes()

    def test_file_schema(self, tmp_path):
        out = tmp_path / "d.jsonl"
        cli.main(["gen-dataset", "--kind", "riskmap2", "--size", "8",
                  "--count", "5", "--seed", "3", "--out", str(out)])
        lines = out.read_text().splitlines()
        header = json.loads(lines[0])
        assert header["format"] == "asdplanner-dataset"
        for line in lines[1:]:
            obj = json.loads(line)
            assert set(obj) == {"risk", "start", "dest", "h"}
            assert len(obj["risk"]) == 64 and len(obj["h"]) == 64


class TestBenchmark:
    def test_spl_line_and_reproducible_report(self, tmp_path, capsys):
        reports = []
        for name in ("r1.json", "r2.json"):
            p = tmp_path / name
            rc = cli.main(["benchmark", "--size", "8", "--maps", "4",
                           "--tasks", "12", "--seed", "4", "--heuristics",
                           "manhattan", "--report", str(p), "--format",
                           "json", "--jobs", "1"])
            assert rc == 0
            assert "SPL=100.00%" in capsys.readouterr().out
            reports.append(json.loads(p.read_text()))
        a, b = reports
        assert [r["nodes_explored"] for r in a["records"]] == \
            [r["nodes_explored"] for r in b["records"]]

    def test_parallel_matches_serial(self, tmp_path):
        outs = []
        for jobs in ("1", "2"):
            p = tmp_path / f"r{jobs}.json"
            cli.main(["benchmark", "--size", "8", "--maps", "3", "--tasks",
                      "8", "--seed", "6", "--heuristics", "manhattan", "zero",
                      "--report", str(p), "--format", "json", "--jobs", jobs])
            payload = json.loads(p.read_text())
            outs.append([(r["task_id"], r["heuristic"], r["nodes_explored"],
                          r["found_length"]) for r in payload["records"]])
        assert outs[0] == outs[1]


class TestDownscale:
    def test_constant_map(self, tmp_path):
        m = RiskMap(8, 8, np.full((8, 8), 0.3))
        src, dst = tmp_path / "in.riskmap", tmp_path / "out.riskmap"
        save_map(m, src)
        rc = cli.main(["downscale", "--in", str(src), "--out", str(dst),
                       "--factor", "4"])
        assert rc == 0
        out = load_map(dst)
        assert out.width == out.height == 2
        assert np.allclose(out.risk, 0.3)

    def test_non_divisible_dims(self, tmp_path):
        m = RiskMap(6, 6, np.zeros((6, 6)))
        src = tmp_path / "in.riskmap"
        save_map(m, src)
        rc = cli.main(["downscale", "--in", str(src),
                       "--out", str(tmp_path / "o"), "--factor", "4"])
        assert rc == cli.EXIT_USAGE


def test_config_file_supplies_defaults(tmp_path, capsys):
    cfg = tmp_path / "cfg"
    cfg.write_text("# defaults\nseed=9\n")
    out = tmp_path / "maps"
    rc = cli.main(["--config", str(cfg), "gen-maps", "--size", "8",
                   "--count", "1", "--seed", "9", "--out-dir", str(out)])
    assert rc == 0


def test_weights_heuristic_spec(tmp_path, capsys):
    m_path = tmp_path / "m.riskmap"
    from asdplanner.riskmap import generate_random_map
    m = generate_random_map(8, 8, seed=1)
    save_map(m, m_path)
    w_path = tmp_path / "w.bin"
    save_weights(random_weights(KIND_RISKMAP2, map_size=8, seed=1), w_path)
    rc = cli.main(["solve", "--map", str(m_path), "--start", "0,0",
                   "--dest", "0,0", "--heuristic", f"riskmap2:{w_path}"])
    assert rc == 0
