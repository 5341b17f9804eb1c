import numpy as np
import pytest

from keyvol.cli import main
from keyvol.io import read_report, write_embeddings
from keyvol.synthetic import clustered_stream, random_stream


@pytest.fixture
def mxif(tmp_path):
    path = tmp_path / "v.mxif"
    write_embeddings(random_stream(128, 64, seed=0), path)
    return str(path)


class TestSelect:
    def test_basic_select(self, mxif, tmp_path, capsys):
        out = tmp_path / "report.json"
        rc = main(["select", "--embeddings", mxif, "--rank", "8",
                   "--tol", "0.3", "--min", "1", "--max", "64",
                   "--mode", "fast", "--out", str(out)])
        assert rc == 0
        report = read_report(out)
        idx = report["selected_indices"]
        assert 1 <= len(idx) <= 64
        lines = capsys.readouterr().out.strip().splitlines()
        assert [int(x) for x in lines] == idx

    def test_chunked_covers_every_chunk(self, tmp_path, capsys):
        path = tmp_path / "v.mxif"
        write_embeddings(random_stream(512, 64, seed=1), path)
        out = tmp_path / "r.json"
        rc = main(["select", "--embeddings", str(path), "--mode", "chunked",
                   "--chunks", "32", "--out", str(out)])
        assert rc == 0
        report = read_report(out)
        for lo, hi in report["chunk_bounds"]:
            assert any(lo <= i < hi for i in report["selected_indices"])

    def test_missing_file_exits_3_no_partial_output(self, tmp_path, capsys):
        out = tmp_path / "r.json"
        rc = main(["select", "--embeddings", str(tmp_path / "nope.mxif"),
                   "--out", str(out)])
        assert rc == 3
        assert not out.exists()
        assert capsys.readouterr().out == ""

    def test_bad_format_exits_3(self, tmp_path):
        path = tmp_path / "bad.mxif"
        path.write_bytes(b"XXXX" + b"\0" * 20)
        assert main(["select", "--embeddings", str(path)]) == 3

    def test_numerical_error_exits_4(self, mxif):
        # max_out larger than the frame count
        assert main(["select", "--embeddings", mxif, "--max", "999"]) == 4

    def test_usage_error_exits_2(self):
        assert main(["select"]) == 2
        assert main(["frobnicate"]) == 2

    def test_canonical_reports_byte_identical(self, mxif, tmp_path):
        outs = []
        for name in ("a.json", "b.json"):
            out = tmp_path / name
            rc = main(["select", "--embeddings", mxif, "--canonical",
                       "--out", str(out)])
            assert rc == 0
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]

    def test_csv_input(self, tmp_path, capsys):
        path = tmp_path / "v.csv"
        q = random_stream(16, 8, seed=2)
        with open(path, "w") as fh:
            for row in q:
                fh.write(",".join(repr(float(v)) for v in row) + "\n")
        rc = main(["select", "--embeddings", str(path), "--max", "8"])
        assert rc == 0


class TestCompare:
    def test_compare_writes_report_csv_and_figures(self, tmp_path, capsys):
        q, _ = clustered_stream([16] * 4, 32, seed=3)
        path = tmp_path / "v.mxif"
        write_embeddings(q, path)
        out = tmp_path / "cmp.json"
        rc = main(["compare", "--embeddings", str(path), "--max", "8",
                   "--out", str(out), "--plot"])
        assert rc == 0
        report = read_report(out)
        assert set(report["strategies"]) == {
            "uniform", "threshold", "volume",
            "threshold_then_volume", "volume_then_threshold",
        }
        assert (tmp_path / "cmp.csv").exists()
        assert (tmp_path / "cmp_cosine.png").exists()
        assert (tmp_path / "cmp_timeline.png").exists()

    def test_compare_with_query(self, tmp_path):
        rng = np.random.default_rng(4)
        path = tmp_path / "v.mxif"
        write_embeddings(rng.standard_normal((32, 16)), path)
        qpath = tmp_path / "q.mxif"
        write_embeddings(rng.standard_normal((1, 16)), qpath)
        out = tmp_path / "cmp.json"
        rc = main(["compare", "--embeddings", str(path), "--max", "8",
                   "--query", str(qpath), "--out", str(out)])
        assert rc == 0
        report = read_report(out)
        assert "clip_score" in report["strategies"]["volume"]


class TestStats:
    def test_orthonormal_input_single_bin_at_zero(self, tmp_path, capsys):
        path = tmp_path / "v.mxif"
        write_embeddings(np.eye(8), path)
        out = tmp_path / "stats.json"
        rc = main(["stats", "--embeddings", str(path), "--out", str(out)])
        assert rc == 0
        report = read_report(out)
        counts = np.array(report["counts"])
        edges = np.array(report["bin_edges"])
        nz = np.flatnonzero(counts)
        assert len(nz) == 1
        assert edges[nz[0]] <= 0.0 <= edges[nz[0] + 1]
        assert counts[nz[0]] == 7

    def test_constant_input_single_bin_at_one(self, tmp_path):
        path = tmp_path / "v.mxif"
        write_embeddings(np.tile([1.0, 2.0], (10, 1)), path)
        out = tmp_path / "stats.json"
        assert main(["stats", "--embeddings", str(path), "--out", str(out)]) == 0
        report = read_report(out)
        counts = np.array(report["counts"])
        nz = np.flatnonzero(counts)
        assert len(nz) == 1 and nz[0] == len(counts) - 1
        assert counts[nz[0]] == 9

    def test_histogram_matches_oracle(self, tmp_path):
        q = random_stream(64, 8, seed=5)
        path = tmp_path / "v.mxif"
        write_embeddings(q, path)
        out = tmp_path / "stats.json"
        assert main(["stats", "--embeddings", str(path), "--out", str(out)]) == 0
        report = read_report(out)
        # independent oracle: normalize and bin directly
        loaded = q.astype(np.float32).astype(np.float64)
        e = loaded / np.linalg.norm(loaded, axis=1)[:, None]
        cosines = np.sum(e[:-1] * e[1:], axis=1)
        counts, _ = np.histogram(cosines, bins=40, range=(-1, 1))
        assert report["counts"] == counts.tolist()


class TestBench:
    def test_bench_runs_and_reports(self, tmp_path, capsys):
        out = tmp_path / "bench.json"
        rc = main(["bench", "--repeats", "2", "--out", str(out), "--plot"])
        assert rc == 0
        report = read_report(out)
        cases = {r["case"] for r in report["cases"]}
        assert cases == {"128x768", "256x768", "512x768", "chunked_32x32"}
        assert (tmp_path / "bench.csv").exists()
        assert (tmp_path / "bench_times.png").exists()
