import json

import numpy as np

from dtnn.cli import run
from dtnn.io_formats import read_mask, read_report, read_tensor, write_tensor


def _pipeline_paths(tmp_path):
    return {
        "tensor": str(tmp_path / "x.tns3"),
        "dict": str(tmp_path / "d.tns3"),
        "z": str(tmp_path / "z.tns3"),
        "mask": str(tmp_path / "mask.msk3"),
        "rec": str(tmp_path / "rec.tns3"),
        "report": str(tmp_path / "complete.json"),
        "eval": str(tmp_path / "eval.json"),
        "eval_obs": str(tmp_path / "eval_obs.json"),
        "observed": str(tmp_path / "observed.tns3"),
    }


def test_full_pipeline_improves_psnr(tmp_path):
    p = _pipeline_paths(tmp_path)
    assert run(["synth", "--dims", "20x20x10", "--d", "5", "--rank", "2", "--seed", "0",
                "--out-tensor", p["tensor"], "--out-dict", p["dict"], "--out-z", p["z"]]) == 0
    assert run(["mask", "--dims", "20x20x10", "--sr", "0.5", "--seed", "0", "--out", p["mask"]]) == 0
    assert run(["complete", "--method", "dtnn", "--tensor", p["tensor"], "--mask", p["mask"],
                "--d", "5", "--seed", "0", "--out", p["rec"], "--report", p["report"]]) == 0

    gt = read_tensor(p["tensor"])
    mask = read_mask(p["mask"])
    write_tensor(p["observed"], np.where(mask, gt, 0.0))
    peak = str(float(np.abs(gt).max()))
    assert run(["evaluate", "--gt", p["tensor"], "--rec", p["rec"],
                "--peak", peak, "--report", p["eval"]]) == 0
    assert run(["evaluate", "--gt", p["tensor"], "--rec", p["observed"],
                "--peak", peak, "--report", p["eval_obs"]]) == 0

    completed = read_report(p["eval"])
    observed = read_report(p["eval_obs"])
    assert completed["psnr_mean"] > observed["psnr_mean"]

    rec = read_tensor(p["rec"])
    assert np.array_equal(rec[mask], gt[mask])

    run_report = read_report(p["report"])
    assert run_report["iterations"] > 0
    assert len(run_report["objective_trace"]) == run_report["iterations"]


def test_complete_defaults_match_published_parameters(tmp_path):
    p = _pipeline_paths(tmp_path)
    run(["synth", "--dims", "8x8x6", "--d", "4", "--rank", "2", "--seed", "1",
         "--out-tensor", p["tensor"], "--out-dict", p["dict"], "--out-z", p["z"]])
    run(["mask", "--dims", "8x8x6", "--sr", "0.6", "--seed", "1", "--out", p["mask"]])
    assert run(["complete", "--method", "dtnn", "--tensor", p["tensor"], "--mask", p["mask"],
                "--max-iters", "3", "--out", p["rec"], "--report", p["report"]]) == 0
    cfg = read_report(p["report"])["config"]
    assert cfg["d"] == 5 * 6
    assert cfg["beta"] == 10.0
    assert cfg["rho_z"] == 20.0
    assert cfg["rho_d"] == 1.0
    assert cfg["rho_x"] == 1.0
    assert cfg["threads"] == 1


def test_baseline_methods_run(tmp_path):
    p = _pipeline_paths(tmp_path)
    run(["synth", "--dims", "10x10x6", "--d", "4", "--rank", "2", "--seed", "2",
         "--out-tensor", p["tensor"], "--out-dict", p["dict"], "--out-z", p["z"]])
    run(["mask", "--dims", "10x10x6", "--sr", "0.6", "--seed", "2", "--out", p["mask"]])
    for method in ("tnn", "dctnn"):
        assert run(["complete", "--method", method, "--tensor", p["tensor"], "--mask", p["mask"],
                    "--max-iters", "40", "--out", p["rec"], "--report", p["report"]]) == 0
        assert read_report(p["report"])["config"]["method"] == method


def test_mask_with_missing_slices(tmp_path):
    out = tmp_path / "m.msk3"
    assert run(["mask", "--dims", "6x6x8", "--sr", "0.5", "--missing-slices", "3",
                "--seed", "4", "--out", str(out)]) == 0
    mask = read_mask(out)
    dark = [k for k in range(8) if not mask[:, :, k].any()]
    assert len(dark) >= 3


def test_missing_required_flag_exits_1(tmp_path, capsys):
    code = run(["synth", "--dims", "4x4x4", "--d", "2", "--rank", "1"])
    assert code == 1
    err = capsys.readouterr().err
    assert "usage" in err.lower()


def test_unknown_flag_exits_1(tmp_path):
    assert run(["mask", "--dims", "4x4x4", "--sr", "0.5", "--out", str(tmp_path / "m"), "--bogus", "1"]) == 1


def test_bad_dims_exits_1(tmp_path):
    assert run(["mask", "--dims", "4x4", "--sr", "0.5", "--out", str(tmp_path / "m")]) == 1


def test_format_error_exits_2(tmp_path):
    bad = tmp_path / "bad.tns3"
    bad.write_bytes(b"not a tensor file")
    mask = tmp_path / "m.msk3"
    run(["mask", "--dims", "4x4x4", "--sr", "0.5", "--out", str(mask)])
    code = run(["complete", "--method", "tnn", "--tensor", str(bad), "--mask", str(mask),
                "--out", str(tmp_path / "o"), "--report", str(tmp_path / "r")])
    assert code == 2


def test_undefined_metric_exits_3(tmp_path):
    gt = tmp_path / "gt.tns3"
    rec = tmp_path / "rec.tns3"
    write_tensor(gt, np.zeros((3, 3, 3)))
    write_tensor(rec, np.ones((3, 3, 3)))
    assert run(["evaluate", "--gt", str(gt), "--rec", str(rec),
                "--report", str(tmp_path / "r.json")]) == 3


def test_sr_out_of_range_exits_1(tmp_path):
    assert run(["mask", "--dims", "4x4x4", "--sr", "1.5", "--out", str(tmp_path / "m")]) == 1


def test_repeat_runs_are_byte_identical(tmp_path, monkeypatch):
    p1 = tmp_path / "a"
    p2 = tmp_path / "b"
    for sub in (p1, p2):
        sub.mkdir()
        monkeypatch.chdir(sub)
        run(["synth", "--dims", "10x9x6", "--d", "4", "--rank", "2", "--seed", "3",
             "--out-tensor", "x.tns3", "--out-dict", "d.tns3", "--out-z", "z.tns3"])
        run(["mask", "--dims", "10x9x6", "--sr", "0.5", "--seed", "3", "--out", "m.msk3"])
        run(["complete", "--method", "dtnn", "--tensor", "x.tns3", "--mask", "m.msk3", "--d", "4",
             "--max-iters", "15", "--threads", "1", "--out", "rec.tns3", "--report", "rep.json"])
    for name in ("x.tns3", "m.msk3", "rec.tns3", "rep.json"):
        f1, f2 = p1 / name, p2 / name
        if f1.suffix == ".json":
            d1, d2 = json.loads(f1.read_text()), json.loads(f2.read_text())
            d1["wall_time_s"] = d2["wall_time_s"] = None
            assert d1 == d2
        else:
            assert f1.read_bytes() == f2.read_bytes()
