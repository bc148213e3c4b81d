import json

import numpy as np
import pytest

from mdsbiplot.datasets import load_sample
from mdsbiplot.pipelines import (
    COMPARE_CELLS,
    COMPARE_SKIPPED,
    RunConfig,
    SimulationSpec,
    build_scene,
    parse_config_file,
    rank_average,
    run_biplot,
    run_compare,
    run_fit,
    run_simulation,
    spearman,
    validate_config,
    validate_method_metric,
)


@pytest.fixture(scope="module")
def sample():
    return load_sample()


class TestRunConfig:
    def test_defaults_validate(self):
        validate_config(RunConfig())

    def test_unknown_metric(self):
        with pytest.raises(ValueError, match="unknown dissimilarity"):
            validate_config(RunConfig(kind_hd="geodesic"))

    def test_both_pruning_selectors(self):
        with pytest.raises(ValueError, match="at most one"):
            validate_config(RunConfig(keep=2, threshold=0.5))

    def test_table_gate_rejects_nb_non_embeddable(self):
        for kind in ("manhattan", "cosine", "squared_euclidean", "inner_product"):
            with pytest.raises(ValueError, match="Euclidean embeddable"):
                validate_method_metric("nb", kind)

    def test_table_gate_accepts_supported_cells(self):
        for method, kind in COMPARE_CELLS:
            validate_method_metric(method, kind)
        for kind in ("euclidean", "sqrt_manhattan", "clark"):
            validate_method_metric("nb", kind)

    def test_config_file_parsing(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text(
            "# comment\nkind_hd=manhattan\nm=3\ntolerance=1e-6\n"
            "display_range=-1.5,1.5\nkeep=4\n",
            encoding="utf-8",
        )
        values = parse_config_file(path)
        assert values == {
            "kind_hd": "manhattan", "m": 3, "tolerance": 1e-6,
            "display_lo": -1.5, "display_hi": 1.5, "keep": 4,
        }

    def test_config_file_unknown_key(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text("metric=euclidean\n", encoding="utf-8")
        with pytest.raises(ValueError, match="unknown config key"):
            parse_config_file(path)


class TestRunFit:
    def test_writes_outputs(self, sample, tmp_path):
        config = RunConfig(out=str(tmp_path / "fit"), seed=3)
        emb, paths = run_fit(sample, config)
        payload = json.loads(paths["json"].read_text())
        assert payload["n"] == 15
        assert payload["converged"] == emb.converged
        csv_lines = paths["csv"].read_text().splitlines()
        assert csv_lines[0] == "id,z1,z2"
        assert len(csv_lines) == 16
        assert csv_lines[1].startswith(sample.ids[0] + ",")

    def test_realizable_dataset_zero_stress(self, tmp_path, rng):
        from mdsbiplot.datasets import Dataset

        Z = rng.normal(size=(7, 2))
        ds = Dataset(ids=tuple(str(i) for i in range(7)), names=("a", "b"),
                     X=Z)
        config = RunConfig(out=str(tmp_path), scale="none")
        emb, _ = run_fit(ds, config)
        assert emb.stress < 1e-8

    def test_byte_identical_reruns(self, sample, tmp_path):
        c1 = RunConfig(out=str(tmp_path / "a"), seed=5)
        c2 = RunConfig(out=str(tmp_path / "b"), seed=5)
        _, p1 = run_fit(sample, c1)
        _, p2 = run_fit(sample, c2)
        assert p1["json"].read_bytes() == p2["json"].read_bytes()
        assert p1["csv"].read_bytes() == p2["csv"].read_bytes()


class TestBuildScene:
    def test_gmb_scene_counts(self, sample, tmp_path):
        config = RunConfig(method="gmb", keep=5, out=str(tmp_path),
                           grid_c=2.0, grid_step=0.5)
        scene = build_scene(sample, config)
        assert len(scene.traces) == 5
        assert len(scene.removed) == 3
        gs = [g for _, g in scene.removed]
        assert gs == sorted(gs, reverse=True)

    def test_nb_rejects_manhattan(self, sample, tmp_path):
        config = RunConfig(method="nb", kind_hd="manhattan", out=str(tmp_path))
        with pytest.raises(ValueError, match="Euclidean embeddable"):
            build_scene(sample, config)

    def test_nb_axes_match_pca_arrow_directions(self, sample, tmp_path):
        config = RunConfig(method="nb", kind_hd="euclidean", out=str(tmp_path),
                           grid_c=2.0, grid_step=0.5)
        scene = build_scene(sample, config)
        pca = build_scene(sample, RunConfig(method="pca", out=str(tmp_path)))
        signs = np.array([
            1.0 if pca.embedding.coordinates[:, j] @ scene.embedding.coordinates[:, j] > 0
            else -1.0
            for j in range(2)
        ])
        for t_nb, t_pca in zip(scene.traces, pca.traces):
            v_nb = (t_nb.points[-1] - t_nb.points[0]) * signs
            v_pca = t_pca.points[-1] - t_pca.points[0]
            cosang = v_nb @ v_pca / (np.linalg.norm(v_nb) * np.linalg.norm(v_pca))
            assert np.degrees(np.arccos(np.clip(cosang, -1, 1))) < 0.1

    def test_gmb_cosine_single_point_axes(self, sample, tmp_path):
        config = RunConfig(method="gmb", kind_hd="cosine", out=str(tmp_path),
                           grid_c=2.0, grid_step=0.5)
        scene = build_scene(sample, config)
        for t in scene.traces:
            diam = np.max(np.linalg.norm(t.points[:, None, :] - t.points[None, :, :], axis=2))
            assert diam < 1e-5

    def test_dcm_scene_has_attr_points(self, sample, tmp_path):
        config = RunConfig(method="dcm", kind_hd="euclidean", out=str(tmp_path),
                           max_iterations=300)
        scene = build_scene(sample, config)
        assert scene.attr_points.shape == (8, 2)
        assert scene.traces == ()
        assert scene.embedding.coordinates.shape == (15, 2)


class TestRunBiplot:
    def test_writes_scene_and_svg(self, sample, tmp_path):
        config = RunConfig(method="gmb", out=str(tmp_path), grid_c=1.0, grid_step=0.5)
        scene, paths = run_biplot(sample, config)
        payload = json.loads(paths["json"].read_text())
        assert payload["method"] == "gmb"
        assert len(payload["axes"]) == 8
        svg = paths["svg"].read_text()
        assert svg.startswith('<?xml version="1.0"')

    def test_embedding_shared_not_refit(self, sample, tmp_path):
        config = RunConfig(method="gmb", out=str(tmp_path / "x"), grid_c=1.0,
                           grid_step=0.5, seed=2)
        scene, _ = run_biplot(sample, config)
        emb, _ = run_fit(sample, RunConfig(out=str(tmp_path / "y"), seed=2))
        assert np.array_equal(scene.embedding.coordinates, emb.coordinates)


class TestRunCompare:
    def test_eight_scenes_plus_skips(self, sample, tmp_path):
        config = RunConfig(out=str(tmp_path), grid_c=1.0, grid_step=0.5,
                           max_iterations=300, seed=1)
        summary, path = run_compare(sample, config)
        assert len(summary["scenes"]) == 8
        assert all("stress" in row for row in summary["scenes"])
        assert {(r["method"], r["kind_hd"]) for r in summary["scenes"]} == set(COMPARE_CELLS)
        assert len(summary["skipped"]) == len(COMPARE_SKIPPED)
        for row in summary["skipped"]:
            assert "Euclidean embeddable" in row["reason"]
        written = json.loads(path.read_text())
        assert written == summary

    def test_inner_product_cell_uses_inner_product_both_sides(self, sample, tmp_path):
        config = RunConfig(out=str(tmp_path), grid_c=1.0, grid_step=0.5,
                           max_iterations=2000, seed=0)
        run_compare(sample, config)
        payload = json.loads((tmp_path / "scene_gmb_inner_product.json").read_text())
        assert payload["embedding"]["kind_ld"] == "inner_product"
        # Least-squares axis solutions are linear in the offset, so every
        # trace is a straight segment through the origin.
        for axis in payload["axes"]:
            pts = np.asarray(axis["points"])
            chords = np.diff(pts, axis=0)
            assert np.max(np.abs(chords - chords[0])) < 1e-4

    def test_parallel_matches_serial_bitwise(self, sample, tmp_path):
        base = dict(grid_c=1.0, grid_step=0.5, max_iterations=300, seed=4)
        _, p1 = run_compare(sample, RunConfig(out=str(tmp_path / "serial"), jobs=1, **base))
        _, p2 = run_compare(sample, RunConfig(out=str(tmp_path / "par"), jobs=4, **base))
        assert p1.read_bytes() == p2.read_bytes()
        for name in sorted(x.name for x in p1.parent.glob("scene_*")):
            assert (p1.parent / name).read_bytes() == (p2.parent / name).read_bytes()


class TestSimulation:
    def test_single_replication_reproducible(self):
        spec = SimulationSpec(replications=1, seed=42)
        a = run_simulation(spec)
        b = run_simulation(spec)
        assert a == b
        assert len(a["rows"]) == 1
        assert len(a["rows"][0]["G"]) == 3

    def test_parallel_matches_serial(self):
        spec = SimulationSpec(replications=4, seed=7)
        assert run_simulation(spec, jobs=1) == run_simulation(spec, jobs=3)

    def test_report_fields(self):
        spec = SimulationSpec(replications=3, seed=0)
        report = run_simulation(spec)
        assert report["pass_threshold"] == 0.85
        assert 0.0 <= report["fraction_attr3_highest"] <= 1.0
        assert report["replications"] == 3
        assert all(set(r) >= {"sigmas", "G", "gap", "seed"} for r in report["rows"])

    def test_invalid_spec(self):
        with pytest.raises(ValueError):
            SimulationSpec(replications=0)
        with pytest.raises(ValueError):
            SimulationSpec(sd3_range=(0.5, 0.1))
        with pytest.raises(ValueError):
            SimulationSpec(p=4)


class TestRankStatistics:
    def test_rank_average_with_ties(self):
        assert np.array_equal(rank_average([10.0, 20.0, 20.0, 30.0]),
                              [1.0, 2.5, 2.5, 4.0])

    def test_spearman_monotone(self):
        x = [1.0, 2.0, 3.0, 4.0]
        assert spearman(x, [2.0, 4.0, 6.0, 8.0]) == pytest.approx(1.0)
        assert spearman(x, [8.0, 6.0, 4.0, 2.0]) == pytest.approx(-1.0)

    def test_spearman_hand_value(self):
        # Ranks x: 1..5; ranks y: (3, 1, 4, 2, 5); sum d^2 = 10,
        # rho = 1 - 6*10 / (5*(25-1)) = 0.5.
        x = [1.0, 2.0, 3.0, 4.0, 5.0]
        y = [0.3, 0.1, 0.4, 0.2, 0.5]
        assert spearman(x, y) == pytest.approx(0.5)

    def test_spearman_constant_rejected(self):
        with pytest.raises(ValueError):
            spearman([1.0, 1.0, 1.0], [1.0, 2.0, 3.0])
