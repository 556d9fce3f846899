import io
import math
import subprocess
import sys

import numpy as np
import pytest

from dual_darboux import cli, export
from dual_darboux.config import Tolerances, dumps_config, load_config, loads_config
from dual_darboux.errors import ConfigParseError, ConfigValidationError, ExprSyntaxError
from dual_darboux.offset import full_report, OffsetSpec

import surfaces

HELICOID = """
[base]
c_expr = "[0, 0, 0.5*u]"
e_expr = "[cos(u), sin(u), 0]"
u_range = [0.0, 6.283185307179586]
"""

CONE = """
samples = 30

[base]
c_expr = "[0, 0, 0]"
e_expr = "[sin(pi/4)*cos(u), sin(pi/4)*sin(u), cos(pi/4)]"
u_range = [0.0, 6.283185307179586]

[[offsets]]
theta_deg = 60.0
theta_star = 0.2
"""


def write(tmp_path, text, name="job.toml"):
    p = tmp_path / name
    p.write_text(text)
    return p


class TestConfig:
    def test_minimal_defaults(self, tmp_path):
        cfg = load_config(write(tmp_path, HELICOID))
        assert cfg.samples == 50 and cfg.offsets == ()
        assert cfg.tolerances == Tolerances()
        assert cfg.v_range == (-1.0, 1.0)
        assert cfg.surface().frame_at(1.0).Delta == pytest.approx(0.5)

    def test_theta_range(self):
        text = CONE.replace("theta_deg = 60.0", "theta_deg = 200")
        with pytest.raises(ConfigValidationError) as info:
            loads_config(text)
        assert info.value.field == "offsets[0].theta_deg"

    def test_bad_expression_has_curve_context(self):
        text = HELICOID.replace("sin(u), 0]", "sin(u, 0]")
        with pytest.raises(ExprSyntaxError) as info:
            loads_config(text)
        assert info.value.field == "base.e_expr"
        assert "base.e_expr" in str(info.value)
        assert info.value.offset == 14  # the comma after "sin(u"

    def test_parse_error_position(self):
        with pytest.raises(ConfigParseError) as info:
            loads_config('samples = 3\n[base\nc_expr = "x"\n')
        assert (info.value.line, info.value.column) == (2, 6)

    @pytest.mark.parametrize("old,new,field", [
        ("[base]", "samples = 1\n[base]", "samples"),
        ("[base]", "samples = 2.5\n[base]", "samples"),
        ("u_range = [0.0, 6.283185307179586]", "u_range = [1.0, 1.0]", "base.u_range"),
        ("u_range = [0.0, 6.283185307179586]", "u_range = [0.0]", "base.u_range"),
        ("u_range = [0.0, 6.283185307179586]", 'u_range = ["a", 1]', "base.u_range[0]"),
        ('c_expr = "[0, 0, 0.5*u]"', "c_expr = 3", "base.c_expr"),
        ('c_expr = "[0, 0, 0.5*u]"', "", "base.c_expr"),
        ("[base]", "colour = 1\n[base]", "colour"),
        ("[base]", "[mesh]\nv_count = 1\n[base]", "mesh.v_count"),
        ("[base]", "[tolerances]\ntol_s = -1.0\n[base]", "tolerances.tol_s"),
        ("[base]", "[tolerances]\ntol_x = 1.0\n[base]", "tolerances.tol_x"),
        ("[base]", "[[offsets]]\ntheta_star = 1.0\n[base]", "offsets[0].theta_deg"),
    ])
    def test_validation_names_field(self, old, new, field):
        with pytest.raises(ConfigValidationError) as info:
            loads_config(HELICOID.replace(old, new, 1))
        assert info.value.field == field

    def test_dump_round_trip(self):
        cfg = loads_config(CONE + "\n[tolerances]\ntol_s = 1e-11\nmax_depth = 30\n")
        again = loads_config(dumps_config(cfg))
        assert again == cfg
        assert again.tolerances.tol_s == 1e-11 and again.tolerances.max_depth == 30


class TestExport:
    def test_invariant_csv_round_trip(self):
        surf = surfaces.surface("random")
        st = surf.frame_at(surf.sample_s(40))
        buf = io.StringIO()
        export.write_invariant_csv(buf, st)
        text = buf.getvalue()
        assert text.splitlines()[0] == ",".join(export.INVARIANT_COLUMNS)
        assert "\r" not in text
        cols = export.read_invariant_csv(io.StringIO(text))
        rows = export.invariant_rows(st)
        back = np.column_stack([cols[k] for k in export.INVARIANT_COLUMNS])
        assert np.array_equal(back, rows)  # exact, well inside 1e-15 relative
        assert np.array_equal(cols["R_dual"], st.R_bar.dual)

    def test_report_csv_round_trip(self):
        rep = full_report(surfaces.surface("cone"), OffsetSpec(0.5, 0.1), 10)
        buf = io.StringIO()
        export.write_report_csv(buf, rep)
        rows = export.read_report_csv(io.StringIO(buf.getvalue()))
        assert buf.getvalue().splitlines()[0] == ",".join(export.REPORT_COLUMNS)
        assert rows == [(r.relation_id, r.s, r.lhs, r.rhs, r.abs_err, r.rel_err) for r in rep.records]

    def test_obj_round_trip(self):
        pts = surfaces.surface("tangent").sample_mesh(6, (-1, 1), 4)
        buf = io.StringIO()
        export.write_obj(buf, pts)
        lines = buf.getvalue().splitlines()
        assert {ln.split()[0] for ln in lines} == {"v", "f"}
        verts, faces = export.read_obj(io.StringIO(buf.getvalue()))
        assert np.array_equal(verts, pts.reshape(-1, 3))
        assert len(faces) == 5 * 3 and all(len(f) == 4 for f in faces)
        flat = np.array(faces)
        assert flat.min() == 1 and flat.max() == len(verts)

    def test_grid_faces_orientation(self):
        assert export.grid_faces(2, 2).tolist() == [[1, 3, 4, 2]]


class TestCommands:
    def test_verify_cone(self, tmp_path, capsys):
        cfg = loads_config(CONE)
        code = cli.cmd_verify(cfg, out_dir=tmp_path, log=sys.stdout)
        out = capsys.readouterr().out
        assert code == 0
        assert out.strip().endswith("all 14 relations pass")
        assert (tmp_path / "report_0.csv").exists()

    def test_verify_threshold_controls_exit(self, tmp_path):
        cfg = loads_config(CONE)
        rep = full_report(cfg.surface(), cfg.offsets[0].spec, cfg.samples)
        worst = max(r.rel_err for k, r in rep.worst().items() if k != "dual_conical_curvature")
        assert cli.cmd_verify(cfg, worst * 1.01, tmp_path, io.StringIO()) == cli.EXIT_OK
        assert cli.cmd_verify(cfg, worst, tmp_path, io.StringIO()) == cli.EXIT_VERIFY_FAILED

    def test_verify_needs_offsets(self, tmp_path):
        with pytest.raises(ConfigValidationError):
            cli.cmd_verify(loads_config(HELICOID), out_dir=tmp_path)

    def test_line_angle(self, capsys):
        assert cli.cmd_line_angle("0 0 0 / 1 0 0", "0 0 1 / 0 1 0", log=sys.stdout) == 0
        out = capsys.readouterr().out.split("\n")
        assert out[0] == "theta = 90 deg" and out[1] == "theta* = 1"

    def test_mesh_counts(self, tmp_path):
        cfg = loads_config(CONE.replace("samples = 30", "samples = 12") + "\n[mesh]\nv_count = 2\n")
        assert cli.cmd_mesh(cfg, tmp_path, io.StringIO()) == 0
        for name in ("base.obj", "offset_0.obj"):
            verts, faces = export.read_obj(tmp_path / name)
            assert len(verts) == 12 * 2 and len(faces) == 11

    def test_analyze_and_offset(self, tmp_path):
        cfg = loads_config(CONE)
        assert cli.cmd_analyze(cfg, tmp_path / "a.csv", io.StringIO()) == 0
        cols = export.read_invariant_csv(tmp_path / "a.csv")
        assert len(cols["s"]) == 30 and np.allclose(cols["gamma"], 1.0)
        assert cli.cmd_offset(cfg, tmp_path, io.StringIO()) == 0
        cols = export.read_invariant_csv(tmp_path / "offset_0.csv")
        st = math.sin(math.pi / 3)
        ct = math.cos(math.pi / 3)
        assert np.allclose(cols["gamma"], (ct - st) / (ct + st), atol=1e-12)

    def test_threads_env(self, monkeypatch):
        monkeypatch.setenv(cli.THREADS_ENV, "3")
        assert cli.worker_count() == 3
        monkeypatch.setenv(cli.THREADS_ENV, "0")
        assert cli.worker_count() >= 1
        monkeypatch.setenv(cli.THREADS_ENV, "-2")
        with pytest.raises(ConfigValidationError):
            cli.worker_count()

    def test_single_worker_matches_pool(self, monkeypatch):
        surf = surfaces.surface("random")
        monkeypatch.setenv(cli.THREADS_ENV, "1")
        one = cli._invariant_table(surf, 25)
        monkeypatch.setenv(cli.THREADS_ENV, "4")
        assert np.array_equal(cli._invariant_table(surf, 25), one)


class TestMain:
    @pytest.mark.parametrize("text,code", [
        (CONE, cli.EXIT_OK),
        (CONE.replace("theta_deg = 60.0", "theta_deg = 200"), cli.EXIT_CONFIG),
        (CONE.replace("cos(pi/4)]", "cos(pi/4)"), cli.EXIT_CONFIG),
        ("samples = [", cli.EXIT_CONFIG),
        (HELICOID + "\n[[offsets]]\ntheta_deg = 90\n", cli.EXIT_NUMERIC),
        (CONE.replace("[0, 0, 0]", "[u, 0, 0]").replace("sin(pi/4)*cos(u), sin(pi/4)*sin(u), cos(pi/4)",
                                                         "0, 0, 1"), cli.EXIT_NUMERIC),
    ])
    def test_exit_codes(self, tmp_path, text, code, capsys):
        cfg = write(tmp_path, text)
        assert cli.main(["verify", str(cfg), "--out", str(tmp_path)]) == code

    def test_missing_file(self, tmp_path):
        assert cli.main(["analyze", str(tmp_path / "nope.toml")]) == cli.EXIT_IO

    def test_bad_line(self):
        assert cli.main(["line-angle", "0 0 0 / 0 0 0", "0 0 1 / 0 1 0"]) == cli.EXIT_CONFIG
        assert cli.main(["line-angle", "0 0 / 1 0 0", "0 0 1 / 0 1 0"]) == cli.EXIT_CONFIG

    def test_usage(self):
        with pytest.raises(SystemExit) as info:
            cli.main(["mesh", "job.toml"])  # --out is required
        assert info.value.code == cli.EXIT_USAGE

    def test_module_entry_point(self, tmp_path):
        cfg = write(tmp_path, CONE)
        proc = subprocess.run([sys.executable, "-m", "dual_darboux", "verify", str(cfg),
                               "--threshold", "1e-6", "--out", str(tmp_path)],
                              capture_output=True, text=True)
        assert proc.returncode == 0, proc.stderr
        assert proc.stdout.strip().endswith("all 14 relations pass")
