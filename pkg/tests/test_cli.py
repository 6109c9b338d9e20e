import json

import numpy as np
import pytest

from phononbus.cli import RunConfig, SCHEMAS, main, parse_config, run, serialize_config


def write(tmp_path, text, name="run.cfg"):
    p = tmp_path / name
    p.write_text(text)
    return p


class TestParseConfig:
    def test_empty_transfer_block_fills_defaults(self, tmp_path):
        cfg = parse_config(write(tmp_path, "protocol = transfer\n"))
        assert cfg.protocol == "transfer"
        assert cfg.params["g_scp"] == 50.0          # MHz
        assert cfg.params["g_pe"] == 1.0
        assert cfg.params["gamma_sc"] == pytest.approx(0.01)   # 10 kHz
        assert cfg.params["gamma_p"] == pytest.approx(1e-4)    # 0.1 kHz
        assert cfg.params["gamma_e"] == pytest.approx(0.01)

    def test_unit_conversion(self, tmp_path):
        cfg = parse_config(
            write(tmp_path, "protocol = transfer\ng_pe = 500 kHz\n")
        )
        assert cfg.params["g_pe"] == pytest.approx(0.5)

    def test_negative_rate_rejected(self, tmp_path):
        with pytest.raises(ValueError, match="g_pe"):
            parse_config(write(tmp_path, "protocol = transfer\ng_pe = -1 MHz\n"))

    def test_unknown_key_named(self, tmp_path):
        with pytest.raises(ValueError, match="bogus"):
            parse_config(write(tmp_path, "protocol = transfer\nbogus = 3\n"))

    def test_missing_unit_named(self, tmp_path):
        with pytest.raises(ValueError, match="g_scp"):
            parse_config(write(tmp_path, "protocol = transfer\ng_scp = 50\n"))

    def test_unknown_unit_named(self, tmp_path):
        with pytest.raises(ValueError, match="THz"):
            parse_config(write(tmp_path, "protocol = transfer\ng_scp = 1 THz\n"))

    def test_protocol_mismatch_rejected(self, tmp_path):
        path = write(tmp_path, "protocol = transfer\n")
        with pytest.raises(ValueError, match="declares"):
            parse_config(path, "sweep")

    def test_roundtrip_serialization(self, tmp_path):
        original = parse_config(
            write(tmp_path, "protocol = transfer\ng_pe = 2 MHz\noptimize = false\n")
        )
        text = serialize_config(original)
        reparsed = parse_config(write(tmp_path, text, "round.cfg"))
        assert reparsed == original

    def test_comments_and_blank_lines_ignored(self, tmp_path):
        cfg = parse_config(write(
            tmp_path,
            "# a comment\nprotocol = transfer\n\ng_pe = 1 MHz  # inline\n",
        ))
        assert cfg.params["g_pe"] == 1.0

    def test_all_protocols_have_parseable_defaults(self):
        for protocol, schema in SCHEMAS.items():
            cfg = RunConfig(protocol, {k: f.default for k, f in schema.items()})
            assert serialize_config(cfg)


class TestRunners:
    def test_transfer_emits_monotone_populations(self, tmp_path):
        cfg = parse_config(write(
            tmp_path,
            "protocol = transfer\ng_pe = 2 MHz\noptimize = false\ndtau = 0.25 us\n",
        ))
        results = run(cfg, tmp_path / "out")
        lines = (tmp_path / "out" / "populations.csv").read_text().splitlines()
        assert lines[0] == "t_us,pop_sc,pop_ph,pop_spin"
        times = [float(ln.split(",")[0]) for ln in lines[1:]]
        assert all(b > a for a, b in zip(times, times[1:]))
        assert 0.9 < float(results["fidelity"]) <= 1.0
        manifest = json.loads((tmp_path / "out" / "manifest.json").read_text())
        assert manifest["protocol"] == "transfer"
        assert manifest["version"]

    def test_sweep_grid_size_and_determinism(self, tmp_path):
        text = (
            "protocol = sweep\n"
            "g_pe_min = 1 MHz\ng_pe_max = 2 MHz\ng_pe_points = 2\n"
            "gamma_e_min = 10 kHz\ngamma_e_max = 20 kHz\ngamma_e_points = 2\n"
        )
        cfg = parse_config(write(tmp_path, text))
        run(cfg, tmp_path / "a")
        run(cfg, tmp_path / "b", workers=2)
        csv_a = (tmp_path / "a" / "fidelity_grid.csv").read_bytes()
        csv_b = (tmp_path / "b" / "fidelity_grid.csv").read_bytes()
        assert csv_a == csv_b
        assert len(csv_a.decode().splitlines()) == 1 + 4

    def test_strain_map_runner(self, tmp_path):
        field = tmp_path / "field.csv"
        field.write_text(
            "x,y,z,e11,e22,e33,e12,e13,e23\n0,0,0,0,0,2e-9,0,0,0\n"
        )
        cfg = parse_config(write(
            tmp_path, f"protocol = strain-map\nfield_csv = {field}\n"
        ))
        results = run(cfg, tmp_path / "out")
        assert float(results["max_g_orb_MHz"]) == pytest.approx(4.0 / 3.0)
        lines = (tmp_path / "out" / "coupling_map.csv").read_text().splitlines()
        assert lines[0] == "x,y,z,g_orb_MHz"

    def test_nuclear_swap_runner(self, tmp_path):
        cfg = parse_config(write(
            tmp_path, "protocol = nuclear-swap\ngamma_e = 0 kHz\ngamma_n = 0 Hz\n"
        ))
        results = run(cfg, tmp_path / "out")
        assert float(results["fidelity"]) >= 0.999
        lines = (tmp_path / "out" / "gates.csv").read_text().splitlines()
        assert lines[0] == "gate_index,duration_us,F_running"
        assert len(lines) == 1 + 15

    def test_cli_main_error_paths(self, tmp_path, capsys):
        bad = write(tmp_path, "protocol = transfer\nbogus = 1\n")
        code = main(["transfer", "--config", str(bad), "--out", str(tmp_path / "x")])
        assert code == 1
        assert "bogus" in capsys.readouterr().err

    def test_cli_main_smoke(self, tmp_path, capsys):
        cfgfile = write(
            tmp_path,
            "protocol = ms-gate\ng_eff0 = 1 MHz\ndelta_ms = 10 MHz\n"
            "n_max = 4\nt_end = 1 us\n",
        )
        code = main(["ms-gate", "--config", str(cfgfile),
                     "--out", str(tmp_path / "ms"), "--seedless"])
        assert code == 0
        lines = (tmp_path / "ms" / "dynamics.csv").read_text().splitlines()
        assert lines[0] == "t_us,n_gg,n_ee,ideal"
