"""Sweep plumbing: grid evaluation, CSV rendering, config parsing, CLI."""

import io
import math
import re

import pytest

from nomalink import analytic, cli, experiments, simulator
from nomalink.experiments import (
    CSV_HEADER,
    DEFAULT_ALPHA_GRID,
    DEFAULT_HWI_GRID,
    DEFAULT_SNR_GRID,
    ConfigError,
    SweepSpec,
    emit_csv,
    parse_config,
    run_sweep,
    spec_with,
)
from nomalink.model import SystemConfig
from nomalink.simulator import SimSpec

FAST_SIM = SimSpec(n_symbols=10_000, seed=9)


def analytic_spec(grid=(0.0, 10.0), schemes=("noma",)):
    return SweepSpec(swept_parameter="snr_db", grid=grid, schemes=schemes,
                     methods=("analytic",))


def test_spec_validation():
    with pytest.raises(ValueError):
        SweepSpec(swept_parameter="power", grid=(1.0,))
    with pytest.raises(ValueError):
        SweepSpec(swept_parameter="snr_db", grid=())
    with pytest.raises(ValueError):
        SweepSpec(swept_parameter="snr_db", grid=(0.0, 0.0))
    with pytest.raises(ValueError):
        SweepSpec(swept_parameter="snr_db", grid=(10.0, 0.0))
    with pytest.raises(ValueError):
        SweepSpec(swept_parameter="snr_db", grid=(0.0,), schemes=("noma", "xnoma"))
    with pytest.raises(ValueError):
        SweepSpec(swept_parameter="snr_db", grid=(0.0,), methods=())
    # every grid point must map to a constructible scenario
    with pytest.raises(ValueError):
        SweepSpec(swept_parameter="alpha1", grid=(0.6, 1.2))


def test_grid_point_scenarios():
    spec = SweepSpec(swept_parameter="snr_db", grid=(0.0, 20.0))
    cfg = spec.config_at(20.0)
    assert cfg.P_s == pytest.approx(100.0) and cfg.P_r == pytest.approx(100.0)
    spec = SweepSpec(swept_parameter="hwi_k", grid=(0.0, 0.1))
    assert all(spec.config_at(0.1).hwi(link) == 0.1 for link in ("s1", "s2", "sr", "r1", "r2"))
    spec = SweepSpec(swept_parameter="alpha1", grid=(0.6,))
    cfg = spec.config_at(0.6)
    assert cfg.alpha1 == 0.6 and cfg.alpha2 == pytest.approx(0.4)


def test_rows_come_out_in_deterministic_order():
    spec = SweepSpec(swept_parameter="snr_db", grid=(0.0, 10.0), sim=FAST_SIM)
    rows = run_sweep(spec).rows
    assert len(rows) == 2 * 3 * 2 * 2
    keys = [(r.value, r.scheme, r.user, r.method) for r in rows]
    expect = [(v, s, u, m)
              for v in (0.0, 10.0)
              for s in ("noma", "cnoma", "cnoma-wdl")
              for u in ("u1", "u2")
              for m in ("analytic", "monte-carlo")]
    assert keys == expect
    for row in rows:
        if row.method == "analytic":
            assert row.std_err is None
        else:
            assert row.std_err is not None and row.std_err > 0
        assert row.error is None
        assert 0.0 <= row.ber <= 1.0


def test_reference_sweep_cardinality():
    spec = SweepSpec(swept_parameter="snr_db", grid=DEFAULT_SNR_GRID, sim=FAST_SIM)
    result = run_sweep(spec)
    assert len(result.rows) == 9 * 3 * 2 * 2 == 108


def test_analytic_failure_is_recorded_not_raised(monkeypatch):
    def boom(cfg, scheme, user):
        raise ValueError("synthetic analytic failure")
    monkeypatch.setattr(experiments.analytic, "scheme_ber", boom)
    rows = run_sweep(analytic_spec()).rows
    assert len(rows) == 4
    for row in rows:
        assert math.isnan(row.ber)
        assert "synthetic analytic failure" in row.error


def test_simulation_failure_is_recorded_not_raised(monkeypatch):
    def boom(cfg, scheme, spec):
        raise RuntimeError("synthetic simulation failure")
    monkeypatch.setattr(experiments.simulator, "simulate", boom)
    spec = SweepSpec(swept_parameter="snr_db", grid=(0.0,), schemes=("noma",), sim=FAST_SIM)
    rows = run_sweep(spec).rows
    by_method = {r.method: r for r in rows if r.user == "u1"}
    assert by_method["analytic"].error is None
    assert math.isnan(by_method["monte-carlo"].ber)
    assert "synthetic simulation failure" in by_method["monte-carlo"].error


def test_csv_single_row():
    spec = SweepSpec(swept_parameter="snr_db", grid=(10.0,), schemes=("noma",),
                     methods=("analytic",))
    result = run_sweep(spec)
    # keep only the far user to get a genuinely single-row table
    result = experiments.SweepResult(spec=spec, rows=result.rows[:1])
    text = emit_csv(result)
    lines = text.splitlines()
    assert len(lines) == 2
    assert lines[0] == CSV_HEADER == "swept_param,value,scheme,user,method,ber,std_err"
    fields = lines[1].split(",")
    assert fields[:5] == ["snr_db", "10.0", "noma", "u1", "analytic"]
    assert float(fields[5]) == result.rows[0].ber  # repr round-trips exactly
    assert fields[6] == ""
    assert text.endswith("\n")


def test_csv_is_byte_identical_across_runs():
    spec = SweepSpec(swept_parameter="snr_db", grid=(0.0, 10.0), schemes=("noma",),
                     sim=FAST_SIM)
    first = emit_csv(run_sweep(spec))
    second = emit_csv(run_sweep(spec))
    assert first == second
    mc_fields = [line.split(",") for line in first.splitlines()[1:]
                 if line.split(",")[4] == "monte-carlo"]
    for fields in mc_fields:
        assert float(fields[5]) >= 0.0 and float(fields[6]) > 0.0


def test_parse_config_empty_gives_reference_sweep():
    spec = parse_config("")
    assert spec.swept_parameter == "snr_db"
    assert spec.grid == DEFAULT_SNR_GRID
    assert spec.schemes == ("noma", "cnoma", "cnoma-wdl")
    assert spec.methods == ("analytic", "monte-carlo")
    assert spec.sim.n_symbols == 1_000_000 and spec.sim.seed == 1
    base = spec.base
    assert (base.d_s1, base.d_s2, base.d_sr, base.d_r1, base.d_r2) == (4, 2, 1, 3, 1)
    assert base.alpha1 == 0.8 and base.sigma_eps_sq == 0.005
    assert all(base.hwi(link) == 0.175 for link in ("s1", "s2", "sr", "r1", "r2"))


def test_parse_config_full_file():
    text = """
    # sweep description
    sweep = hwi_k
    grid = 0.0, 0.1, 0.2   # three points
    schemes = noma, cnoma
    methods = mc
    symbols = 20000
    seed = 7
    batch_size = 5000
    snr_db = 10
    alpha1 = 0.7
    sigma_eps_sq = 0.002
    d_s1 = 5
    """
    spec = parse_config(text)
    assert spec.swept_parameter == "hwi_k"
    assert spec.grid == (0.0, 0.1, 0.2)
    assert spec.schemes == ("noma", "cnoma")
    assert spec.methods == ("monte-carlo",)
    assert spec.sim == SimSpec(n_symbols=20_000, seed=7, batch_size=5_000)
    assert spec.base.P_s == pytest.approx(10.0)
    assert spec.base.alpha1 == 0.7 and spec.base.alpha2 == pytest.approx(0.3)
    assert spec.base.sigma_eps_sq == 0.002
    assert spec.base.d_s1 == 5.0


def test_parse_config_hardware_level_reaches_all_links():
    spec = parse_config("hwi_k = 0.05")
    assert all(spec.base.hwi(link) == 0.05 for link in ("s1", "s2", "sr", "r1", "r2"))


def test_parse_config_operating_point_defaults():
    # an unspecified operating SNR depends on what is being swept: hardware
    # sweeps sit in the floor region, power-split sweeps at the mid-SNR bench
    assert parse_config("", default_sweep="hwi_k").base.P_s == pytest.approx(1e4)
    assert parse_config("sweep = hwi_k").base.P_s == pytest.approx(1e4)
    assert parse_config("sweep = alpha1").base.P_s == pytest.approx(100.0)
    assert parse_config("sweep = alpha1\nsnr_db = 10").base.P_s == pytest.approx(10.0)


@pytest.mark.parametrize("text,fragment", [
    ("flux = 3", "line 1"),
    ("symbols 20000", "expected 'key = value'"),
    ("seed = 1\nseed = 2", "line 2: duplicate"),
    ("grid = 1, two, 3", "invalid number"),
    ("symbols = 1e4", "invalid integer"),
    ("sweep = power", "sweep must be one of"),
    ("schemes = noma, pdma", "unknown scheme"),
    ("methods = quadrature", "unknown method"),
])
def test_parse_config_diagnostics(text, fragment):
    with pytest.raises(ConfigError, match=re.escape(fragment)):
        parse_config(text)


def test_parse_config_invariant_violation_names_the_key():
    with pytest.raises(ConfigError, match="alpha1"):
        parse_config("alpha1 = 1.2")
    with pytest.raises(ConfigError, match="n_symbols"):
        parse_config("symbols = 100")


def test_spec_with_overrides():
    spec = parse_config("grid = 3, 7")
    assert spec_with(spec) is spec
    # same swept parameter keeps a custom grid
    assert spec_with(spec, swept_parameter="snr_db").grid == (3.0, 7.0)
    # switching the swept parameter replaces it with that sweep's reference grid
    pa = spec_with(spec, swept_parameter="alpha1")
    assert pa.grid == DEFAULT_ALPHA_GRID
    hw = spec_with(spec, swept_parameter="hwi_k", schemes=("noma",),
                   methods=("analytic",), n_symbols=50_000, seed=4)
    assert hw.grid == DEFAULT_HWI_GRID
    assert hw.schemes == ("noma",) and hw.methods == ("analytic",)
    assert hw.sim.n_symbols == 50_000 and hw.sim.seed == 4


# -- command line --------------------------------------------------------------


def test_cli_snr_sweep_to_file(tmp_path):
    out = tmp_path / "snr.csv"
    code = cli.main(["sweep-snr", "--methods", "analytic", "--out", str(out)])
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == CSV_HEADER
    assert len(lines) == 1 + 9 * 3 * 2
    assert {line.split(",")[0] for line in lines[1:]} == {"snr_db"}


def test_cli_subcommand_picks_the_swept_parameter(tmp_path):
    cfg = tmp_path / "sweep.cfg"
    cfg.write_text("schemes = noma\nsymbols = 10000\n")
    out = tmp_path / "hwi.csv"
    code = cli.main(["sweep-hwi", "--config", str(cfg), "--methods", "analytic",
                     "--out", str(out)])
    assert code == 0
    values = [float(line.split(",")[1]) for line in out.read_text().splitlines()[1:]]
    assert sorted(set(values)) == list(DEFAULT_HWI_GRID)


def test_cli_pa_sweep_stdout(capsys):
    code = cli.main(["sweep-pa", "--methods", "analytic", "--schemes", "noma"])
    assert code == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == CSV_HEADER
    assert len(lines) == 1 + 9 * 2
    assert all(line.split(",")[0] == "alpha1" for line in lines[1:])


def test_cli_monte_carlo_flags_reach_the_simulator(tmp_path):
    cfg = tmp_path / "fast.cfg"
    cfg.write_text("grid = 0, 10\nschemes = noma\n")
    out1 = tmp_path / "a.csv"
    out2 = tmp_path / "b.csv"
    args = ["sweep-snr", "--config", str(cfg), "--methods", "mc",
            "--symbols", "10000", "--seed", "9"]
    assert cli.main(args + ["--out", str(out1)]) == 0
    assert cli.main(args + ["--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_cli_rejects_bad_inputs(tmp_path, capsys):
    assert cli.main(["sweep-snr", "--config", str(tmp_path / "absent.cfg")]) == 2
    bad = tmp_path / "bad.cfg"
    bad.write_text("flux = 3\n")
    assert cli.main(["sweep-snr", "--config", str(bad)]) == 2
    assert cli.main(["sweep-snr", "--methods", "quadrature"]) == 2
    err = capsys.readouterr().err
    assert "error:" in err


def test_validation_report_grammar():
    buf = io.StringIO()
    records = cli.run_validation(n_symbols=10_000, seed=1, schemes=("noma",),
                                 snr_grid=(0.0, 10.0), out=buf)
    assert len(records) == 4
    lines = buf.getvalue().splitlines()
    assert len(lines) == 4
    pattern = re.compile(
        r"^(pass|FAIL|skip)  snr= *[\d.]+  [\w-]+ +u[12]  "
        r"analytic=\d\.\d{6}e[+-]\d{2}  mc=\d\.\d{6}e[+-]\d{2}  "
        r"\|diff\|=\d\.\d{2}e[+-]\d{2}  \(-?[\d.]+ sigma\)$")
    for line in lines:
        assert pattern.match(line), line
    for record, line in zip(records, lines):
        assert line.startswith("pass" if record["ok"] else "FAIL")


def test_validate_command_exit_code_tracks_failures(capsys):
    code = cli.main(["validate", "--symbols", "10000", "--schemes", "noma"])
    out = capsys.readouterr().out
    lines = [line for line in out.splitlines() if re.match(r"^(pass|FAIL|skip) ", line)]
    assert len(lines) == 14
    has_fail = any(line.startswith("FAIL") for line in lines)
    assert code == (1 if has_fail else 0)
    assert "within 3 standard errors" in out
