import pytest

from uavfbl import config
from uavfbl.config import ConfigError, load_bundled, load_scenario, loads

BASE = """\
D_m = 200
H_m = 120
d1_m = 30
d2_m = 130
L_bits = 100
M_symbols = 100
P1_w = 3
P2_w = 1
beta0_db = 50
"""


def test_bundled_matches_reference():
    p, cfg = load_bundled()
    assert p.M == 100
    assert (p.D, p.H, p.d1, p.d2, p.L) == (200, 120, 30, 130, 100)
    assert (p.P1, p.P2, p.beta0_dB, p.noise_power) == (3, 1, 50, 1)
    assert p.B == 1e6 and p.T_max == pytest.approx(100e-6)
    assert (cfg.delta, cfg.zeta, cfg.n_max, cfg.t_max) == (0.5, 0.1, 3, 10)


def test_load_from_path(tmp_path):
    f = tmp_path / "s.cfg"
    f.write_text(BASE + "# trailing comment\n")
    p, _ = load_scenario(f)
    assert p.M == 100 and p.H == 120


def test_missing_d2_named():
    text = "\n".join(l for l in BASE.splitlines() if not l.startswith("d2_m"))
    with pytest.raises(ConfigError, match="d2"):
        loads(text)


def test_d1_not_below_d2():
    with pytest.raises(ConfigError, match="invariant violated.*d1"):
        loads(BASE.replace("d1_m = 30", "d1_m = 140"))


def test_unknown_key_with_line():
    with pytest.raises(ConfigError, match=r"line 10: unknown key 'altitude'"):
        loads(BASE + "altitude = 3\n")


def test_parse_error_with_line():
    with pytest.raises(ConfigError, match="line 3"):
        loads(BASE.replace("d1_m = 30", "d1_m 30"))
    with pytest.raises(ConfigError, match="line 6: M_symbols expects a number"):
        loads(BASE.replace("M_symbols = 100", "M_symbols = 100.5"))


def test_duplicate_key():
    with pytest.raises(ConfigError, match="duplicate"):
        loads(BASE + "H_m = 3\n")


def test_blocklength_from_bandwidth():
    text = BASE.replace("M_symbols = 100", "B_hz = 2e6\nTmax_s = 50e-6")
    assert loads(text)[0].M == 100


def test_inconsistent_bandwidth():
    with pytest.raises(ConfigError):
        loads(BASE + "B_hz = 1e6\nTmax_s = 1e-3\n")


def test_missing_blocklength():
    text = BASE.replace("M_symbols = 100\n", "")
    with pytest.raises(ConfigError, match="M_symbols"):
        loads(text)


def test_solver_keys():
    _, cfg = loads(BASE + "zeta = 0.5\nt_max = 4\nearly_stop_tol = 1e-12\n")
    assert (cfg.zeta, cfg.t_max, cfg.early_stop_tol) == (0.5, 4, 1e-12)
    with pytest.raises(ConfigError):
        loads(BASE + "zeta = 0\n")


def test_key_tables_disjoint():
    assert not set(config.SCENARIO_KEYS) & set(config.SOLVER_KEYS)
