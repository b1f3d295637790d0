import json
from pathlib import Path

import numpy as np
import pytest

from statemetric.errors import InputError
from statemetric.report import Report, export, load_report, run_scenario
from statemetric.scenario import ScenarioError, load_scenario, parse_scenario

FIXTURES = Path(__file__).parent / "fixtures"

TORUS2 = """
schema_version = 1
[instance]
kind = "fuzzy_torus"
q = 2
"""


def states_block(*entries):
    return "".join(f"\n[[states]]\n{e}\n" for e in entries)


def test_minimal_z2_report():
    rep = run_scenario(FIXTURES / "z2.toml")
    assert rep.passed
    assert rep.state_names == ["basis0", "basis1"]
    assert abs(rep.matrix()[0, 1] - 1.0) <= 1e-9
    assert rep.data["distances"][0]["certified"] is True
    assert rep.data["diameter_bound"] == pytest.approx(1.0)


@pytest.mark.parametrize("fixture, key, line", [
    ("bad_group_table.toml", "instance.group", 5),
    ("zero_length.toml", "instance.length", 6),
    ("non_state.toml", "states[0]", 7),
    ("unknown_key.toml", "seminorm.radius", 9),
    ("malformed.toml", "", 3),
])
def test_invalid_fixtures(fixture, key, line):
    with pytest.raises(ScenarioError) as exc:
        load_scenario(FIXTURES / fixture)
    assert exc.value.key == key
    assert exc.value.line == line
    assert f"line {line}" in str(exc.value)


@pytest.mark.parametrize("text, key", [
    (TORUS2.replace("= 1", "= 2") + states_block('kind = "basis"\nindex = 0'), "schema_version"),
    (TORUS2 + states_block('kind = "basis"\nindex = 5'), "states[0].index"),
    (TORUS2 + states_block('kind = "basis"\nindex = 0', 'kind = "basis"\nindex = 0'), "states"),
    (TORUS2 + states_block('kind = "wavefunction"'), "states[0].kind"),
    (TORUS2, "states"),
    ('seed = -1\n' + TORUS2 + states_block('kind = "basis"\nindex = 0'), "seed"),
    ('tolerance = 0\n' + TORUS2 + states_block('kind = "basis"\nindex = 0'), "tolerance"),
    (TORUS2 + '[seminorm]\nkind = "holder"\n' + states_block('kind = "basis"\nindex = 0'), "seminorm.r"),
    (TORUS2 + '[seminorm]\nkind = "lie"\n' + states_block('kind = "basis"\nindex = 0'), "seminorm.kind"),
    ('bogus = 1\n' + TORUS2 + states_block('kind = "basis"\nindex = 0'), "bogus"),
])
def test_invalid_text(text, key):
    with pytest.raises(ScenarioError) as exc:
        parse_scenario(text)
    assert exc.value.key == key


def test_unknown_key_in_state_reports_line():
    text = TORUS2 + states_block('kind = "basis"\nindex = 0', 'kind = "random"\ncolour = "red"')
    with pytest.raises(ScenarioError) as exc:
        parse_scenario(text)
    assert exc.value.key == "states[1].colour"
    assert text.splitlines()[exc.value.line - 1].startswith("colour")


def test_state_kinds_and_names():
    sc = parse_scenario(TORUS2 + states_block(
        'kind = "basis"\nindex = 1', 'kind = "maximally_mixed"', 'kind = "random"\ncount = 2\nname = "r"',
        'kind = "density"\nreal = [[0.5, 0.0], [0.0, 0.5]]\nname = "half"'))
    assert [s.name for s in sc.states] == ["basis1", "mixed", "r_0", "r_1", "half"]
    assert np.allclose(sc.states[1].rho, sc.states[4].rho)


def test_overrides():
    sc = load_scenario(FIXTURES / "torus3.toml", {"seed": 9, "tolerance": 1e-4, "max_iterations": None})
    assert sc.seed == 9 and sc.tolerance == 1e-4 and sc.max_iterations == 500
    assert load_scenario(FIXTURES / "torus3.toml").seed == 4


def test_scaled_seminorm_scenario():
    base = run_scenario(FIXTURES / "z2.toml").matrix()
    text = (FIXTURES / "z2.toml").read_text() + '\n[seminorm]\nkind = "scaled"\nt = 4.0\n'
    scaled = run_scenario(text).matrix()
    assert scaled[0, 1] == pytest.approx(base[0, 1] / 4, abs=1e-9)


def test_rerun_is_byte_identical(tmp_path):
    a = export(run_scenario(FIXTURES / "torus3.toml"), "json")
    b = export(run_scenario(FIXTURES / "torus3.toml"), "json")
    assert a == b
    csv_a = export(run_scenario(FIXTURES / "torus3.toml"), "csv", tmp_path / "a.csv")
    assert (tmp_path / "a.csv").read_text() == csv_a


def test_json_round_trip(tmp_path):
    rep = run_scenario(FIXTURES / "torus3.toml")
    export(rep, "json", tmp_path / "r.json")
    back = load_report(tmp_path / "r.json")
    assert back.data == rep.data
    assert np.array_equal(back.matrix(), rep.matrix())
    assert rep.data["suite"]["passed"] is True
    assert json.loads(rep.to_json())["schema_version"] == 1


def test_csv_shape():
    rep = run_scenario(FIXTURES / "torus3.toml")
    rows = [line.split(",") for line in rep.to_csv().splitlines()]
    assert rows[0] == rep.state_names
    m = np.array(rows[1:], dtype=float)
    assert np.array_equal(m, m.T) and np.all(np.diag(m) == 0)


def test_single_state_csv():
    rep = run_scenario(TORUS2 + states_block('kind = "basis"\nindex = 0'))
    assert rep.to_csv() == "basis0\n0\n"
    assert rep.passed


def test_distance_mode_and_bad_pair():
    rep = run_scenario(FIXTURES / "torus3.toml", mode="distance", pair=(0, 1))
    assert rep.state_names == ["basis0", "mixed"]
    assert rep.matrix()[0, 1] == pytest.approx(2 / 3, abs=1e-6)
    for pair in ((0, 0), (0, 9)):
        with pytest.raises(InputError):
            run_scenario(FIXTURES / "torus3.toml", mode="distance", pair=pair)


def test_report_class():
    rep = Report({"passed": False, "states": ["a"], "distances": []})
    assert not rep.passed and rep.matrix().shape == (1, 1)
