from __future__ import annotations

import pytest

from rnatopo.energy import ENV_CONFIG, EnergyModel, load_energy_config, structure_energy


def test_defaults():
    m = EnergyModel()
    assert m.pair_energy("G", "C", False) == -3.0
    assert m.pair_energy("U", "A", True) == -2.0
    assert m.pair_energy("G", "U", False) == -1.0
    assert m.pair_energy("A", "C", False) is None
    assert (m.rt, m.theta) == (0.6, 3)


def test_uniform():
    m = EnergyModel.uniform(0.0, theta=0)
    assert m.pair_energy("C", "G", True) == 0.0 and m.theta == 0


@pytest.mark.parametrize("kw", [{"rt": 0.0}, {"theta": -1}, {"stack_interior": float("nan")}])
def test_rejects(kw):
    with pytest.raises(ValueError):
        EnergyModel(**kw)


def test_config_file(tmp_path):
    path = tmp_path / "e.ini"
    path.write_text("exterior_GC = -5\nstack_exterior = -1.5\nRT = 1.0\ntheta = 0\n")
    m = load_energy_config(str(path))
    assert m.exterior["GC"] == -5 and m.interior["GC"] == -3.0
    assert (m.stack_exterior, m.rt, m.theta) == (-1.5, 1.0, 0)


def test_config_with_section(tmp_path):
    path = tmp_path / "e.ini"
    path.write_text("[energy]\ninterior_AU = -4\n")
    assert load_energy_config(str(path)).interior["AU"] == -4


def test_unknown_key(tmp_path):
    path = tmp_path / "e.ini"
    path.write_text("interior_XY = 1\n")
    with pytest.raises(ValueError, match="interior_XY"):
        load_energy_config(str(path))


def test_environment(tmp_path, monkeypatch):
    path = tmp_path / "e.ini"
    path.write_text("theta = 1\n")
    monkeypatch.setenv(ENV_CONFIG, str(path))
    assert load_energy_config().theta == 1
    monkeypatch.delenv(ENV_CONFIG)
    assert load_energy_config() == EnergyModel()


def test_structure_energy_with_stack():
    m = EnergyModel(stack_exterior=-1.0)
    # GG / CC with two stacked exterior arcs
    assert structure_energy("GGCC", 2, [(1, 4), (2, 3)], m) == -7.0
    assert structure_energy("GGCC", 2, [(1, 3)], m) == -3.0
    with pytest.raises(ValueError):
        structure_energy("GGCC", 2, [(1, 2)], m)
