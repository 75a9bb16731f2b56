import runpy
import sys

import pytest

import gridcolor


def test_module_entrypoint_executes(monkeypatch, capsys):
    monkeypatch.setattr(sys, "argv", ["gridcolor", "--cache", "none", "maxrf", "6", "8"])

    with pytest.raises(SystemExit) as info:
        runpy.run_module("gridcolor.__main__", run_name="__main__")

    assert info.value.code == 0
    assert capsys.readouterr().out == "maxrf(6,8) = 19 (closed-form)\n"


def test_environment_selects_the_cache(monkeypatch, tmp_path):
    path = tmp_path / "env-cache.json"
    monkeypatch.setenv("GRIDCOLOR_CACHE", str(path))
    monkeypatch.setattr(sys, "argv", ["gridcolor", "classify", "5", "5", "2"])

    with pytest.raises(SystemExit) as info:
        runpy.run_module("gridcolor.__main__", run_name="__main__")

    assert info.value.code == 1
    assert "5x5x2" in path.read_text()


def test_version_is_exposed():
    assert gridcolor.__version__ == "0.1.0"
