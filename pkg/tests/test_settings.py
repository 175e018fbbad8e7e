from src.settings import load_settings


def test_yaml_defaults(tmp_path):
    path = tmp_path / "defaults.yaml"
    path.write_text("bounds:\n  unfold_depth: 7\nseed: 3\n")
    s = load_settings(path)
    assert s.unfold_depth == 7
    assert s.seed == 3
    assert s.unfold_width == 6


def test_missing_file_falls_back_to_builtins(tmp_path):
    s = load_settings(tmp_path / "missing.yaml")
    assert s.describe_bound == 20
    assert s.default_scheme_kind == "sbj"


def test_environment_overrides_yaml(tmp_path, monkeypatch):
    path = tmp_path / "defaults.yaml"
    path.write_text("bounds:\n  eval_depth: 2\n")
    monkeypatch.setenv("JOINFOREST_EVAL_DEPTH", "9")
    monkeypatch.setenv("JOINFOREST_DEFAULT_SCHEME_KIND", "soj")
    s = load_settings(path)
    assert s.eval_depth == 9
    assert s.default_scheme_kind == "soj"
