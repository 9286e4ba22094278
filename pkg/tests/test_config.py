import json

from utils.config import Config


def test_defaults_when_file_is_missing(tmp_path):
    config = Config(str(tmp_path / "none.json"))
    assert config.get_int("max_order") == 1024
    assert config.get("golden_file").endswith("goldens.json")
    assert config.get("unknown", 5) == 5


def test_file_values_override_defaults(tmp_path):
    path = tmp_path / "config.json"
    path.write_text(json.dumps({"max_class": 4}))
    config = Config(str(path))
    assert config.get_int("max_class") == 4
    assert config.get_int("max_basis") == 10000


def test_unreadable_file_falls_back(tmp_path):
    path = tmp_path / "config.json"
    path.write_text("[not an object]")
    assert Config(str(path)).get_int("workers") == 0


def test_bad_integer_uses_default(tmp_path):
    config = Config(str(tmp_path / "none.json"))
    config.update({"max_order": "lots"})
    assert config.get_int("max_order") == 1024


def test_update_overrides_file_values(tmp_path):
    path = tmp_path / "config.json"
    path.write_text(json.dumps({"max_order": 256, "workers": 1}))
    config = Config(str(path))
    config.update({"max_order": 64})
    assert config.get_int("max_order") == 64
    assert config.get_int("workers") == 1
