import numpy as np
import pytest

from dgsvv.config import (
    ConfigError,
    defaults,
    format_settings,
    parse_assignment,
    parse_file,
    parse_text,
)


def test_defaults_complete_and_sane():
    d = defaults()
    assert d["gas.gamma"] == 1.4
    assert d["gas.Pr"] == 0.72
    assert d["time.scheme"] == "rk4"
    assert d["svv.threshold"] == np.inf
    assert d["output.dir"] == "."


def test_parse_assignment_types():
    assert parse_assignment("mesh.degree = 5") == ("mesh.degree", 5)
    assert parse_assignment("svv.mu1 = 2e-3") == ("svv.mu1", 2e-3)
    assert parse_assignment("mesh.periodic_x = true") == ("mesh.periodic_x", True)
    assert parse_assignment("les.enabled = off") == ("les.enabled", False)
    assert parse_assignment("case.name = tgv") == ("case.name", "tgv")


def test_parse_assignment_errors():
    with pytest.raises(ConfigError):
        parse_assignment("no equals sign")
    with pytest.raises(ConfigError):
        parse_assignment("mesh.degres = 4")  # typo must be fatal
    with pytest.raises(ConfigError):
        parse_assignment("mesh.degree = four")
    with pytest.raises(ConfigError):
        parse_assignment("svv.mu1 = inf")


def test_parse_text_comments_and_line_numbers():
    text = """
    # a comment
    mesh.degree = 3   # trailing comment
    time.t_end = 2.0
    """
    out = parse_text(text)
    assert out == {"mesh.degree": 3, "time.t_end": 2.0}
    with pytest.raises(ConfigError, match="line 3"):
        parse_text("\n\nbad.key = 1\n")


def test_parse_file(tmp_path):
    p = tmp_path / "run.cfg"
    p.write_text("mesh.degree = 2\nsvv.family = ns-kinetic\n")
    out = parse_file(p)
    assert out["mesh.degree"] == 2
    assert out["svv.family"] == "ns-kinetic"


def test_format_settings_roundtrip():
    d = defaults()
    d["mesh.periodic_x"] = True
    d["mesh.degree"] = 7
    text = format_settings(d)
    # drop unset (None) entries which have no parseable value
    kept = "\n".join(
        line for line in text.splitlines() if not line.endswith("= None")
    )
    out = parse_text(kept)
    assert out["mesh.periodic_x"] is True
    assert out["mesh.degree"] == 7
    # canonical: sorted keys, deterministic
    assert text == format_settings(dict(reversed(list(d.items()))))
