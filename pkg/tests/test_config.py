import json

import pytest

from loopcoh.config import ConfigError, DEFAULT_BOUNDS, parse_config


def valid_doc():
    return {
        "ring": "F2",
        "generators": [{"name": "u2", "degree": 2},
                       {"name": "u3", "degree": 3}],
        "sq1": {"u2": "u3"},
        "bounds": {"max_degree": 6},
    }


def test_parse_valid_config():
    cfg = parse_config(json.dumps(valid_doc()))
    assert cfg.ring.describe() == "F2"
    assert cfg.gens.names == ("u2", "u3")
    assert cfg.sq1 is not None
    assert cfg.bounds["max_degree"] == 6
    assert cfg.bounds["iteration_cap"] == DEFAULT_BOUNDS["iteration_cap"]


def test_parse_minimal_integer_config():
    cfg = parse_config(json.dumps({
        "ring": "Z",
        "generators": [{"name": "x", "degree": 2}],
        "bounds": {"max_degree": 10},
    }))
    assert cfg.ring.describe() == "Z"
    assert cfg.sq1 is None


def test_malformed_json():
    with pytest.raises(ConfigError) as exc:
        parse_config("{not json")
    assert "malformed JSON" in exc.value.problems[0]


def test_odd_degree_over_z_rejected():
    doc = {"ring": "Z",
           "generators": [{"name": "x", "degree": 3}]}
    with pytest.raises(ConfigError) as exc:
        parse_config(json.dumps(doc))
    assert any("odd degree" in p for p in exc.value.problems)


def test_degree_below_two_rejected():
    doc = {"ring": "Z", "generators": [{"name": "x", "degree": 1}]}
    with pytest.raises(ConfigError):
        parse_config(json.dumps(doc))


def test_sq1_requires_f2():
    doc = {"ring": "Z",
           "generators": [{"name": "x", "degree": 2}],
           "sq1": {"x": "x"}}
    with pytest.raises(ConfigError) as exc:
        parse_config(json.dumps(doc))
    assert any("sq1" in p for p in exc.value.problems)


def test_sq1_unknown_generator():
    doc = valid_doc()
    doc["sq1"] = {"nope": "u3"}
    with pytest.raises(ConfigError) as exc:
        parse_config(json.dumps(doc))
    assert any("unknown generator" in p for p in exc.value.problems)


def test_sq1_inhomogeneous_image():
    doc = valid_doc()
    doc["sq1"] = {"u2": "u2"}  # degree 2, needs degree 3
    with pytest.raises(ConfigError):
        parse_config(json.dumps(doc))


def test_sq1_expression_grammar():
    doc = valid_doc()
    doc["generators"].append({"name": "u7", "degree": 7})
    doc["sq1"] = {"u2": "u3", "u7": "u2^4 + u2 u3^2"}
    cfg = parse_config(json.dumps(doc))
    img = cfg.sq1.image_of(2)
    assert img.degree() == 8 and len(img.terms) == 2


def test_problems_are_aggregated_with_paths():
    doc = {"ring": "bogus",
           "generators": [{"name": "x"}, {"degree": 1}],
           "bounds": {"max_degree": 0, "nope": 3},
           "extra": True}
    with pytest.raises(ConfigError) as exc:
        parse_config(json.dumps(doc))
    joined = "\n".join(exc.value.problems)
    assert "ring" in joined
    assert "generators[0].degree" in joined
    assert "generators[1].name" in joined
    assert "bounds.max_degree" in joined
    assert "bounds.nope" in joined
    assert "extra" in joined


def test_unknown_top_level_field():
    doc = valid_doc()
    doc["surprise"] = 1
    with pytest.raises(ConfigError) as exc:
        parse_config(json.dumps(doc))
    assert any("surprise" in p for p in exc.value.problems)


def test_canonical_json_is_stable():
    a = parse_config(json.dumps(valid_doc()))
    doc = valid_doc()
    # key order in the document must not matter
    reordered = {k: doc[k] for k in reversed(list(doc))}
    b = parse_config(json.dumps(reordered))
    assert a.canonical_json() == b.canonical_json()
