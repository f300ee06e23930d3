"""Job configuration: JSON in, validated objects out.

All validation problems are collected and reported together, each with a
path into the document.
"""
from __future__ import annotations

import json

from .hirsch_ops import HirschOpTable
from .polynomial import AlgebraError, GeneratorSet, Polynomial, Sq1Table
from .rings import RingError, ring_from_name


class ConfigError(Exception):
    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


DEFAULT_BOUNDS = {
    "max_degree": 10,
    "max_resolution_degree": -3,
    "weight_cap": None,
    "iteration_cap": 8,
}


class JobConfig:
    def __init__(self, gens: GeneratorSet, sq1, bounds, cache_dir,
                 raw):
        self.gens = gens
        self.sq1 = sq1
        self.bounds = bounds
        self.cache_dir = cache_dir
        self.raw = raw

    @property
    def ring(self):
        return self.gens.ring

    def op_table(self) -> HirschOpTable:
        if self.sq1 is None:
            return HirschOpTable.trivial(self.gens)
        return HirschOpTable.sq_structure(self.gens, self.sq1)

    def canonical_json(self) -> str:
        """Stable serialization of everything that affects results,
        used for cache keys."""
        return json.dumps(self.raw, sort_keys=True,
                          separators=(",", ":"))


def parse_polynomial(gens: GeneratorSet, text, path, problems):
    """Minimal grammar: `+`-separated products of generator names with
    optional `^` powers; `0` for the zero polynomial."""
    text = text.strip()
    if text in ("0", ""):
        return Polynomial.zero(gens)
    total = Polynomial.zero(gens)
    for term in text.split("+"):
        prod = Polynomial.one(gens)
        for factor in term.replace("*", " ").split():
            name, _, power = factor.partition("^")
            name = name.strip()
            if name not in gens.names:
                problems.append(f"{path}: unknown generator {name!r}")
                return None
            try:
                e = int(power) if power else 1
            except ValueError:
                problems.append(f"{path}: bad exponent {power!r}")
                return None
            if e < 1:
                problems.append(f"{path}: exponent must be >= 1")
                return None
            g = Polynomial.generator(gens, name)
            for _ in range(e):
                prod = prod * g
        total = total + prod
    return total


def parse_config(text: str) -> JobConfig:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError([f"malformed JSON: {exc}"])
    if not isinstance(doc, dict):
        raise ConfigError(["top level must be an object"])
    problems = []

    ring = None
    ring_name = doc.get("ring")
    if not isinstance(ring_name, str):
        problems.append("ring: required string (Z, Q, or Fp)")
    else:
        try:
            ring = ring_from_name(ring_name)
        except RingError as exc:
            problems.append(f"ring: {exc}")

    gen_items = doc.get("generators")
    names, degrees = [], []
    if not isinstance(gen_items, list) or not gen_items:
        problems.append("generators: required non-empty list")
        gen_items = []
    for k, item in enumerate(gen_items):
        path = f"generators[{k}]"
        if not isinstance(item, dict):
            problems.append(f"{path}: must be an object")
            continue
        name = item.get("name")
        degree = item.get("degree")
        if not isinstance(name, str) or not name:
            problems.append(f"{path}.name: required string")
            name = f"_g{k}"
        if not isinstance(degree, int):
            problems.append(f"{path}.degree: required integer")
            degree = 2
        names.append(name)
        degrees.append(degree)

    gens = None
    if ring is not None and names:
        try:
            gens = GeneratorSet(tuple(names), tuple(degrees), ring)
        except (AlgebraError, RingError) as exc:
            problems.append(f"generators: {exc}")

    sq1 = None
    sq1_doc = doc.get("sq1")
    if sq1_doc is not None:
        if ring is not None and ring.char != 2:
            problems.append("sq1: only allowed with ring F2")
        elif not isinstance(sq1_doc, dict):
            problems.append("sq1: must be an object")
        elif gens is not None:
            images = {}
            for name, expr in sorted(sq1_doc.items()):
                path = f"sq1.{name}"
                if name not in gens.names:
                    problems.append(f"{path}: unknown generator")
                    continue
                if not isinstance(expr, str):
                    problems.append(f"{path}: expression must be a string")
                    continue
                poly = parse_polynomial(gens, expr, path, problems)
                if poly is not None:
                    images[name] = poly
            if not problems:
                try:
                    sq1 = Sq1Table(gens, images)
                except (AlgebraError, RingError) as exc:
                    problems.append(f"sq1: {exc}")

    bounds = dict(DEFAULT_BOUNDS)
    bounds_doc = doc.get("bounds", {})
    if not isinstance(bounds_doc, dict):
        problems.append("bounds: must be an object")
        bounds_doc = {}
    for key, value in bounds_doc.items():
        if key not in DEFAULT_BOUNDS:
            problems.append(f"bounds.{key}: unknown bound")
            continue
        if not isinstance(value, int):
            problems.append(f"bounds.{key}: must be an integer")
            continue
        bounds[key] = value
    if bounds["max_degree"] < 1:
        problems.append("bounds.max_degree: must be positive")
    if bounds["max_resolution_degree"] > 0:
        problems.append("bounds.max_resolution_degree: must be <= 0")
    if bounds["iteration_cap"] < 1:
        problems.append("bounds.iteration_cap: must be positive")

    cache_dir = doc.get("cache_dir")
    if cache_dir is not None and not isinstance(cache_dir, str):
        problems.append("cache_dir: must be a string path")
        cache_dir = None

    known = {"ring", "generators", "sq1", "sq_overrides", "bounds",
             "cache_dir"}
    for key in doc:
        if key not in known:
            problems.append(f"{key}: unknown field")

    if problems or gens is None:
        raise ConfigError(problems or ["invalid configuration"])
    return JobConfig(gens, sq1, bounds, cache_dir, doc)
