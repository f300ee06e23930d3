"""Batch front door: parse an algebra description, run a command, emit a
text report (with timings) and an optional machine-readable JSON report
(byte-deterministic, no timings).

Exit codes: 0 success, 1 verdict not computable, 2 internal check
failure or invalid input.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time

from . import CONVENTION_VERSION
from .bar import bar_basis, bar_differential, check_chain_map
from .config import ConfigError, parse_config
from .hirsch_ops import (check_derivation_relations,
                         check_sq_specialization_cases)
from .homology import BarComplex, RingTable, exterior_verdict
from .koszul import oracle_dimensions
from .linalg import SparseMatrix
from .resolution import (Differential, check_hexagon, enumerate_rh_basis,
                         verify_siteration, word_str)
from .rings import RingSpec


# ---------------------------------------------------------------------------
# boundary-matrix cache

def _cache_key(cfg, max_degree):
    payload = "|".join((cfg.canonical_json(), f"max_degree={max_degree}",
                        f"convention={CONVENTION_VERSION}"))
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def _matrix_to_json(m):
    return {"rows": m.n_rows, "cols": m.n_cols,
            "entries": [[i, j, str(c)] for (i, j), c in
                        sorted(m.entries.items())]}


def _matrix_from_json(doc, ring):
    from fractions import Fraction
    m = SparseMatrix(doc["rows"], doc["cols"], ring)
    for i, j, c in doc["entries"]:
        value = Fraction(c)
        m.add_entry(i, j, ring.normalize(
            value if ring.kind == "rationals" else int(value)))
    return m


def _complex_for(cfg, max_degree):
    """Bar complex with its boundary matrices restored from the cache
    when available; a miss computes them and writes the cache atomically.
    Hit or miss never changes any computed value."""
    cx = BarComplex(cfg.gens, max_degree)
    cache_dir = cfg.cache_dir
    if cache_dir is None:
        return cx
    os.makedirs(cache_dir, exist_ok=True)
    path = os.path.join(cache_dir, _cache_key(cfg, max_degree) + ".json")
    if os.path.exists(path):
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
        ring = cfg.ring
        for n_str, blocks in doc["boundary"].items():
            cx._matrices[int(n_str)] = [
                _matrix_from_json(b, ring) for b in blocks]
        return cx
    boundary = {}
    for n in range(0, max_degree + 1):
        boundary[str(n)] = [_matrix_to_json(m)
                            for m in cx.boundary_blocks(n)]
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        json.dump({"boundary": boundary}, fh, sort_keys=True,
                  separators=(",", ":"))
    os.replace(tmp, path)
    return cx


# ---------------------------------------------------------------------------
# report plumbing

def _base_report(command, cfg, max_degree):
    return {
        "command": command,
        "convention_version": CONVENTION_VERSION,
        "ring": cfg.ring.describe(),
        "generators": [{"name": n, "degree": d}
                       for n, d in zip(cfg.gens.names, cfg.gens.degrees)],
        "truncation": {"max_degree": max_degree,
                       "max_resolution_degree":
                           cfg.bounds["max_resolution_degree"]},
        "errors": [],
    }


def _coeff_str(c):
    return str(c)


def _coords_json(coords):
    return {",".join(str(i) for i in s): _coeff_str(c)
            for s, c in sorted(coords.items())}


def _emit(report, json_path):
    text = json.dumps(report, sort_keys=True, indent=2,
                      separators=(",", ": ")) + "\n"
    if json_path is not None:
        tmp = json_path + ".tmp"
        with open(tmp, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, json_path)


def _homology_data(cfg, max_degree):
    cx = _complex_for(cfg, max_degree)
    ranks = []
    torsion = {}
    prev_rank = 0
    for n in range(0, max_degree + 1):
        rank_n = cx.boundary_rank(n)
        ranks.append(cx.dimension(n) - rank_n - prev_rank)
        if not cfg.ring.is_field:
            tors = cx.torsion(n)
            if tors:
                torsion[str(n)] = tors
        prev_rank = rank_n
    return ranks, torsion


# ---------------------------------------------------------------------------
# commands

def cmd_ranks(cfg, max_degree, out):
    report = _base_report("ranks", cfg, max_degree)
    ranks, torsion = _homology_data(cfg, max_degree)
    report["ranks"] = ranks
    report["torsion"] = torsion
    out.write("loop-space cohomology ranks over %s, degrees 0..%d\n"
              % (cfg.ring.describe(), max_degree))
    for n, r in enumerate(ranks):
        tors = torsion.get(str(n), [])
        extra = "  torsion %s" % tors if tors else ""
        out.write("  degree %2d  rank %d%s\n" % (n, r, extra))
    return report, 0


def cmd_ring(cfg, max_degree, out):
    report = _base_report("ring", cfg, max_degree)
    table = cfg.op_table()
    rt = RingTable(table, max_degree)
    entries = []
    for (s1, s2) in sorted(rt.entries):
        e = rt.entries[(s1, s2)]
        entries.append({
            "left": list(s1),
            "right": list(s2),
            "coords": _coords_json(e["coords"]),
            "flags": e["flags"],
        })
    report["entries"] = entries
    report["flagged"] = sum(1 for e in entries if e["flags"])
    out.write("ring table: %d products of exterior classes\n"
              % len(entries))
    for e in entries:
        flag = ("  FLAGS: " + "; ".join(e["flags"])) if e["flags"] else ""
        out.write("  %s * %s = %s%s\n"
                  % (e["left"], e["right"], e["coords"] or "0", flag))
    return report, 0


def cmd_check_exterior(cfg, max_degree, out):
    report = _base_report("check-exterior", cfg, max_degree)
    table = cfg.op_table()
    verdict = exterior_verdict(table, max_degree)
    report["verdict"] = verdict["verdict"]
    report["ranks"] = verdict["ranks"]
    report["oracle"] = verdict["oracle"]
    report["torsion"] = {str(n): t for n, t in verdict["torsion"].items()}
    report["flags"] = verdict["flags"]
    report["witness"] = verdict["witness"]
    out.write("verdict: %s\n" % verdict["verdict"])
    if verdict["witness"]:
        out.write("witness: %s\n" % json.dumps(verdict["witness"],
                                               sort_keys=True))
    for f in verdict["flags"]:
        out.write("flag: %s\n" % f)
    code = 1 if verdict["verdict"] == "inconclusive" else 0
    return report, code


def cmd_oracle_compare(cfg, max_degree, out):
    report = _base_report("oracle-compare", cfg, max_degree)
    ranks, torsion = _homology_data(cfg, max_degree)
    oracle = oracle_dimensions(cfg.gens, max_degree)
    report["ranks"] = ranks
    report["oracle"] = oracle
    report["torsion"] = torsion
    report["all_equal"] = ranks == oracle and not torsion
    out.write("degree  computed  oracle\n")
    for n, (a, b) in enumerate(zip(ranks, oracle)):
        out.write("  %4d  %8d  %6d%s\n"
                  % (n, a, b, "" if a == b else "  MISMATCH"))
    out.write("all_equal: %s\n" % report["all_equal"])
    return report, (0 if report["all_equal"] else 2)


def _suite(name, failures, checked, witnesses=()):
    return {"name": name, "checked": checked, "failures": failures,
            "witnesses": list(witnesses)[:10]}


def cmd_verify(cfg, max_degree, out):
    report = _base_report("verify", cfg, max_degree)
    gens = cfg.gens
    ring = cfg.ring
    suites = []

    # bar differential squares to zero
    bad = []
    checked = 0
    for n in range(1, max_degree + 1):
        for w in bar_basis(gens, n):
            checked += 1
            dd = bar_differential(gens,
                                  bar_differential(gens, {w: ring.one()}))
            if dd:
                bad.append({"word": str(w), "degree": n})
    suites.append(_suite("bar_d_squared", len(bad), checked, bad))

    # resolution differential squares to zero
    res_cap = min(max_degree, 10)
    d = Differential(gens)
    basis = enumerate_rh_basis(gens,
                               r_min=cfg.bounds["max_resolution_degree"],
                               n_max=res_cap)
    bad = []
    checked = 0
    for words in basis.values():
        for word in words:
            checked += 1
            dd = d.of_element(d.of_element({word: ring.one()}))
            if any(not ring.is_zero(c) for c in dd.values()):
                bad.append({"word": word_str(gens, word)})
    suites.append(_suite("resolution_d_squared", len(bad), checked, bad))

    # hexagon relation on generator triples
    import itertools as _it
    bad = []
    checked = 0
    for t in _it.product(range(len(gens.names)), repeat=3):
        if sum(gens.degrees[i] for i in t) > max_degree + 2:
            continue
        checked += 1
        if not check_hexagon(gens, *t):
            bad.append({"triple": list(t)})
    suites.append(_suite("hexagon", len(bad), checked, bad))

    # operation-table boundary relations (characteristic 2 only)
    table = cfg.op_table()
    if ring.char == 2:
        rel_bound = min(max_degree, 8)
        viol = check_derivation_relations(table, rel_bound)
        suites.append(_suite("derivation_relations", len(viol),
                             1, [str(v) for v in viol]))
        cases = check_sq_specialization_cases(table, rel_bound)
        mism = [c for c in cases if not c[2]]
        suites.append(_suite("sq_specialization", len(mism), len(cases),
                             [str(c) for c in mism]))

    # product is a chain map at low weights
    cm_bound = min(max_degree, 8)
    bad = []
    for wx, wy in ((1, 1), (1, 2), (2, 1)):
        bad.extend(check_chain_map(table, wx, wy, cm_bound))
    suites.append(_suite("chain_map_low_weight", len(bad), 3,
                         [str(b) for b in bad]))

    # contraction iteration terminates on low resolution degrees
    sit_cap = min(max_degree, 8)
    basis = enumerate_rh_basis(gens,
                               r_min=-2, n_max=sit_cap)
    bad = []
    checked = 0
    for (r, _n), words in sorted(basis.items()):
        if r == 0:
            continue
        for word in words:
            checked += 1
            got = verify_siteration(gens, {word: ring.one()},
                                    cfg.bounds["iteration_cap"],
                                    differential=d)
            if isinstance(got, dict):
                bad.append({"word": word_str(gens, word)})
    suites.append(_suite("contraction_iteration", len(bad), checked, bad))

    report["suites"] = suites
    failures = sum(s["failures"] for s in suites)
    report["all_passed"] = failures == 0
    for s in suites:
        out.write("%-24s checked %5d  failures %d\n"
                  % (s["name"], s["checked"], s["failures"]))
    out.write("all passed: %s\n" % report["all_passed"])
    return report, (0 if failures == 0 else 2)


COMMANDS = {
    "ranks": cmd_ranks,
    "ring": cmd_ring,
    "check-exterior": cmd_check_exterior,
    "verify": cmd_verify,
    "oracle-compare": cmd_oracle_compare,
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="loopcoh",
        description="Loop-space cohomology of polynomial algebras: "
                    "ranks, ring structure and exterior-algebra checks.")
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--config", required=True,
                        help="path to a JSON job description")
    parser.add_argument("--max-degree", type=int, default=None,
                        help="override the degree bound from the config")
    parser.add_argument("--json", default=None, metavar="OUT",
                        help="write the machine-readable report here")
    parser.add_argument("--cache-dir", default=None, metavar="DIR",
                        help="override the cache directory from the config")
    return parser


def main(argv=None, out=None):
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        with open(args.config, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        out.write("error: %s\n" % exc)
        return 2
    try:
        cfg = parse_config(text)
    except ConfigError as exc:
        report = {"command": args.command,
                  "convention_version": CONVENTION_VERSION,
                  "errors": exc.problems}
        for p in exc.problems:
            out.write("config error: %s\n" % p)
        _emit(report, args.json)
        return 2
    if args.cache_dir is not None:
        cfg.cache_dir = args.cache_dir
    max_degree = args.max_degree if args.max_degree is not None \
        else cfg.bounds["max_degree"]
    if max_degree < 1:
        out.write("error: max degree must be positive\n")
        return 2
    t0 = time.perf_counter()
    report, code = COMMANDS[args.command](cfg, max_degree, out)
    elapsed = time.perf_counter() - t0
    out.write("elapsed: %.2f s\n" % elapsed)
    _emit(report, args.json)
    return code


if __name__ == "__main__":
    sys.exit(main())
