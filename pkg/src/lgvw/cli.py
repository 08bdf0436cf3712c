"""Command-line workbench: lgvw <command> [--pair NAME | --poly STR --group SPEC] ...

Exit codes: 0 all checks pass, 1 a check failed, 2 usage or configuration
error, 3 internal assertion.
"""
import argparse
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from . import __version__
from .errors import (ConfigError, HalfPowerResidue, LGError, MapNotWellDefined, PreconditionNotMet,
                     TruncationTooSmall)

SCHEMA_VERSION = 1
COMMANDS = ["analyze", "state-space", "virasoro", "quantize", "mirror", "semisimple",
            "cy-census", "degree-criterion", "elliptic", "all"]
INTERNAL = (AssertionError, MapNotWellDefined, HalfPowerResidue)


class Report:
    def __init__(self, command, pair=None):
        self.command = command
        self.pair = pair
        self.checks = []
        self.tables = {}
        self.seconds = 0.0

    def check(self, name, ok, **detail):
        self.checks.append({"name": name, "status": "pass" if ok else "fail", **detail})
        return ok

    def skip(self, name, reason):
        self.checks.append({"name": name, "status": "skipped", "reason": reason})

    @property
    def failed(self):
        return any(c["status"] == "fail" for c in self.checks)

    def payload(self, timing=True):
        out = {
            "schema_version": SCHEMA_VERSION,
            "lgvw_version": __version__,
            "command": self.command,
            "pair": self.pair,
            "checks": self.checks,
            "tables": self.tables,
        }
        if timing:
            out["seconds"] = round(self.seconds, 3)
        return out


def _plain(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, (str, int, float, bool)) or x is None:
        return x
    return str(x)


# ---------------------------------------------------------------- configuration

class PairConfig:
    def __init__(self, pair=None, polynomial=None, group=None, checks=None, truncation=8, kmax=3, d=None):
        self.pair = pair
        self.polynomial = polynomial
        self.group = group
        self.checks = checks or []
        self.truncation = truncation
        self.kmax = kmax
        self.d = d
        if kmax < -1:
            raise ConfigError("kmax must be at least -1")
        if truncation < 2 * kmax + 2:
            raise ConfigError(f"truncation {truncation} is below 2*kmax + 2 = {2 * kmax + 2}")

    def resolve(self, default="cubic"):
        from .catalog import resolve_pair
        if self.pair is None and self.polynomial is None:
            return resolve_pair(name=default, group=self.group)
        return resolve_pair(name=self.pair, poly=self.polynomial, group=self.group)


def load_config_file(path):
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, ValueError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    known = {"pair", "polynomial", "group", "checks", "truncation", "kmax", "d"}
    extra = set(data) - known
    if extra:
        raise ConfigError(f"unknown config fields: {sorted(extra)}")
    return data


# ---------------------------------------------------------------- commands

def cmd_analyze(cfg):
    from .poly_core import central_charge, classify_invertible, is_calabi_yau, weight_system
    from .symmetry import is_admissible, maximal_group
    W, G, label = cfg.resolve()
    rep = Report("analyze", label)
    q = weight_system(W)
    try:
        atoms = [repr(a) for a in classify_invertible(W)]
    except LGError as exc:
        atoms = f"not invertible: {exc}"
    rep.tables["analysis"] = {
        "polynomial": str(W),
        "weights": [str(x) for x in q],
        "chat": str(central_charge(q)),
        "calabi_yau": is_calabi_yau(W),
        "atoms": atoms,
        "max_group_order": len(maximal_group(W)),
        "group_order": len(G),
        "group_generators": [str(g) for g in G.generators],
    }
    rep.check("admissible", is_admissible(G, W))
    return rep


def cmd_state_space(cfg):
    from .state_space import build_state_space, check_poincare, check_supertrace_formula
    W, G, label = cfg.resolve()
    rep = Report("state-space", label)
    S = build_state_space(W, G)
    rep.tables["basis"] = S.rows()
    rep.tables["rank"] = S.rank
    st = check_supertrace_formula(S)
    rep.check("supertrace_formula", st["holds"], lhs=str(st["lhs"]), rhs=str(st["rhs"]))
    pc = check_poincare(S)
    rep.check("poincare_routes_agree", pc["sector_routes_agree"] and pc["pair_equals_census"])
    rep.check("poincare_limits", pc["chi"] == pc["chi_direct"] and pc["str_theta2"] == pc["str_theta2_direct"],
              chi=str(pc["chi"]), str_theta2=str(pc["str_theta2"]))
    return rep


def cmd_virasoro(cfg):
    from .state_space import build_state_space
    from .virasoro_ops import check_grading_identity, check_virasoro_relations
    W, G, label = cfg.resolve()
    rep = Report("virasoro", label)
    S = build_state_space(W, G)
    res = check_virasoro_relations(S, cfg.kmax, cfg.truncation)
    for r in res["relations"]:
        rep.check(f"[L_{r['m']},L_{r['n']}]", r["holds"], **({} if r["holds"] else {"defect": r["defect"]}))
    gi = check_grading_identity(S, cfg.truncation)
    rep.check("grading_identity", gi["holds"])
    return rep


def cmd_quantize(cfg):
    from .quantization import check_bracket_defect, check_quantization_identity
    from .state_space import build_state_space
    W, G, label = cfg.resolve()
    rep = Report("quantize", label)
    S = build_state_space(W, G)
    M = cfg.truncation
    for k in range(-1, max(cfg.kmax, 0) + 1):
        r = check_quantization_identity(S, k, M)
        extra = {}
        if k == 0:
            extra = {"constant_gap": str(r["constant_gap"]),
                     "signed_quarter_str": str(r["signed_quarter_str"]),
                     "unsigned_quarter_sum": str(r["unsigned_quarter_sum"])}
        rep.check(f"quantized_L_{k}", r["holds"], **extra)
    b = check_bracket_defect(S, M)
    rep.check("bracket_defect_is_cocycle", b["holds"], defect=str(b["defect"]),
              cocycle=str(b["cocycle"]), expected=str(b["expected"]))
    return rep


def cmd_mirror(cfg):
    from .mirror import krawitz_map, verify_mirror
    from .state_space import build_state_space
    W, G, label = cfg.resolve()
    rep = Report("mirror", label)
    S = build_state_space(W, G, with_pairing=False)
    corr = krawitz_map(S)
    r = verify_mirror(corr)
    rep.tables["correspondence"] = corr.table()
    rep.tables["placed_by_character"] = r["placed_by_character"]
    for key in ("bijective", "bigrading_preserved", "parity_preserved", "sector_is_character",
                "chat_equal", "chi_equal", "str_theta2_equal"):
        rep.check(key, r[key])
    return rep


def _fermat_degree(cfg):
    if cfg.d is not None:
        return cfg.d
    from .poly_core import classify_invertible
    W, G, _ = cfg.resolve(default="fermat2-4")
    atoms = classify_invertible(W)
    if W.nvars != 2 or any(a.kind != "Fermat" for a in atoms) or len({a.exponents for a in atoms}) != 1:
        raise ConfigError("semisimple runs only for x1^d + x2^d")
    return atoms[0].exponents[0]


def cmd_semisimple(cfg):
    from .fermat_frobenius import check_census, semisimplicity_verdict
    d = _fermat_degree(cfg)
    rep = Report("semisimple", f"x1^{d}+x2^{d}")
    v = semisimplicity_verdict(d)
    if d >= 4:
        rep.tables["det"] = v["det"]
        rep.check("det_matches_closed_form", v["holds"], closed_form=v["closed_form"])
    rep.check("semisimple", v["semisimple"], reason=v["reason"])
    if d >= 3:
        c = check_census(d)
        rep.tables["census"] = [list(x) for x in c["found"]]
        rep.check("nonvanishing_census", c["holds"])
    return rep


def cmd_cy_census(cfg):
    from .catalog import check_cy3_census, check_rank_census
    rep = Report("cy-census")
    r = check_cy3_census()
    rep.tables["groups"] = {", ".join(k): v for k, v in r["groups"].items()}
    rep.check("census_equals_table", r["found"] == r["table"] and not r["missing_from_census"]
              and not r["missing_from_table"], missing_from_census=r["missing_from_census"],
              missing_from_table=r["missing_from_table"])
    rep.check("weight_grouping", r["weight_groups_match"])
    rep.check("e8_chain_cell_empty", r["e8_chain_cell_empty"])
    rc = check_rank_census()
    rep.tables["ranks"] = rc["rows"]
    rep.check("rank_census", rc["holds"])
    return rep


def cmd_degree_criterion(cfg):
    from .catalog import degree_criterion
    W, G, label = cfg.resolve(default="quintic")
    rep = Report("degree-criterion", label)
    try:
        r = degree_criterion(W, G)
    except PreconditionNotMet as exc:
        rep.skip("degree_criterion", str(exc))
        return rep
    rep.tables["rank"] = r["rank"]
    rep.check("deg_at_least_one_outside_J", not r["elements_below_one"], below=r["elements_below_one"])
    rep.check("age_one_sectors_are_J", not r["exceptions"] and len(r["age_one_narrow"]) == 1,
              narrow=r["age_one_narrow"], single_fixed=r["age_one_single_fixed"])
    return rep


def cmd_elliptic(cfg):
    from .catalog import elliptic_checks
    rep = Report("elliptic", "x1^3+x2^3+x3^3 / J")
    r = elliptic_checks(kmax=min(cfg.kmax, 3) if cfg.kmax >= 0 else 3, M=cfg.truncation)
    for row in r["identification"]:
        rep.check(f"L_{row['k']}_identification", row["holds"])
    rep.check("S_conjugation_invariance", r["conjugation_invariant"])
    rep.check("log_S_quantization_matches_display", r["log_S_matches_display"])
    for row in r["D_brackets"]:
        rep.check(f"[logS^,D_{row['k']}]=0", row["holds"])
    rep.check("negative_control_breaks", r["negative_control_breaks"])
    return rep


HANDLERS = {
    "analyze": cmd_analyze,
    "state-space": cmd_state_space,
    "virasoro": cmd_virasoro,
    "quantize": cmd_quantize,
    "mirror": cmd_mirror,
    "semisimple": cmd_semisimple,
    "cy-census": cmd_cy_census,
    "degree-criterion": cmd_degree_criterion,
    "elliptic": cmd_elliptic,
}


def _run_one(name, cfg):
    start = time.perf_counter()
    rep = HANDLERS[name](cfg)
    rep.seconds = time.perf_counter() - start
    return rep


def workers():
    raw = os.environ.get("LGVW_WORKERS")
    if raw is None:
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"LGVW_WORKERS must be an integer, got {raw!r}") from None
    if n < 1:
        raise ConfigError("LGVW_WORKERS must be at least 1")
    return n


def run_all(cfg):
    names = [n for n in HANDLERS if n not in ("semisimple", "degree-criterion")]
    jobs = [(n, cfg) for n in names]
    jobs.append(("semisimple", PairConfig(d=cfg.d or 6, kmax=cfg.kmax, truncation=cfg.truncation)))
    jobs.append(("degree-criterion", PairConfig(pair="quintic", kmax=cfg.kmax, truncation=cfg.truncation)))
    n = min(workers(), len(jobs))
    if n == 1:
        return [_run_one(name, c) for name, c in jobs]
    with ProcessPoolExecutor(max_workers=n) as pool:
        futures = [pool.submit(_run_one, name, c) for name, c in jobs]
        return [f.result() for f in futures]


# ---------------------------------------------------------------- output

def render_text(reports):
    lines = []
    for rep in reports:
        head = f"== {rep.command}" + (f" [{rep.pair}]" if rep.pair else "")
        lines.append(head)
        for c in rep.checks:
            tag = {"pass": "PASS", "fail": "FAIL", "skipped": "SKIP"}[c["status"]]
            extra = {k: v for k, v in c.items() if k not in ("name", "status")}
            tail = "  " + json.dumps(_plain(extra), sort_keys=True) if extra else ""
            lines.append(f"  {tag} {c['name']}{tail}")
        for key, table in rep.tables.items():
            if isinstance(table, list):
                lines.append(f"  {key}:")
                for row in table:
                    lines.append("    " + (json.dumps(_plain(row), sort_keys=True)
                                          if not isinstance(row, str) else row))
            else:
                lines.append(f"  {key}: {json.dumps(_plain(table), sort_keys=True)}")
    return "\n".join(lines) + "\n"


def render_json(reports, timing=True):
    payload = [_plain(r.payload(timing)) for r in reports]
    data = payload[0] if len(payload) == 1 else {"schema_version": SCHEMA_VERSION, "reports": payload}
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def build_parser():
    p = argparse.ArgumentParser(prog="lgvw", description="Exact checks for LG pairs.")
    p.add_argument("command", choices=COMMANDS)
    src = p.add_mutually_exclusive_group()
    src.add_argument("--pair", help="catalog name (listed in the README) or a polynomial")
    src.add_argument("--poly", help="polynomial, e.g. 'x1^3+x2^3+x3^3'")
    p.add_argument("--group", help="J, max, SL, or JSON list of phase vectors [[num,den],...]")
    p.add_argument("--kmax", type=int, default=None)
    p.add_argument("-M", dest="truncation", type=int, default=None)
    p.add_argument("--d", type=int, default=None, help="degree for semisimple")
    p.add_argument("--config", help="JSON file with PairConfig fields")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--out", help="write the report to this path")
    p.add_argument("--no-timing", action="store_true", help="omit timings (byte-stable output)")
    p.add_argument("--version", action="version", version=f"lgvw {__version__}")
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        fields = load_config_file(args.config) if args.config else {}
        for key, val in (("pair", args.pair), ("polynomial", args.poly), ("group", args.group),
                         ("kmax", args.kmax), ("truncation", args.truncation), ("d", args.d)):
            if val is not None:
                fields[key] = val
        fields.setdefault("kmax", 3)
        fields.setdefault("truncation", max(8, 2 * fields["kmax"] + 2))
        cfg = PairConfig(**fields)
        if args.command == "all":
            reports = run_all(cfg)
        else:
            reports = [_run_one(args.command, cfg)]
    except INTERNAL as exc:
        print(f"lgvw: internal assertion: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    except (LGError, TruncationTooSmall, ValueError) as exc:
        print(f"lgvw: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    text = render_json(reports, not args.no_timing) if args.format == "json" else render_text(reports)
    if args.out:
        try:
            with open(args.out, "w") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"lgvw: cannot write {args.out}: {exc}", file=sys.stderr)
            return 2
    else:
        sys.stdout.write(text)
    return 1 if any(r.failed for r in reports) else 0


if __name__ == "__main__":
    sys.exit(main())
