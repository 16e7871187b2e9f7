"""Command line front-end.

Exit codes: 0 success, 1 theorem-check or golden-file mismatch, 2 bad
configuration or exhausted budget.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .affine import AffineElement, AffineWeylGroup
from .classes import (NewtonClass, check_class, f_map, is_minimal, newton_point, parse_class,
                      straight_classes)
from .errors import AffineReductionError, ConfigurationError, TheoremMismatch
from .invariants import (check_superregular, classify_paths, comparison_flags, count_adlv, count_alv,
                         dim_adlv, superregular_hypotheses, virtual_dim)
from .reduction import (DEFAULT_NODE_BUDGET, DEFAULT_PATH_BUDGET, build_tree, tree_to_dot,
                        tree_to_json)
from .rootdata import build_root_datum, dot
from .weights import chi_check, integral_classes

SCHEMA = "1"
CONFIG_KEYS = {"type", "isogeny", "word", "element", "b", "mu", "format", "seed", "node_budget",
               "path_budget", "n_values", "dim_y_gamma", "max_length"}
DEFAULT_MATRIX = [("A1", None), ("A2", None), ("C2", "adjoint"), ("GL2", None), ("GL3", None)]


class Run:
    """Validated run configuration plus the affine Weyl group it selects."""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.G = AffineWeylGroup(build_root_datum(args.type, args.isogeny))
        self.strategy = "canonical" if args.seed is None else args.seed
        if args.node_budget < 1 or args.path_budget < 1:
            raise ConfigurationError("budgets must be positive")

    def element(self) -> AffineElement:
        a = self.args
        if a.word is not None and a.element is not None:
            raise ConfigurationError("give either --word or --element, not both")
        if a.word is not None:
            return self.G.parse_word(a.word)
        if a.element is not None:
            try:
                obj = json.loads(a.element) if isinstance(a.element, str) else a.element
            except json.JSONDecodeError as exc:
                raise ConfigurationError(f"--element is not valid JSON: {exc}") from None
            if not isinstance(obj, dict):
                raise ConfigurationError("--element must be a JSON object")
            return self.G.check(self.G.from_json(obj))
        raise ConfigurationError("an element is required (--word or --element)")

    def newton_class(self) -> NewtonClass | None:
        b = self.args.b
        if b is None:
            return None
        if isinstance(b, dict):
            return check_class(self.G, NewtonClass.from_json(b))
        return parse_class(self.G, b)

    def mu(self) -> tuple:
        text = self.args.mu
        if text is None:
            raise ConfigurationError("--mu is required")
        d = self.G.datum
        if isinstance(text, list):
            vec = [Fraction(x) for x in text]
        elif text == "theta":
            comps = d.components()
            if len(comps) != 1:
                raise ConfigurationError("--mu theta needs an irreducible root system")
            vec = list(self.G.by_label[0].element.t)
        elif text in ("rho", "2rho"):
            k = 1 if text == "rho" else 2
            vec = [k * x for x in d.rho_check]
        else:
            try:
                vec = [Fraction(x) for x in text.split(",")]
            except (ValueError, ZeroDivisionError):
                raise ConfigurationError(f"malformed --mu {text!r}") from None
        if len(vec) != d.rank or any(Fraction(x).denominator != 1 for x in vec):
            raise ConfigurationError(f"mu={text} is not an integral coweight of {d.label}")
        mu = tuple(int(x) for x in vec)
        if not d.is_dominant(mu):
            raise ConfigurationError(f"mu={mu} is not dominant")
        return mu

    def tree(self, w):
        return build_tree(self.G, w, self.strategy, self.args.node_budget)


def _num(x):
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else str(x)


def _elt(G, w) -> dict:
    return {**G.to_json(w), "label": G.format(w)}


def _classes_at_ends(G, tree) -> list[NewtonClass]:
    return sorted({f_map(G, end) for end in tree.end_points})


# -- commands -------------------------------------------------------------------------------


def cmd_tree(run: Run):
    G = run.G
    tree = run.tree(run.element())
    tree.check()
    if run.args.format == "dot":
        return tree_to_dot(tree), 0
    data = tree_to_json(tree)
    if run.args.format == "table":
        rows = [[str(n["id"]), n["label"], str(n["length"]), NewtonClass.from_json(n["f"]).format(),
                 "end" if n["end"] else ""] for n in data["nodes"]]
        text = _table(["id", "element", "length", "f", ""], rows)
        text += "".join(f"{e['from']} -> {e['to']} {e['kind']}\n" for e in data["edges"])
        return text, 0
    return {"command": "tree", "datum": G.datum.to_json(), **data}, 0


def _dims_rows(run: Run, with_components: bool = False):
    G = run.G
    w = run.element()
    tree = run.tree(w)
    c = run.newton_class()
    classes = [c] if c is not None else _classes_at_ends(G, tree)
    n_values = getattr(run.args, "n_values", None) or {}
    rows = []
    for cl in classes:
        dim = dim_adlv(G, w, cl, tree)
        row = {"w": _elt(G, w), "c": cl.to_json(), "d_w": _num(virtual_dim(G, w, cl)), "dim": dim,
               "count": count_adlv(G, w, cl, tree)}
        if dim is not None and dim > virtual_dim(G, w, cl):
            raise TheoremMismatch(f"dim {dim} exceeds d_w for {G.format(w)}, {cl.format()}")
        if with_components:
            row["count_alv"] = count_alv(G, w, cl, n_values, tree) if dim is not None else 0
            row["flags"] = comparison_flags(G, w, cl, tree)
            if getattr(run.args, "dim_y_gamma", None) is not None and dim is not None:
                row["dim_Y_gamma"] = run.args.dim_y_gamma
                row["dim_Y_w_gamma"] = dim + run.args.dim_y_gamma
        rows.append(row)
    return rows


def _rows_output(run, command, rows, columns):
    if run.args.format == "table":
        body = [[_cell(r.get(k)) for k in columns] for r in rows]
        return _table(columns, body)
    return {"command": command, "rows": rows}


def cmd_dims(run: Run):
    rows = _dims_rows(run)
    return _rows_output(run, "dims", rows, ["w", "c", "d_w", "dim", "count"]), 0


def cmd_components(run: Run):
    rows = _dims_rows(run, with_components=True)
    return _rows_output(run, "components", rows, ["w", "c", "d_w", "dim", "count", "count_alv"]), 0


def cmd_classify(run: Run):
    G = run.G
    w = run.element()
    tree = run.tree(w)
    c = run.newton_class()
    classes = [c] if c is not None else _classes_at_ends(G, tree)
    dec = G.decompose_xmuy(w)
    covered = dec.x == G.W0.longest or G.datum.is_regular(dec.mu)
    rows, code = [], 0
    for cl in classes:
        reports = classify_paths(G, w, cl, tree, budget=run.args.path_budget)
        bad = [r.index for r in reports if r.cordial and not r.very_special]
        if covered and bad:
            code = 1
        rows.append({"w": _elt(G, w), "c": cl.to_json(), "d_w": _num(virtual_dim(G, w, cl)),
                     "dim": dim_adlv(G, w, cl, tree), "count": count_adlv(G, w, cl, tree),
                     "hypothesis_applies": covered, "cordial_not_very_special": bad,
                     "paths": [r.to_json(G) for r in reports]})
    if run.args.format == "table":
        body = [[str(p["id"]), p["end_label"], NewtonClass.from_json(p["f_end"]).format(),
                 str(p["length"]), str(p["score"]), str(p["cordial"]), str(p["very_special"]),
                 p["springer_factor"]["shape"]] for r in rows for p in r["paths"]]
        return _table(["id", "end", "f", "l(p)", "score", "cordial", "very_special", "shape"], body), code
    return {"command": "classify", "rows": rows}, code


def cmd_verify_chi(run: Run):
    G = run.G
    mu = run.mu()
    c = run.newton_class()
    classes = [c] if c is not None else integral_classes(G, mu)
    results = [chi_check(G, mu, cl, run.strategy) for cl in classes]
    code = 0 if all(r.equal for r in results) else 1
    rows = [r.to_json() for r in results]
    if run.args.format == "table":
        body = [[NewtonClass.from_json(r["class"]).format(), str(r["engine_count"]), str(r["dual_mult"]),
                 str(r["equal"])] for r in rows]
        return _table(["class", "engine_count", "dual_mult", "equal"], body), code
    return {"command": "verify chi", "mu": list(mu), "rows": rows, "ok": code == 0}, code


def admissible_superregular_classes(G: AffineWeylGroup, mu) -> list[NewtonClass]:
    """Straight classes satisfying both the superregular and the root-order hypothesis."""
    bound = int(dot(mu, G.datum.two_rho))
    out = []
    for c, _ in straight_classes(G, bound, verify=False):
        hyp = superregular_hypotheses(G, mu, c)
        if hyp["superregular"] and hyp["root_order"]:
            out.append(c)
    return out


def cmd_verify_superregular(run: Run):
    G = run.G
    mu = run.mu()
    c = run.newton_class()
    classes = [c] if c is not None else admissible_superregular_classes(G, mu)
    W0 = G.W0
    out, mismatches = [], 0
    for cl in classes:
        res = check_superregular(G, mu, cl, run.strategy)
        mismatches += res["mismatches"]
        for r in res["rows"]:
            out.append({"c": cl.to_json(), "x": W0.label(r.x), "y": W0.label(r.y),
                        "predicted_nonempty": r.predicted_nonempty,
                        "predicted_dim": None if r.predicted_dim is None else _num(r.predicted_dim),
                        "dim": r.dim, "mismatch": r.mismatch,
                        "variants_agree": res["variants_agree"]})
    code = 1 if mismatches else 0
    if run.args.format == "table":
        body = [[NewtonClass.from_json(r["c"]).format(), r["x"], r["y"], str(r["predicted_nonempty"]),
                 _cell(r["predicted_dim"]), _cell(r["dim"]), str(r["mismatch"])] for r in out]
        return _table(["c", "x", "y", "predicted", "d_w", "dim", "mismatch"], body), code
    return {"command": "verify superregular", "mu": list(mu), "rows": out, "mismatches": mismatches}, code


def invariant_report(G: AffineWeylGroup, max_length: int, seeds=(1, 2, 3),
                     node_budget: int = DEFAULT_NODE_BUDGET) -> dict:
    """Run the tree-level property checks on every element up to ``max_length``.

    Elements are ``x tau`` with ``x`` in ``W_af`` and ``tau`` a length-zero
    element in the unit box.
    """
    from .classes import affine_layers

    counts = {"elements": 0, "classes": 0}
    failures = []
    taus = G.omega_elements(1)
    for layer in affine_layers(G, max_length):
        for x in layer:
            for tau in taus:
                w = G.multiply(x, tau)
                counts["elements"] += 1
                failures += _check_element(G, w, seeds, node_budget, counts)
    return {"counts": counts, "failures": failures}


def _check_element(G, w, seeds, node_budget, counts) -> list[str]:
    fails = []
    label = G.format(w)
    tree = build_tree(G, w, "canonical", node_budget)
    tree.check()
    if is_minimal(G, w) and G.length(w) < dot(newton_point(G, w)[1], G.datum.two_rho):
        fails.append(f"{label}: minimal length below <nu, 2 rho>")
    others = [build_tree(G, w, s, node_budget) for s in seeds]
    dec = G.decompose_xmuy(w)
    covered = dec.x == G.W0.longest or G.datum.is_regular(dec.mu)
    for c in _classes_at_ends(G, tree):
        counts["classes"] += 1
        dim, cnt = dim_adlv(G, w, c, tree), count_adlv(G, w, c, tree)
        if dim > virtual_dim(G, w, c):
            fails.append(f"{label} {c.format()}: dim {dim} > d_w")
        if cnt < 1:
            fails.append(f"{label} {c.format()}: count {cnt}")
        for t in others:
            if (dim_adlv(G, w, c, t), count_adlv(G, w, c, t)) != (dim, cnt):
                fails.append(f"{label} {c.format()}: strategy {t.strategy} disagrees")
        if covered:
            for r in classify_paths(G, w, c, tree):
                if r.cordial and not r.very_special:
                    fails.append(f"{label} {c.format()}: cordial path {r.index} not very special")
    for t in others:
        if _classes_at_ends(G, t) != _classes_at_ends(G, tree):
            fails.append(f"{label}: strategy {t.strategy} reaches different classes")
    return fails


def cmd_verify_invariants(run: Run | None, args: argparse.Namespace):
    max_length = args.max_length
    matrix = [(args.type, args.isogeny)] if args.type else DEFAULT_MATRIX
    rows, code = [], 0
    for label, iso in matrix:
        G = run.G if run is not None else AffineWeylGroup(build_root_datum(label, iso))
        rep = invariant_report(G, max_length, node_budget=args.node_budget)
        if rep["failures"]:
            code = 1
        rows.append({"type": G.datum.label, "isogeny": G.datum.isogeny, "max_length": max_length,
                     **rep["counts"], "failures": rep["failures"]})
    if args.format == "table":
        body = [[r["type"], r["isogeny"], str(r["elements"]), str(r["classes"]), str(len(r["failures"]))]
                for r in rows]
        return _table(["type", "isogeny", "elements", "classes", "failures"], body), code
    return {"command": "verify invariants", "rows": rows}, code


# -- output ------------------------------------------------------------------------------------


def _cell(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, dict) and "label" in v:
        return v["label"]
    if isinstance(v, dict) and set(v) == {"kappa", "nu"}:
        return NewtonClass.from_json(v).format()
    return str(v)


def _table(header, rows) -> str:
    widths = [max([len(h)] + [len(r[i]) for r in rows]) for i, h in enumerate(header)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip()]
    lines += ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows]
    return "\n".join(lines) + "\n"


def render(obj) -> str:
    if isinstance(obj, str):
        return obj
    return json.dumps({"schema": SCHEMA, **obj}, indent=2, sort_keys=True) + "\n"


# -- argument parsing -------------------------------------------------------------------------


def _common(p: argparse.ArgumentParser, element: bool = True):
    p.add_argument("--config", help="JSON file with default values for the flags")
    p.add_argument("--type", help="root datum label, e.g. A2, C2, GL3")
    p.add_argument("--isogeny", help="sc, ad or GL (default: sc, or GL for GLn)")
    if element:
        p.add_argument("--word", help="word in affine simple reflections, e.g. 0,1,0")
        p.add_argument("--element", help='JSON element {"t": [...], "w": [...]}')
    p.add_argument("--b", help="class kappa=...,nu=... (nu entries may be fractions)")
    p.add_argument("--format", choices=["json", "table", "dot"], default=None)
    p.add_argument("--seed", type=int, help="seeded tree strategy instead of the canonical one")
    p.add_argument("--node-budget", type=int, default=None)
    p.add_argument("--path-budget", type=int, default=None)
    p.add_argument("--golden", help="compare the output with this file")
    p.add_argument("--update-golden", action="store_true", help="write the output to --golden")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="affine-reduction",
                                     description="Reduction trees and invariants of affine Weyl groups.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("tree", "dims", "components", "classify"):
        p = sub.add_parser(name)
        _common(p)
        if name == "components":
            p.add_argument("--n-values", help='JSON map from springer-factor shape to n, e.g. {"A1": 2}')
            p.add_argument("--dim-y-gamma", type=int, help="dim Y_gamma, echoed into the report")
    verify = sub.add_parser("verify")
    vsub = verify.add_subparsers(dest="check", required=True)
    for name in ("chi", "superregular", "invariants"):
        p = vsub.add_parser(name)
        _common(p, element=False)
        if name != "invariants":
            p.add_argument("--mu", help="dominant coweight: theta, rho, 2rho or comma-separated ints")
        else:
            p.add_argument("--max-length", type=int, default=None)
    return parser


_DEFAULTS = {"format": "json", "node_budget": DEFAULT_NODE_BUDGET, "path_budget": DEFAULT_PATH_BUDGET,
             "max_length": 8}


def _apply_config(args: argparse.Namespace) -> None:
    path = getattr(args, "config", None)
    cfg = {}
    if path:
        try:
            cfg = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigurationError(f"cannot read config {path}: {exc}") from None
        if not isinstance(cfg, dict):
            raise ConfigurationError("config must be a JSON object")
        unknown = set(cfg) - CONFIG_KEYS
        if unknown:
            raise ConfigurationError(f"unknown config keys {sorted(unknown)}")
    for key in CONFIG_KEYS | set(_DEFAULTS):
        if not hasattr(args, key):
            if key in cfg:
                raise ConfigurationError(f"config key {key!r} does not apply to this command")
            continue
        if getattr(args, key) is None:
            setattr(args, key, cfg.get(key, _DEFAULTS.get(key)))
    if isinstance(getattr(args, "n_values", None), str):
        try:
            args.n_values = json.loads(args.n_values)
        except json.JSONDecodeError as exc:
            raise ConfigurationError(f"--n-values is not valid JSON: {exc}") from None
    if getattr(args, "n_values", None) is not None and not isinstance(args.n_values, dict):
        raise ConfigurationError("--n-values must be a JSON object")
    if args.format == "dot" and args.command != "tree":
        raise ConfigurationError("--format dot is only available for the tree command")


def _golden(args, text: str) -> int:
    if not args.golden:
        if args.update_golden:
            raise ConfigurationError("--update-golden needs --golden PATH")
        return 0
    path = Path(args.golden)
    if args.update_golden:
        path.write_text(text)
        return 0
    try:
        expected = path.read_text()
    except OSError as exc:
        raise ConfigurationError(f"cannot read golden file: {exc}") from None
    if expected != text:
        print(f"golden mismatch: output differs from {path}", file=sys.stderr)
        return 1
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _apply_config(args)
        if args.command == "verify" and args.check == "invariants":
            run = Run(args) if args.type else None
            out, code = cmd_verify_invariants(run, args)
        else:
            if not args.type:
                raise ConfigurationError("--type is required")
            run = Run(args)
            handler = {"tree": cmd_tree, "dims": cmd_dims, "components": cmd_components,
                       "classify": cmd_classify}.get(args.command)
            if handler is None:
                handler = {"chi": cmd_verify_chi, "superregular": cmd_verify_superregular}[args.check]
            out, code = handler(run)
        text = render(out)
        sys.stdout.write(text)
        return max(code, _golden(args, text))
    except TheoremMismatch as exc:
        print(f"mismatch: {exc}", file=sys.stderr)
        return 1
    except AffineReductionError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
