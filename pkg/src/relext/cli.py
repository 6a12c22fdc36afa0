"""Command-line interface: JSON in, JSON out, with a content-addressed result cache.

Exit codes: 0 success, 2 parse error, 3 hypothesis violated, 4 budget exceeded,
5 internal invariant failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import tempfile
from pathlib import Path
from typing import Any, Callable

from . import __version__, config
from .abelian import AbGroup
from .bar import homology, relative_complex
from .catalogue import named_group_with_perms
from .errors import HypothesisError, ParseError, RelextError
from .ext import FExtension, enumerate_class_cocycles
from .grp import Group, Hom, group_from_permutations, group_from_table, hom_from_generator_images, is_ab_surjective
from .universal import (
    commuting_pair_obstruction, five_term_check, h2_vanishing_test, order_lifting_obstruction,
    relative_h1, relative_h2, schur_tower, universal_extension_with_method,
)

# ---------------------------------------------------------------------------
# wire formats

_GROUP_FIELDS = {
    "permutation": {"type", "degree", "generators"},
    "table": {"type", "table"},
    "named": {"type", "name"},
}
_HOM_FIELDS = {"source", "target", "gens", "images"}
_EXT_FIELDS = {"kind", "kernel", "E", "f", "pi", "eta", "iota"}


class ParsedGroup:
    """A group with the permutation of each element when it came from permutations."""

    def __init__(self, group: Group, perms: list[tuple[int, ...]] | None, spec: dict):
        self.group = group
        self.perms = perms
        self.spec = spec
        self._index = {p: i for i, p in enumerate(perms)} if perms else None

    def element(self, x) -> int:
        if isinstance(x, bool):
            raise ParseError(f"bad element {x!r}")
        if isinstance(x, int):
            if not 0 <= x < self.group.order:
                raise ParseError(f"element index {x} out of range for order {self.group.order}")
            return x
        if isinstance(x, list) and self._index is not None:
            try:
                return self._index[tuple(x)]
            except (KeyError, TypeError):
                raise ParseError(f"permutation {x} is not in the group") from None
        raise ParseError(f"bad element {x!r}")


def _require_fields(spec: Any, allowed: set[str], required: set[str], what: str) -> None:
    if not isinstance(spec, dict):
        raise ParseError(f"{what} must be a JSON object")
    extra = set(spec) - allowed
    if extra:
        raise ParseError(f"unknown field(s) in {what}: {', '.join(sorted(extra))}")
    missing = required - set(spec)
    if missing:
        raise ParseError(f"missing field(s) in {what}: {', '.join(sorted(missing))}")


def parse_group(spec: Any, budget: config.Budget | None = None) -> ParsedGroup:
    if not isinstance(spec, dict) or spec.get("type") not in _GROUP_FIELDS:
        raise ParseError(f"GroupSpec needs a type among {sorted(_GROUP_FIELDS)}")
    kind = spec["type"]
    _require_fields(spec, _GROUP_FIELDS[kind], _GROUP_FIELDS[kind], f"{kind} GroupSpec")
    if kind == "named":
        if not isinstance(spec["name"], str):
            raise ParseError("group name must be a string")
        G, perms = named_group_with_perms(spec["name"], budget)
        return ParsedGroup(G, perms, spec)
    if kind == "permutation":
        deg, gens = spec["degree"], spec["generators"]
        if not isinstance(deg, int) or not isinstance(gens, list) or not all(isinstance(g, list) for g in gens):
            raise ParseError("permutation GroupSpec needs an integer degree and a list of permutations")
        if any(len(g) != deg or not all(isinstance(v, int) for v in g) for g in gens):
            raise ParseError("each generator must list degree-many integers")
        G, perms = group_from_permutations(deg, gens, budget)
        return ParsedGroup(G, perms, spec)
    table = spec["table"]
    if not isinstance(table, list) or not all(isinstance(r, list) for r in table):
        raise ParseError("table must be a list of rows")
    return ParsedGroup(group_from_table(table, budget=budget), None, spec)


def parse_hom(spec: Any, budget: config.Budget | None = None,
              source: ParsedGroup | None = None, target: ParsedGroup | None = None) -> tuple[Hom, ParsedGroup, ParsedGroup]:
    _require_fields(spec, _HOM_FIELDS, _HOM_FIELDS, "HomSpec")
    src = source or parse_group(spec["source"], budget)
    tgt = target or parse_group(spec["target"], budget)
    gens, images = spec["gens"], spec["images"]
    if not isinstance(gens, list) or not isinstance(images, list) or len(gens) != len(images):
        raise ParseError("gens and images must be lists of equal length")
    h = hom_from_generator_images(src.group, tgt.group, [src.element(x) for x in gens],
                                  [tgt.element(y) for y in images])
    return h, src, tgt


def group_spec_table(G: Group) -> dict:
    return {"type": "table", "table": G.mul.tolist()}


def hom_spec(h: Hom, source_spec: dict, target_spec: dict) -> dict:
    gens = list(h.source.generators)
    return {"source": source_spec, "target": target_spec, "gens": gens, "images": [h(g) for g in gens]}


def ext_spec(X: FExtension, f_spec: dict) -> dict:
    E_spec = group_spec_table(X.E)
    A_group = X.A.to_group()
    A_spec = group_spec_table(A_group)
    iota = Hom(A_group, X.E, list(X.iota), check=False)
    return {
        "kind": "f-extension",
        "kernel": list(X.A.factors),
        "E": E_spec,
        "f": f_spec,
        "pi": hom_spec(X.pi, E_spec, f_spec["target"]),
        "eta": hom_spec(X.psi, f_spec["source"], E_spec),
        "iota": hom_spec(iota, A_spec, E_spec),
    }


def parse_ext(spec: Any, budget: config.Budget | None = None) -> tuple[FExtension, dict]:
    _require_fields(spec, _EXT_FIELDS, _EXT_FIELDS, "extension file")
    if spec["kind"] != "f-extension":
        raise ParseError("extension file kind must be 'f-extension'")
    kernel = spec["kernel"]
    if not isinstance(kernel, list) or not all(isinstance(d, int) for d in kernel):
        raise ParseError("kernel must list invariant factors")
    try:
        A = AbGroup(tuple(kernel))
    except ValueError as exc:
        raise ParseError(str(exc)) from None
    f, Gam, G = parse_hom(spec["f"], budget)
    E = parse_group(spec["E"], budget)
    pi, _, _ = parse_hom(spec["pi"], budget, source=E, target=G)
    eta, _, _ = parse_hom(spec["eta"], budget, source=Gam, target=E)
    Ag = parse_group(spec["iota"].get("source") if isinstance(spec["iota"], dict) else None, budget)
    if not Ag.group.same_table(A.to_group()):
        raise ParseError("iota source table does not match the kernel factors")
    iota, _, _ = parse_hom(spec["iota"], budget, source=Ag, target=E)
    X = FExtension(A, E.group, tuple(iota.image), pi, f=f, psi=eta)
    X.validate()
    return X, spec["f"]


def _load_json(path: str) -> Any:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path} is not valid JSON: {exc}") from None


def _load_hom_or_ext(path: str, budget: config.Budget, verify: bool) -> tuple[FExtension, dict, str]:
    """An extension file as is, or a hom file turned into its universal extension."""
    spec = _load_json(path)
    if isinstance(spec, dict) and spec.get("kind") == "f-extension":
        X, f_spec = parse_ext(spec, budget)
        return X, f_spec, "file"
    f, _, _ = parse_hom(spec, budget)
    X, method = universal_extension_with_method(f, budget, verify)
    return X, spec, method


# ---------------------------------------------------------------------------
# commands; each returns (stdout object, files to write)


def cmd_multiplier(args, budget) -> tuple[dict, dict]:
    f, _, _ = parse_hom(_load_json(args.hom), budget)
    ab = is_ab_surjective(f)
    if args.require_ab_surjective and not ab:
        raise HypothesisError("f_ab is not surjective")
    H2, method = relative_h2(f, budget)
    if args.verify and method == "hopf":
        cone = homology(relative_complex(f, budget), 2).group
        if cone != H2:
            from .errors import InternalInvariantError

            raise InternalInvariantError(f"Hopf {H2} and cone {cone} disagree")
    return {"relative_h2": list(H2.factors), "h1_rel": list(relative_h1(f).factors),
            "method": method, "ab_surjective": ab}, {}


def cmd_universal(args, budget) -> tuple[dict, dict]:
    spec = _load_json(args.hom)
    f, _, _ = parse_hom(spec, budget)
    X, method = universal_extension_with_method(f, budget, args.verify)
    out = {"kernel": list(X.A.factors), "order": X.E.order, "method": method, "out": args.out}
    return out, {args.out: ext_spec(X, spec)}


def cmd_tower(args, budget) -> tuple[dict, dict]:
    f, _, _ = parse_hom(_load_json(args.hom), budget)
    T = schur_tower(f, args.max_steps, budget)
    stages = [{"order": X.E.order, "kernel": list(X.A.factors)} for X in T.stages]
    return {"stages": stages, "u_infinity_order": T.top.order, "stabilized": T.stabilized,
            "stop_reason": T.stop_reason, "methods": T.methods}, {}


def cmd_obstruction(args, budget) -> tuple[dict, dict]:
    X, f_spec, _ = _load_hom_or_ext(args.file, budget, args.verify)
    G = parse_group(f_spec["target"], budget)
    chosen = [a is not None for a in (args.pair, args.order, args.hom)]
    if sum(chosen) != 1:
        raise ParseError("give exactly one of --pair, --order, --hom")
    if args.pair is not None:
        x, y = (G.element(_element_arg(v)) for v in args.pair)
        rep = commuting_pair_obstruction(X, x, y)
    elif args.order is not None:
        rep = order_lifting_obstruction(X, G.element(_element_arg(args.order)))
    else:
        g, _, _ = parse_hom(_load_json(args.hom), budget, target=G)
        rep = h2_vanishing_test(g, X, budget)
    return rep.to_json(), {}


def _element_arg(text: str):
    """An element index such as 3, or a permutation such as [1,0,2]."""
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        raise ParseError(f"bad element {text!r}") from None


def cmd_five_term(args, budget) -> tuple[dict, dict]:
    X, _, _ = _load_hom_or_ext(args.file, budget, args.verify)
    rep = five_term_check(X, budget)
    return {
        "groups": {k: list(v.factors) for k, v in rep.groups.items()},
        "exact_at": rep.exact_at,
        "exact": rep.exact,
        "boundary_iso": rep.boundary_iso,
    }, {}


def cmd_classes(args, budget) -> tuple[dict, dict]:
    f, _, _ = parse_hom(_load_json(args.hom), budget)
    try:
        A = AbGroup.from_orders(int(d) for d in args.coeff.split(","))[0]
    except ValueError:
        raise ParseError(f"bad coefficient list {args.coeff!r}") from None
    reps = enumerate_class_cocycles(f, A, budget)
    return {
        "count": len(reps),
        "coefficients": list(A.factors),
        "representatives": [{"c": [list(map(list, row)) for row in z.c], "w": [list(v) for v in z.w]} for z in reps],
    }, {}


COMMANDS: dict[str, Callable] = {
    "multiplier": cmd_multiplier,
    "universal": cmd_universal,
    "tower": cmd_tower,
    "obstruction": cmd_obstruction,
    "five-term": cmd_five_term,
    "classes": cmd_classes,
}


# ---------------------------------------------------------------------------
# cache


def cache_dir() -> Path:
    env = os.environ.get("RELEXT_CACHE_DIR")
    if env:
        return Path(env)
    return Path(os.environ.get("XDG_CACHE_HOME", Path.home() / ".cache")) / "relext"


def _canonical(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def cache_key(command: str, inputs: dict, options: dict) -> str:
    blob = _canonical({"command": command, "inputs": inputs, "options": options, "version": __version__})
    return hashlib.sha256(blob.encode()).hexdigest()


def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _inputs(args) -> dict:
    files = {}
    for name in ("hom", "file"):
        p = getattr(args, name, None)
        if p is not None:
            files[name] = _load_json(p)
    return files


def _options(args) -> dict:
    skip = {"hom", "file", "no_cache", "func", "command"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="relext", description="Relative Schur multipliers and central f-extensions.")
    p.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--verify", action="store_true", help="run both the Hopf and the cone path where applicable")
    common.add_argument("--no-cache", action="store_true", help="bypass the result cache")
    common.add_argument("--budget-order", type=int, default=None, help="order cap for closures and towers")
    common.add_argument("--slow", action="store_true", help="allow bar complexes up to order 64")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("multiplier", parents=[common], help="H_2(G, Gamma) and H_1(G, Gamma)")
    s.add_argument("hom")
    s.add_argument("--require-ab-surjective", action="store_true")

    s = sub.add_parser("universal", parents=[common], help="write the universal central f-extension")
    s.add_argument("hom")
    s.add_argument("out")

    s = sub.add_parser("tower", parents=[common], help="the tower of universal extensions")
    s.add_argument("hom")
    s.add_argument("--max-steps", type=int, default=8)

    s = sub.add_parser("obstruction", parents=[common], help="lifting obstructions in an extension")
    s.add_argument("file", help="extension file, or a hom file (its universal extension is used)")
    s.add_argument("--pair", nargs=2, metavar=("X", "Y"))
    s.add_argument("--order", metavar="X")
    s.add_argument("--hom", metavar="G_FILE")

    s = sub.add_parser("five-term", parents=[common], help="exactness of the five-term sequence")
    s.add_argument("file", help="extension file, or a hom file (its universal extension is used)")

    s = sub.add_parser("classes", parents=[common], help="classes of central f-extensions with kernel A")
    s.add_argument("hom")
    s.add_argument("--coeff", required=True, help="cyclic orders of A, e.g. 2,2")
    return p


def _budget(args) -> config.Budget:
    b = config.DEFAULT.with_(slow=args.slow)
    if args.budget_order is not None:
        if args.budget_order < 1:
            raise ParseError("--budget-order must be positive")
        b = b.with_(order_cap=args.budget_order, tower_order_cap=args.budget_order)
    return b


def run(argv: list[str] | None = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        budget = _budget(args)
        key = None
        if not args.no_cache:
            key = cache_key(args.command, _inputs(args), _options(args))
            hit = cache_dir() / f"{key}.json"
            if hit.exists():
                payload = json.loads(hit.read_text())
                for path, text in payload["files"].items():
                    _atomic_write(Path(path), text)
                stdout.write(payload["stdout"])
                return 0
        obj, files = COMMANDS[args.command](args, budget)
        text = json.dumps(obj, sort_keys=True) + "\n"
        file_texts = {path: json.dumps(content, sort_keys=True) + "\n" for path, content in files.items()}
        for path, content in file_texts.items():
            _atomic_write(Path(path), content)
        if key is not None:
            _atomic_write(cache_dir() / f"{key}.json", _canonical({"stdout": text, "files": file_texts}))
        stdout.write(text)
        return 0
    except RelextError as exc:
        sys.stderr.write(f"relext: {type(exc).__name__}: {exc}\n")
        return exc.exit_code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
