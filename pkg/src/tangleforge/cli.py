"""Command-line surface.

Subcommands: separations, profiles, distinguish, splinter, thin-splinter,
profinite-splinter, nested-separators, nested-separations, treedec, totd,
verify, fixtures. Output is a deterministic JSON envelope (or DOT for the
decomposition verbs). Exit codes: 0 success, 1 hypothesis/certification
failure (JSON diagnostic), 2 usage or input error, 3 cap exceeded.
"""

from __future__ import annotations

import argparse
import itertools
import json
import os
import sys
from dataclasses import dataclass

from .core import (
    Graph,
    Separation,
    enumerate_separations,
    graph_to_json,
    mask_of,
    separation_to_json,
    vertices_of,
)
from .errors import (
    CapExceededError,
    CertificationError,
    HypothesisError,
    InputError,
    PreconditionError,
)
from .fixtures import FIXTURES, get_fixture
from .profiles import efficient_distinguishers, enumerate_k_profiles, profile_flags
from .profinite import (
    graph_restriction_system,
    profinite_splinter,
    system_from_json,
)
from .separators import canonical_nested_separators, separators_to_separations
from .splinter import (
    FiniteSplinterFamily,
    SplinterInstance,
    splinter_finite,
    splinters_check,
    thin_splinter,
)
from .treedec import build_totd, treeset_to_treedecomposition
from .verify import PIPELINE_K, run_suites


@dataclass
class RunConfig:
    """Caps and reproducibility knobs; TANGLEFORGE_CAPS (a JSON object)
    overrides individual fields."""

    max_n: int = 16
    max_k: int = 6
    max_sk: int = 40
    profinite_union: int = 12
    profinite_product: int = 1_000_000
    seed: int = 7
    fmt: str = "json"

    @staticmethod
    def from_env_and_args(args) -> "RunConfig":
        cfg = RunConfig()
        env = os.environ.get("TANGLEFORGE_CAPS")
        if env:
            try:
                overrides = json.loads(env)
            except json.JSONDecodeError as exc:
                raise InputError(f"TANGLEFORGE_CAPS is not valid JSON: {exc}") from exc
            for key, value in overrides.items():
                if not hasattr(cfg, key):
                    raise InputError(f"unknown cap {key!r} in TANGLEFORGE_CAPS")
                setattr(cfg, key, int(value))
        if getattr(args, "cap_n", None):
            cfg.max_n = args.cap_n
        if getattr(args, "seed", None) is not None:
            cfg.seed = args.seed
        if getattr(args, "format", None):
            cfg.fmt = args.format
        return cfg


def load_graph(spec: str) -> Graph:
    """Fixture name, JSON file ({"n": int, "edges": [[u, v], ...]}) or
    edge-list text (one 'u v' per line, '#' comments)."""
    if spec in FIXTURES:
        return get_fixture(spec).graph
    if not os.path.exists(spec):
        raise InputError(f"no fixture or file named {spec!r}")
    with open(spec, "r", encoding="utf-8") as fh:
        text = fh.read()
    if spec.endswith(".json") or text.lstrip().startswith("{"):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"{spec}: invalid JSON at line {exc.lineno}") from exc
        if "n" not in obj or "edges" not in obj:
            raise InputError(f"{spec}: graph JSON needs 'n' and 'edges'")
        try:
            return Graph.from_edges(int(obj["n"]), [tuple(e) for e in obj["edges"]])
        except (InputError, ValueError, TypeError) as exc:
            raise InputError(f"{spec}: {exc}") from exc
    edges = []
    max_v = -1
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        parts = body.split()
        if len(parts) != 2:
            raise InputError(f"{spec}:{lineno}: expected 'u v', got {line!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise InputError(f"{spec}:{lineno}: vertices must be integers") from None
        if u == v:
            raise InputError(f"{spec}:{lineno}: self-loop at {u}")
        edges.append((u, v))
        max_v = max(max_v, u, v)
    if max_v < 0:
        raise InputError(f"{spec}: no edges found")
    return Graph.from_edges(max_v + 1, edges)


def _resolve_graph_and_k(args, cfg) -> tuple[Graph, int, str]:
    if args.fixture:
        g = get_fixture(args.fixture).graph
        label = args.fixture
        k = args.k if args.k else PIPELINE_K.get(args.fixture, 2)
    elif args.graph:
        g = load_graph(args.graph)
        label = args.graph
        if not args.k:
            raise InputError("--k is required with --graph")
        k = args.k
    else:
        raise InputError("one of --fixture or --graph is required")
    return g, k, label


def _pipeline_profiles(g: Graph, k: int, cfg: RunConfig, principal_only=False):
    profs = enumerate_k_profiles(g, k, max_sk=cfg.max_sk, max_n=cfg.max_n, max_k=cfg.max_k)
    out = []
    for p in profs:
        flags = profile_flags(g, p)
        if flags.regular and flags.robust and (flags.principal or not principal_only):
            out.append(p)
    return tuple(out)


# ---------------------------------------------------------------------------
# subcommand bodies (each returns a JSON-able result dict)

def cmd_separations(args, cfg):
    g, k, label = _resolve_graph_and_k(args, cfg)
    seps = enumerate_separations(g, k, max_n=cfg.max_n, max_k=cfg.max_k)
    return {
        "graph": label,
        "k": k,
        "count": len(seps),
        "separations": [separation_to_json(s) for s in seps],
    }


def cmd_profiles(args, cfg):
    g, k, label = _resolve_graph_and_k(args, cfg)
    profs = enumerate_k_profiles(g, k, max_sk=cfg.max_sk, max_n=cfg.max_n, max_k=cfg.max_k)
    entries = []
    for p in profs:
        flags = profile_flags(g, p)
        entry = p.to_json()
        entry["flags"] = {
            "regular": flags.regular,
            "robust": flags.robust,
            "principal": flags.principal,
        }
        entries.append(entry)
    return {
        "graph": label,
        "k": k,
        "count": len(entries),
        "regular": sum(1 for e in entries if e["flags"]["regular"]),
        "profiles": entries,
    }


def cmd_distinguish(args, cfg):
    g, k, label = _resolve_graph_and_k(args, cfg)
    profs = enumerate_k_profiles(g, k, max_sk=cfg.max_sk, max_n=cfg.max_n, max_k=cfg.max_k)
    pairs = []
    for i, j in itertools.combinations(range(len(profs)), 2):
        dset = efficient_distinguishers(g, profs[i], profs[j])
        pairs.append(
            {
                "pair": [i, j],
                "order": dset.order,
                "separations": [separation_to_json(s) for s in dset.seps],
            }
        )
    return {"graph": label, "k": k, "profiles": len(profs), "pairs": pairs}


def cmd_splinter(args, cfg):
    g, k, label = _resolve_graph_and_k(args, cfg)
    from .core import graph_universe

    profs = _pipeline_profiles(g, k, cfg)
    fams = []
    fam_pairs = []
    for i, j in itertools.combinations(range(len(profs)), 2):
        dset = efficient_distinguishers(g, profs[i], profs[j])
        if dset.seps:
            fams.append(frozenset(dset.seps))
            fam_pairs.append([i, j])
    if not fams:
        return {"graph": label, "k": k, "families": 0, "transversal": []}
    fam_obj = FiniteSplinterFamily(graph_universe(g), tuple(fams))
    ok, witness = splinters_check(fam_obj)
    if not ok:
        raise HypothesisError("distinguisher families do not splinter", witness=witness)
    picks = splinter_finite(fam_obj)
    return {
        "graph": label,
        "k": k,
        "families": len(fams),
        "pairs": fam_pairs,
        "transversal": [separation_to_json(s) for s in picks],
    }


def instance_from_json(obj: dict) -> SplinterInstance:
    elements = tuple(obj["elements"])
    nested_pairs = {tuple(p) for p in obj["nested"]}
    nested_pairs |= {(b, a) for a, b in nested_pairs}
    nested_pairs |= {(e, e) for e in elements}
    families = {}
    orders = {}
    for idx, fam in enumerate(obj["families"]):
        key = fam.get("name", idx)
        families[key] = frozenset(fam["members"])
        orders[key] = int(fam["order"])
    return SplinterInstance(
        elements=elements,
        families=families,
        orders=orders,
        nested=lambda a, b: (a, b) in nested_pairs,
    )


def cmd_thin_splinter(args, cfg):
    if args.instance:
        with open(args.instance, "r", encoding="utf-8") as fh:
            inst = instance_from_json(json.load(fh))
        res = thin_splinter(inst)
        return {
            "instance": args.instance,
            "levels": [{"k": lv.k, "added": sorted(lv.added, key=repr)} for lv in res.levels],
            "nested_set": sorted(res.nested_set, key=repr),
        }
    g, k, label = _resolve_graph_and_k(args, cfg)
    nested = canonical_nested_separators(g, _pipeline_profiles(g, k, cfg))
    return {
        "graph": label,
        "k": k,
        "levels": [
            {"k": lv.k, "added": [list(vertices_of(m)) for m in lv.added]}
            for lv in nested.result.levels
        ],
        "nested_set": [list(vertices_of(m)) for m in nested.separators],
    }


def cmd_profinite_splinter(args, cfg):
    if args.system:
        with open(args.system, "r", encoding="utf-8") as fh:
            sys_obj, families = system_from_json(json.load(fh))
        res = profinite_splinter(
            sys_obj, families, union_cap=cfg.profinite_union, limit_cap=cfg.profinite_product
        )
        points = list(sys_obj.poset.points)
        return {
            "system": args.system,
            "points": [str(p) for p in points],
            "nested_choice": {
                str(p): sorted(map(repr, res.nested_choice[p])) for p in points
            },
            "limit_count": len(res.limits),
        }
    g, k, label = _resolve_graph_and_k(args, cfg)
    profs = _pipeline_profiles(g, k, cfg)
    if len(profs) < 2:
        raise PreconditionError("need at least two distinguishable profiles for the demo system")
    chain = _demo_chain(g)
    system = graph_restriction_system(g, chain)
    families = []
    for i, j in itertools.combinations(range(len(profs)), 2):
        dset = efficient_distinguishers(g, profs[i], profs[j])
        families.append(
            {
                z: frozenset(Separation(s.a & z, s.b & z) for s in dset.seps)
                for z in system.poset.points
            }
        )
    res = profinite_splinter(
        system, families, union_cap=cfg.profinite_union, limit_cap=cfg.profinite_product
    )
    return {
        "graph": label,
        "k": k,
        "points": [list(vertices_of(z)) for z in system.poset.points],
        "nested_choice": {
            str(list(vertices_of(z))): [separation_to_json(s) for s in sorted(res.nested_choice[z])]
            for z in system.poset.points
        },
        "limit_count": len(res.limits),
    }


def _demo_chain(g: Graph):
    verts = list(vertices_of(g.vertices))
    half = mask_of(verts[: max(2, len(verts) // 2)])
    three_q = mask_of(verts[: max(3, (3 * len(verts)) // 4)])
    return sorted({half, three_q, g.vertices})


def cmd_nested_separators(args, cfg):
    g, k, label = _resolve_graph_and_k(args, cfg)
    nested = canonical_nested_separators(g, _pipeline_profiles(g, k, cfg))
    return {
        "graph": label,
        "k": k,
        "separators": [list(vertices_of(m)) for m in nested.separators],
        "levels": [
            {"k": lv.k, "added": [list(vertices_of(m)) for m in lv.added]}
            for lv in nested.result.levels
        ],
    }


def cmd_nested_separations(args, cfg):
    g, k, label = _resolve_graph_and_k(args, cfg)
    profs = _pipeline_profiles(g, k, cfg, principal_only=True)
    nested = canonical_nested_separators(g, profs)
    seps = separators_to_separations(g, nested.separators, profs)
    return {
        "graph": label,
        "k": k,
        "separators": [list(vertices_of(m)) for m in nested.separators],
        "separations": [separation_to_json(s) for s in seps],
    }


def cmd_treedec(args, cfg):
    g, k, label = _resolve_graph_and_k(args, cfg)
    profs = _pipeline_profiles(g, k, cfg, principal_only=True)
    nested = canonical_nested_separators(g, profs)
    seps = separators_to_separations(g, nested.separators, profs)
    td = treeset_to_treedecomposition(g, seps)
    return {"graph": label, "k": k, "treedec": td.to_json()}


def cmd_totd(args, cfg):
    g, k, label = _resolve_graph_and_k(args, cfg)
    profs = _pipeline_profiles(g, k, cfg, principal_only=True)
    totd = build_totd(g, profs)
    return {"graph": label, "k": k, "totd": totd.to_json()}


def cmd_verify(args, cfg):
    names = set(args.suite) if args.suite else None
    results = run_suites(seed=cfg.seed, names=names)
    for r in results:
        status = "ok  " if r.ok else "FAIL"
        print(f"{status} {r.name:32s} {r.seconds:7.2f}s  {r.detail}", file=sys.stderr)
    if not all(r.ok for r in results):
        print(f"seed was {cfg.seed}", file=sys.stderr)
    return {
        "seed": cfg.seed,
        "suites": [
            {"name": r.name, "ok": r.ok, "seconds": round(r.seconds, 3), "detail": r.detail}
            for r in results
        ],
        "ok": all(r.ok for r in results),
    }


def cmd_fixtures(args, cfg):
    return {
        "fixtures": [
            {
                "name": fx.name,
                "description": fx.description,
                "graph": graph_to_json(fx.graph),
                "census": {str(k): list(v) for k, v in sorted(fx.census.items())},
                "pipeline_k": PIPELINE_K.get(fx.name),
            }
            for fx in FIXTURES.values()
        ]
    }


# ---------------------------------------------------------------------------
# DOT emitters

def _dot_treedec(td_json: dict) -> str:
    lines = ["graph treedec {", "  node [shape=box];"]
    for node in td_json["nodes"]:
        bag = ",".join(map(str, node["bag"]))
        lines.append(f'  t{node["id"]} [label="{{{bag}}}"];')
    for u, v in td_json["edges"]:
        lines.append(f"  t{u} -- t{v};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _dot_totd(totd_json: dict) -> str:
    lines = ["digraph totd {", "  node [shape=box];"]
    counter = itertools.count()

    def emit(node, parent=None):
        idx = next(counter)
        bags = " | ".join(
            "{" + ",".join(map(str, n["bag"])) + "}" for n in node["td"]["nodes"]
        )
        lines.append(f'  n{idx} [label="{bags}"];')
        if parent is not None:
            lines.append(f"  n{parent} -> n{idx};")
        for child in node["children"]:
            emit(child, idx)

    emit(totd_json)
    lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# plumbing

COMMANDS = {
    "separations": cmd_separations,
    "profiles": cmd_profiles,
    "distinguish": cmd_distinguish,
    "splinter": cmd_splinter,
    "thin-splinter": cmd_thin_splinter,
    "profinite-splinter": cmd_profinite_splinter,
    "nested-separators": cmd_nested_separators,
    "nested-separations": cmd_nested_separations,
    "treedec": cmd_treedec,
    "totd": cmd_totd,
    "verify": cmd_verify,
    "fixtures": cmd_fixtures,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tangleforge",
        description="separation universes, profiles, splinter algorithms and certified tree-decompositions",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--fixture", choices=sorted(FIXTURES), help="built-in graph")
        p.add_argument("--graph", help="path to an edge-list or JSON graph file")
        p.add_argument("--k", type=int, help="order bound (profiles of S_k)")
        p.add_argument("--seed", type=int, help="seed for randomized verification")
        p.add_argument("--cap-n", type=int, dest="cap_n", help="override the vertex cap")
        p.add_argument("--format", choices=("json", "dot"), help="output format")
        p.add_argument("--out", help="write output to this file instead of stdout")
        if name == "thin-splinter":
            p.add_argument("--instance", help="abstract instance JSON file")
        if name == "profinite-splinter":
            p.add_argument("--system", help="inverse system JSON file")
        if name == "verify":
            p.add_argument("--all", action="store_true", help="run every suite (default)")
            p.add_argument("--suite", action="append", help="run only the named suite")
    return parser


def cli_main(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = RunConfig.from_env_and_args(args)
        result = COMMANDS[args.command](args, cfg)
    except CapExceededError as exc:
        _emit({"error": {"type": "cap", "message": str(exc)}}, args)
        return 3
    except (InputError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (HypothesisError, CertificationError, PreconditionError) as exc:
        _emit(
            {
                "error": {
                    "type": type(exc).__name__,
                    "message": str(exc),
                    "witness": repr(getattr(exc, "witness", None)),
                }
            },
            args,
        )
        return 1

    payload = {
        "command": args.command,
        "seed": cfg.seed,
        "caps": {"max_n": cfg.max_n, "max_k": cfg.max_k, "max_sk": cfg.max_sk},
        "result": result,
    }
    if cfg.fmt == "dot":
        if args.command == "treedec":
            text = _dot_treedec(result["treedec"])
        elif args.command == "totd":
            text = _dot_totd(result["totd"])
        else:
            print("error: --format dot is only available for treedec and totd", file=sys.stderr)
            return 2
        _write(text, args)
    else:
        _emit(payload, args)
    if args.command == "verify" and not result["ok"]:
        return 1
    return 0


def _emit(obj, args):
    _write(json.dumps(obj, sort_keys=True, indent=2) + "\n", args)


def _write(text, args):
    out = getattr(args, "out", None)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main():
    sys.exit(cli_main(sys.argv[1:]))


if __name__ == "__main__":
    main()
