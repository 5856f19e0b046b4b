"""Command-line entry point.

Exit codes: 0 success, 2 usage error, 3 bad input, 4 resource limit,
5 disagreement between the folding engine and the oracle.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Optional

from . import atlas as atlas_mod
from .diagram import DiagramError, SequencePair, describe_structure, detect_zigzag, is_ap_structure, load_structure
from .energy import EnergyModel, load_energy_config
from .fold import (
    LengthCap,
    Overflow,
    boltzmann_sample,
    fill_tables,
    mfe,
    pairing_probabilities,
)
from .oracle import LengthCap as OracleCap
from .oracle import enumerate_structures
from .shadows import NoExteriorIrreducible, gamma, irreducible_shadows, shadow
from .topology import boundary_components

EXIT_USAGE, EXIT_INPUT, EXIT_RESOURCE, EXIT_MISMATCH = 2, 3, 4, 5


class InputError(ValueError):
    pass


class InternalMismatch(RuntimeError):
    pass


# ----------------------------------------------------------------------
# input helpers


def read_fasta(path: str) -> list[tuple[str, str]]:
    records: list[tuple[str, str]] = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith(";"):
                continue
            if line.startswith(">"):
                records.append((line[1:].strip(), ""))
            elif not records:
                raise InputError(f"{path}: sequence data before the first header")
            else:
                name, seq = records[-1]
                records[-1] = (name, seq + line)
    return records


def _pairs(args) -> list[SequencePair]:
    pairs = []
    if args.seq_r is not None or args.seq_s is not None:
        if args.seq_r is None or args.seq_s is None:
            raise InputError("--seq-r and --seq-s go together")
        pairs.append(SequencePair(args.seq_r, args.seq_s))
    for path in args.fasta or []:
        recs = read_fasta(path)
        if len(recs) != 2:
            raise InputError(f"{path}: expected exactly two records, found {len(recs)}")
        pairs.append(SequencePair(recs[0][1], recs[1][1]))
    if not pairs:
        raise InputError("give --seq-r/--seq-s or --fasta")
    return pairs


def _model(args) -> EnergyModel:
    try:
        model = load_energy_config(args.energy_config)
    except (OSError, ValueError) as exc:
        raise InputError(f"energy config: {exc}") from exc
    if args.theta is not None:
        model = model.with_(theta=args.theta)
    return model


def _structure(text: str):
    if text.startswith("@"):
        with open(text[1:]) as fh:
            text = fh.read()
    return load_structure(text)


# ----------------------------------------------------------------------
# subcommands: each returns (json-able payload, text lines)


def cmd_genus(args):
    rep = boundary_components(_structure(args.structure))
    data = rep.to_json()
    text = [
        f"genus {rep.genus_total}",
        f"r {rep.r}",
        "boundary_lengths " + " ".join(map(str, rep.boundary_lengths)),
        f"chi {rep.chi}",
    ]
    return data, text


def cmd_shadow(args):
    d = _structure(args.structure)
    s = shadow(d)
    return {"structure": describe_structure(s), "diagram": s.to_json()}, [describe_structure(s)]


def cmd_decompose(args):
    dec = irreducible_shadows(_structure(args.structure))
    text = []
    for label in ("I1", "I2_0", "I2_1"):
        for p in getattr(dec, label):
            text.append(f"{label}\tgenus={p.genus}\t{describe_structure(p.diagram)}\tarcs={p.arcs}")
    return dec.to_json(), text or ["no irreducible shadows"]


def cmd_classify(args):
    d = _structure(args.structure)
    data = {"gamma": gamma(d)}
    text = [f"gamma {data['gamma']}"]
    if d.b == 2:
        rep = is_ap_structure(d)
        zz = detect_zigzag(d)
        data["ap"] = rep.is_ap
        data["violated_clause"] = rep.violated_clause
        data["detail"] = rep.detail
        data["zigzag"] = None if zz is None else [list(zz.r_arc), list(zz.s_arc), list(zz.exterior)]
        text.append("AP yes" if rep.is_ap else f"AP no (clause {rep.violated_clause}: {rep.detail})")
        text.append("zigzag none" if zz is None else f"zigzag {zz.r_arc} {zz.s_arc} via {zz.exterior}")
    return data, text


def cmd_atlas(args):
    if args.construct is not None:
        d = atlas_mod.construct_S_sequence(args.genus, args.construct)
        e = atlas_mod.AtlasEntry(
            d, args.genus, len(d.arcs), True, atlas_mod.Provenance.CONSTRUCTED
        )
        entries = [e]
    elif args.backbones == 1:
        entries = atlas_mod.enumerate_shadows_one_backbone(args.genus)
        if args.irreducible:
            entries = [e for e in entries if e.irreducible]
    elif args.from_cuts:
        entries = atlas_mod.irreducible_two_backbone_from_cuts(args.genus)
    else:
        if not args.irreducible:
            raise InputError("two-backbone atlases are available for irreducible shadows only")
        entries = atlas_mod.enumerate_irreducible_two_backbone(args.genus)
    data = [e.to_json() for e in entries]
    text = [f"{len(entries)} entries"] + [
        f"{describe_structure(e.shadow)}\tarcs={e.arc_count}\tgenus={e.genus}" for e in entries
    ]
    return data, text


def _fold_one(job):
    kind, pair, model, opts = job
    if kind == "fold":
        energy, s = mfe(pair, model, length_cap=opts["cap"])
        data = {"r": pair.r, "s": pair.s, "mfe": energy, **s.to_json()}
        return data, [f"{s.dot_bracket()}\t{energy:.4f}"]
    if kind == "partition":
        st = fill_tables(pair, model, "partition", scale=opts["scale"], length_cap=opts["cap"])
        q = st.root / opts["scale"] ** (len(pair.r) + len(pair.s))
        data = {"r": pair.r, "s": pair.s, "partition": q, "ensemble_energy": -model.rt * math.log(q)}
        return data, [f"Q {q:.12g}\tG {data['ensemble_energy']:.6f}"]
    if kind == "probs":
        st = fill_tables(pair, model, "partition", scale=opts["scale"], length_cap=opts["cap"])
        pt = pairing_probabilities(st)
        rows = ["kind\ti\tj\th\tl\tp"] + [
            "\t".join(str(x) if not isinstance(x, float) else f"{x:.10g}" for x in row)
            for row in pt.tsv_rows()
        ]
        return pt.to_json(), rows
    if kind == "sample":
        st = fill_tables(pair, model, "partition", scale=opts["scale"], length_cap=opts["cap"])
        draws = boltzmann_sample(st, k=opts["k"], seed=opts["seed"])
        return [s.to_json() for s in draws], [json.dumps(s.to_json(), sort_keys=True) for s in draws]
    if kind == "oracle-check":
        return _oracle_check(pair, model, opts)
    raise AssertionError(kind)


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(abs(b), 1e-300)


def _oracle_check(pair, model, opts):
    res = enumerate_structures(pair, model)
    count = int(fill_tables(pair, model, "count", length_cap=opts["cap"]).root)
    st = fill_tables(pair, model, "partition", length_cap=opts["cap"])
    q = st.root
    pt = pairing_probabilities(st)
    tol = opts["tol"]
    worst = 0.0
    for dp, ref in ((pt.pairs, res.pair_marginals), (pt.hybrids, res.hybrid_marginals), (pt.gaps, res.gap_marginals)):
        for key in set(dp) | set(ref):
            a, b = dp.get(key, 0.0), ref.get(key, 0.0)
            if abs(a - b) > 1e-15:
                worst = max(worst, _rel(a, b))
    checks = {
        "count": (count, res.count, count == res.count),
        "partition": (q, res.partition, _rel(q, res.partition) <= tol),
        "marginals": (worst, 0.0, worst <= tol),
    }
    text = []
    for name, (a, b, ok) in checks.items():
        if name == "marginals":
            text.append(f"marginals max_rel_err={a:.3g} {'OK' if ok else 'MISMATCH'}")
        else:
            text.append(f"{name} dp={a} oracle={b} {'OK' if ok else 'MISMATCH'}")
    data = {name: {"dp": a, "oracle": b, "ok": ok} for name, (a, b, ok) in checks.items()}
    data["ok"] = all(ok for _, _, ok in checks.values())
    return data, text


def _run_pairs(kind: str, args) -> tuple[object, list[str], bool]:
    pairs = _pairs(args)
    model = _model(args)
    opts = {
        "cap": args.length_cap,
        "scale": getattr(args, "scale", 1.0),
        "k": getattr(args, "k", 1),
        "seed": getattr(args, "seed", None),
        "tol": getattr(args, "tolerance", 1e-9),
    }
    jobs = [(kind, p, model, opts) for p in pairs]
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_fold_one, jobs))
    else:
        results = [_fold_one(j) for j in jobs]
    data = [r[0] for r in results]
    text: list[str] = []
    for (_, lines), p in zip(results, pairs):
        if len(pairs) > 1:
            text.append(f"# {p.r}&{p.s}")
        text.extend(lines)
    ok = all(d.get("ok", True) for d in data if isinstance(d, dict))
    return (data[0] if len(data) == 1 else data), text, ok


# ----------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rnatopo", description="Topology and genus-zero folding of RNA-RNA interactions.")
    ap.add_argument("--format", choices=("text", "json"), default="text")
    sub = ap.add_subparsers(dest="command", required=True)

    for name, helptext in (
        ("genus", "boundary components and genus of a diagram"),
        ("shadow", "shadow projection"),
        ("decompose", "irreducible shadows and removal trace"),
        ("classify", "gamma, AP verdict and zig-zag witness"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--structure", required=True, help="dot-bracket, JSON diagram, or @file")
        p.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS)

    p = sub.add_parser("atlas", help="shadows of fixed genus")
    p.add_argument("--backbones", type=int, choices=(1, 2), default=1)
    p.add_argument("--genus", type=int, required=True)
    p.add_argument("--irreducible", action="store_true")
    p.add_argument("--from-cuts", action="store_true", help="derive two-backbone shadows by cutting")
    p.add_argument("--construct", type=int, metavar="ARCS", help="build the constructed shadow with ARCS arcs")
    p.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS)

    for name in ("fold", "partition", "probs", "sample", "oracle-check"):
        p = sub.add_parser(name)
        p.add_argument("--seq-r")
        p.add_argument("--seq-s")
        p.add_argument("--fasta", action="append", help="FASTA with two records (repeatable)")
        p.add_argument("--energy-config", help="energy parameter file (default: $RNATOPO_ENERGY_CONFIG)")
        p.add_argument("--theta", type=int)
        p.add_argument("--length-cap", type=int, default=120)
        p.add_argument("--jobs", type=int, default=1)
        p.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS)
        if name in ("partition", "probs", "sample"):
            p.add_argument("--scale", type=float, default=1.0, help="per-vertex rescaling factor")
        if name == "sample":
            p.add_argument("-k", type=int, default=10)
            p.add_argument("--seed", type=int, default=0)
        if name == "oracle-check":
            p.add_argument("--tolerance", type=float, default=1e-9)
    return ap


_HANDLERS: dict[str, Callable] = {
    "genus": cmd_genus,
    "shadow": cmd_shadow,
    "decompose": cmd_decompose,
    "classify": cmd_classify,
    "atlas": cmd_atlas,
}


def run(argv: Optional[list[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else 0
    ok = True
    try:
        if args.command in _HANDLERS:
            data, text = _HANDLERS[args.command](args)
        else:
            data, text, ok = _run_pairs(args.command, args)
            if args.command == "sample" and args.format == "json":
                # samples stream as JSON lines
                rows = data if isinstance(data, list) and data and isinstance(data[0], list) else [data]
                for draws in rows:
                    for d in draws:
                        out.write(json.dumps(d, sort_keys=True) + "\n")
                return 0
    except (DiagramError, InputError, NoExteriorIrreducible) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (LengthCap, OracleCap, Overflow, atlas_mod.ResourceLimit) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.format == "json":
        out.write(json.dumps(data, sort_keys=True) + "\n")
    else:
        for line in text:
            out.write(line + "\n")
    if not ok:
        print("error: engine and oracle disagree", file=sys.stderr)
        return EXIT_MISMATCH
    return 0


def main() -> None:  # pragma: no cover - thin wrapper
    sys.exit(run())


if __name__ == "__main__":  # pragma: no cover
    main()
