"""Command-line entry point: ``entropy-mirage generate|measure|digits|experiment``.

Exit codes: 0 success, 2 a checked property failed, 3 bad input.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from collections import Counter
from pathlib import Path

from . import digits as dg
from . import generators as gen
from .experiments import KINDS, ExperimentAssertionError, run_experiment, write_report
from .graph import Graph, format_edge_list, load_graph, realize_graph
from .measures import graph_entropy, sequence_entropy

EXIT_OK = 0
EXIT_ASSERTION = 2
EXIT_INPUT = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="ascii")
    else:
        sys.stdout.write(text)


def _stream(source: str, base: int, count: int, seed: int | None) -> dg.DigitStream:
    if source == "pi":
        return dg.pi_digits(base, count)
    if source == "champernowne":
        return dg.champernowne_digits(base, count)
    if source == "prng":
        return dg.prng_digits(base, count, seed)
    if source.startswith("file:"):
        s = dg.load_digit_file(source[5:])
        if len(s) < count:
            raise ValueError(f"{source} holds {len(s)} digits, {count} needed")
        return dg.DigitStream(s.base, s.digits[:count], s.provenance)
    raise ValueError(f"unknown digit source {source!r}")


def cmd_generate(args) -> int:
    kind = args.kind
    if kind == "zk":
        g: Graph = gen.zk_graph_randomized(args.steps, args.seed) if args.randomized else gen.zk_graph(args.steps).graph
    elif kind == "digit-graph":
        count = args.n * args.n if args.strict else args.n * (args.n - 1) // 2
        g = gen.digit_graph(dg.binarize(_stream(args.source, args.base, count, args.seed)), args.n, strict=args.strict)
    elif kind == "er":
        if args.edges is not None:
            g = gen.er_graph_exact(args.n, args.edges, args.seed)
        else:
            g = gen.er_graph(args.n, args.p, args.seed)
    elif kind == "ba":
        g = gen.ba_graph(args.n, args.m, args.seed)
    elif kind == "ring":
        g = gen.regular_ring_graph(args.n, args.k)
    elif kind == "targeted":
        g = realize_graph(gen.targeted_degree_sequence(args.n, args.entropy, args.tol, args.seed))
    else:  # pragma: no cover - argparse restricts choices
        raise ValueError(kind)
    _emit(format_edge_list(g), args.out)
    return EXIT_OK


def cmd_measure(args) -> int:
    feature = "compression" if args.feature == "compress" else args.feature
    g = load_graph(args.input)
    report = graph_entropy(g, feature, L=args.L)
    payload = {
        "feature": report.feature,
        "value": report.value,
        "parameters": report.parameters,
        "provenance": f"file:{args.input}",
    }
    print(json.dumps(payload, sort_keys=True))
    return EXIT_OK


def cmd_digits(args) -> int:
    if args.action == "emit":
        s = _stream(args.source, args.base, args.count, args.seed)
        if args.binarize:
            s = dg.binarize(s)
        _emit(dg.format_digit_file(s), args.out)
    else:
        s = dg.load_digit_file(args.path)
        counts = Counter(s.digits)
        print(
            json.dumps(
                {
                    "provenance": s.provenance,
                    "base": s.base,
                    "count": len(s),
                    "symbol_entropy": sequence_entropy(s.digits),
                    "counts": {str(k): v for k, v in sorted(counts.items())},
                },
                sort_keys=True,
            )
        )
    return EXIT_OK


def cmd_experiment(args) -> int:
    kind = args.kind
    params: dict = {}
    if kind in ("pi-histogram", "density-entropy-equality", "ba-vs-er", "compression-vs-entropy", "omega-graph"):
        params["seed"] = args.seed
    if kind == "pi-histogram":
        params.update(digits_count=args.digits, base=args.base, n=args.n or 100, digit_file=args.digit_file)
    elif kind == "density-entropy-equality":
        params.update(n=args.n or 50, k=args.k)
    elif kind == "ba-vs-er":
        params.update(n=args.n or 50, m_values=tuple(args.m_values), replicates=args.replicates)
    elif kind in ("zk-growth", "zk-divergence"):
        params.update(t_max=args.t_max or 100)
    elif kind == "compression-vs-entropy":
        params.update(t_max=args.t_max or 50)
    elif kind == "omega-graph":
        params.update(path=args.digit_file, n=args.n or 11, allow_standin=args.allow_standin)
    report = run_experiment(kind, **params)
    for p in write_report(report, args.out, svg=args.svg):
        print(p)
    for f in report.findings:
        print(f"finding: {f.claim}: expected {f.expected}, observed {f.observed} ({f.note})")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="entropy-mirage", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("generate", help="emit a graph as an edge list")
    g.add_argument("kind", choices=["zk", "digit-graph", "er", "ba", "ring", "targeted"])
    g.add_argument("--steps", type=int, default=10)
    g.add_argument("--randomized", action="store_true")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--source", default="pi", help="pi | champernowne | prng | file:PATH")
    g.add_argument("--base", type=int, default=10)
    g.add_argument("--strict", action="store_true", help="digit-graph: consume n*n digits")
    g.add_argument("--n", type=int, default=50)
    g.add_argument("--p", type=float, default=0.5)
    g.add_argument("--edges", type=int, help="er: sample uniformly with exactly this many edges")
    g.add_argument("--m", type=int, default=2)
    g.add_argument("--k", type=int, default=4)
    g.add_argument("--entropy", type=float, default=3.0)
    g.add_argument("--tol", type=float, default=0.1)
    g.add_argument("--out")
    g.set_defaults(func=cmd_generate)

    m = sub.add_parser("measure", help="measure a graph through one description")
    m.add_argument("--feature", required=True, choices=["adjacency", "degree-sequence", "block", "compress", "compression", "clustering"])
    m.add_argument("--L", type=int)
    m.add_argument("--input", required=True)
    m.set_defaults(func=cmd_measure)

    d = sub.add_parser("digits", help="emit or inspect digit streams")
    dsub = d.add_subparsers(dest="action", required=True, parser_class=_Parser)
    e = dsub.add_parser("emit")
    e.add_argument("--source", default="pi")
    e.add_argument("--base", type=int, default=10)
    e.add_argument("--count", type=int, default=1000)
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--binarize", action="store_true")
    e.add_argument("--out")
    i = dsub.add_parser("inspect")
    i.add_argument("path")
    d.set_defaults(func=cmd_digits)

    x = sub.add_parser("experiment", help="run a seeded experiment and write CSV/JSON")
    x.add_argument("kind", choices=sorted(KINDS))
    x.add_argument("--out", required=True)
    x.add_argument("--seed", type=int, default=0)
    x.add_argument("--svg", action="store_true")
    x.add_argument("--n", type=int)
    x.add_argument("--k", type=int, default=4)
    x.add_argument("--m-values", type=int, nargs="+", default=[4, 5])
    x.add_argument("--replicates", type=int, default=10)
    x.add_argument("--t-max", type=int)
    x.add_argument("--digits", type=int, default=10_000)
    x.add_argument("--base", type=int, default=10)
    x.add_argument("--digit-file")
    x.add_argument("--allow-standin", action="store_true")
    x.set_defaults(func=cmd_experiment)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except ExperimentAssertionError as exc:
        print(f"assertion failed: {exc}", file=sys.stderr)
        return EXIT_ASSERTION
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
