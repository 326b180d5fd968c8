"""Command-line front end.

Subcommands delegate 1:1 to library operations; FSTs travel between
commands as text-format files (or stdin/stdout with ``-``).  Exit codes:
0 success, 1 usage error (bad flags, missing files), 2 domain error
(semiring mismatch, convergence failure, parse error, ...).
"""

import argparse
import sys

from . import algorithms, autodiff
from .errors import WfstError
from .fst import fst_from_sequence, enumerate_paths, label_str
from .io import parse_text, render_dot, render_html, render_text
from .semirings import BUILTIN_SEMIRINGS, DEFAULT_DELTA

USAGE_ERROR = 1
DOMAIN_ERROR = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE_ERROR, f"{self.prog}: error: {message}\n")


def _read_document(path):
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as handle:
        return handle.read()


def _load(path):
    document = _read_document(path)
    if _needs_diff(document):
        semiring = autodiff.make_diff_semiring()
        return parse_text(document, semirings={"diff": semiring})
    return parse_text(document)


def _needs_diff(document):
    for line in document.splitlines():
        line = line.strip()
        if line.startswith("#semiring"):
            return line.split()[-1] == "diff"
    return False


def _write(args, text):
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text)


def _path_line(path):
    ilabels = "".join(label_str(x) for x in path.input_labels)
    olabels = "".join(label_str(x) for x in path.output_labels)
    return f"{ilabels}\t{olabels}\t{path.weight.text()}"


def _semiring_arg(name):
    if name == "diff":
        return autodiff.make_diff_semiring()
    return BUILTIN_SEMIRINGS[name]


def _add_common(parser, inputs=1):
    for i in range(inputs):
        parser.add_argument("inputs" if inputs == 1 else f"input{i + 1}",
                            metavar="FILE", help="input FST file ('-' = stdin)")
    parser.add_argument("--out", default="-", metavar="FILE",
                        help="output file (default stdout)")
    parser.add_argument("--delta", type=float, default=DEFAULT_DELTA,
                        help="comparison tolerance (default 1/1024)")


def build_parser():
    parser = _Parser(prog="wfst", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True,
                                parser_class=_Parser)
    semiring_names = sorted(BUILTIN_SEMIRINGS) + ["diff"]

    p = sub.add_parser("compile", help="build an acceptor from a string")
    p.add_argument("--string", required=True)
    p.add_argument("--semiring", default="boolean", choices=semiring_names)
    p.add_argument("--out", default="-", metavar="FILE")
    p.add_argument("--delta", type=float, default=DEFAULT_DELTA)

    p = sub.add_parser("print", help="parse and reprint an FST file")
    _add_common(p)

    p = sub.add_parser("draw", help="emit a DOT or HTML diagram")
    _add_common(p)
    p.add_argument("--format", choices=("dot", "html"), default="dot")

    for name in ("union", "concat", "compose"):
        p = sub.add_parser(name, help=f"{name} of two FSTs")
        _add_common(p, inputs=2)

    for name in ("closure", "invert", "rmepsilon", "determinize", "reverse"):
        p = sub.add_parser(name, help=f"{name} of an FST")
        _add_common(p)

    p = sub.add_parser("project", help="project to one label side")
    _add_common(p)
    p.add_argument("--side", choices=("input", "output"), required=True)

    p = sub.add_parser("push", help="push weights toward one end")
    _add_common(p)
    p.add_argument("--to", choices=("initial", "final"), default="initial")

    p = sub.add_parser("lift", help="cast into another semiring")
    _add_common(p)
    p.add_argument("--to", choices=semiring_names, required=True)

    p = sub.add_parser("shortestpath", help="best path in a path semiring")
    _add_common(p)

    p = sub.add_parser("shortestdistance", help="per-state distances")
    _add_common(p)

    p = sub.add_parser("sumpaths", help="total weight over accepting paths")
    _add_common(p)

    p = sub.add_parser("randpath", help="sample a random path")
    _add_common(p)
    p.add_argument("--seed", type=int, default=None)

    p = sub.add_parser("enumerate", help="list accepting paths")
    _add_common(p)
    p.add_argument("--max", type=int, default=1000, dest="max_paths")

    p = sub.add_parser("train", help="gradient-descent weight learning")
    _add_common(p)
    p.add_argument("--pairs", required=True, metavar="FILE",
                   help="tab-separated input/output pairs, one per line")
    p.add_argument("--steps", type=int, default=200)
    p.add_argument("--rate", type=float, default=0.05)

    return parser


def _run(args):
    cmd = args.command
    if cmd == "compile":
        fst = fst_from_sequence(args.string, _semiring_arg(args.semiring))
        _write(args, render_text(fst))
    elif cmd == "print":
        _write(args, render_text(_load(args.inputs)))
    elif cmd == "draw":
        fst = _load(args.inputs)
        render = render_dot if args.format == "dot" else render_html
        _write(args, render(fst))
    elif cmd in ("union", "concat", "compose"):
        a = _load(args.input1)
        b = _load(args.input2)
        op = getattr(algorithms, cmd)
        _write(args, render_text(op(a, b)))
    elif cmd == "closure":
        _write(args, render_text(algorithms.closure(_load(args.inputs))))
    elif cmd == "invert":
        _write(args, render_text(algorithms.invert(_load(args.inputs))))
    elif cmd == "rmepsilon":
        _write(args, render_text(
            algorithms.remove_epsilon(_load(args.inputs), args.delta)))
    elif cmd == "determinize":
        _write(args, render_text(
            algorithms.determinize(_load(args.inputs), args.delta)))
    elif cmd == "reverse":
        _write(args, render_text(algorithms.reverse(_load(args.inputs))))
    elif cmd == "project":
        _write(args, render_text(
            algorithms.project(_load(args.inputs), args.side)))
    elif cmd == "push":
        _write(args, render_text(
            algorithms.push(_load(args.inputs), args.to, args.delta)))
    elif cmd == "lift":
        fst = _load(args.inputs)
        _write(args, render_text(
            algorithms.lift(fst, _semiring_arg(args.to))))
    elif cmd == "shortestpath":
        result = algorithms.shortest_path(_load(args.inputs), args.delta)
        _write(args, _path_line(result.path) + "\n")
    elif cmd == "shortestdistance":
        fst = _load(args.inputs)
        d = algorithms.shortest_distance(fst, args.delta)
        _write(args, "".join(f"{s} {w.text()}\n" for s, w in enumerate(d)))
    elif cmd == "sumpaths":
        total = algorithms.sum_paths(_load(args.inputs), args.delta)
        _write(args, total.text() + "\n")
    elif cmd == "randpath":
        path = algorithms.random_path(_load(args.inputs), seed=args.seed)
        _write(args, _path_line(path) + "\n")
    elif cmd == "enumerate":
        result = enumerate_paths(_load(args.inputs), max_paths=args.max_paths)
        lines = [_path_line(p) for p in result]
        if result.truncated:
            lines.append("# truncated")
        _write(args, "".join(line + "\n" for line in lines))
    elif cmd == "train":
        fst, was_diff = _load_as_real(args.inputs)
        pairs = _load_pairs(args.pairs)
        trained, losses = autodiff.train(fst, pairs,
                                         steps=args.steps, rate=args.rate)
        for step, loss in enumerate(losses):
            print(f"step {step} loss {loss:.6f}", file=sys.stderr)
        if was_diff:
            trained = algorithms.lift(trained, autodiff.make_diff_semiring())
        _write(args, render_text(trained))
    else:  # pragma: no cover - argparse rejects unknown commands
        raise WfstError(f"unknown command {cmd}")
    return 0


def _load_as_real(path):
    from .algorithms import lift
    from .semirings import RealWeight

    fst = _load(path)
    if fst.semiring is RealWeight:
        return fst, False
    if fst.semiring.name == "diff":
        return lift(fst, RealWeight, cast=lambda w: RealWeight(w.value)), True
    raise WfstError(
        f"train needs a real or diff semiring FST, got {fst.semiring.name}"
    )


def _load_pairs(path):
    pairs = []
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.rstrip("\n")
            if not line.strip():
                continue
            fields = line.split("\t")
            if len(fields) != 2:
                raise WfstError(
                    f"{path}:{lineno}: expected input<TAB>output"
                )
            pairs.append((fields[0], fields[1]))
    return pairs


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _run(args)
    except FileNotFoundError as exc:
        print(f"wfst {args.command}: missing file: {exc.filename}",
              file=sys.stderr)
        return USAGE_ERROR
    except WfstError as exc:
        print(f"wfst {args.command}: {exc}", file=sys.stderr)
        return DOMAIN_ERROR


if __name__ == "__main__":
    sys.exit(main())
