"""Command-line front end.

Exit status: 0 when every check passes, 1 when a verification fails,
2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import bounds, verify
from .cumulants import CumulantTable, MomentAssignment, transform_all
from .errors import NCError
from .incidence import mobius
from .partitions import (
    NONCROSSING,
    Partition,
    enumerate_partitions,
    kreweras,
    lattice_label,
    normalize_family,
)
from .rational import fmt
from .report import Report, rows_to_csv

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def parse_range(text: str) -> list[int]:
    """``"5"``, ``"2..200"`` or ``"1,2,4"``."""
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            return list(range(int(lo), int(hi) + 1))
        return [int(part) for part in text.split(",")]
    except ValueError:
        raise UsageError(f"--N: expected an integer, a range a..b or a list, got {text!r}") from None


def _partition(text: str, flag: str) -> Partition:
    try:
        return Partition.parse(text)
    except (NCError, ValueError) as exc:
        raise UsageError(f"{flag}: {exc}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nccumulants", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--format", choices=("text", "json", "csv"), default="text")
        p.add_argument("--out", metavar="PATH", help="write to PATH instead of standard output")

    p = sub.add_parser("enumerate", help="list the partitions of {1..n}")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--lattice", default="set", choices=("set", "nc"))
    common(p)

    p = sub.add_parser("mobius", help="Möbius function on an interval")
    p.add_argument("--n", type=int, help="ground set size (defaults from the partitions)")
    p.add_argument("--sigma", help="lower partition, e.g. 1|2|3 (default: all singletons)")
    p.add_argument("--pi", help="upper partition, e.g. 1,2,3 (default: one block)")
    p.add_argument("--lattice", default="nc", choices=("set", "nc"))
    common(p)

    p = sub.add_parser("kreweras", help="Kreweras complement of a noncrossing partition")
    p.add_argument("--pi", required=True)
    common(p)

    p = sub.add_parser("transform", help="moments <-> cumulants on every partition of {1..n}")
    p.add_argument("--input", required=True, help="JSON moment/cumulant file, or - for stdin")
    p.add_argument("--direction", choices=("m2k", "k2m"), default="m2k")
    p.add_argument("--lattice", required=True, choices=("set", "nc"))
    p.add_argument("--n", type=int, help="order (defaults to the input's n)")
    common(p)

    p = sub.add_parser("sequence", help="a, atilde, b or btilde by enumeration and by series")
    p.add_argument("--kind", required=True, choices=bounds.KINDS)
    p.add_argument("--n", "--order", dest="n", type=int, required=True, help="number of terms (series order)")
    p.add_argument("--N", type=int, default=1)
    common(p)

    p = sub.add_parser("constants", help="z0, Khinchin constant, growth of b, tracial constant")
    p.add_argument("--N", default="1")
    p.add_argument("--precision", type=int, default=12, help="displayed digits of root approximations")
    common(p)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("--suite", required=True, choices=sorted(verify.SUITES))
    p.add_argument("--n", type=int)
    p.add_argument("--N")
    p.add_argument("--lattice", choices=("set", "nc"))
    p.add_argument("--seed", type=int)
    p.add_argument("--grid", type=int, help="extra grid points for the negativity suite")
    common(p)
    return parser


# subcommands -------------------------------------------------------------------


def cmd_enumerate(args) -> Report:
    family = normalize_family(args.lattice)
    parts = list(enumerate_partitions(args.n, family))
    report = Report("enumerate", {"n": args.n, "lattice": lattice_label(family)})
    report.rows = [{"partition": str(p), "blocks": p.size} for p in parts]
    report.extra = {"count": len(parts)}
    report.text = "\n".join(str(p) for p in parts)
    return report


def cmd_mobius(args) -> Report:
    family = normalize_family(args.lattice)
    sigma = _partition(args.sigma, "--sigma") if args.sigma else None
    pi = _partition(args.pi, "--pi") if args.pi else None
    n = args.n or (sigma.n if sigma else pi.n if pi else None)
    if n is None:
        raise UsageError("--n is required when no partition is given")
    sigma = sigma or Partition.bottom(n)
    pi = pi or Partition.top(n)
    value = mobius(sigma, pi, family)
    report = Report("mobius", {"sigma": str(sigma), "pi": str(pi), "lattice": lattice_label(family)})
    report.rows = [{"sigma": str(sigma), "pi": str(pi), "mobius": value}]
    report.text = str(value)
    return report


def cmd_kreweras(args) -> Report:
    pi = _partition(args.pi, "--pi")
    k = kreweras(pi)
    report = Report("kreweras", {"pi": str(pi)})
    report.rows = [{"pi": str(pi), "kreweras": str(k)}]
    report.text = str(k)
    return report


def _load_json(path: str):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"--input: {exc}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"--input: malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def cmd_transform(args) -> Report:
    data = _load_json(args.input)
    cls = MomentAssignment if args.direction == "m2k" else CumulantTable
    source = cls.from_json(data)
    n = args.n or source.n
    family = normalize_family(args.lattice)
    result = transform_all(source, n, family, args.direction)
    payload = result.to_json()
    report = Report("transform", {"n": n, "lattice": lattice_label(family), "direction": args.direction})
    report.rows = [{"partition": e["partition"], "value": e["value"]} for e in payload["entries"]]
    report.extra = {"result": payload}
    report.text = "\n".join(f"{e['partition']}\t{e['value']}" for e in payload["entries"])
    return report


def cmd_sequence(args) -> Report:
    seq = bounds.sequence_report(args.kind, args.n, args.N)
    report = Report("sequence", {"kind": args.kind, "n": args.n, "N": args.N})
    report.rows = seq.rows()
    report.check(seq.agree, "enumeration and series disagree")
    report.text = ",".join(fmt(v) for v in seq.series)
    return report


def cmd_constants(args) -> Report:
    Ns = parse_range(args.N)
    digits = args.precision
    precision = Fraction(1, 10 ** (digits + 2))
    report = Report("constants", {"N": Ns, "precision": digits})
    lines = []
    for N in Ns:
        g = bounds.growth_constants(N, precision)
        certified = ""
        if N >= 2:
            neg = bounds.negativity_check(N)
            for message in neg.failures:
                report.fail(message)
            certified = str(neg.passed).lower()
        row = {
            "N": N,
            "z0_lo": fmt(g.z0_lo),
            "z0_hi": fmt(g.z0_hi),
            "khinchin": "" if g.khinchin is None else f"{g.khinchin:.{digits}g}",
            "certified": certified,
            "z0": f"{g.z0:.{digits}g}",
            "inverse_z0": f"{1 / g.z0:.{digits}g}",
            "b_growth": fmt(g.b_growth_exact) if g.b_growth_exact is not None else f"{g.b_growth:.{digits}g}",
            "pisier": "" if g.pisier is None else f"{g.pisier:.{digits}g}",
        }
        report.rows.append(row)
        lines.append(f"N = {N}")
        lines.append(f"  z0 = {row['z0']}  (in [{float(g.z0_lo):.{digits}g}, {float(g.z0_hi):.{digits}g}])")
        lines.append(f"  1/z0 = {row['inverse_z0']}")
        lines.append(f"  b-growth = {row['b_growth']}")
        if row["khinchin"]:
            lines.append(f"  khinchin = {row['khinchin']}  (1/z0 <= khinchin certified: {certified})")
        if row["pisier"]:
            lines.append(f"  pisier = {row['pisier']}")
    report.text = "\n".join(lines)
    return report


_SUITE_DEFAULTS = {
    "brillinger": {"n": 5},
    "product-formula": {"n": 3},
    "kreweras": {"n": 8},
    "schroeder": {"n": 10},
    "lp-constants": {"N": "1..10"},
    "negativity": {"N": "2..200"},
    "definetti": {"n": 5, "N": "30"},
    "lemma-bound": {"N": "40"},
    "roundtrip": {"n": 8},
    "singleton": {"n": 8},
}


def cmd_verify(args) -> Report:
    suite = args.suite
    defaults = _SUITE_DEFAULTS[suite]
    n = args.n if args.n is not None else defaults.get("n")
    N_text = args.N if args.N is not None else defaults.get("N")
    Ns = parse_range(N_text) if N_text is not None else None
    if suite == "brillinger":
        report = verify.brillinger(n, args.lattice or NONCROSSING)
    elif suite == "product-formula":
        report = verify.product_formula(n)
    elif suite == "kreweras":
        report = verify.kreweras_suite(n, min(n, 7))
    elif suite == "schroeder":
        report = verify.schroeder(n)
    elif suite == "lp-constants":
        report = verify.lp_constants(Ns)
    elif suite == "negativity":
        report = verify.negativity(Ns, args.grid)
    elif suite == "definetti":
        report = verify.definetti(n, max(Ns))
    elif suite == "lemma-bound":
        report = verify.lemma_bound(max(Ns))
    elif suite == "roundtrip":
        if args.seed is None:
            raise UsageError("--seed is required for the randomized roundtrip suite")
        report = verify.roundtrip(n, args.seed, min(n, 6))
    else:
        report = verify.singleton(n)
    report.text = report.to_text()
    if suite == "brillinger":
        report.text += f"\nnonzero_terms: {report.extra['nonzero_terms']}"
    return report


COMMANDS = {
    "enumerate": cmd_enumerate,
    "mobius": cmd_mobius,
    "kreweras": cmd_kreweras,
    "transform": cmd_transform,
    "sequence": cmd_sequence,
    "constants": cmd_constants,
    "verify": cmd_verify,
}


def render(report: Report, fmt_name: str) -> str:
    if fmt_name == "json":
        return report.dumps() + "\n"
    if fmt_name == "csv":
        return rows_to_csv(report.rows)
    text = report.text or report.to_text()
    if not report.passed and report.text:
        text += "\n" + "\n".join(f"failure: {m}" for m in report.failures)
    return text + "\n"


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report = COMMANDS[args.command](args)
    except (UsageError, NCError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    output = render(report, args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(output)
    else:
        sys.stdout.write(output)
    return EXIT_OK if report.passed else EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
