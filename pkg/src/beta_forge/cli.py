"""Command-line front end.

    beta-forge constants --m 1..10
    beta-forge expand --m 2 --beta 5/2 --x center --depth 10
    beta-forge count --m 1 --beta 1.5 --x 1 --depth 20 --format csv
    beta-forge unique --m 3 --beta "G(3)+1/10" --x cycle2a
    beta-forge dimension --m 2 --beta 1.8 --x 0.7
    beta-forge diagram --m 3 --beta 2.6 --out fig.svg

Exit status: 0 success, 2 usage error, 3 domain error, 4 undecided verdict.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

from gmpy2 import mpq

from .constants import beta_c, beta_f, golden_ratio
from .errors import BetaForgeError, DomainError, UndecidedError
from .geometry import ExpansionParams, center_point, cycle_points
from .numeric import AlgebraicNumber, CertifiedValue, Enclosure, rational

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_UNDECIDED = 0, 2, 3, 4
PLACES = 12
MAX_M = 10**4


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class OutputRecord:
    command: str
    params: dict
    payload: dict
    provenance: object

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "OutputRecord":
        d = json.loads(text)
        return cls(d["command"], d["params"], d["payload"], d["provenance"])


# ---------------------------------------------------------------------------
# number formatting

def _approx(x) -> mpq:
    if isinstance(x, AlgebraicNumber):
        lo, hi = x.enclosure(160)
        return (lo + hi) / 2
    if isinstance(x, CertifiedValue):
        return mpq(x.value)
    if isinstance(x, Enclosure):
        return mpq(x.mid())
    return rational(x)


def decimal_str(x, places: int = PLACES) -> str:
    """Round-half-away-from-zero decimal with a fixed number of places; pure integer arithmetic."""
    q = _approx(x)
    scaled = q * 10**places
    n = _round_half_away(scaled)
    sign = "-" if n < 0 else ""
    n = abs(n)
    whole, frac = divmod(n, 10**places)
    return f"{sign}{whole}.{frac:0{places}d}" if places else f"{sign}{whole}"


def _round_half_away(q: mpq) -> int:
    num, den = abs(q.numerator), q.denominator
    n = int((2 * num + den) // (2 * den))
    return -n if q < 0 else n


def error_str(x) -> str:
    if isinstance(x, CertifiedValue):
        return f"{float(x.error_bound):.3e}"
    if isinstance(x, Enclosure):
        return f"{float(x.width) / 2:.3e}"
    return "0"


def _scalar(x, places: int = PLACES) -> dict:
    return {"value": decimal_str(x, places), "error_bound": error_str(x)}


# ---------------------------------------------------------------------------
# argument parsing

_SYMBOL = re.compile(r"^\s*(golden|G\((\d+)\)|beta_f\((\d+)\)|beta_c\((\d+)\))\s*(?:([+-])\s*([0-9./eE+-]+))?\s*$")


def parse_beta(spec: str, tol) -> object:
    """Decimal or p/q (exact rational), or a symbolic constant optionally shifted by a rational."""
    m = _SYMBOL.match(spec)
    if m is None:
        try:
            return rational(spec)
        except (ValueError, ZeroDivisionError, TypeError) as exc:
            raise UsageError(f"cannot parse beta {spec!r}") from exc
    name = m.group(1)
    if name == "golden":
        value = golden_ratio(1)
    elif m.group(2):
        value = golden_ratio(int(m.group(2)))
    elif m.group(3):
        value = beta_f(int(m.group(3)))
    else:
        value = beta_c(int(m.group(4)), tol)
    if m.group(5):
        try:
            shift = rational(m.group(6))
        except (ValueError, ZeroDivisionError) as exc:
            raise UsageError(f"cannot parse offset in {spec!r}") from exc
        shift = shift if m.group(5) == "+" else -shift
        if isinstance(value, CertifiedValue):
            value = CertifiedValue.from_bounds(value.lower() + shift, value.upper() + shift, value.prec)
        else:
            value = value + shift
    return value


def parse_x(spec: str, params: ExpansionParams):
    s = spec.strip()
    if s == "center":
        return center_point(params)
    if s in ("cycle2a", "cycle2b"):
        return cycle_points(params)[0 if s == "cycle2a" else 1]
    try:
        return params.point(rational(s))
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise UsageError(f"cannot parse x {spec!r}") from exc


def parse_m_range(spec: str) -> list[int]:
    mt = re.fullmatch(r"\s*(\d+)\s*(?:\.\.\s*(\d+)\s*)?", spec)
    if mt is None:
        raise UsageError(f"bad m range {spec!r}; use N or A..B")
    lo = int(mt.group(1))
    hi = int(mt.group(2)) if mt.group(2) else lo
    if not 1 <= lo <= hi <= MAX_M:
        raise UsageError(f"m range must lie within 1..{MAX_M}")
    return list(range(lo, hi + 1))


def thread_count() -> int:
    raw = os.environ.get("BETA_FORGE_THREADS", "1")
    if not raw.isdigit() or int(raw) < 1:
        raise UsageError("BETA_FORGE_THREADS must be a positive integer")
    return int(raw)


def _params(args) -> ExpansionParams:
    tol = _tol(args)
    beta = parse_beta(args.beta, tol)
    if getattr(args, "beta_error", None):
        err = rational(args.beta_error)
        v = _approx(beta)
        beta = CertifiedValue.from_bounds(v - err, v + err)
    return ExpansionParams(args.m, beta)


def _tol(args):
    try:
        tol = rational(args.tol)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad --tol {args.tol!r}") from exc
    if tol <= 0:
        raise UsageError("--tol must be positive")
    return tol


def _beta_record(args, params: ExpansionParams) -> dict:
    return {"m": params.m, "beta": {"spec": args.beta, **_scalar(params.beta)}}


def _provenance(params: ExpansionParams):
    if params.exact:
        return "exact"
    return {"certified": error_str(params.beta)}


def _word(w) -> str:
    sep = "," if any(d > 9 for d in w) else ""
    return sep.join(map(str, w))


# ---------------------------------------------------------------------------
# commands

def cmd_constants(args) -> tuple[OutputRecord, int]:
    ms = parse_m_range(args.m)
    tol = _tol(args)
    places = max(5, min(30, math.ceil(-math.log10(float(tol)))))

    def row(m: int) -> dict:
        g, bf, bc = golden_ratio(m), beta_f(m), beta_c(m, tol)
        return {
            "m": m,
            "G": decimal_str(g, places),
            "beta_f": decimal_str(bf, places),
            "beta_c": decimal_str(bc, places),
            "beta_c_error": error_str(bc),
        }

    with ThreadPoolExecutor(max_workers=thread_count()) as pool:
        rows = list(pool.map(row, ms))
    rec = OutputRecord("constants", {"m": args.m, "beta": None, "tol": args.tol}, {"rows": rows},
                       {"certified": f"{float(tol):.3e}"})
    return rec, EXIT_OK


def cmd_expand(args) -> tuple[OutputRecord, int]:
    from .expansions import expand_tree, greedy_expansion, lazy_expansion, quasi_greedy_one

    params = _params(args)
    payload: dict = {"mode": args.mode, "depth": args.depth}
    if args.mode == "quasi-greedy":
        payload["digits"] = _word(quasi_greedy_one(params, args.depth).prefix(args.depth))
    else:
        if args.x is None:
            raise UsageError(f"--x is required for mode {args.mode}")
        x = parse_x(args.x, params)
        payload["x"] = _scalar(x)
        if args.mode == "tree":
            prefixes = expand_tree(params, x, args.depth).prefixes()
            payload["count"] = len(prefixes)
            payload["prefixes"] = [_word(p) for p in prefixes]
        else:
            fn = greedy_expansion if args.mode == "greedy" else lazy_expansion
            payload["digits"] = _word(fn(params, x, args.depth).prefix(args.depth))
    return OutputRecord("expand", _beta_record(args, params), payload, _provenance(params)), EXIT_OK


def cmd_count(args) -> tuple[OutputRecord, int]:
    from .expansions import count_prefixes

    params = _params(args)
    x = parse_x(args.x, params)
    res = count_prefixes(params, x, args.depth)
    rows = [{"depth": 0, "count": res.counts[0], "growth": ""}]
    rows += [{"depth": j, "count": c, "growth": f"{g:.12f}"}
             for j, (c, g) in enumerate(zip(res.counts[1:], res.growth), start=1)]
    payload = {"x": _scalar(x), "rows": rows}
    return OutputRecord("count", _beta_record(args, params), payload, _provenance(params)), EXIT_OK


def cmd_unique(args) -> tuple[OutputRecord, int]:
    from .expansions import BranchWitness, OrbitWitness, uniqueness_certificate

    params = _params(args)
    x = parse_x(args.x, params)
    cert = uniqueness_certificate(params, x, args.max_steps)
    payload: dict = {"x": _scalar(x), "verdict": cert.verdict, "reason": cert.reason, "steps": cert.steps}
    w = cert.witness
    if isinstance(w, OrbitWitness):
        payload["witness"] = {
            "orbit": [decimal_str(p) for p in w.orbit],
            "digits": _word(w.digits),
            "cycle_start": w.cycle_start,
            "locations": list(w.locations),
        }
    elif isinstance(w, BranchWitness):
        payload["witness"] = {"step": w.step, "point": decimal_str(w.point),
                              "digits": list(w.digits), "prefix": _word(w.prefix)}
    code = EXIT_UNDECIDED if cert.verdict == "undecided" else EXIT_OK
    return OutputRecord("unique", _beta_record(args, params), payload, _provenance(params)), code


def cmd_dimension(args) -> tuple[OutputRecord, int]:
    from dataclasses import replace

    from .dimension import build_doubling_interval, certify_n_beta, dimension_lower_bound

    params = _params(args)
    di = build_doubling_interval(params)
    cert = certify_n_beta(di, params)
    payload: dict = {
        "parity_case": di.parity_case,
        "L": decimal_str(di.L),
        "R": decimal_str(di.R),
        "n_beta": cert.n_beta,
        "cover_pieces": len(cert.pieces),
        "lower_bound": f"{math.log(2, params.m + 1) / cert.n_beta:.12f}",
    }
    if args.x is not None:
        x = parse_x(args.x, params)
        bound = dimension_lower_bound(params, x, args.depth)
        payload.update({
            "x": _scalar(x),
            "j_x": bound.j_x,
            "depth": bound.depth,
            "count_lower": str(bound.count_lower),
            "count_exact": bound.count_exact,
            "empirical_lower": f"{bound.empirical_lower:.12f}",
        })
    return OutputRecord("dimension", _beta_record(args, params), payload, _provenance(params)), EXIT_OK


def cmd_diagram(args) -> tuple[OutputRecord, int]:
    from .diagram import render_svg

    params = _params(args)
    svg = render_svg(params)
    if args.out == "-":
        sys.stdout.write(svg)
    else:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(svg)
    payload = {"out": args.out, "bytes": len(svg.encode("utf-8"))}
    return OutputRecord("diagram", _beta_record(args, params), payload, _provenance(params)), EXIT_OK


# ---------------------------------------------------------------------------
# rendering

def render(rec: OutputRecord, fmt: str) -> str:
    if fmt == "json":
        return rec.to_json()
    rows = rec.payload.get("rows")
    if fmt == "csv":
        if rows is None:
            raise UsageError(f"--format csv is only available for flat commands, not {rec.command}")
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        return buf.getvalue()
    if rows is not None:
        cols = list(rows[0])
        widths = [max(len(c), *(len(str(r[c])) for r in rows)) for c in cols]
        lines = ["  ".join(c.rjust(w) for c, w in zip(cols, widths))]
        lines += ["  ".join(str(r[c]).rjust(w) for c, w in zip(cols, widths)) for r in rows]
        return "\n".join(lines) + "\n"
    lines = []
    for key in sorted(rec.payload):
        val = rec.payload[key]
        if isinstance(val, dict):
            val = json.dumps(val, sort_keys=True)
        elif isinstance(val, list):
            val = " ".join(map(str, val))
        lines.append(f"{key}: {val}")
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="beta-forge", description="beta-expansions over {0..m}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, need_beta=True):
        p.add_argument("--format", choices=("json", "csv", "table"), default="table")
        p.add_argument("--tol", default="1e-10", help="tolerance for certified constants")
        if need_beta:
            p.add_argument("--m", type=int, required=True)
            p.add_argument("--beta", required=True,
                           help="decimal, p/q, golden, G(m), beta_f(m), beta_c(m), optionally +-rational")
            p.add_argument("--beta-error", default=None,
                           help="treat beta as approximate with this error bound")

    p = sub.add_parser("constants", help="G(m), beta_f(m), beta_c(m)")
    common(p, need_beta=False)
    p.add_argument("--m", required=True, help="N or A..B")
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser("expand", help="prefixes or greedy-type digit strings")
    common(p)
    p.add_argument("--x", default=None)
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--mode", choices=("tree", "greedy", "lazy", "quasi-greedy"), default="tree")
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("count", help="number of prefixes per depth and growth rates")
    common(p)
    p.add_argument("--x", required=True)
    p.add_argument("--depth", type=int, required=True)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("unique", help="uniqueness certificate")
    common(p)
    p.add_argument("--x", required=True)
    p.add_argument("--max-steps", type=int, default=4096)
    p.set_defaults(func=cmd_unique)

    p = sub.add_parser("dimension", help="certified dimension lower bound")
    common(p)
    p.add_argument("--x", default=None)
    p.add_argument("--depth", type=int, default=40)
    p.set_defaults(func=cmd_dimension)

    p = sub.add_parser("diagram", help="SVG of the interval geometry")
    common(p)
    p.add_argument("--out", required=True, help="output file, or - for stdout")
    p.set_defaults(func=cmd_diagram)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for name in ("depth", "max_steps"):
        if getattr(args, name, 0) is not None and getattr(args, name, 0) < 0:
            parser.error(f"--{name.replace('_', '-')} must be nonnegative")
    try:
        rec, code = args.func(args)
        text = render(rec, args.format)
    except UsageError as exc:
        parser.error(str(exc))
    except DomainError as exc:
        print(f"beta-forge: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except UndecidedError as exc:
        print(f"beta-forge: undecided: {exc}", file=sys.stderr)
        return EXIT_UNDECIDED
    except BetaForgeError as exc:
        print(f"beta-forge: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    if not (args.command == "diagram" and args.out == "-"):
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
