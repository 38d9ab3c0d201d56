"""Command-line entry point: ``infprob <subcommand> ...``.

Documents are read as JSON from ``--input`` (a path, or ``-`` for stdin) or
inline from ``--json``.  Every result is wrapped in an envelope echoing the
command, the resolved configuration and the version.

Exit codes: 0 success, 1 a verification failed, 2 bad input, 3 size cap hit.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

import jsonschema

from . import __version__, build_id
from .bridge import IdempotentModel, verify_boolean_independence, verify_monotone_independence
from .cumulants import (
    boolean_cumulants_from_moments,
    free_cumulants_from_moments,
    inf_cumulants_from_moments,
    inf_moments_from_cumulants,
    moments_from_boolean_cumulants,
    moments_from_free_cumulants,
)
from .distributions import AtomicMeasure
from .oracles import finite_matrix_spectral_shift
from .partitions import PartitionClass, SizeLimitError, caps, count_partitions, enumerate_partitions
from .poly_laws import (
    BooleanPolyInput,
    DegenerateRootError,
    FreePolyInput,
    ZeroRatioError,
    anticommutator_inf_law,
    anticommutator_inf_measure,
    boolean_poly_cumulants,
    boolean_poly_moments,
    commutator_inf_law,
    gamma_recurrence,
    inf_boolean_poly_cumulants,
)
from .rdiagonal import (
    DeterminingSequences,
    check_inf_rdiag_closure,
    cumulants_of_square,
    inf_cumulants_of_square,
    inf_rdiag_alternating_cumulants,
    rdiag_table,
    selfadjoint_table,
)
from .scalars import parse_scalar, render_scalar
from .series import (
    cauchy_from_moments,
    eta_from_moments,
    inf_g_from_inf_moments,
    inf_r,
    psi_from_moments,
    r_from_moments,
    spectral_shift_series,
)

EXIT_OK, EXIT_FAILED, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3


class InputError(ValueError):
    """Malformed or schema-violating input; reported with exit code 2."""


# -- schemas -----------------------------------------------------------------

_SCALAR = {
    "anyOf": [
        {"type": "integer"},
        {"type": "number"},
        {"type": "string"},
        {
            "type": "object",
            "properties": {"re": {}, "im": {}},
            "additionalProperties": False,
        },
    ]
}
_SEQ = {"type": "array", "items": _SCALAR}

SCHEMAS = {
    "transform": {
        "type": "object",
        "required": ["kind", "direction", "sequence"],
        "properties": {
            "kind": {"enum": ["free", "boolean", "inf"]},
            "direction": {"enum": ["to_cumulants", "to_moments"]},
            "sequence": _SEQ,
            "inf_sequence": _SEQ,
            "order": {"type": "integer", "minimum": 1},
        },
        "additionalProperties": False,
    },
    "series": {
        "type": "object",
        "required": ["kind", "moments"],
        "properties": {
            "kind": {"enum": ["cauchy", "r", "psi", "eta", "inf_g", "inf_r"]},
            "moments": _SEQ,
            "inf_moments": _SEQ,
            "order": {"type": "integer", "minimum": 1},
        },
        "additionalProperties": False,
    },
    "inf-law": {
        "type": "object",
        "required": ["m1", "m2", "x2_inf"],
        "properties": {
            "m1": _SCALAR,
            "m2": _SCALAR,
            "x2_inf": _SEQ,
            "x2_inf_measure": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["t", "w"],
                    "properties": {"t": _SCALAR, "w": _SCALAR},
                },
            },
            "order": {"type": "integer", "minimum": 1},
        },
        "additionalProperties": False,
    },
    "boolean-poly": {
        "type": "object",
        "required": ["a", "b", "x1", "x2"],
        "properties": {
            "a": _SCALAR,
            "b": _SCALAR,
            "x1": {"$ref": "#/$defs/variable"},
            "x2": {"$ref": "#/$defs/variable"},
            "order": {"type": "integer", "minimum": 1},
        },
        "additionalProperties": False,
        "$defs": {
            "variable": {
                "type": "object",
                "required": ["beta1", "beta2"],
                "properties": {
                    "beta1": _SCALAR,
                    "beta2": _SCALAR,
                    "inf_beta1": _SCALAR,
                    "inf_beta2": _SCALAR,
                },
                "additionalProperties": False,
            }
        },
    },
    "rdiagonal": {
        "type": "object",
        "required": ["mode"],
        "properties": {
            "mode": {"enum": ["product", "square", "closure"]},
            "kappa2_x1": _SCALAR,
            "m1_x1": _SCALAR,
            "x2_inf": _SEQ,
            "alpha": _SEQ,
            "beta": _SEQ,
            "alpha_prime": _SEQ,
            "beta_prime": _SEQ,
            "which": {"enum": ["aa*", "a*a"]},
            "b_moments": _SEQ,
            "b_inf_moments": _SEQ,
            "order": {"type": "integer", "minimum": 1},
        },
        "additionalProperties": False,
    },
    "bridge": {
        "type": "object",
        "properties": {
            "phi_prime_j": _SCALAR,
            "marginals": {
                "type": "object",
                "additionalProperties": {
                    "type": "object",
                    "required": ["moments"],
                    "properties": {"moments": _SEQ, "inf_moments": _SEQ},
                    "additionalProperties": False,
                },
            },
        },
        "additionalProperties": False,
    },
    "spectral-shift": {
        "type": "object",
        "properties": {
            "moments": _SEQ,
            "matrix": {"type": "array", "items": _SEQ},
            "order": {"type": "integer", "minimum": 1},
        },
        "additionalProperties": False,
    },
}

_RATIONAL = {"type": "string", "pattern": r"^-?[0-9]+(/[1-9][0-9]*)?$"}
_RENDERED = {
    "anyOf": [
        _RATIONAL,
        {
            "type": "object",
            "required": ["re", "im"],
            "properties": {"re": _RATIONAL, "im": _RATIONAL},
            "additionalProperties": False,
        },
        {
            "type": "object",
            "required": ["p", "q", "s"],
            "properties": {
                "p": {"$ref": "#/$defs/rendered"},
                "q": {"$ref": "#/$defs/rendered"},
                "s": _RATIONAL,
            },
            "additionalProperties": False,
        },
    ]
}
_RENDERED_SEQ = {"type": "array", "items": {"$ref": "#/$defs/rendered"}}
_MEASURE = {
    "type": "object",
    "required": ["atoms"],
    "properties": {
        "atoms": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["t", "w"],
                "properties": {"t": {"$ref": "#/$defs/rendered"}, "w": {"$ref": "#/$defs/rendered"}},
            },
        }
    },
}
_SERIES = {
    "type": "object",
    "required": ["variable", "lowest_exp", "coeffs", "precision"],
    "properties": {"variable": {"enum": ["z", "1/z"]}, "coeffs": _RENDERED_SEQ},
}
_REPORT = {
    "checked": {"type": "integer", "minimum": 0},
    "passed": {"type": "integer", "minimum": 0},
    "failures": {"type": "array"},
}

ENVELOPE_SCHEMA = {
    "type": "object",
    "required": ["command", "config", "version"],
    "properties": {
        "command": {"type": "string"},
        "config": {"type": "object"},
        "version": {"type": "string"},
    },
}

# payload schemas for emitted documents, keyed by command
OUTPUT_SCHEMAS = {
    "partitions": {
        "required": ["count", "partitions"],
        "properties": {
            "count": {"type": "integer"},
            "partitions": {
                "type": "array",
                "items": {
                    "type": "array",
                    "items": {"type": "array", "items": {"type": "integer", "minimum": 1}},
                },
            },
        },
    },
    "transform": {
        "required": ["result"],
        "properties": {"result": _RENDERED_SEQ, "inf_result": _RENDERED_SEQ},
    },
    "series": {"required": ["series"], "properties": {"series": _SERIES}},
    "inf-law": {
        "required": ["inf_moments"],
        "properties": {"inf_moments": _RENDERED_SEQ, "inf_measure": _MEASURE},
    },
    "boolean-poly": {
        "required": ["cumulants"],
        "properties": {
            "cumulants": _RENDERED_SEQ,
            "moments": _RENDERED_SEQ,
            "inf_cumulants": _RENDERED_SEQ,
            "measure": _MEASURE,
            "mass": {"$ref": "#/$defs/rendered"},
            "gamma": {"type": "object", "properties": {"odd": _RENDERED_SEQ, "even": _RENDERED_SEQ}},
        },
    },
    "rdiagonal": {
        "anyOf": [
            {"required": ["inf_cumulants"]},
            {"required": ["checked", "passed", "failures"]},
        ],
        "properties": {"inf_cumulants": _RENDERED_SEQ, "cumulants": _RENDERED_SEQ, **_REPORT},
    },
    "bridge": {"required": ["checked", "passed", "failures"], "properties": _REPORT},
    "simulate": {
        "required": ["ensemble", "results"],
        "properties": {
            "results": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["poly", "n", "empirical_mean", "stderr", "theory", "zscore"],
                    "properties": {
                        "poly": {"type": "string"},
                        "n": {"type": ["integer", "string"]},
                        "empirical_mean": {"type": "number"},
                        "stderr": {"type": "number"},
                        "theory": {"type": "number"},
                        "zscore": {"type": "number"},
                    },
                },
            }
        },
    },
    "spectral-shift": {
        "required": ["tau"],
        "properties": {"tau": _RENDERED_SEQ, "matrix_tau": _RENDERED_SEQ, "moments": _RENDERED_SEQ},
    },
}


def output_schema(command: str) -> dict:
    """Full schema for the document ``command`` emits: envelope plus payload."""
    payload = OUTPUT_SCHEMAS[command]
    return {
        "allOf": [ENVELOPE_SCHEMA, {"type": "object", **payload}],
        "properties": {"command": {"const": command}},
        "$defs": {"rendered": _RENDERED},
    }


def validate(command: str, doc) -> None:
    schema = SCHEMAS.get(command)
    if schema is None:
        return
    try:
        jsonschema.validate(doc, schema)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise InputError(f"schema error at {where}: {exc.message}") from None


# -- helpers -----------------------------------------------------------------


def _scalars(seq) -> list:
    return [parse_scalar(x) for x in seq]


def _render(seq) -> list:
    return [render_scalar(x) for x in seq]


def _read_document(args):
    if args.json is not None:
        text, source = args.json, "--json"
    elif args.input is not None:
        if args.input == "-":
            text, source = sys.stdin.read(), "<stdin>"
        else:
            try:
                with open(args.input, encoding="utf-8") as fh:
                    text = fh.read()
            except OSError as exc:
                raise InputError(f"cannot read {args.input}: {exc.strerror}") from None
            source = args.input
    else:
        return None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(
            f"{source}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from None


def _require_document(args, command):
    doc = _read_document(args)
    if doc is None:
        raise InputError(f"{command} needs an input document (--input PATH, --input -, or --json TEXT)")
    validate(command, doc)
    return doc


def _order(doc, default):
    return doc.get("order", default)


# -- commands ----------------------------------------------------------------


def cmd_partitions(args, doc):
    cls = PartitionClass.parse(args.cls)
    parts = enumerate_partitions(args.n, cls)
    return {
        "count": count_partitions(args.n, cls),
        "partitions": [p.to_json() for p in parts],
    }, EXIT_OK


def cmd_transform(args, doc):
    seq = _scalars(doc["sequence"])
    N = _order(doc, len(seq))
    kind, direction = doc["kind"], doc["direction"]
    if kind == "inf":
        inf_seq = _scalars(doc.get("inf_sequence", [0] * len(seq)))
        fn = inf_cumulants_from_moments if direction == "to_cumulants" else inf_moments_from_cumulants
        std, inf = fn(seq, inf_seq, N)
        return {"result": _render(std), "inf_result": _render(inf)}, EXIT_OK
    table = {
        ("free", "to_cumulants"): free_cumulants_from_moments,
        ("free", "to_moments"): moments_from_free_cumulants,
        ("boolean", "to_cumulants"): boolean_cumulants_from_moments,
        ("boolean", "to_moments"): moments_from_boolean_cumulants,
    }
    return {"result": _render(table[kind, direction](seq, N))}, EXIT_OK


def cmd_series(args, doc):
    m = _scalars(doc["moments"])
    N = _order(doc, len(m))
    kind = doc["kind"]
    if kind in ("inf_g", "inf_r"):
        if "inf_moments" not in doc:
            raise InputError(f"series kind {kind} needs inf_moments")
        mp = _scalars(doc["inf_moments"])
        s = inf_g_from_inf_moments(mp, N) if kind == "inf_g" else inf_r(m, mp, N)
    else:
        fn = {
            "cauchy": cauchy_from_moments,
            "r": r_from_moments,
            "psi": psi_from_moments,
            "eta": eta_from_moments,
        }[kind]
        s = fn(m, N)
    return {"series": s.to_json()}, EXIT_OK


def cmd_inf_law(args, doc):
    mp = _scalars(doc["x2_inf"])
    inp = FreePolyInput(parse_scalar(doc["m1"]), parse_scalar(doc["m2"]), tuple(mp))
    N = _order(doc, len(mp))
    law = anticommutator_inf_law if args.which == "anticommutator" else commutator_inf_law
    out = {"inf_moments": _render(law(inp, N))}
    if args.which == "anticommutator" and "x2_inf_measure" in doc:
        nu = AtomicMeasure.from_json(doc["x2_inf_measure"])
        out["inf_measure"] = anticommutator_inf_measure(nu, inp.m1, inp.m2).to_json()
    return out, EXIT_OK


def cmd_boolean_poly(args, doc):
    x1, x2 = doc["x1"], doc["x2"]

    def opt(d, key):
        return parse_scalar(d[key]) if key in d else None

    inp = BooleanPolyInput(
        parse_scalar(doc["a"]),
        parse_scalar(doc["b"]),
        parse_scalar(x1["beta1"]),
        parse_scalar(x1["beta2"]),
        parse_scalar(x2["beta1"]),
        parse_scalar(x2["beta2"]),
        opt(x1, "inf_beta1"),
        opt(x1, "inf_beta2"),
        opt(x2, "inf_beta1"),
        opt(x2, "inf_beta2"),
    )
    N = _order(doc, 8)
    out = {"cumulants": _render(boolean_poly_cumulants(inp, N))}
    try:
        moments, measure = boolean_poly_moments(inp, N)
        out["moments"] = _render(moments)
        out["measure"] = measure.to_json()
        out["mass"] = render_scalar(measure.mass)
    except (DegenerateRootError, ValueError) as exc:
        out["closed_form_note"] = str(exc)
    try:
        gamma = gamma_recurrence(inp, N, fallback=True)
        out["gamma"] = {"odd": _render(gamma.odd), "even": _render(gamma.even)}
        out.setdefault("moments", _render(gamma.moments))
    except ZeroRatioError as exc:  # pragma: no cover - fallback always succeeds
        out["gamma_note"] = str(exc)
    if inp.has_inf:
        out["inf_cumulants"] = _render(inf_boolean_poly_cumulants(inp, N))
    return out, EXIT_OK


def cmd_rdiagonal(args, doc):
    mode = doc["mode"]
    if mode == "product":
        for key in ("kappa2_x1", "x2_inf"):
            if key not in doc:
                raise InputError(f"rdiagonal product mode needs {key}")
        mp = _scalars(doc["x2_inf"])
        N = _order(doc, len(mp))
        m1 = parse_scalar(doc.get("m1_x1", 0))
        values = inf_rdiag_alternating_cumulants(parse_scalar(doc["kappa2_x1"]), mp, N, m1)
        return {"inf_cumulants": _render(values)}, EXIT_OK
    seq = DeterminingSequences(
        tuple(_scalars(doc.get("alpha", []))),
        tuple(_scalars(doc.get("beta", []))),
        tuple(_scalars(doc.get("alpha_prime", []))),
        tuple(_scalars(doc.get("beta_prime", []))),
    )
    if mode == "square":
        which = doc.get("which", "aa*")
        N = _order(doc, seq.order)
        return {
            "cumulants": _render(cumulants_of_square(seq, which, N)),
            "inf_cumulants": _render(inf_cumulants_of_square(seq, which, N)),
        }, EXIT_OK
    b = _scalars(doc.get("b_moments", [1] * (2 * seq.order)))
    bp = _scalars(doc["b_inf_moments"]) if "b_inf_moments" in doc else None
    N = _order(doc, min(seq.order, 4))
    report = check_inf_rdiag_closure(rdiag_table(seq), selfadjoint_table(b, bp), N)
    return {
        "checked": report.checked,
        "passed": report.checked - len(report.failures),
        "failures": [{"eps": list(e), "value": render_scalar(v)} for e, v in report.failures],
    }, (EXIT_OK if report.ok else EXIT_FAILED)


def _random_marginals(seed: int, names, order: int) -> dict:
    import random

    rng = random.Random(seed)
    out = {}
    for name in names:
        m = [Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(order)]
        mp = [Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(order)]
        out[name] = (m, mp)
    return out


def cmd_bridge(args, doc):
    doc = doc or {}
    order = 4 * args.max_len + 4
    if "marginals" in doc:
        marginals = {
            name: (_scalars(v["moments"]), _scalars(v.get("inf_moments", [0] * len(v["moments"]))))
            for name, v in doc["marginals"].items()
        }
    else:
        marginals = _random_marginals(args.seed, ("x", "y"), order)
    if len(marginals) != 2:
        raise InputError("bridge needs exactly two marginals (one per algebra)")
    phi_prime_j = parse_scalar(doc.get("phi_prime_j", 1))
    model = IdempotentModel.free_variables(phi_prime_j, marginals)
    x, y = list(marginals)
    if args.check == "boolean":
        report = verify_boolean_independence(model, [[(x,)], [(y,)]], args.max_len, kind=args.kind)
    else:
        report = verify_monotone_independence(model, [(x,)], [(y,), (y, y)], args.max_len, kind=args.kind)
    return report.to_json(), (EXIT_OK if report.ok else EXIT_FAILED)


def cmd_simulate(args, doc):
    from .rmt import EnsembleSpec, bridge_word, estimate_boolean_bridge, estimate_inf_moments

    orders = [int(x) for x in args.orders.split(",")]
    if args.poly == "bridge":
        spectrum = args.spectrum or "zero_two"
        spec = EnsembleSpec(args.n, (1,), spectrum, args.samples, args.seed)
        words = [bridge_word((-1,), (1,)), bridge_word((-1, 1), (1, 1)), bridge_word((-1, -1), (1, 1))]
        results = estimate_boolean_bridge(spec, words, workers=args.workers)
    else:
        spectrum = args.spectrum or ("pm1" if args.poly == "comm" else "zero_two")
        spec = EnsembleSpec(args.n, (1,), spectrum, args.samples, args.seed)
        results = estimate_inf_moments(spec, args.poly, orders, workers=args.workers)
    status = EXIT_OK
    if args.budget_c is not None:
        if not all(r.within(args.budget_c / args.n) for r in results):
            status = EXIT_FAILED
    return {"ensemble": spec.to_json(), "results": [r.to_json() for r in results]}, status


def cmd_spectral_shift(args, doc):
    if "matrix" in doc:
        N = _order(doc, 6)
        taus, moments = finite_matrix_spectral_shift([_scalars(row) for row in doc["matrix"]], N)
        series = spectral_shift_series(moments, N)
        ok = series == taus
        return {
            "tau": _render(series),
            "matrix_tau": _render(taus),
            "moments": _render(moments),
            "agree": ok,
        }, (EXIT_OK if ok else EXIT_FAILED)
    if "moments" not in doc:
        raise InputError("spectral-shift needs moments or matrix")
    m = _scalars(doc["moments"])
    return {"tau": _render(spectral_shift_series(m, _order(doc, len(m))))}, EXIT_OK


COMMANDS = {
    "partitions": cmd_partitions,
    "transform": cmd_transform,
    "series": cmd_series,
    "inf-law": cmd_inf_law,
    "boolean-poly": cmd_boolean_poly,
    "rdiagonal": cmd_rdiagonal,
    "bridge": cmd_bridge,
    "simulate": cmd_simulate,
    "spectral-shift": cmd_spectral_shift,
}
NEEDS_DOCUMENT = {"transform", "series", "inf-law", "boolean-poly", "rdiagonal", "spectral-shift"}


# -- argument parsing ----------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="infprob", description="Exact infinitesimal free/Boolean probability computations.")
    parser.add_argument("--version", action="version", version=f"infprob {__version__} (build {build_id()})")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, help_text, document=True):
        p = sub.add_parser(name, help=help_text)
        if document:
            src = p.add_mutually_exclusive_group()
            src.add_argument("--input", help="JSON input file, or - for stdin")
            src.add_argument("--json", help="inline JSON input")
        p.add_argument("--output", help="write the result here instead of stdout")
        p.add_argument("--format", choices=["json", "csv"], default="json")
        p.add_argument(
            "--cap",
            action="append",
            default=[],
            metavar="CLASS=N",
            help="override a lattice size cap for this run (nc, all, interval, cyclic)",
        )
        return p

    p = add("partitions", "enumerate a partition lattice", document=False)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--class", dest="cls", default="nc", help="nc, all, interval or cyclic")
    add("transform", "moment/cumulant transforms")
    add("series", "generating series")
    p = add("inf-law", "infinitesimal law of the anticommutator or commutator")
    p.add_argument("which", choices=["anticommutator", "commutator"])
    add("boolean-poly", "law of a x1 x2 + b x2 x1 for Boolean independent x1, x2")
    add("rdiagonal", "infinitesimal R-diagonal cumulants")
    p = add("bridge", "Boolean/monotone independence sweeps for the idempotent state")
    p.add_argument("--max-len", type=int, default=4, help="total number of algebra elements per word")
    p.add_argument("--kind", choices=["jJj", "Ja"], default="jJj")
    p.add_argument("--check", choices=["boolean", "monotone"], default="boolean")
    p.add_argument("--seed", type=int, default=0)
    p = add("simulate", "Monte Carlo estimates with Haar-conjugated matrices", document=False)
    p.add_argument("--n", type=int, default=128)
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--poly", choices=["comm", "anticomm", "bridge"], default="comm")
    p.add_argument("--orders", default="1,2,3,4")
    p.add_argument("--spectrum", choices=["pm1", "zero_two"])
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--budget-c", type=float, help="exit 1 unless |mean - theory| <= 3 stderr + c/N")
    add("spectral-shift", "Markov-Krein sequence from moments or a rational matrix")
    return parser


_CAP_FIELDS = {"nc": "noncrossing", "all": "all", "interval": "interval", "cyclic": "cyclic"}


def _apply_caps(overrides) -> None:
    for item in overrides:
        name, _, value = item.partition("=")
        if name not in _CAP_FIELDS or not value.isdigit():
            raise InputError(f"--cap expects CLASS=N with CLASS in {sorted(_CAP_FIELDS)}, got {item!r}")
        setattr(caps, _CAP_FIELDS[name], int(value))


def _config(args, doc) -> dict:
    cfg = {k: v for k, v in vars(args).items() if k not in ("json",)}
    if doc is not None:
        cfg["document"] = doc
    return cfg


def _csv(command: str, result: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if command == "simulate":
        writer.writerow(["poly", "n", "empirical_mean", "stderr", "theory", "zscore"])
        for r in result["results"]:
            writer.writerow(
                [
                    r["poly"],
                    r["n"],
                    repr(r["empirical_mean"]),
                    repr(r["stderr"]),
                    repr(r["theory"]),
                    repr(r["zscore"]),
                ]
            )
        return buf.getvalue()
    for key in ("result", "inf_moments", "cumulants", "moments", "tau"):
        if key in result:
            writer.writerow(["n", key])
            for n, v in enumerate(result[key], start=1 if key != "tau" else 0):
                writer.writerow([n, v if isinstance(v, str) else json.dumps(v)])
            return buf.getvalue()
    raise InputError(f"{command} output is structured; use --format json")


def run(argv=None, stdout=None, stderr=None) -> int:
    saved = {name: getattr(caps, name) for name in _CAP_FIELDS.values()}
    try:
        return _run(argv, stdout or sys.stdout, stderr or sys.stderr)
    finally:
        for name, value in saved.items():
            setattr(caps, name, value)


def _run(argv, stdout, stderr) -> int:
    try:
        args = build_parser().parse_args(argv)
        _apply_caps(args.cap)
        doc = _require_document(args, args.command) if args.command in NEEDS_DOCUMENT else None
        if args.command == "bridge":
            doc = _read_document(args)
            if doc is not None:
                validate("bridge", doc)
        result, status = COMMANDS[args.command](args, doc)
        envelope = {"command": args.command, "config": _config(args, doc), "version": __version__, **result}
        text = _csv(args.command, result) if args.format == "csv" else json.dumps(envelope, indent=2) + "\n"
    except InputError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_INPUT
    except SizeLimitError as exc:
        print(f"size limit: {exc}", file=stderr)
        return EXIT_CAP
    except (ValueError, KeyError, ArithmeticError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_INPUT
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return status


def main() -> None:
    sys.exit(run())
