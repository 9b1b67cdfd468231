"""Command-line front end: run one JSON job, emit a deterministic JSON report.

    ultradisc --job job.json [--out report.json] [--order N] [--seed S] [--quiet]

Exit status: 0 when every check in the job passes, 2 when any check fails or
cannot be decided, 1 on errors (bad job file, arithmetic errors), 64 on
command-line usage errors.
"""

from __future__ import annotations

import argparse
import json
import math
import random
import sys
from fractions import Fraction
from pathlib import Path

import jsonschema

from .errors import SchemaError, UltradiscError, UndeterminedTail
from .linearize import (
    AffineRuleTail,
    LogRadius,
    MapSpec,
    PolynomialTail,
    UnknownTail,
    lemma1_check,
    radius_gamma,
    radius_Rf,
    radius_rho,
    sandwich_holds,
    schroder_solve,
)
from .oracle import (
    MAX_ENUM_K,
    MAX_RECURSION_K,
    check_points,
    direct_bk_recursion,
    preimage_census,
    solver_matches,
    verify_partition_lemma,
)
from .series import series_from_json
from .ufield import FieldDesc, FieldKind, Scalar, format_scalar

SCHEMA_VERSION = "ultradisc/1"
EX_USAGE = 64
# digits an identity check must verify below the scale of its summands
MIN_VERIFIED_DIGITS = 8
DEFAULT_ORDER = 64

_LITERAL = {"type": "string", "minLength": 1}
_ORDER = {"type": "integer", "minimum": 2, "maximum": 512}

_PARAMS = {
    "radii": {"type": "object", "additionalProperties": False, "properties": {}},
    "solve": {
        "type": "object",
        "additionalProperties": False,
        "properties": {"N": _ORDER, "identities": {"enum": ["none", "semi", "both"]}},
    },
    "verify": {
        "type": "object",
        "additionalProperties": False,
        "properties": {
            "N": _ORDER,
            "points": {"type": "array", "items": _LITERAL},
            "mode": {"enum": ["semi", "full", "both"]},
            "random_points": {"type": "integer", "minimum": 0, "maximum": 1000},
        },
    },
    "oracle": {
        "type": "object",
        "additionalProperties": False,
        "properties": {
            "kmax": {"type": "integer", "minimum": 2, "maximum": MAX_RECURSION_K},
            "lemma_kmax": {"type": "integer", "minimum": 2, "maximum": MAX_ENUM_K},
        },
    },
    "census": {
        "type": "object",
        "additionalProperties": False,
        "required": ["series", "m"],
        "properties": {
            "series": {
                "type": "object",
                "additionalProperties": False,
                "required": ["coefficients"],
                "properties": {
                    "coefficients": {"type": "array", "items": _LITERAL, "minItems": 1},
                    "polynomial": {"type": "boolean"},
                },
            },
            "m": {"type": "integer", "minimum": 1},
            "min_valuation": {"type": "integer", "minimum": 0},
            "radius_exponent": {"type": "integer"},
        },
    },
}

JOB_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["field", "command"],
    "properties": {
        "field": {
            "type": "object",
            "additionalProperties": False,
            "required": ["kind"],
            "properties": {
                "kind": {"enum": [k.value for k in FieldKind]},
                "p": {"type": "integer", "minimum": 2},
                "precision": {"type": "integer", "minimum": 1},
            },
        },
        "map": {
            "type": "object",
            "additionalProperties": False,
            "required": ["lambda"],
            "properties": {
                "lambda": _LITERAL,
                "coefficients": {"type": "array", "items": _LITERAL},
                "tail": {
                    "oneOf": [
                        {"enum": ["polynomial", "unknown"]},
                        {
                            "type": "object",
                            "additionalProperties": False,
                            "required": ["affine"],
                            "properties": {
                                "affine": {
                                    "type": "object",
                                    "additionalProperties": False,
                                    "required": ["alpha", "beta", "from"],
                                    "properties": {
                                        "alpha": {"type": "integer"},
                                        "beta": {"type": "integer"},
                                        "from": {"type": "integer", "minimum": 2},
                                    },
                                }
                            },
                        },
                    ]
                },
            },
        },
        "command": {"enum": sorted(_PARAMS)},
        "params": {"type": "object"},
    },
}


# -- serialization ---------------------------------------------------------------


def rational_json(x) -> dict:
    x = Fraction(x)
    return {"num": str(x.numerator), "den": str(x.denominator)}


def extended_json(x):
    """Rationals as {num, den}; infinities as "+inf"/"-inf"."""
    if x is None:
        return None
    if x == math.inf:
        return "+inf"
    if x == -math.inf:
        return "-inf"
    return rational_json(x)


def valuation_json(v):
    if v == math.inf:
        return "+inf"
    return int(v)


def radius_json(r: LogRadius | None) -> dict:
    if r is None:
        return {"exponent": None, "status": "undetermined"}
    return {"exponent": extended_json(r.exponent), "status": r.status.value}


def scalar_json(x: Scalar) -> str:
    return format_scalar(x)


# -- job parsing ------------------------------------------------------------------


def _path(error: jsonschema.ValidationError) -> str:
    out = "$"
    for part in error.absolute_path:
        out += f"[{part}]" if isinstance(part, int) else f".{part}"
    return out


def validate_job(job) -> None:
    validator = jsonschema.Draft202012Validator(JOB_SCHEMA)
    error = jsonschema.exceptions.best_match(validator.iter_errors(job))
    if error is not None:
        raise SchemaError(error.message, _path(error))
    params = job.get("params", {})
    error = jsonschema.exceptions.best_match(
        jsonschema.Draft202012Validator(_PARAMS[job["command"]]).iter_errors(params)
    )
    if error is not None:
        raise SchemaError(error.message, "$.params" + _path(error)[1:])
    if job["command"] != "census" and "map" not in job:
        raise SchemaError(f"'map' is required for the {job['command']} command", "$")


def parse_field(obj) -> FieldDesc:
    try:
        return FieldDesc(FieldKind(obj["kind"]), obj.get("p"), obj.get("precision", 0))
    except ValueError as exc:
        raise SchemaError(str(exc), "$.field") from None


def parse_map(field: FieldDesc, obj) -> MapSpec:
    lam = field.parse(obj["lambda"])
    coeffs = tuple(field.parse(c) for c in obj.get("coefficients", []))
    tail = obj.get("tail", "polynomial")
    if tail == "polynomial":
        tail = PolynomialTail()
    elif tail == "unknown":
        tail = UnknownTail()
    else:
        a = tail["affine"]
        try:
            tail = AffineRuleTail(a["alpha"], a["beta"], a["from"])
        except ValueError as exc:
            raise SchemaError(str(exc), "$.map.tail.affine") from None
    try:
        return MapSpec(field, lam, coeffs, tail)
    except ValueError as exc:
        raise SchemaError(str(exc), "$.map") from None


def tail_json(tail) -> object:
    if isinstance(tail, PolynomialTail):
        return "polynomial"
    if isinstance(tail, UnknownTail):
        return "unknown"
    return {"affine": {"alpha": int(tail.alpha), "beta": int(tail.beta), "from": tail.start}}


def echo_job(job, field: FieldDesc, m: MapSpec | None) -> dict:
    """The job as understood: defaults filled in, literals in canonical form."""
    out = {
        "command": job["command"],
        "field": {"kind": field.kind.value, "precision": field.precision},
        "params": job.get("params", {}),
    }
    if field.p is not None:
        out["field"]["p"] = field.p
    if m is not None:
        out["map"] = {
            "lambda": scalar_json(m.lam),
            "coefficients": [scalar_json(c) for c in m.coeffs],
            "tail": tail_json(m.tail),
        }
    return out


# -- commands -----------------------------------------------------------------------


def _worst(statuses) -> str:
    statuses = list(statuses)
    for s in ("fail", "undecided"):
        if s in statuses:
            return s
    return "pass"


def run_radii(m: MapSpec, params, seed) -> tuple[dict, str]:
    rho, gamma = radius_rho(m), radius_gamma(m)
    try:
        rf = radius_Rf(m)
    except UndeterminedTail:
        rf = None
    delta = None
    sandwich = None
    if rf is not None:
        delta = rf if rf.exponent <= gamma.exponent else gamma
        sandwich = sandwich_holds(m.regime, m.vlam, rho.exponent, rf.exponent, delta.exponent)
    results = {
        "regime": m.regime.value,
        "v_lambda": m.vlam,
        "rho": radius_json(rho),
        "Rf": radius_json(rf),
        "gamma": radius_json(gamma),
        "delta": radius_json(delta),
        "sandwich_holds": sandwich,
    }
    status = "pass" if sandwich else ("undecided" if sandwich is None else "fail")
    return results, status


def _identity_json(check, grouping=None) -> dict:
    digits = check.min_digits
    ok = check.vanishes and digits is not None and digits >= MIN_VERIFIED_DIGITS
    out = {
        "vanishes": check.vanishes,
        "exact": check.exact,
        "min_verified_digits": None if digits is None else valuation_json(digits),
        "verdict": "pass" if ok else "fail",
    }
    if grouping is not None:
        out["grouping"] = grouping
    return out


def run_solve(m: MapSpec, params, seed) -> tuple[dict, str]:
    order = params.get("N", DEFAULT_ORDER)
    report = schroder_solve(m, order)
    verdicts = [
        {
            "k": v.k,
            "valuation": valuation_json(v.valuation),
            "bound": {"linear": extended_json(v.linear), "log2_coeff": rational_json(v.log2_coeff)},
            "verdict": v.verdict.value,
            "tight": v.tight,
        }
        for v in report.bound_check
    ]
    results = {
        "order": order,
        "regime": report.regime.value,
        "b": [scalar_json(c) for c in report.b],
        "radii": {name: radius_json(r) for name, r in sorted(report.radii.items())},
        "delta_g_consistent": report.delta_g_consistent,
        "bound_check": verdicts,
    }
    statuses = [v.verdict.value for v in report.bound_check]
    statuses.append("pass" if report.delta_g_consistent else "fail")
    which = params.get("identities", "both")
    if which != "none":
        ids = {"semi": _identity_json(report.semiconjugacy_check())}
        if which == "both":
            grouping = report.default_grouping()
            ids["full"] = _identity_json(report.conjugacy_check(grouping), grouping)
        results["identities"] = ids
        statuses += [c["verdict"] for c in ids.values()]
    return results, _worst(statuses)


def _random_points(field: FieldDesc, exponent, count: int, rng: random.Random) -> list[Scalar]:
    if exponent is None or exponent == -math.inf:
        return []
    base = 1 if exponent == math.inf else math.floor(-exponent) + 1
    out = []
    for _ in range(count):
        v = base + rng.randrange(4)
        if field.kind is FieldKind.PADIC:
            unit = rng.randrange(1, field.p**3)
            while unit % field.p == 0:
                unit = rng.randrange(1, field.p**3)
            out.append(field.from_int(unit) * field.uniformizer_power(v))
        else:
            top = field.p if field.p is not None else 10
            coeffs = [rng.randrange(1, top)] + [rng.randrange(top) for _ in range(2)]
            out.append(field.laurent(coeffs, v))
    return out


def run_verify(m: MapSpec, params, seed) -> tuple[dict, str]:
    order = params.get("N", DEFAULT_ORDER)
    report = schroder_solve(m, order)
    mode = params.get("mode", "both")
    modes = ["semi", "full"] if mode == "both" else [mode]
    given = [m.field.parse(s) for s in params.get("points", [])]
    rng = random.Random(seed)
    results, statuses = {}, []
    for md in modes:
        dom = report.semi_domain if md == "semi" else report.full_domain
        exponent = None if dom is None else dom.exponent
        pts = given + _random_points(m.field, exponent, params.get("random_points", 0), rng)
        rows = []
        for r in check_points(report, pts, md):
            verdict = "out_of_domain" if r.passed is None else ("pass" if r.passed else "fail")
            rows.append(
                {
                    "point": scalar_json(r.point),
                    "in_domain": r.in_domain,
                    "residual": None if r.residual is None else valuation_json(r.residual),
                    "floor": None if r.floor is None else valuation_json(r.floor),
                    "zero_to_precision": r.zero_to_precision,
                    "verdict": verdict,
                }
            )
            if verdict != "out_of_domain":
                statuses.append(verdict)
        results[md] = {"domain": radius_json(dom), "points": rows}
    return results, _worst(statuses)


def run_oracle(m: MapSpec, params, seed) -> tuple[dict, str]:
    kmax = params.get("kmax", MAX_RECURSION_K)
    lemma_kmax = params.get("lemma_kmax", MAX_ENUM_K)
    oracle_b = direct_bk_recursion(m, kmax)
    report = schroder_solve(m, max(kmax, 2))
    matches = solver_matches(oracle_b, report.b)
    lemma = [verify_partition_lemma(k) for k in range(2, lemma_kmax + 1)]
    lemma_ok = all(r.bound_holds for r in lemma) and all(
        r.power_witness for r in lemma if r.k >= 4 and r.k & (r.k - 1) == 0
    )
    results = {
        "kmax": kmax,
        "oracle_b": [scalar_json(c) for c in oracle_b],
        "solver_b": [scalar_json(c) for c in report.b[:kmax]],
        "solver_matches_oracle": matches,
        "partition_lemma": [
            {
                "k": r.k,
                "max_l_with_alpha1_zero": r.max_l_with_alpha1_zero,
                "bound_holds": r.bound_holds,
                "power_witness": r.power_witness,
            }
            for r in lemma
        ],
        "partition_lemma_holds": lemma_ok,
    }
    return results, "pass" if matches and lemma_ok else "fail"


def run_census(field: FieldDesc, params, seed) -> tuple[dict, str]:
    h = series_from_json(field, params["series"])
    m = params["m"]
    census = preimage_census(h, m, params.get("min_valuation", 0))
    inj = lemma1_check(h, params.get("radius_exponent", 0))
    d = inj.d
    unramified = [n for c, n in census.histogram.items() if c not in census.ramified]
    max_unramified = max(unramified, default=0)
    sums_ok = sum(census.histogram.values()) == census.domain_size
    within = d is not None and max_unramified <= d
    results = {
        "p": census.p,
        "m": m,
        "min_valuation": census.min_valuation,
        "domain_size": census.domain_size,
        "histogram": census.labelled_histogram(),
        "ramified": [census.label(c) for c in census.ramified],
        "max_count": census.max_count,
        "max_unramified_count": max_unramified,
        "lemma1": {
            "radius_exponent": rational_json(inj.radius_exponent),
            "injective_on_open_disc": inj.injective_on_open_disc,
            "d": d,
        },
        "counts_sum_to_domain": sums_ok,
        "max_count_le_d": d is not None and census.max_count <= d,
        "unramified_counts_le_d": within,
    }
    return results, "pass" if sums_ok and within else "fail"


_RUNNERS = {"radii": run_radii, "solve": run_solve, "verify": run_verify, "oracle": run_oracle}


def run_job(job: dict, seed: int = 0) -> tuple[dict, int]:
    """Validate and run a job; returns the report and the exit status."""
    report = {"schema": SCHEMA_VERSION}
    try:
        validate_job(job)
        field = parse_field(job["field"])
        m = parse_map(field, job["map"]) if "map" in job else None
        report["job"] = echo_job(job, field, m)
        params = job.get("params", {})
        if job["command"] == "census":
            results, status = run_census(field, params, seed)
        else:
            results, status = _RUNNERS[job["command"]](m, params, seed)
    except UltradiscError as exc:
        error = {"code": exc.code, "message": str(exc)}
        if isinstance(exc, SchemaError):
            error["path"] = exc.path
        report.update({"error": error, "status": "error"})
        return report, 1
    report.update({"results": results, "status": status})
    return report, 0 if status == "pass" else 2


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


# -- argv ------------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EX_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="ultradisc", description="Linearization discs of ultrametric power series.")
    ap.add_argument("--job", required=True, type=Path, help="JSON job file")
    ap.add_argument("--out", type=Path, help="write the report here instead of stdout")
    ap.add_argument("--order", type=int, help="truncation order N (overrides params.N)")
    ap.add_argument("--seed", type=int, default=0, help="seed for random_points")
    ap.add_argument("--quiet", action="store_true", help="no summary line on stderr")
    return ap


def cli_parse(argv=None) -> tuple[argparse.Namespace, dict]:
    """Parse flags and load the job, with ``--order`` merged into params."""
    args = build_parser().parse_args(argv)
    try:
        job = json.loads(args.job.read_text())
    except OSError as exc:
        raise SchemaError(f"cannot read job file: {exc.strerror}", "$") from None
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc.msg} (line {exc.lineno})", "$") from None
    if args.order is not None and isinstance(job, dict) and job.get("command") in ("solve", "verify"):
        job.setdefault("params", {})["N"] = args.order
    return args, job


def main(argv=None) -> int:
    try:
        args, job = cli_parse(argv)
    except SchemaError as exc:
        report = {"schema": SCHEMA_VERSION, "status": "error",
                  "error": {"code": exc.code, "message": str(exc), "path": exc.path}}
        sys.stdout.write(dumps(report))
        return 1
    report, code = run_job(job, args.seed)
    text = dumps(report)
    if args.out is not None:
        args.out.write_text(text)
    else:
        sys.stdout.write(text)
    if not args.quiet:
        command = job.get("command", "?") if isinstance(job, dict) else "?"
        print(f"ultradisc: {command}: {report['status']}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
