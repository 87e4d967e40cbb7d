"""Command-line front end.

Three subcommands (`simulate`, `laws`, `experiment`) write tabular results
as a JSON array of flat objects or as CSV with a fixed column order, one
row per record; `--validate PATH` re-reads such a file and checks its
schema and internal invariants.  Floats are rendered with 17 significant
digits so values round-trip exactly.

Exit codes: 0 success, 1 failed experiment criterion or invalid file,
2 malformed flags (argparse), 3 parameter-domain violations, 4 unwritable
output path.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys

import numpy as np

from . import chain, experiments, laws, lis
from .errors import DegenerateChainError, ParameterError

SCHEMA_VERSION = "1"

DEFAULT_KS_THRESHOLD = 0.02
DEFAULT_MOMENT_LIMIT = 5.0
DEFAULT_CHECKPOINTS = (1, 2, 5, 10, 20, 50, 100)

_SCHEMAS: dict[str, dict[str, tuple[str, ...]]] = {
    "simulate": {
        "columns": ("schema_version", "kind", "a", "b", "n", "seed", "init",
                    "record", "pos", "value"),
        "ints": ("n", "seed", "pos", "value"),
        "floats": ("a", "b"),
    },
    "laws": {
        "columns": ("schema_version", "kind", "a", "b", "law", "y",
                    "density", "cdf"),
        "ints": (),
        "floats": ("a", "b", "y", "density", "cdf"),
    },
    "li-law": {
        "columns": ("schema_version", "kind", "a", "b", "n", "trials",
                    "seed", "trial", "li", "scaled"),
        "ints": ("n", "trials", "seed", "trial", "li"),
        "floats": ("a", "b", "scaled"),
    },
    "shape-joint": {
        "columns": ("schema_version", "kind", "a", "b", "n", "trials",
                    "seed", "trial", "r1", "r2", "r1_scaled", "r2_scaled"),
        "ints": ("n", "trials", "seed", "trial", "r1", "r2"),
        "floats": ("a", "b", "r1_scaled", "r2_scaled"),
    },
    "moment-check": {
        "columns": ("schema_version", "kind", "a", "b", "n", "trials",
                    "seed", "k", "mc_mean", "exact_mean", "mc_var",
                    "exact_var", "se_mean", "se_var"),
        "ints": ("n", "trials", "seed", "k"),
        "floats": ("a", "b", "mc_mean", "exact_mean", "mc_var", "exact_var",
                   "se_mean", "se_var"),
    },
    "drift-vanish": {
        "columns": ("schema_version", "kind", "a", "b", "trials", "seed",
                    "z", "path_n", "c_n", "exceed_prob", "bound", "se"),
        "ints": ("trials", "seed", "path_n"),
        "floats": ("a", "b", "z", "c_n", "exceed_prob", "bound", "se"),
    },
}


def _float_repr(v: float) -> str:
    if math.isfinite(v):
        return format(float(v), ".17g")
    if math.isnan(v):
        return "nan"
    return "inf" if v > 0 else "-inf"


def _json_cell(v) -> str:
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        v = float(v)
        # bare non-finite tokens are not JSON; quote them
        return _float_repr(v) if math.isfinite(v) else json.dumps(_float_repr(v))
    return json.dumps(str(v))


def _csv_cell(v) -> str:
    if isinstance(v, (float, np.floating)):
        return _float_repr(float(v))
    return str(v)


def _write_rows(fp, rows: list[dict], columns: tuple[str, ...], fmt: str) -> None:
    if fmt == "csv":
        writer = csv.writer(fp)
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_csv_cell(row[c]) for c in columns])
        return
    if not rows:
        fp.write("[]\n")
        return
    rendered = []
    for row in rows:
        body = ", ".join(f"{json.dumps(c)}: {_json_cell(row[c])}" for c in columns)
        rendered.append("  {" + body + "}")
    fp.write("[\n" + ",\n".join(rendered) + "\n]\n")


def _emit(rows: list[dict], columns: tuple[str, ...], out: str | None,
          fmt: str) -> int:
    if out is None:
        _write_rows(sys.stdout, rows, columns, fmt)
        return 0
    try:
        with open(out, "w", newline="") as fp:
            _write_rows(fp, rows, columns, fmt)
    except OSError as exc:
        print(f"error: cannot write {out}: {exc}", file=sys.stderr)
        return 4
    return 0


def _grid_spec(text: str) -> list[float]:
    try:
        lo_s, hi_s, step_s = text.split(":")
        lo, hi, step = float(lo_s), float(hi_s), float(step_s)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"grid must look like MIN:MAX:STEP, got {text!r}") from None
    if step <= 0.0 or hi < lo:
        raise argparse.ArgumentTypeError("grid needs step > 0 and max >= min")
    count = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return [lo + i * step for i in range(count)]


def _int_list(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected a comma-separated integer list, got {text!r}") from None


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="markovlis",
        description="Markov random words, longest weakly increasing "
                    "subsequences, and their limit laws.")
    parser.add_argument("--validate", metavar="PATH",
                        help="check a previously written output file and exit")
    sub = parser.add_subparsers(dest="command")

    sim = sub.add_parser("simulate",
                         help="sample one word and report letters, walk, shape")
    sim.add_argument("--a", type=float, required=True)
    sim.add_argument("--b", type=float, required=True)
    sim.add_argument("--n", type=int, required=True)
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--init", choices=("stationary", "point1", "point2"),
                     default="stationary")
    sim.add_argument("--walk", action="store_true",
                     help="also emit the imbalance walk S_0..S_n")
    sim.add_argument("--shape", action="store_true",
                     help="also emit the insertion shape row lengths")
    sim.add_argument("--out", help="output path (default: stdout)")
    sim.add_argument("--format", choices=("json", "csv"), default="json")

    law = sub.add_parser("laws",
                         help="print the limit regime; optionally tabulate "
                              "its density and CDF on a grid")
    law.add_argument("--a", type=float, required=True)
    law.add_argument("--b", type=float, required=True)
    law.add_argument("--grid", type=_grid_spec, metavar="MIN:MAX:STEP")
    law.add_argument("--out", help="output path (default: stdout)")
    law.add_argument("--format", choices=("json", "csv"), default="json")

    exp = sub.add_parser("experiment", help="run a Monte Carlo experiment")
    exp.add_argument("--kind", required=True, choices=experiments.EXPERIMENT_KINDS)
    exp.add_argument("--a", type=float, required=True)
    exp.add_argument("--b", type=float, required=True)
    exp.add_argument("--n", type=int, default=1000,
                     help="word length (ignored by drift-vanish)")
    exp.add_argument("--trials", type=int, default=1000)
    exp.add_argument("--seed", type=int, default=0)
    exp.add_argument("--k-list", type=_int_list, metavar="K1,K2,..",
                     help="moment-check checkpoints (default: small powers)")
    exp.add_argument("--n-list", type=_int_list, metavar="N1,N2,..",
                     default=[100, 1000, 10000],
                     help="drift-vanish word lengths")
    exp.add_argument("--z", type=float, default=0.25,
                     help="drift-vanish exceedance level")
    exp.add_argument("--threshold", type=float,
                     help="pass/fail cut (default: 0.02 for KS checks, "
                          "5 standard errors for moment-check)")
    exp.add_argument("--out", required=True, help="output path")
    exp.add_argument("--format", choices=("json", "csv"), default="json")
    return parser


def _init_from_flag(flag: str, params: chain.ChainParams) -> chain.InitialDistribution:
    if flag == "stationary":
        return chain.InitialDistribution.stationary(params)
    return chain.InitialDistribution.point(1 if flag == "point1" else 2)


def _cmd_simulate(args) -> int:
    params = chain.ChainParams(args.a, args.b)
    init = _init_from_flag(args.init, params)
    word = chain.sample_word(params, init, args.n, args.seed)
    base = {"schema_version": SCHEMA_VERSION, "kind": "simulate",
            "a": args.a, "b": args.b, "n": args.n, "seed": args.seed,
            "init": args.init}
    rows = [dict(base, record="letter", pos=i + 1, value=int(x))
            for i, x in enumerate(word.letters)]
    if args.walk:
        walk = lis.build_walk(word)
        rows.extend(dict(base, record="walk", pos=k, value=int(v))
                    for k, v in enumerate(walk.imbalance[:, 0]))
    if args.shape:
        shape = lis.rsk_shape(word)
        rows.extend(dict(base, record="shape", pos=r + 1, value=length)
                    for r, length in enumerate(shape.rows))
    return _emit(rows, _SCHEMAS["simulate"]["columns"], args.out, args.format)


def _cmd_laws(args) -> int:
    params = chain.ChainParams(args.a, args.b)
    law = laws.limiting_law(params)
    print(f"law={law.kind}")
    print(f"pi_max={_float_repr(law.pi_max)}")
    print("centering=n*pi_max scaling=sqrt(n)")
    if law.kind == laws.BROWNIAN_FUNCTIONAL:
        print(f"scale={_float_repr(law.scale)}")
    elif law.kind == laws.NORMAL:
        print(f"variance={_float_repr(law.variance)}")
    else:
        print("point mass at 0")
    if args.grid is None:
        return 0
    base = {"schema_version": SCHEMA_VERSION, "kind": "laws",
            "a": args.a, "b": args.b, "law": law.kind}
    rows = [dict(base, y=y, density=float(np.asarray(law.pdf(y))),
                 cdf=float(np.asarray(law.cdf(y))))
            for y in args.grid]
    return _emit(rows, _SCHEMAS["laws"]["columns"], args.out, args.format)


def _experiment_base(args) -> dict:
    return {"schema_version": SCHEMA_VERSION, "kind": args.kind,
            "a": args.a, "b": args.b, "trials": args.trials,
            "seed": args.seed}


def _run_li_law(args, params):
    cfg = experiments.ExperimentConfig(params, args.n, args.trials, args.seed,
                                       "li-law")
    law = laws.limiting_law(params)
    li = experiments.li_values(cfg)
    scaled = (li - law.centering(cfg.n)) / law.scaling(cfg.n)
    emp = experiments.EmpiricalDistribution.from_samples(scaled)
    ks = experiments.ks_statistic(emp, law.cdf)
    thr = args.threshold if args.threshold is not None else DEFAULT_KS_THRESHOLD
    passed = ks.statistic <= thr
    base = dict(_experiment_base(args), n=args.n)
    rows = [dict(base, trial=t, li=int(li[t]), scaled=float(scaled[t]))
            for t in range(cfg.trials)]
    line = (f"ks_statistic={_float_repr(ks.statistic)} "
            f"threshold={_float_repr(thr)} trials={cfg.trials} "
            f"-> {'PASS' if passed else 'FAIL'}")
    return rows, passed, line


def _run_shape_joint(args, params):
    cfg = experiments.ExperimentConfig(params, args.n, args.trials, args.seed,
                                       "shape-joint")
    law = laws.limiting_law(params)
    res = experiments.run_shape_experiment(cfg)
    first, _ = res.marginals()
    ks = experiments.ks_statistic(first, law.cdf)
    thr = args.threshold if args.threshold is not None else DEFAULT_KS_THRESHOLD
    sum_ok = bool(np.all(res.top_scaled + res.second_scaled == 0.0))
    passed = sum_ok and ks.statistic <= thr
    base = dict(_experiment_base(args), n=args.n)
    rows = [dict(base, trial=t, r1=int(res.top_lengths[t]),
                 r2=int(cfg.n - res.top_lengths[t]),
                 r1_scaled=float(res.top_scaled[t]),
                 r2_scaled=float(res.second_scaled[t]))
            for t in range(cfg.trials)]
    line = (f"sum_zero={'PASS' if sum_ok else 'FAIL'} "
            f"ks_statistic={_float_repr(ks.statistic)} "
            f"threshold={_float_repr(thr)} -> {'PASS' if passed else 'FAIL'}")
    return rows, passed, line


def _run_moment_check(args, params):
    cfg = experiments.ExperimentConfig(params, args.n, args.trials, args.seed,
                                       "moment-check")
    if args.k_list is not None:
        checkpoints = args.k_list
    else:
        checkpoints = [k for k in DEFAULT_CHECKPOINTS if k <= cfg.n] or [cfg.n]
    mrows = experiments.run_moment_check(cfg, checkpoints)
    worst = 0.0
    for r in mrows:
        for diff, se in ((r.mc_mean - r.exact_mean, r.se_mean),
                         (r.mc_var - r.exact_var, r.se_var)):
            if se > 0.0:
                worst = max(worst, abs(diff) / se)
            elif diff != 0.0:
                worst = math.inf
    limit = args.threshold if args.threshold is not None else DEFAULT_MOMENT_LIMIT
    passed = worst <= limit
    base = dict(_experiment_base(args), n=args.n)
    rows = [dict(base, k=r.k, mc_mean=r.mc_mean, exact_mean=r.exact_mean,
                 mc_var=r.mc_var, exact_var=r.exact_var, se_mean=r.se_mean,
                 se_var=r.se_var)
            for r in mrows]
    line = (f"max_abs_z={_float_repr(worst)} limit={_float_repr(limit)} "
            f"-> {'PASS' if passed else 'FAIL'}")
    return rows, passed, line


def _run_drift_vanish(args, params):
    drows = experiments.run_drift_experiment(params, args.n_list, args.z,
                                             args.trials, args.seed)
    monotone = all(later.exceed_prob <= earlier.exceed_prob
                   for earlier, later in zip(drows, drows[1:]))
    bounded = all(r.exceed_prob <= r.bound + 3.0 * r.se for r in drows)
    passed = monotone and bounded
    base = dict(_experiment_base(args), z=args.z)
    rows = [dict(base, path_n=r.n, c_n=r.drift, exceed_prob=r.exceed_prob,
                 bound=r.bound, se=r.se)
            for r in drows]
    probs = ",".join(_float_repr(r.exceed_prob) for r in drows)
    line = (f"monotone={'PASS' if monotone else 'FAIL'} "
            f"bound_check={'PASS' if bounded else 'FAIL'} "
            f"exceed_probs=[{probs}] -> {'PASS' if passed else 'FAIL'}")
    return rows, passed, line


_EXPERIMENT_RUNNERS = {
    "li-law": _run_li_law,
    "shape-joint": _run_shape_joint,
    "moment-check": _run_moment_check,
    "drift-vanish": _run_drift_vanish,
}


def _cmd_experiment(args) -> int:
    params = chain.ChainParams(args.a, args.b)
    rows, passed, line = _EXPERIMENT_RUNNERS[args.kind](args, params)
    code = _emit(rows, _SCHEMAS[args.kind]["columns"], args.out, args.format)
    if code:
        return code
    print(line)
    return 0 if passed else 1


def _load_rows(path: str) -> list[dict]:
    with open(path, newline="") as fp:
        text = fp.read()
    stripped = text.lstrip()
    if stripped.startswith("["):
        data = json.loads(text)
        if not isinstance(data, list) or not all(isinstance(r, dict) for r in data):
            raise ValueError("JSON payload must be an array of objects")
        return data
    return list(csv.DictReader(text.splitlines()))


class _Invalid(Exception):
    pass


def _as_float(row: dict, col: str) -> float:
    try:
        return float(row[col])
    except (TypeError, ValueError):
        raise _Invalid(f"column {col!r} is not numeric: {row[col]!r}") from None


def _as_int(row: dict, col: str) -> int:
    v = row[col]
    try:
        if isinstance(v, str):
            return int(v)
        if float(v) != int(v):
            raise ValueError
        return int(v)
    except (TypeError, ValueError):
        raise _Invalid(f"column {col!r} is not an integer: {v!r}") from None


def _check_rows(rows: list[dict]) -> str:
    if not rows:
        raise _Invalid("file contains no rows")
    kind = str(rows[0].get("kind"))
    if kind not in _SCHEMAS:
        raise _Invalid(f"unknown kind {kind!r}")
    schema = _SCHEMAS[kind]
    expected = set(schema["columns"])
    for idx, row in enumerate(rows):
        if set(row) != expected:
            raise _Invalid(f"row {idx} columns {sorted(row)} do not match "
                           f"schema for kind {kind!r}")
        if str(row["schema_version"]) != SCHEMA_VERSION:
            raise _Invalid(f"row {idx} has schema_version "
                           f"{row['schema_version']!r}, expected {SCHEMA_VERSION!r}")
        if str(row["kind"]) != kind:
            raise _Invalid(f"row {idx} mixes kinds {kind!r} and {row['kind']!r}")
        for col in schema["ints"]:
            _as_int(row, col)
        for col in schema["floats"]:
            _as_float(row, col)
    _CHECKERS[kind](rows)
    return kind


def _check_simulate(rows: list[dict]) -> None:
    for idx, row in enumerate(rows):
        record = str(row["record"])
        if record not in ("letter", "walk", "shape"):
            raise _Invalid(f"row {idx} has unknown record {record!r}")
        if record == "letter" and _as_int(row, "value") not in (1, 2):
            raise _Invalid(f"row {idx} letter out of alphabet")


def _check_laws(rows: list[dict]) -> None:
    for idx, row in enumerate(rows):
        cdf = _as_float(row, "cdf")
        if not 0.0 <= cdf <= 1.0:
            raise _Invalid(f"row {idx} cdf {cdf} outside [0, 1]")
        density = _as_float(row, "density")
        if not math.isnan(density) and density < 0.0:
            raise _Invalid(f"row {idx} density {density} is negative")


def _check_li_law(rows: list[dict]) -> None:
    for idx, row in enumerate(rows):
        params = chain.ChainParams(_as_float(row, "a"), _as_float(row, "b"))
        law = laws.limiting_law(params)
        n = _as_int(row, "n")
        want = (_as_int(row, "li") - law.centering(n)) / law.scaling(n)
        if abs(_as_float(row, "scaled") - want) > 1e-12:
            raise _Invalid(f"row {idx} scaled value is inconsistent with li")


def _check_shape_joint(rows: list[dict]) -> None:
    for idx, row in enumerate(rows):
        if _as_int(row, "r1") + _as_int(row, "r2") != _as_int(row, "n"):
            raise _Invalid(f"row {idx} shape rows do not fill the word")
        if _as_float(row, "r1_scaled") + _as_float(row, "r2_scaled") != 0.0:
            raise _Invalid(f"row {idx} scaled rows do not cancel")


def _check_moment(rows: list[dict]) -> None:
    for idx, row in enumerate(rows):
        if _as_int(row, "k") < 1:
            raise _Invalid(f"row {idx} checkpoint below 1")
        if _as_float(row, "se_mean") < 0.0 or _as_float(row, "se_var") < 0.0:
            raise _Invalid(f"row {idx} has negative standard error")


def _check_drift(rows: list[dict]) -> None:
    for idx, row in enumerate(rows):
        p = _as_float(row, "exceed_prob")
        if not 0.0 <= p <= 1.0:
            raise _Invalid(f"row {idx} exceedance probability outside [0, 1]")
        if _as_float(row, "bound") < 0.0:
            raise _Invalid(f"row {idx} has negative bound")
        if _as_int(row, "path_n") < 1:
            raise _Invalid(f"row {idx} word length below 1")


_CHECKERS = {
    "simulate": _check_simulate,
    "laws": _check_laws,
    "li-law": _check_li_law,
    "shape-joint": _check_shape_joint,
    "moment-check": _check_moment,
    "drift-vanish": _check_drift,
}


def _cmd_validate(path: str) -> int:
    try:
        rows = _load_rows(path)
        kind = _check_rows(rows)
    except OSError as exc:
        print(f"invalid: cannot read {path}: {exc}", file=sys.stderr)
        return 1
    except (ValueError, _Invalid) as exc:
        print(f"invalid: {exc}", file=sys.stderr)
        return 1
    print(f"valid: {path} ({len(rows)} rows, kind={kind})")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.validate is not None:
        return _cmd_validate(args.validate)
    if args.command is None:
        parser.error("one of the subcommands is required: "
                     "simulate, laws, experiment")
    try:
        if args.command == "simulate":
            return _cmd_simulate(args)
        if args.command == "laws":
            return _cmd_laws(args)
        return _cmd_experiment(args)
    except (ParameterError, DegenerateChainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
