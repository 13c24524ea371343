"""Command-line interface.

Subcommands:
  synth   stability experiment on synthetic environments
  real    RMSE-vs-k curves on a grouped CSV (telemonitoring style)
  citest  one conditional-independence test on three CSV columns

Options can come from a flat ``key = value`` config file (lists
comma-separated) via --config; a command-line flag with the same name
always wins. Exit codes: 0 success, 1 configuration error, 2 runtime
numerical failure.
"""

import argparse
import sys

from .citest import METHOD_FISHER_Z, METHOD_RCIT, RcitParams, fisher_z_test, rcit_test
from .errors import ConfigurationError, MissingColumn, NumericalError, StableSepError
from .experiments import (
    DEFAULT_R_TEST,
    MODE_REAL,
    MODE_SYNTHETIC,
    ExperimentConfig,
    run_real,
    run_synthetic,
)
from .io import load_csv
from .separation import AUTO_SEED

_METHODS = (METHOD_FISHER_Z, METHOD_RCIT)


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage problems as ConfigurationError."""

    def error(self, message):
        raise ConfigurationError(message)


def _parse_config_file(path) -> dict:
    values = {}
    try:
        with open(path, encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, start=1):
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise ConfigurationError(f"{path}:{lineno}: expected key = value")
                key, _, val = line.partition("=")
                values[key.strip().replace("-", "_")] = val.strip()
    except OSError as exc:
        raise ConfigurationError(f"cannot read config file: {exc}") from None
    return values


def _to_int(val, key):
    try:
        return int(str(val))
    except ValueError:
        raise ConfigurationError(f"{key} must be an integer, got {val!r}") from None


def _to_float(val, key):
    try:
        return float(str(val))
    except ValueError:
        raise ConfigurationError(f"{key} must be a number, got {val!r}") from None


def _to_float_list(val, key):
    if isinstance(val, (list, tuple)):
        return tuple(float(v) for v in val)
    parts = [p for p in str(val).split(",") if p.strip()]
    if not parts:
        raise ConfigurationError(f"{key} must be a comma-separated list of numbers")
    return tuple(_to_float(p, key) for p in parts)


def _to_seed_variable(val):
    if str(val).lower() == AUTO_SEED:
        return AUTO_SEED
    return _to_int(val, "seed_variable")


def _to_method(val):
    if val not in _METHODS:
        raise ConfigurationError(f"method must be one of {', '.join(_METHODS)}")
    return val


def _parse_groups(text) -> dict:
    """Parse 'G1=a,b,c;G2=d,e' into a label -> key-list dict."""
    groups = {}
    for chunk in str(text).split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        if "=" not in chunk:
            raise ConfigurationError(f"group chunk {chunk!r} is not label=key,key,...")
        label, _, members = chunk.partition("=")
        label = label.strip()
        if label in groups:
            raise ConfigurationError(f"group {label!r} defined twice")
        keys = [m.strip() for m in members.split(",") if m.strip()]
        if not keys:
            raise ConfigurationError(f"group {label!r} has no keys")
        groups[label] = keys
    if not groups:
        raise ConfigurationError("no groups parsed")
    return groups


def _merged(args, key, default=None):
    """Flag value if given, else config-file value, else default."""
    flag = getattr(args, key, None)
    if flag is not None:
        return flag
    return args._config.get(key, default)


def build_parser() -> _Parser:
    parser = _Parser(prog="stablesep", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", help="flat key = value config file")
        p.add_argument("--method", help="CI backend: fisher_z or rcit")
        p.add_argument("--rng-seed", dest="rng_seed", help="root RNG seed (default 0)")
        p.add_argument("--out", help="output directory (default .)")

    p_synth = sub.add_parser("synth", help="synthetic stability experiment")
    add_common(p_synth)
    p_synth.add_argument("--n", help="target rows per environment (default 2000)")
    p_synth.add_argument("--p", help="number of predictors (default 10)")
    p_synth.add_argument("--r-train", dest="r_train", help="training bias rate (default 2.0)")
    p_synth.add_argument("--r-test", dest="r_test", help="comma list of test bias rates")
    p_synth.add_argument("--seeds", help="number of RNG repetitions (default 10)")
    p_synth.add_argument("--k", help="variables to keep (default round(0.3*p))")
    p_synth.add_argument(
        "--seed-variable",
        dest="seed_variable",
        help="index of a known causal variable, or 'auto' (default)",
    )

    p_real = sub.add_parser("real", help="grouped-CSV experiment")
    add_common(p_real)
    p_real.add_argument("--input", help="input CSV path")
    p_real.add_argument("--response", help="response column name")
    p_real.add_argument("--group", help="grouping key column name")
    p_real.add_argument(
        "--groups",
        help="assignment 'G1=key,key;G2=key,...' (default: documented split)",
    )
    p_real.add_argument(
        "--seed-variable",
        dest="seed_variable",
        help="index of a known causal variable, or 'auto' (default)",
    )

    p_ci = sub.add_parser("citest", help="single CI test on three CSV columns")
    add_common(p_ci)
    p_ci.add_argument("--input", help="input CSV path")
    p_ci.add_argument("--x", help="first column name")
    p_ci.add_argument("--y", help="second column name")
    p_ci.add_argument("--z", help="conditioning column name")

    return parser


def _require(args, key, flag):
    val = _merged(args, key)
    if val is None:
        raise ConfigurationError(f"missing required option {flag}")
    return val


def _cmd_synth(args) -> int:
    r_train_raw = _merged(args, "r_train", 2.0)
    r_train = None if str(r_train_raw).lower() == "none" else _to_float(r_train_raw, "r_train")
    k_raw = _merged(args, "k")
    cfg = ExperimentConfig(
        mode=MODE_SYNTHETIC,
        n=_to_int(_merged(args, "n", 2000), "n"),
        p=_to_int(_merged(args, "p", 10), "p"),
        r_train=r_train,
        r_test=_to_float_list(_merged(args, "r_test", DEFAULT_R_TEST), "r_test"),
        seed_count=_to_int(_merged(args, "seeds", 10), "seeds"),
        k=None if k_raw is None else _to_int(k_raw, "k"),
        ci_method=_to_method(_merged(args, "method", METHOD_FISHER_Z)),
        seed_variable=_to_seed_variable(_merged(args, "seed_variable", AUTO_SEED)),
        output_dir=str(_merged(args, "out", ".")),
        rng_seed=_to_int(_merged(args, "rng_seed", 0), "rng_seed"),
    )
    result = run_synthetic(cfg)
    for name in sorted(result):
        if name in ("files", "reports"):
            continue
        agg = result[name]
        print(
            f"{name}: precision={agg['precision_mean']:.3f} "
            f"unstable_rank_median={agg['unstable_rank_median']:.1f} "
            f"avg_err={agg['average_error_mean']:.3f} "
            f"stab_err={agg['stability_error_mean']:.3f}"
        )
    print(f"wrote {', '.join(result['files'])} to {cfg.output_dir}")
    return 0


def _cmd_real(args) -> int:
    groups_raw = _merged(args, "groups")
    cfg = ExperimentConfig(
        mode=MODE_REAL,
        input_path=str(_require(args, "input", "--input")),
        response_column=str(_require(args, "response", "--response")),
        group_column=str(_require(args, "group", "--group")),
        group_assignment=None if groups_raw is None else _parse_groups(groups_raw),
        ci_method=_to_method(_merged(args, "method", METHOD_FISHER_Z)),
        seed_variable=_to_seed_variable(_merged(args, "seed_variable", AUTO_SEED)),
        output_dir=str(_merged(args, "out", ".")),
        rng_seed=_to_int(_merged(args, "rng_seed", 0), "rng_seed"),
    )
    result = run_real(cfg)
    sizes = " ".join(f"{g}={n}" for g, n in sorted(result["groups"].items()))
    print(f"groups: {sizes} (trained on {result['train_group']})")
    print(f"wrote {', '.join(result['files'])} to {cfg.output_dir}")
    return 0


def _read_column(path, name):
    d_or_pair = load_csv(path, response_column=name)
    return d_or_pair.response


def _cmd_citest(args) -> int:
    path = str(_require(args, "input", "--input"))
    cols = {key: str(_require(args, key, f"--{key}")) for key in ("x", "y", "z")}
    vectors = {}
    for key, colname in cols.items():
        try:
            vectors[key] = _read_column(path, colname)
        except MissingColumn:
            raise ConfigurationError(f"column {colname!r} not found in {path}") from None
    method = _to_method(_merged(args, "method", METHOD_FISHER_Z))
    if method == METHOD_RCIT:
        res = rcit_test(
            vectors["x"],
            vectors["y"],
            vectors["z"],
            RcitParams(rng_seed=_to_int(_merged(args, "rng_seed", 0), "rng_seed")),
        )
    else:
        res = fisher_z_test(vectors["x"], vectors["y"], vectors["z"])
    print(f"statistic={res.statistic!r} p_value={res.p_value!r} method={res.method}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        config_path = getattr(args, "config", None)
        args._config = _parse_config_file(config_path) if config_path else {}
        unknown = set(args._config) - set(vars(args))
        if unknown:
            raise ConfigurationError(f"unknown config keys: {', '.join(sorted(unknown))}")
        if args.command == "synth":
            return _cmd_synth(args)
        if args.command == "real":
            return _cmd_real(args)
        return _cmd_citest(args)
    except ConfigurationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
