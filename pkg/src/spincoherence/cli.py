"""Command-line interface: ``spincoherence <verb> [options]``.

Exit codes: 0 success, 1 selftest failure, 2 invalid input, 3 I/O failure,
4 dimension above the cap (``SCS_DIM_CAP``, default 2000).
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import io as sio
from ._errors import DomainError, ValidationError
from .channel import purity_trajectory, scs_trajectory, _check_times
from .coherence import classical_sample, witness
from .metrology import sensing_report
from .quasiprob import SphereGrid, default_grid, grid_with_min_nodes, wigner_s
from .spin import SpinLabel, purity
from .sun import (
    IrrepLabel,
    casimir_residual,
    casimir_value,
    fundamental_equivalence_check,
    reference_state,
    scs_sun,
    scs_sun_commutator,
    sun_classical_sample,
)

EXIT_OK = 0
EXIT_SELFTEST = 1
EXIT_VALIDATION = 2
EXIT_IO = 3
EXIT_CAP = 4
DEFAULT_DIM_CAP = 2000


class DimensionCapError(Exception):
    pass


class _IOFailure(Exception):
    pass


def dim_cap() -> int:
    raw = os.environ.get("SCS_DIM_CAP")
    if raw is None:
        return DEFAULT_DIM_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise ValidationError(f"SCS_DIM_CAP must be an integer, got {raw!r}") from None
    if cap < 1:
        raise ValidationError(f"SCS_DIM_CAP must be positive, got {cap}")
    return cap


def _check_cap(dim: int) -> None:
    cap = dim_cap()
    if dim > cap:
        raise DimensionCapError(
            f"dimension {dim} exceeds the cap {cap}; raise it with SCS_DIM_CAP={dim} if intended")


# -- argument helpers --------------------------------------------------------

def parse_times(text: str) -> np.ndarray:
    """``"0,0.1,0.5"`` or ``"start:stop:count"`` (inclusive linspace)."""
    try:
        if ":" in text:
            a, b, n = text.split(":")
            times = np.linspace(float(a), float(b), int(n))
        else:
            times = np.array([float(x) for x in text.split(",") if x.strip()])
    except ValueError:
        raise ValidationError(f"cannot parse times {text!r}") from None
    return _check_times(times)


def parse_grid(text: str) -> SphereGrid:
    """``"NTxNP"`` for an explicit product grid or a bare node count."""
    try:
        if "x" in text:
            nt, np_ = (int(x) for x in text.lower().split("x"))
            if nt < 1 or np_ < 1:
                raise ValueError
            return SphereGrid.gauss_legendre(nt, np_)
        n = int(text)
        if n < 1:
            raise ValueError
        return grid_with_min_nodes(n)
    except ValueError:
        raise ValidationError(f"grid must be NTxNP or a positive node count, got {text!r}") from None


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        return x if math.isfinite(x) else ("inf" if x > 0 else "-inf" if x < 0 else "nan")
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def _render(data: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(_jsonable(data), indent=2, sort_keys=True) + "\n"
    clean = _jsonable(data)
    rows = [(k, json.dumps(v) if isinstance(v, (list, dict)) else v) for k, v in sorted(clean.items())]
    return sio.csv_text(["key", "value"], rows)


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    try:
        sio.write_text(out, text)
    except OSError as exc:
        raise _IOFailure(f"cannot write {out}: {exc.strerror or exc}") from None


def _load(path: str) -> sio.StateFile:
    try:
        sf = sio.read_state(path)
    except OSError as exc:
        raise _IOFailure(f"cannot read {path}: {exc.strerror or exc}") from None
    _check_cap(sf.label.dim)
    return sf


def _require(args, name: str, flag: str):
    value = getattr(args, name)
    if value is None:
        raise ValidationError(f"{flag} is required for '{args.command}'")
    return value


def _require_su2(sf: sio.StateFile, verb: str) -> SpinLabel:
    if sf.kind != "su2":
        raise ValidationError(f"'{verb}' needs an su2 state file, got kind {sf.kind!r}")
    return sf.label


# -- verbs ----------------------------------------------------------------------

def cmd_report(args) -> int:
    sf = _load(_require(args, "state", "--state"))
    if sf.kind == "su2":
        data = witness(sf.matrix, sf.label).as_dict()
        data["two_j"] = sf.two_j
    else:
        label = sf.label
        a2 = scs_sun(sf.matrix, label)
        data = {
            "n": label.n,
            "N": label.N,
            "scs": a2,
            "scs_commutator": scs_sun_commutator(sf.matrix, label),
            "purity": purity(sf.matrix),
            "witness_quantum": a2 > 1,
        }
    _emit(_render(data, args.format or "json"), args.out)
    return EXIT_OK


def cmd_evolve(args) -> int:
    sf = _load(_require(args, "state", "--state"))
    label = _require_su2(sf, "evolve")
    times = parse_times(args.times or "0")
    p = purity_trajectory(sf.matrix, label, times)
    a2 = scs_trajectory(sf.matrix, label, times)
    if (args.format or "csv") == "json":
        text = json.dumps({"t": times.tolist(), "purity": p.tolist(), "scs": a2.tolist()}, indent=2) + "\n"
    else:
        text = sio.csv_text(["t", "purity", "scs"], zip(times.tolist(), p.tolist(), a2.tolist()))
    _emit(text, args.out)
    return EXIT_OK


def cmd_wigner(args) -> int:
    sf = _load(_require(args, "state", "--state"))
    label = _require_su2(sf, "wigner")
    s = 0.0 if args.s is None else args.s
    grid = default_grid(label) if args.grid is None else parse_grid(args.grid)
    field = wigner_s(sf.matrix, label, s, grid)
    if args.format == "json":
        text = json.dumps({
            "theta": grid.theta.tolist(), "phi": grid.phi.tolist(),
            "weight": grid.weights.tolist(), "value": np.real(field.values).tolist(),
        }) + "\n"
    else:
        text = field.to_csv()
    _emit(text, args.out)
    print(f"normalization {field.normalization(label):.17g}", file=sys.stderr)
    if field.amplified:
        print("warning: order factors exceed the amplification limit", file=sys.stderr)
    return EXIT_OK


def _sun_label(args) -> IrrepLabel:
    label = IrrepLabel(_require(args, "n", "--n"), _require(args, "big_n", "--big-n"))
    _check_cap(label.dim)
    return label


def cmd_sun(args) -> int:
    tol = 1e-10
    if args.check == "channel-equivalence":
        n = _require(args, "n", "--n")
        _check_cap(IrrepLabel(n, 1).dim)
        rep = fundamental_equivalence_check(n, rng_seed=0 if args.seed is None else args.seed)
        data = {"check": "channel-equivalence", **rep.as_dict()}
    else:
        label = _sun_label(args)
        if args.check == "casimir":
            res = casimir_residual(label)
            data = {"check": "casimir", "n": label.n, "N": label.N, "dim": label.dim,
                    "casimir": casimir_value(label), "operator_residual": res, "passed": res <= tol}
        else:
            psi = reference_state(label)
            a2 = scs_sun(np.outer(psi, psi.conj()), label)
            mixed = scs_sun(np.eye(label.dim) / label.dim, label)
            data = {"check": "coherence", "n": label.n, "N": label.N, "dim": label.dim,
                    "scs_reference_state": a2, "scs_maximally_mixed": mixed,
                    "passed": abs(a2 - 1) <= tol and abs(mixed) <= tol}
    _emit(_render(data, args.format or "json"), args.out)
    return EXIT_OK


def cmd_classical_sample(args) -> int:
    seed = _require(args, "seed", "--seed")
    k = args.components
    if args.n is not None or args.big_n is not None:
        label = _sun_label(args)
        rho = sun_classical_sample(label, k, seed)
    else:
        label = SpinLabel(_require(args, "two_j", "--two-j"))
        _check_cap(label.dim)
        rho = classical_sample(label, k, seed)
    sf = sio.StateFile.from_matrix(rho, label, {"components": k, "seed": seed, "source": "classical-sample"})
    _emit(sio.dump_state(sf), args.out)
    return EXIT_OK


def cmd_metrology(args) -> int:
    sf = _load(_require(args, "state", "--state"))
    label = _require_su2(sf, "metrology")
    grid = None if args.grid is None else parse_grid(args.grid)
    data = sensing_report(sf.matrix, label, grid).as_dict()
    data["two_j"] = label.two_j
    _emit(_render(data, args.format or "json"), args.out)
    return EXIT_OK


def cmd_selftest(args) -> int:
    from .selftest import run_selftest

    results = run_selftest()
    for name, ok, detail in results:
        print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
    return EXIT_OK if all(ok for _, ok, _ in results) else EXIT_SELFTEST


# -- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--state", help="path to a JSON state file")
    common.add_argument("--two-j", type=int, dest="two_j", help="twice the spin J")
    common.add_argument("--n", type=int, help="number of SU(n) modes")
    common.add_argument("--big-n", type=int, dest="big_n", help="number of SU(n) excitations N")
    common.add_argument("--s", type=float, help="ordering parameter s (default 0)")
    common.add_argument("--times", help="comma list or start:stop:count")
    common.add_argument("--grid", help="NTxNP product grid or a minimum node count")
    common.add_argument("--seed", type=int, help="RNG seed (required for sampling)")
    common.add_argument("--out", help="output path (default stdout)")
    common.add_argument("--format", choices=("json", "csv"))

    parser = argparse.ArgumentParser(prog="spincoherence", description="Spin coherence scale toolkit")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("report", parents=[common], help="A^2, purity, witness and distance bounds")
    sub.add_parser("evolve", parents=[common], help="purity and A^2 along the depolarization channel")
    sub.add_parser("wigner", parents=[common], help="s-ordered quasiprobability on a sphere grid")
    p_sun = sub.add_parser("sun", parents=[common], help="SU(n) invariant checks")
    p_sun.add_argument("check", choices=("casimir", "coherence", "channel-equivalence"))
    p_cs = sub.add_parser("classical-sample", parents=[common], help="random mixture of coherent states")
    p_cs.add_argument("--components", type=int, default=3, help="number of mixed coherent states")
    sub.add_parser("metrology", parents=[common], help="rotation-sensing quantities of a pure state")
    sub.add_parser("selftest", parents=[common], help="quick internal consistency checks")
    return parser


COMMANDS = {
    "report": cmd_report,
    "evolve": cmd_evolve,
    "wigner": cmd_wigner,
    "sun": cmd_sun,
    "classical-sample": cmd_classical_sample,
    "metrology": cmd_metrology,
    "selftest": cmd_selftest,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except DimensionCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except _IOFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValidationError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
