"""Command-line front-end.

Subcommands map one-to-one onto library operations: info, klf, sklf,
range, frf, dual-frf, nrcf, pinv, iofac, eval, verify. Reports go to
standard output, human-readable by default or as a single JSON
document with --json. Factor realizations are written as system files
when --out names a directory.

Exit codes: 0 success, 2 input or parse error, 3 structural or
factorization error (boundary eigenvalues, non-stabilizable
realizations, evaluation at a pole), 4 verification failure.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from .dss import (
    DescriptorSystem,
    evaluate,
    frequency_grid,
    mcmillan_degree,
    normal_rank,
    poles,
    random_nonpole_points,
    zeros,
)
from .exceptions import (
    BoundaryError,
    EvaluationError,
    FactorizationError,
    InputError,
    ParseError,
    StructureError,
    VerificationError,
)
from .fact import (
    dual_full_rank_factorize,
    full_rank_factorize,
    inner_outer,
    nrcf,
    pseudo_inverse,
)
from .io import (
    SCHEMA_VERSION,
    eigenvalues_to_json,
    format_eigenvalues,
    parse_system_file,
    report_to_json,
    write_system_file,
)
from .klf import kronecker_like_form, special_klf, stability_region
from .numkernel import ToleranceConfig
from .rangebasis import RangeOptions, cofactor, range_basis, region_for_policy

DEFAULT_FREQ_GRID = 32
DEFAULT_RESIDUAL_GRID = 16
VERIFY_THRESHOLD = 1e-7


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="rmfact",
        description="Range bases and full-rank factorizations of rational matrices",
    )
    sub = top.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("system", help="system file (JSON)")
    common.add_argument("--tol", type=float, default=0.0, help="relative rank tolerance (0 = auto)")
    common.add_argument("--boundary-offset", type=float, default=0.0, help="half-width of the region boundary exclusion strip")
    common.add_argument("--grid", type=int, default=None, help="number of grid points for residual and inner checks")
    common.add_argument("--seed", type=int, default=0, help="seed for the random evaluation points")
    common.add_argument("--json", action="store_true", help="emit the report as JSON on stdout")

    shaping = argparse.ArgumentParser(add_help=False)
    shaping.add_argument("--zeros", choices=["none", "bad", "all"], default="bad", help="which zeros of G the range basis keeps")
    shaping.add_argument("--region", choices=["cont-stab", "disc-stab"], default=None, help="override the bad region used for the zero split")
    shaping.add_argument("--stabilize", action="store_true", help="move the basis poles into the good region")
    shaping.add_argument("--inner", action="store_true", help="make the basis inner (implies --stabilize)")

    outdir = argparse.ArgumentParser(add_help=False)
    outdir.add_argument("--out", default=None, help="directory for factor realization files")

    sub.add_parser("info", parents=[common], help="poles, zeros, normal rank, McMillan degree")
    sub.add_parser("klf", parents=[common], help="Kronecker structure of the system matrix pencil")
    sub.add_parser("sklf", parents=[common, shaping], help="block splitting form of the system matrix pencil")
    sub.add_parser("range", parents=[common, shaping, outdir], help="range basis R")
    sub.add_parser("frf", parents=[common, shaping, outdir], help="full-rank factorization G = R X")
    sub.add_parser("dual-frf", parents=[common, shaping, outdir], help="dual full-rank factorization G = X R")
    sub.add_parser("nrcf", parents=[common, outdir], help="normalized right coprime factorization G = N M^{-1}")
    sub.add_parser("pinv", parents=[common, outdir], help="Moore-Penrose pseudo-inverse")
    sub.add_parser("iofac", parents=[common, outdir], help="inner - quasi-outer factorization")

    ev = sub.add_parser("eval", parents=[common], help="evaluate G at a point")
    ev.add_argument("--point", required=True, help="evaluation point, e.g. 0, 2.5, 1+2j")

    ver = sub.add_parser("verify", help="grid check of a factorization G = L R")
    ver.add_argument("system", help="system file of G")
    ver.add_argument("left", help="system file of the left factor")
    ver.add_argument("right", help="system file of the right factor")
    ver.add_argument("--grid", type=int, default=None, help="number of grid points")
    ver.add_argument("--seed", type=int, default=0, help="seed for the random evaluation points")
    ver.add_argument("--inner", action="store_true", help="also require the left factor to be inner")
    ver.add_argument("--threshold", type=float, default=VERIFY_THRESHOLD, help="acceptance threshold for all residuals")
    ver.add_argument("--json", action="store_true", help="emit the report as JSON on stdout")
    return top


def _tolerance(args) -> ToleranceConfig:
    return ToleranceConfig(
        rank_rtol=getattr(args, "tol", 0.0),
        boundary_offset=getattr(args, "boundary_offset", 0.0),
    )


def _region(args, ts):
    name = getattr(args, "region", None)
    if name == "cont-stab":
        return stability_region("continuous")
    if name == "disc-stab":
        return stability_region("discrete")
    return region_for_policy(args.zeros, ts)


def _options(args) -> RangeOptions:
    return RangeOptions(
        zeros_policy=args.zeros,
        stabilize=args.stabilize or args.inner,
        inner=args.inner,
    )


def _input_block(path: str, sys_: DescriptorSystem) -> dict:
    return {
        "path": path,
        "ts": sys_.ts,
        "order": sys_.n,
        "rows": sys_.p,
        "cols": sys_.m,
        "descriptor_E": sys_.E is not None,
    }


def _factor_block(sys_: DescriptorSystem, tol) -> dict:
    return {
        "rows": sys_.p,
        "cols": sys_.m,
        "order": sys_.n,
        "normal_rank": int(normal_rank(sys_, tol)),
        "mcmillan_degree": int(mcmillan_degree(sys_, tol)),
        "poles": eigenvalues_to_json(poles(sys_, tol)),
        "zeros": eigenvalues_to_json(zeros(sys_, tol)),
    }


def _product_residual(sys_, left, right, count, seed) -> float:
    rng = np.random.default_rng(seed)
    pts = random_nonpole_points([sys_, left, right], count, rng)
    worst = 0.0
    for z in pts:
        Gz = evaluate(sys_, z)
        Pz = evaluate(left, z) @ evaluate(right, z)
        worst = max(worst, np.linalg.norm(Gz - Pz, "fro") / (1.0 + np.linalg.norm(Gz, "fro")))
    return float(worst)


def _inner_residual(sys_, count) -> float:
    worst = 0.0
    for z in frequency_grid(sys_.ts, count):
        Rz = evaluate(sys_, z)
        worst = max(worst, np.linalg.norm(Rz.conj().T @ Rz - np.eye(sys_.m), "fro"))
    return float(worst)


def _write_factors(args, report, factors):
    if getattr(args, "out", None) is None:
        return
    os.makedirs(args.out, exist_ok=True)
    paths = {}
    for name, sys_ in factors.items():
        paths[name] = write_system_file(sys_, os.path.join(args.out, f"{name}.json"))
    report["outputs"] = paths


def _emit(args, report, human_lines):
    if args.json:
        print(report_to_json(report))
    else:
        for line in human_lines:
            print(line)
        for name, path in report.get("outputs", {}).items():
            print(f"wrote {name}: {path}")


def _factor_lines(label, block):
    return [
        f"{label}: {block['rows']}x{block['cols']}, order {block['order']}, "
        f"normal rank {block['normal_rank']}, McMillan degree {block['mcmillan_degree']}",
        f"  poles {_fmt_ev(block['poles'])}",
        f"  zeros {_fmt_ev(block['zeros'])}",
    ]


def _fmt_ev(js: dict) -> str:
    parts = []
    for re_, im_ in js["finite"]:
        parts.append(f"{re_:.6g}" if abs(im_) < 1e-12 else f"{re_:.6g}{im_:+.6g}j")
    for entry in js["infinite"]:
        k = entry["multiplicity"]
        parts.append("inf" if k == 1 else f"inf(x{k})")
    return "[" + ", ".join(parts) + "]"


def _base_report(args, command) -> dict:
    return {"schema_version": SCHEMA_VERSION, "command": command}


def _cmd_info(args) -> int:
    sys_ = parse_system_file(args.system)
    tol = _tolerance(args)
    report = _base_report(args, "info")
    report["input"] = _input_block(args.system, sys_)
    block = _factor_block(sys_, tol)
    report["results"] = block
    lines = [
        f"system: {sys_.p}x{sys_.m} {sys_.ts}, order {sys_.n}",
        f"normal rank: {block['normal_rank']}",
        f"McMillan degree: {block['mcmillan_degree']}",
        f"poles: {_fmt_ev(block['poles'])}",
        f"zeros: {_fmt_ev(block['zeros'])}",
    ]
    _emit(args, report, lines)
    return 0


def _cmd_klf(args) -> int:
    sys_ = parse_system_file(args.system)
    tol = _tolerance(args)
    n = sys_.n
    M = np.block([[sys_.A, sys_.B], [sys_.C, sys_.D]])
    N = np.zeros_like(M)
    N[:n, :n] = sys_.e_matrix
    res = kronecker_like_form(M, N, tol)
    results = {
        "pencil_rows": M.shape[0],
        "pencil_cols": M.shape[1],
        "right_minimal_indices": [int(k) for k in res.right_minimal_indices],
        "finite_eigenvalues": [
            [float(np.real(a / b)), float(np.imag(a / b))] for a, b in res.finite_eigenvalues
        ],
        "infinite_divisor_degrees": [int(k) for k in res.infinite_divisor_degrees],
        "left_minimal_indices": [int(k) for k in res.left_minimal_indices],
    }
    report = _base_report(args, "klf")
    report["input"] = _input_block(args.system, sys_)
    report["results"] = results
    fev = ", ".join(
        f"{re_:.6g}" if abs(im_) < 1e-12 else f"{re_:.6g}{im_:+.6g}j"
        for re_, im_ in results["finite_eigenvalues"]
    )
    lines = [
        f"system matrix pencil: {M.shape[0]}x{M.shape[1]}",
        f"right minimal indices: {results['right_minimal_indices']}",
        f"finite eigenvalues: [{fev}]",
        f"infinite elementary divisor degrees: {results['infinite_divisor_degrees']}",
        f"left minimal indices: {results['left_minimal_indices']}",
    ]
    _emit(args, report, lines)
    return 0


def _cmd_sklf(args) -> int:
    sys_ = parse_system_file(args.system)
    tol = _tolerance(args)
    region = _region(args, sys_.ts)
    sk = special_klf(sys_, region, tol)
    results = {
        "n_rg": sk.n_rg,
        "n_bl": sk.n_bl,
        "m_n": sk.m_n,
        "r": sk.r,
        "c1": sk.c1,
        "leading_block_rows": sk.n_rg,
        "trailing_block_order": sk.n_bl,
    }
    report = _base_report(args, "sklf")
    report["input"] = _input_block(args.system, sys_)
    report["results"] = results
    lines = [
        f"splitting form row blocks [n_rg, n_bl, m_n, p] = [{sk.n_rg}, {sk.n_bl}, {sk.m_n}, {sk.p}]",
        f"column blocks [c1, n_bl, r, m_n] = [{sk.c1}, {sk.n_bl}, {sk.r}, {sk.m_n}]",
        f"normal rank r = {sk.r}",
    ]
    _emit(args, report, lines)
    return 0


def _run_range_like(args, command):
    sys_ = parse_system_file(args.system)
    tol = _tolerance(args)
    region = _region(args, sys_.ts)
    opts = _options(args)
    grid = args.grid or DEFAULT_RESIDUAL_GRID
    report = _base_report(args, command)
    report["input"] = _input_block(args.system, sys_)
    return sys_, tol, region, opts, grid, report


def _cmd_range(args) -> int:
    sys_, tol, region, opts, grid, report = _run_range_like(args, "range")
    rr = range_basis(sys_, region, opts, tol)
    block = _factor_block(rr.R, tol)
    results = {"R": block, "inner": bool(opts.inner)}
    if opts.inner:
        results["inner_residual"] = _inner_residual(rr.R, args.grid or DEFAULT_FREQ_GRID)
    report["results"] = results
    _write_factors(args, report, {"R": rr.R})
    lines = _factor_lines("R", block)
    if opts.inner:
        lines.append(f"max |R~R - I| on grid: {results['inner_residual']:.3e}")
    _emit(args, report, lines)
    return 0


def _fact_command(args, command, runner, names) -> int:
    sys_, tol, region, opts, grid, report = _run_range_like(args, command)
    fr = runner(sys_, region, opts, tol)
    left_block = _factor_block(fr.left, tol)
    right_block = _factor_block(fr.right, tol)
    residual = _product_residual(sys_, fr.left, fr.right, grid, args.seed)
    report["results"] = {
        names[0]: left_block,
        names[1]: right_block,
        "max_relative_residual": residual,
        "grid_points": grid,
    }
    _write_factors(args, report, {names[0]: fr.left, names[1]: fr.right})
    lines = _factor_lines(names[0], left_block) + _factor_lines(names[1], right_block)
    lines.append(f"max relative residual on {grid} points: {residual:.3e}")
    _emit(args, report, lines)
    return 0


def _cmd_frf(args) -> int:
    return _fact_command(args, "frf", full_rank_factorize, ("R", "X"))


def _cmd_dual_frf(args) -> int:
    return _fact_command(args, "dual-frf", dual_full_rank_factorize, ("X", "R"))


def _cmd_nrcf(args) -> int:
    sys_ = parse_system_file(args.system)
    tol = _tolerance(args)
    grid = args.grid or DEFAULT_FREQ_GRID
    N, M = nrcf(sys_, tol)
    worst = 0.0
    for z in frequency_grid(sys_.ts, grid):
        Nz = evaluate(N, z)
        Mz = evaluate(M, z)
        worst = max(
            worst,
            np.linalg.norm(Nz.conj().T @ Nz + Mz.conj().T @ Mz - np.eye(sys_.m), "fro"),
        )
    report = _base_report(args, "nrcf")
    report["input"] = _input_block(args.system, sys_)
    nb, mb = _factor_block(N, tol), _factor_block(M, tol)
    report["results"] = {
        "N": nb,
        "M": mb,
        "normalization_residual": float(worst),
        "grid_points": grid,
    }
    _write_factors(args, report, {"N": N, "M": M})
    lines = _factor_lines("N", nb) + _factor_lines("M", mb)
    lines.append(f"max |N~N + M~M - I| on grid: {worst:.3e}")
    _emit(args, report, lines)
    return 0


def _cmd_pinv(args) -> int:
    sys_ = parse_system_file(args.system)
    tol = _tolerance(args)
    grid = args.grid or DEFAULT_RESIDUAL_GRID
    gp = pseudo_inverse(sys_, tol)
    rng = np.random.default_rng(args.seed)
    pts = random_nonpole_points([sys_, gp], grid, rng)
    w1 = w2 = 0.0
    for z in pts:
        Gz = evaluate(sys_, z)
        Pz = evaluate(gp, z)
        scale = 1.0 + np.linalg.norm(Gz, "fro")
        w1 = max(w1, np.linalg.norm(Gz @ Pz @ Gz - Gz, "fro") / scale)
        w2 = max(w2, np.linalg.norm(Pz @ Gz @ Pz - Pz, "fro") / scale)
    w3 = w4 = 0.0
    for z in frequency_grid(sys_.ts, DEFAULT_FREQ_GRID):
        try:
            Gz = evaluate(sys_, z)
            Pz = evaluate(gp, z)
        except EvaluationError:
            continue
        GP = Gz @ Pz
        PG = Pz @ Gz
        scale = 1.0 + np.linalg.norm(Gz, "fro")
        w3 = max(w3, np.linalg.norm(GP.conj().T - GP, "fro") / scale)
        w4 = max(w4, np.linalg.norm(PG.conj().T - PG, "fro") / scale)
    report = _base_report(args, "pinv")
    report["input"] = _input_block(args.system, sys_)
    block = _factor_block(gp, tol)
    report["results"] = {
        "pinv": block,
        "identity_residuals": {
            "G_Gp_G": w1,
            "Gp_G_Gp": w2,
            "hermitian_G_Gp": w3,
            "hermitian_Gp_G": w4,
        },
        "grid_points": grid,
    }
    _write_factors(args, report, {"pinv": gp})
    lines = _factor_lines("pseudo-inverse", block)
    lines.append(f"residuals: G G# G {w1:.3e}, G# G G# {w2:.3e}, "
                 f"hermitian {w3:.3e} / {w4:.3e}")
    _emit(args, report, lines)
    return 0


def _cmd_iofac(args) -> int:
    sys_ = parse_system_file(args.system)
    tol = _tolerance(args)
    grid = args.grid or DEFAULT_FREQ_GRID
    Gi, Go = inner_outer(sys_, tol)
    inner_res = _inner_residual(Gi, grid)
    prod_res = _product_residual(sys_, Gi, Go, DEFAULT_RESIDUAL_GRID, args.seed)
    report = _base_report(args, "iofac")
    report["input"] = _input_block(args.system, sys_)
    gi_block, go_block = _factor_block(Gi, tol), _factor_block(Go, tol)
    report["results"] = {
        "inner": gi_block,
        "outer": go_block,
        "inner_residual": inner_res,
        "max_relative_residual": prod_res,
        "grid_points": grid,
    }
    _write_factors(args, report, {"inner": Gi, "outer": Go})
    lines = _factor_lines("inner factor", gi_block) + _factor_lines("quasi-outer factor", go_block)
    lines.append(f"max |Gi~Gi - I| on grid: {inner_res:.3e}")
    lines.append(f"max relative product residual: {prod_res:.3e}")
    _emit(args, report, lines)
    return 0


def _parse_point(text: str) -> complex:
    try:
        return complex(text.replace(" ", ""))
    except ValueError:
        raise InputError(f"cannot parse evaluation point {text!r}") from None


def _cmd_eval(args) -> int:
    sys_ = parse_system_file(args.system)
    z = _parse_point(args.point)
    val = evaluate(sys_, z)
    report = _base_report(args, "eval")
    report["input"] = _input_block(args.system, sys_)
    report["results"] = {
        "point": [z.real, z.imag],
        "value_real": [[float(x.real) for x in row] for row in val],
        "value_imag": [[float(x.imag) for x in row] for row in val],
    }
    lines = [f"G({args.point}) ="]
    for row in val:
        cells = []
        for x in row:
            cells.append(f"{x.real:.6g}" if abs(x.imag) < 1e-10 else f"{x.real:.6g}{x.imag:+.6g}j")
        lines.append("  [" + ", ".join(cells) + "]")
    _emit(args, report, lines)
    return 0


def _cmd_verify(args) -> int:
    sys_ = parse_system_file(args.system)
    left = parse_system_file(args.left)
    right = parse_system_file(args.right)
    if left.ts != sys_.ts or right.ts != sys_.ts:
        raise InputError("time domains of the factors do not match the system")
    if left.p != sys_.p or right.m != sys_.m or left.m != right.p:
        raise InputError(
            f"factor dimensions {left.p}x{left.m} * {right.p}x{right.m} "
            f"do not compose to {sys_.p}x{sys_.m}"
        )
    grid = args.grid or DEFAULT_RESIDUAL_GRID
    residual = _product_residual(sys_, left, right, grid, args.seed)
    checks = {"max_relative_residual": residual, "grid_points": grid, "threshold": args.threshold}
    ok = residual <= args.threshold
    if args.inner:
        inner_res = _inner_residual(left, DEFAULT_FREQ_GRID)
        checks["inner_residual"] = inner_res
        ok = ok and inner_res <= args.threshold
    report = _base_report(args, "verify")
    report["input"] = _input_block(args.system, sys_)
    report["results"] = checks
    report["results"]["passed"] = bool(ok)
    lines = [f"max relative residual on {grid} points: {residual:.3e} (threshold {args.threshold:g})"]
    if args.inner:
        lines.append(f"max |L~L - I| on grid: {checks['inner_residual']:.3e}")
    lines.append("verification PASSED" if ok else "verification FAILED")
    _emit(args, report, lines)
    if not ok:
        raise VerificationError(f"residual {residual:.3e} above threshold {args.threshold:g}")
    return 0


_DISPATCH = {
    "info": _cmd_info,
    "klf": _cmd_klf,
    "sklf": _cmd_sklf,
    "range": _cmd_range,
    "frf": _cmd_frf,
    "dual-frf": _cmd_dual_frf,
    "nrcf": _cmd_nrcf,
    "pinv": _cmd_pinv,
    "iofac": _cmd_iofac,
    "eval": _cmd_eval,
    "verify": _cmd_verify,
}


def run_command(argv) -> int:
    """Parse argv, dispatch, and map library errors to exit codes."""
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _DISPATCH[args.command](args)
    except VerificationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except (ParseError, InputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (StructureError, BoundaryError, FactorizationError, EvaluationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


def main() -> None:
    raise SystemExit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
