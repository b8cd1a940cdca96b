"""Command-line front end: positivity checks, invariant reports, Werner
sweeps, tangle evaluation, and affine-map scanning.

Exit codes: 0 for PSD (or a pure report command), 2 for NotPSD, 1 for any
error.  ``BLOCHVEC_TOL`` overrides the default verdict tolerance; every
command accepts ``--json`` for machine-readable output.
"""

from __future__ import annotations

import argparse
import itertools
import json
import os
import sys

import numpy as np

from . import __version__
from .coherence import CoherenceState, from_coherence, to_coherence
from .composite import (
    CompositeLayout,
    partial_transpose,
    werner_ppt_boundary,
    werner_state,
    werner_symfns,
)
from .documents import (
    DocumentError,
    load_json,
    parse_amplitudes_document,
    parse_map_document,
    parse_matrix_document,
)
from .entanglement import (
    ckw_inequality_check,
    concurrence_squared,
    three_tangle,
    tripartite_marginals,
)
from .errors import BlochvecError
from .invariants import (
    casimirs,
    classify_degeneracy_3,
    classify_degeneracy_4,
    trace_power_adjoint,
    trace_power_closed,
)
from .positivity import AffineMap, Verdict, apply_affine_map, check_positivity
from .su_basis import (
    build_gellmann_basis,
    build_product_basis,
    gellmann_tensors,
    product_tensors,
)

_EXIT_BY_VERDICT = {Verdict.PSD: 0, Verdict.BOUNDARY: 0, Verdict.NOT_PSD: 2}


def _default_tol(args) -> float | None:
    if args.tol is not None:
        return args.tol
    env = os.environ.get("BLOCHVEC_TOL")
    return float(env) if env else None


def _emit(payload: dict, as_json: bool, lines) -> None:
    if as_json:
        print(json.dumps(payload, indent=1))
    else:
        for line in lines:
            print(line)


def _basis_for(doc):
    """Coherence components of a composite document live in the product
    basis; the reconstructed operator depends on that choice."""
    if doc.dims is not None:
        return build_product_basis(doc.dims)
    return build_gellmann_basis(doc.dim)


def _tensors_for(doc):
    if doc.dims is not None:
        return product_tensors(doc.dims)
    return gellmann_tensors(doc.dim)


def _load_document(path: str):
    """Returns (doc, matrix or None, CoherenceState or None)."""
    doc = parse_matrix_document(load_json(path))
    if doc.matrix is not None:
        return doc, doc.matrix, None
    return doc, None, CoherenceState(dim=doc.dim, n=doc.coherence)


def _check_payload(mat: np.ndarray, tol, verify: bool) -> dict:
    seq = check_positivity(mat, tol=tol)
    payload = {
        "dim": seq.dim,
        "S": [float(s) for s in seq.S],
        "sign_changes": seq.sign_changes,
        "verdict": seq.verdict.value,
    }
    if verify:
        eigs = np.linalg.eigvalsh(mat)
        payload["min_eigenvalue"] = float(eigs.min())
        payload["positive_eigenvalues"] = int(np.sum(eigs > 1e-9))
        payload["eigenvalue_agreement"] = bool(
            (payload["min_eigenvalue"] >= -1e-9) == (seq.verdict is not Verdict.NOT_PSD)
            and payload["positive_eigenvalues"] == seq.sign_changes
        )
    return payload


def _print_check(payload: dict):
    lines = [
        "S_k: " + "  ".join(f"S{k + 1}={s:.12g}" for k, s in enumerate(payload["S"])),
        f"sign changes (positive eigenvalues): {payload['sign_changes']}",
        f"verdict: {payload['verdict']}",
    ]
    if "min_eigenvalue" in payload:
        lines.append(
            f"min eigenvalue: {payload['min_eigenvalue']:.12g}  "
            f"positive: {payload['positive_eigenvalues']}  "
            f"agreement: {payload['eigenvalue_agreement']}"
        )
    return lines


def cmd_check(args) -> int:
    doc, matrix, state = _load_document(args.input)
    if args.invert:
        if state is None:
            state = to_coherence(matrix, _basis_for(doc))
        state = apply_affine_map(AffineMap.inversion(doc.dim), state)
        matrix = None
    mat = matrix if matrix is not None else from_coherence(state, _basis_for(doc))
    payload = _check_payload(mat, _default_tol(args), args.verify)
    _emit(payload, args.json, _print_check(payload))
    return _EXIT_BY_VERDICT[Verdict(payload["verdict"])]


def cmd_invariants(args) -> int:
    doc, matrix, state = _load_document(args.input)
    dim = doc.dim
    if state is None:
        state = to_coherence(matrix, _basis_for(doc))
    tensors = _tensors_for(doc)
    m = args.max_order
    rows = {}
    max_disc = 0.0
    for k in range(2, m + 1):
        closed = trace_power_closed(state, k, tensors)
        adjoint = trace_power_adjoint(state, k, tensors)
        rows[k] = {"closed": closed, "adjoint": adjoint}
        max_disc = max(max_disc, abs(closed - adjoint))
    cas = casimirs(state, tensors, up_to=min(dim, m, 9) if dim >= 3 else 2)
    payload = {
        "dim": dim,
        "trace_powers": {str(k): v for k, v in rows.items()},
        "max_discrepancy": max_disc,
        "casimirs": {str(k): v for k, v in sorted(cas.values.items())},
    }
    if dim == 3:
        payload["degeneracy"] = classify_degeneracy_3(cas[2], cas[3]).value
    elif dim == 4:
        payload["degeneracy"] = classify_degeneracy_4(cas).value
    lines = [f"Tr(rho^{k}): closed={v['closed']:.12g}  adjoint={v['adjoint']:.12g}"
             for k, v in rows.items()]
    lines.append(f"max closed/adjoint discrepancy: {max_disc:.3e}")
    lines.append("casimirs: " + "  ".join(
        f"c{k}={v:.12g}" for k, v in sorted(cas.values.items())))
    if "degeneracy" in payload:
        lines.append(f"degeneracy: {payload['degeneracy']}")
    _emit(payload, args.json, lines)
    return 0


def _werner_row(x: float, tol) -> dict:
    layout = CompositeLayout(dims=(2, 2))
    seq_pt = check_positivity(partial_transpose(werner_state(x), layout), tol=tol)
    s3, s4 = werner_symfns(x, transposed=False)
    s3_pt, s4_pt = werner_symfns(x, transposed=True)
    return {"x": x, "S3": s3, "S4": s4, "S3_pt": s3_pt, "S4_pt": s4_pt,
            "ppt": seq_pt.verdict is not Verdict.NOT_PSD}


def cmd_werner(args) -> int:
    tol = _default_tol(args)
    if args.x is not None:
        rows = [_werner_row(args.x, tol)]
        boundary = None
    else:
        xs = np.linspace(0.0, 1.0, args.sweep)
        rows = [_werner_row(float(x), tol) for x in xs]
        boundary = werner_ppt_boundary()
    payload = {"rows": rows}
    if boundary is not None:
        payload["boundary"] = boundary
    lines = ["      x        S3          S4          S3_pt       S4_pt      PPT"]
    for r in rows:
        lines.append(
            f"  {r['x']:7.4f}  {r['S3']:+.4e}  {r['S4']:+.4e}  "
            f"{r['S3_pt']:+.4e}  {r['S4_pt']:+.4e}  {'yes' if r['ppt'] else 'no'}"
        )
    if boundary is not None:
        lines.append(f"PPT boundary (S4 of the transpose vanishes): x = {boundary:.8f}")
    _emit(payload, args.json, lines)
    return 0


def cmd_tangle(args) -> int:
    psi = parse_amplitudes_document(load_json(args.input))
    tau = three_tangle(psi)
    _, _, _, rho_ab, rho_ac = tripartite_marginals(psi)
    lhs, rhs, holds = ckw_inequality_check(psi)
    taus = []
    for perm in itertools.permutations(range(3)):
        taus.append(three_tangle(psi.reshape(2, 2, 2).transpose(perm).reshape(-1)))
    payload = {
        "tau": tau,
        "c2_ab": concurrence_squared(rho_ab),
        "c2_ac": concurrence_squared(rho_ac),
        "ckw_lhs": lhs,
        "ckw_rhs": rhs,
        "ckw_holds": holds,
        "permutation_spread": float(max(taus) - min(taus)),
    }
    lines = [
        f"tau: {tau:.12g}",
        f"C^2_AB: {payload['c2_ab']:.12g}   C^2_AC: {payload['c2_ac']:.12g}",
        f"CKW: lhs={lhs:.12g} <= rhs={rhs:.12g}: {holds}",
        f"permutation spread: {payload['permutation_spread']:.3e}",
    ]
    _emit(payload, args.json, lines)
    return 0


def cmd_map(args) -> int:
    dim_map, T, t = parse_map_document(load_json(args.map))
    doc, matrix, state = _load_document(args.input)
    if state is None:
        state = to_coherence(matrix, _basis_for(doc))
    image = apply_affine_map(AffineMap(dim=dim_map, T=T, t=t), state)
    mat = from_coherence(image, _basis_for(doc))
    payload = _check_payload(mat, _default_tol(args), args.verify)
    payload["image_coherence"] = [float(v) for v in image.n]
    _emit(payload, args.json, _print_check(payload))
    return _EXIT_BY_VERDICT[Verdict(payload["verdict"])]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="blochvec",
        description="Coherence-vector positivity and invariant tools.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--tol", type=float, default=None,
                       help="verdict tolerance (default: BLOCHVEC_TOL or adaptive)")
        p.add_argument("--json", action="store_true", help="machine-readable output")

    p = sub.add_parser("check", help="positivity gate for a matrix or coherence vector")
    p.add_argument("input", help="JSON document with a matrix or coherence payload")
    p.add_argument("--verify", action="store_true",
                   help="cross-check against the eigenvalue spectrum")
    p.add_argument("--invert", action="store_true",
                   help="flip the coherence vector before checking")
    common(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("invariants", help="trace powers, Casimir values, degeneracy")
    p.add_argument("input")
    p.add_argument("--max-order", type=int, default=6, dest="max_order",
                   help="highest trace power (2..9, default 6)")
    common(p)
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("werner", help="Werner-state characteristic coefficients")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--x", type=float, default=None, help="single mixing parameter")
    group.add_argument("--sweep", type=int, default=None,
                       help="number of evenly spaced x values in [0, 1]")
    common(p)
    p.set_defaults(func=cmd_werner)

    p = sub.add_parser("tangle", help="three-qubit residual tangle report")
    p.add_argument("input", help="JSON document with 8 amplitudes")
    common(p)
    p.set_defaults(func=cmd_tangle)

    p = sub.add_parser("map", help="apply an affine coherence map, then check")
    p.add_argument("map", help="JSON document with T and t")
    p.add_argument("input", help="JSON document with a matrix or coherence payload")
    p.add_argument("--verify", action="store_true",
                   help="cross-check against the eigenvalue spectrum")
    common(p)
    p.set_defaults(func=cmd_map)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (BlochvecError, DocumentError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
