"""Command-line front end: JSON-lines reports over the library.

Commands: classify, normalize, monodromy, rh, qh-check, apartment,
hodge-table, accept.  All reports are deterministic for a fixed seed and
omit timestamps, so identical invocations produce byte-identical output.
Exit status: 0 on success, 1 on a failed assertion or violated invariant,
2 on malformed input.
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction

import numpy as np

from . import smallmat as sm
from .apartment import (AffineWeylElement, ApartmentError, LaurentGroupElement,
                        act, equivalent_weighted_parahorics,
                        extended_parahoric_membership, stabilizer_check)
from .exactnum import QQi
from .jsonio import (JSONFormatError, decode_connection, decode_matrix,
                     decode_scalar, decode_weight, dumps, encode_connection,
                     encode_matrix, encode_scalar, encode_weight, load_file)
from .liecore import GroupSpec, LieError, ParabolicData, WeightVector, parse_rational
from .loopconn import MatSeries, MembershipError, TruncationOverflow
from .normalform import (NormalizationError, monodromy_of_normal, normalize,
                         ode_monodromy_oracle, prepare_weight_zero)
from .quasiham import QHError, check_qh1, check_qh2, check_qh3
from .rhmap import RHError, from_betti, hodge_rotation, to_betti
from .rootcomb import (InvalidRootDatum, NodeSubset, RootDatum,
                       levi_type_of_affine_subset, parabolic_class_count,
                       parahoric_class_count)
from .suites import _qh_directions, _qh_point, _qh_tangent, run_all

INPUT_ERRORS = (JSONFormatError, InvalidRootDatum, ValueError, KeyError, TypeError)
DOMAIN_ERRORS = (AssertionError, LieError, NormalizationError, RHError, QHError,
                 ApartmentError, MembershipError, TruncationOverflow)


def _parse_weight(text: str) -> WeightVector:
    return WeightVector(tuple(parse_rational(p.strip()) for p in text.split(",")))


def _parse_sigma(text: str):
    """Comma-separated entries, each 'p/q' (real) or 're:im' (exact complex)."""
    out = []
    for part in text.split(","):
        part = part.strip()
        if ":" in part:
            re_s, im_s = part.split(":")
            out.append(QQi(parse_rational(re_s), parse_rational(im_s)))
        else:
            out.append(QQi(parse_rational(part)))
    return tuple(out)


def _parse_group(text: str) -> GroupSpec:
    text = text.strip().upper()
    for fam in ("GL", "SL"):
        if text.startswith(fam):
            return GroupSpec(fam, int(text[len(fam):]))
    raise ValueError(f"unrecognized group {text!r}; expected e.g. GL3 or SL2")


def _emit(lines, out_path=None):
    text = "\n".join(dumps(obj) for obj in lines) + "\n"
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_classify(args):
    datum = RootDatum(args.type, args.rank)
    lines = [{"type": args.type, "rank": args.rank,
              "parabolic_classes": parabolic_class_count(datum),
              "parahoric_classes": parahoric_class_count(datum)}]
    if args.tables:
        nodes = range(args.rank + 1) if args.affine else range(1, args.rank + 1)
        universe = list(nodes)
        subsets = [[universe[i] for i in range(len(universe)) if bits >> i & 1]
                   for bits in range(1 << len(universe))]
        if args.affine:
            subsets = subsets[:-1]  # the full affine node set is not parahoric
        for subset in sorted(subsets, key=lambda s: (len(s), s)):
            lt = levi_type_of_affine_subset(
                NodeSubset(datum, frozenset(subset), affine=args.affine))
            lines.append({"nodes": subset,
                          "levi_blocks": [list(b) for b in lt.blocks],
                          "torus_rank": lt.torus_rank})
    _emit(lines, args.out)
    return 0


def _load_connection_args(args):
    conn = decode_connection(load_file(args.infile))
    theta = _parse_weight(args.theta)
    tau = _parse_weight(args.tau)
    sigma = _parse_sigma(args.sigma) if args.sigma else None
    return conn, theta, tau, sigma


def cmd_normalize(args):
    conn, theta, tau, sigma = _load_connection_args(args)
    res = normalize(conn, theta, tau, sigma)
    lines = [{"levels": [str(r) for r in res.levels_processed],
              "eliminated": [list(p) for p in res.eliminated],
              "retained": [list(p) for p in res.retained],
              "gauge_factors": len(res.gauge.factors)},
             {"normalized": encode_connection(res.normalized)}]
    _emit(lines, args.out)
    return 0


def cmd_monodromy(args):
    conn, theta, tau, sigma = _load_connection_args(args)
    res = normalize(conn, theta, tau, sigma)
    m, r, nmat = monodromy_of_normal(res)
    lines = [{"monodromy": encode_matrix(m), "exponent": encode_matrix(r)}]
    if args.oracle:
        m_num = ode_monodromy_oracle(res.normalized)
        err = max(abs(complex(m[j][k]) - m_num[j][k])
                  for j in range(conn.n) for k in range(conn.n))
        lines.append({"oracle_max_error": err, "tolerance": args.tol})
        assert err <= args.tol, \
            f"ODE oracle disagrees with closed-form monodromy by {err}"
    _emit(lines, args.out)
    return 0


def cmd_rh(args):
    data = load_file(args.infile)
    lines = []
    if args.direction in ("to-betti", "roundtrip"):
        conn = decode_connection(data["connection"])
        theta = decode_weight(data["theta"])
        orbit_rep = decode_matrix(data["orbit_rep"])
        datum = to_betti(conn, theta, orbit_rep)
        lines.append({"m": encode_matrix(datum.m),
                      "phi": encode_weight(datum.phi),
                      "tau": encode_weight(datum.tau),
                      "sigma": [encode_scalar(s) for s in datum.sigma]})
        if args.direction == "roundtrip":
            a2, theta2 = from_betti(datum.m, datum.phi, datum.tau, datum.sigma,
                                    spec=conn.spec)
            datum2 = to_betti(a2, theta2, orbit_rep)
            err = max(abs(complex(datum.m[j][k]) - complex(datum2.m[j][k]))
                      for j in range(conn.n) for k in range(conn.n))
            lines.append({"roundtrip_max_error": err, "tolerance": args.tol})
            assert err <= args.tol, f"round trip moved the monodromy by {err}"
    else:
        m = decode_matrix(data["m"])
        phi = decode_weight(data["phi"])
        tau = decode_weight(data["tau"])
        if data.get("sigma"):
            sigma = tuple(decode_scalar(v) for v in data["sigma"])
        else:
            sigma = (QQi(0),) * len(phi)
        a, theta = from_betti(m, phi, tau, sigma)
        lines.append({"connection": encode_connection(a),
                      "theta": encode_weight(theta)})
    _emit(lines, args.out)
    return 0


def cmd_qh_check(args):
    spec = _parse_group(args.group)
    if args.parabolic:
        blocks = [int(b) for b in args.parabolic.split(",")]
        if sum(blocks) != spec.n:
            raise ValueError(f"block sizes {blocks} do not sum to n={spec.n}")
        entries = []
        for t, b in enumerate(blocks):
            entries.extend([Fraction(len(blocks) - 1 - t)] * b)
        pweight = WeightVector(tuple(entries))
    else:
        pweight = WeightVector(tuple(Fraction(spec.n - 1 - j)
                                     for j in range(spec.n)))
    rng = np.random.default_rng(args.seed)
    max2 = 0.0
    for _ in range(args.points):
        pt = _qh_point(rng, spec, pweight)
        samples = [_qh_tangent(rng, pt) for _ in range(4)]
        x_g, x_l = _qh_directions(rng, pt)
        max2 = max(max2, check_qh2(pt, x_g, x_l, samples))
    kernel_dims = []
    for _ in range(min(args.points, 10)):
        pt = _qh_point(rng, spec, pweight)
        kd, du, verdict = check_qh3(pt)
        kernel_dims.append({"kernel": kd, "dim_u": du, "subspace_match": verdict})
    max1 = 0.0
    for _ in range(min(args.points, 5)):
        pt = _qh_point(rng, spec, pweight)
        tans = tuple(_qh_tangent(rng, pt) for _ in range(3))
        max1 = max(max1, check_qh1(pt, tans, step=1e-4))
    _emit([{"group": args.group, "parabolic_weight": encode_weight(pweight),
            "qh2_max_residual": max2, "qh3": kernel_dims,
            "qh1_max_residual": max1, "seed": args.seed}], args.out)
    assert max2 < 1e-8, f"QH2 residual {max2} exceeds 1e-8"
    assert all(e["kernel"] == e["dim_u"] and e["subspace_match"]
               for e in kernel_dims), "QH3 kernel does not match dim U"
    assert max1 < 1e-4, f"QH1 residual {max1} exceeds 1e-4"
    return 0


def _group_element_from_obj(obj) -> LaurentGroupElement:
    coeffs = {int(d): decode_matrix(m) for d, m in obj["coeffs"].items()}
    n = len(next(iter(coeffs.values())))
    return LaurentGroupElement(MatSeries(n, coeffs, K=None))


def cmd_apartment(args):
    theta = _parse_weight(args.theta)
    data = load_file(args.infile)
    if args.action in ("act", "stab"):
        w_hat = AffineWeylElement(tuple(int(x) for x in data["w"]),
                                  tuple(int(x) for x in data["lambda"]))
        if args.action == "act":
            _emit([{"theta_out": encode_weight(act(w_hat, theta))}], args.out)
        else:
            verdict = stabilizer_check(w_hat, theta)
            _emit([{"stabilizes": verdict}], args.out)
    elif args.action == "member":
        g = _group_element_from_obj(data)
        cert = extended_parahoric_membership(g, theta)
        _emit([{"member": cert.ok,
                "ord_violations": [[j, k, str(v)] for (j, k, v) in
                                   cert.ord_violations],
                "limit_singular": cert.limit_singular}], args.out)
    elif args.action == "equiv":
        g = _group_element_from_obj(data)
        g2 = _group_element_from_obj({"coeffs": data["coeffs2"]})
        theta2 = decode_weight(data["theta2"])
        verdict, witness = equivalent_weighted_parahorics(g, theta, g2, theta2)
        line = {"equivalent": verdict}
        if verdict:
            line["witness"] = {"w": list(witness.w), "lambda": list(witness.lam)}
        elif verdict is None:
            line["reason"] = witness
        _emit([line], args.out)
    else:
        raise ValueError(f"unknown apartment action {args.action!r}")
    return 0


def cmd_hodge_table(args):
    theta = _parse_weight(args.theta)
    tau = _parse_weight(args.tau)
    sigma = _parse_sigma(args.sigma) if args.sigma else (QQi(0),) * len(theta)
    table = hodge_rotation(tau, sigma, theta)
    lines = []
    for realization in ("dolbeault", "derham", "betti"):
        row = table[realization]
        lines.append({"realization": realization,
                      "weights": encode_weight(row["weights"]),
                      "eigenvalues": [encode_scalar(v)
                                      for v in row["eigenvalues"]]})
    _emit(lines, args.out)
    return 0


def _strip_timings(obj):
    if isinstance(obj, dict):
        return {k: _strip_timings(v) for k, v in obj.items() if k != "seconds"}
    if isinstance(obj, list):
        return [_strip_timings(v) for v in obj]
    return obj


def cmd_accept(args):
    reports = run_all(seed=args.seed)
    # wall-clock timings are not part of the canonical report body
    _emit([_strip_timings(r) for r in reports], args.out)
    return 0 if all(r["passed"] for r in reports) else 1


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="logahoric", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, infile=False, theta=False, tau=False, sigma=False, tol=None):
        p.add_argument("--out", default=None, help="write report to this path")
        if infile:
            p.add_argument("--in", dest="infile", required=True,
                           help="input JSON file")
        if theta:
            p.add_argument("--theta", required=True,
                           help="comma-separated rationals, e.g. 1/2,0")
        if tau:
            p.add_argument("--tau", required=True)
        if sigma:
            p.add_argument("--sigma", default=None,
                           help="entries 'p/q' or 're:im', comma-separated")
        if tol is not None:
            p.add_argument("--tol", type=float, default=tol)

    p = sub.add_parser("classify", help="root-datum class counts and tables")
    p.add_argument("--type", required=True, choices=list("ABCDEFG"))
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--affine", action="store_true")
    p.add_argument("--tables", action="store_true",
                   help="also list subset -> Levi tables")
    common(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("normalize", help="level-by-level normal form")
    common(p, infile=True, theta=True, tau=True, sigma=True)
    p.set_defaults(func=cmd_normalize)

    p = sub.add_parser("monodromy", help="closed-form monodromy of the normal form")
    common(p, infile=True, theta=True, tau=True, sigma=True, tol=1e-6)
    p.add_argument("--oracle", action="store_true",
                   help="cross-check against numerical ODE integration")
    p.set_defaults(func=cmd_monodromy)

    p = sub.add_parser("rh", help="Betti correspondence in either direction")
    p.add_argument("direction", choices=["to-betti", "from-betti", "roundtrip"])
    common(p, infile=True, tol=1e-8)
    p.set_defaults(func=cmd_rh)

    p = sub.add_parser("qh-check", help="quasi-Hamiltonian axiom residuals")
    p.add_argument("--group", required=True, help="e.g. GL3 or SL2")
    p.add_argument("--parabolic", default=None,
                   help="block sizes, e.g. 2,1 (default: Borel)")
    p.add_argument("--points", type=int, default=100)
    p.add_argument("--seed", type=int, default=42)
    common(p)
    p.set_defaults(func=cmd_qh_check)

    p = sub.add_parser("apartment", help="affine Weyl action and membership")
    p.add_argument("action", choices=["act", "member", "equiv", "stab"])
    common(p, infile=True, theta=True)
    p.set_defaults(func=cmd_apartment)

    p = sub.add_parser("hodge-table", help="three-realization parameter table")
    common(p, theta=True, tau=True, sigma=True)
    p.set_defaults(func=cmd_hodge_table)

    p = sub.add_parser("accept", help="run the acceptance suites")
    p.add_argument("--suite", default="primary", choices=["primary"])
    p.add_argument("--seed", type=int, default=42)
    common(p)
    p.set_defaults(func=cmd_accept)
    return ap


def main(argv=None) -> int:
    # LOGAHORIC_THREADS caps worker parallelism; the runner is sequential, so
    # any non-negative value is honored trivially, but reject garbage early.
    threads = os.environ.get("LOGAHORIC_THREADS")
    if threads is not None and (not threads.isdigit() or int(threads) < 1):
        print(f"invalid LOGAHORIC_THREADS={threads!r}", file=sys.stderr)
        return 2
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except DOMAIN_ERRORS as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except INPUT_ERRORS as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
