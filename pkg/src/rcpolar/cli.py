"""Command-line front end: ``rcpolar <command> ...``."""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import gf2
from .bitindex import BlockProfile
from .campaign import (DEFAULT_SEED, REQUIRED_SNR_FIELDS, CampaignConfig, load_campaign,
                       manifest, required_snr_rows, sweep_rows, write_csv)
from .codec import encode, generator_matrix
from .construct import CodeSpec, design, verify, weight_table_csv
from .order import SymmetricOrder
from .sim import CSV_FIELDS
from .symmetry import permute, sample_blta, to_symbol_permutation


def _profile(text: str) -> BlockProfile:
    try:
        return BlockProfile.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_construct(args) -> int:
    spec = design(args.n, args.s, args.beta, args.k)
    _emit(json.dumps(spec.to_json(), indent=2) + "\n", args.out)
    if args.weights_csv:
        with open(args.weights_csv, "w") as fh:
            fh.write(weight_table_csv(args.n, args.s, args.beta))
    return 0


def brute_force_closure(spec: CodeSpec, perms: int, words: int, seed: int) -> int:
    """Count random BLTA(s) permutations that keep ``words`` random codewords in the code."""
    rng = np.random.default_rng(seed)
    G = generator_matrix(spec.n)[list(spec.info_set)]
    closed = 0
    for _ in range(perms):
        p = to_symbol_permutation(sample_blta(spec.s, rng))
        cw = encode(spec, rng.integers(0, 2, size=(words, spec.k), dtype=np.uint8))
        closed += bool(gf2.in_row_space(G, permute(cw, p)).all()) if spec.k else 1
    return closed


def cmd_verify(args) -> int:
    with open(args.spec) as fh:
        spec = CodeSpec.loads(fh.read())
    s = args.s or spec.s
    report = verify(spec, s)
    if args.brute_force:
        if s is None:
            raise ValueError("--brute-force needs a block profile (in the spec or via --s)")
        spec.s = tuple(s)
        report["closure"] = {"closed": brute_force_closure(spec, args.perms, args.words, args.seed),
                             "tested": args.perms}
    ok = report["complies"] and report["is_stabilized"] and report["complies_symmetric"]
    if "closure" in report:
        ok = ok and report["closure"]["closed"] == report["closure"]["tested"]
    if args.json:
        print(json.dumps(report, indent=2))
    else:
        print(f"code {report['code_id']}  s={report['s']}  k={report['k']}")
        for key in ("complies", "is_stabilized", "complies_symmetric"):
            print(f"  {key:<20} {'PASS' if report[key] else 'FAIL'}")
        if "closure" in report:
            c = report["closure"]
            print(f"  {'closure':<20} {'PASS' if c['closed'] == c['tested'] else 'FAIL'}"
                  f"  {c['closed']}/{c['tested']} permutations closed")
        split = [r for r in report["orbits"] if r["status"] == "split"]
        for r in split:
            print(f"  split orbit {r['label']} {r['members']}: {r['in_info']} in I")
    return 0 if ok else 1


def cmd_orbits(args) -> int:
    order = SymmetricOrder(args.n, tuple(args.s))
    print("orbit\tsize\tlabel\tmembers")
    for k, o in enumerate(order.orbits):
        print(f"{k}\t{len(o)}\t{o.label()}\t{','.join(map(str, o.indices))}")
    return 0


def cmd_hasse(args) -> int:
    _emit(SymmetricOrder(args.n, tuple(args.s)).to_dot(), args.out)
    return 0


def cmd_weights(args) -> int:
    _emit(weight_table_csv(args.n, args.s, args.beta), args.out)
    return 0


def _campaign(args) -> CampaignConfig:
    cfg = load_campaign(args.campaign)
    if args.seed is not None:
        cfg.seed = args.seed
    return cfg


def _run(args, cfg: CampaignConfig, rows, fields) -> int:
    if args.out:
        with open(args.out, "w") as fh:
            write_csv(rows, fields, fh)
        with open(args.manifest or args.out + ".manifest.json", "w") as fh:
            json.dump(manifest(cfg), fh, indent=2)
    else:
        write_csv(rows, fields, sys.stdout)
        if args.manifest:
            with open(args.manifest, "w") as fh:
                json.dump(manifest(cfg), fh, indent=2)
    return 0


def cmd_simulate(args) -> int:
    cfg = _campaign(args)
    if cfg.target_bler is not None:
        return _run(args, cfg, required_snr_rows(cfg, args.workers), REQUIRED_SNR_FIELDS)
    return _run(args, cfg, sweep_rows(cfg, args.workers), CSV_FIELDS)


def cmd_required_snr(args) -> int:
    cfg = _campaign(args)
    if args.target_bler is not None:
        cfg.target_bler = args.target_bler
    if cfg.target_bler is None:
        raise ValueError("no target BLER: pass --target-bler or set target_bler in the campaign")
    CampaignConfig.__post_init__(cfg)
    return _run(args, cfg, required_snr_rows(cfg, args.workers), REQUIRED_SNR_FIELDS)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rcpolar", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def code_args(sp, with_beta=True):
        sp.add_argument("--n", type=_positive, required=True, help="log2 of the block length")
        sp.add_argument("--s", type=_profile, required=True,
                        help="block profile, LSB-first, e.g. 1,1,1,3")
        if with_beta:
            sp.add_argument("--beta", type=float, required=True)

    sp = sub.add_parser("construct", help="design a code and print its CodeSpec JSON")
    code_args(sp)
    sp.add_argument("--k", type=_positive, required=True, help="requested dimension")
    sp.add_argument("--out")
    sp.add_argument("--weights-csv", help="also write the weight table here")
    sp.set_defaults(func=cmd_construct)

    sp = sub.add_parser("verify", help="check a CodeSpec for partial order and symmetry")
    sp.add_argument("spec")
    sp.add_argument("--s", type=_profile, help="override the spec's block profile")
    sp.add_argument("--brute-force", action="store_true",
                    help="also test random BLTA(s) permutations on random codewords")
    sp.add_argument("--perms", type=_positive, default=100)
    sp.add_argument("--words", type=_positive, default=20)
    sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("orbits", help="list the orbits of Z_N under block digit permutations")
    code_args(sp, with_beta=False)
    sp.set_defaults(func=cmd_orbits)

    sp = sub.add_parser("hasse", help="DOT graph of the symmetric partial order")
    code_args(sp, with_beta=False)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_hasse)

    sp = sub.add_parser("weights", help="CSV of symmetric beta-expansion weights")
    code_args(sp)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_weights)

    for name, func, helptext in (("simulate", cmd_simulate, "run a campaign, CSV out"),
                                 ("required-snr", cmd_required_snr, "required Eb/N0 per (K, decoder)")):
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("campaign", help="campaign JSON manifest")
        sp.add_argument("--out", help="CSV path (default stdout)")
        sp.add_argument("--manifest", help="where to write the resolved manifest")
        sp.add_argument("--workers", type=_positive, default=1)
        sp.add_argument("--seed", type=int, default=None,
                        help=f"override the campaign seed (campaign default {DEFAULT_SEED})")
        if name == "required-snr":
            sp.add_argument("--target-bler", type=float)
        sp.set_defaults(func=func)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        parser.exit(2, f"rcpolar {args.command}: error: {exc}\n")


if __name__ == "__main__":
    sys.exit(main())
