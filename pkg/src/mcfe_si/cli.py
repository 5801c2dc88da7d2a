"""Command-line front end for the deployment simulator.

Verbs map onto the four roles: `setup` (authority), `keygen`
(authority), `encrypt`/`upload` (clients), `align` (aggregator, either
end-to-end or against a previously populated deployment directory) and
`bench`.  All artifacts live under the deployment directory given by
--dir; pass --seed for reproducible runs.
"""

from __future__ import annotations

import argparse
import os
import random
import sys

from . import bench as bench_mod
from . import scheme, wire
from .harness import (
    AlignmentConfig,
    AlignmentReport,
    CiphertextStore,
    ItemCodec,
    StoreRecord,
    make_tag,
    read_item_file,
    run_alignment,
)
from .pairing import default_context
from .scheme import Reject


def _rng(seed):
    return random.Random(seed) if seed is not None else random.SystemRandom()


def _path(args, name):
    return os.path.join(args.dir, name)


def _parse_pair(text):
    try:
        w, v = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("pair must look like w,v")
    return (w, v)


def cmd_setup(args):
    ctx = default_context()
    os.makedirs(args.dir, exist_ok=True)
    pp, msk, csks = scheme.setup(ctx, args.d, args.clients, _rng(args.seed))
    with open(_path(args, "pp.bin"), "wb") as f:
        f.write(wire.encode_public_params(ctx, pp))
    with open(_path(args, "msk.bin"), "wb") as f:
        f.write(wire.encode_master_secret(ctx, msk))
    for csk in csks:
        with open(_path(args, f"csk_{csk.k}.bin"), "wb") as f:
            f.write(wire.encode_client_key(ctx, csk))
    print(f"wrote pp.bin, msk.bin and {len(csks)} client keys to {args.dir}")


def cmd_keygen(args):
    ctx = default_context()
    with open(_path(args, "pp.bin"), "rb") as f:
        pp = wire.decode_public_params(ctx, f.read())
    with open(_path(args, "msk.bin"), "rb") as f:
        msk = wire.decode_master_secret(ctx, f.read())
    sk = scheme.keygen(ctx, msk, pp, args.pair, args.policy, _rng(args.seed))
    out = _path(args, f"sk_{args.pair[0]}_{args.pair[1]}.bin")
    with open(out, "wb") as f:
        f.write(wire.encode_decryption_key(ctx, sk))
    print(f"wrote {out}")


def cmd_encrypt(args):
    ctx = default_context()
    with open(_path(args, "pp.bin"), "rb") as f:
        pp = wire.decode_public_params(ctx, f.read())
    with open(_path(args, f"csk_{args.client}.bin"), "rb") as f:
        csk = wire.decode_client_key(ctx, f.read())
    codec = ItemCodec(ctx)
    items = [codec.encode(it) for it in read_item_file(args.items)]
    ct = scheme.encrypt(ctx, pp, args.attrs.split(","), make_tag(ctx, args.label),
                        items, csk, _rng(args.seed))
    out = args.out or _path(args, f"ct_{args.client}.bin")
    with open(out, "wb") as f:
        f.write(wire.encode_ciphertext(ctx, ct))
    print(f"wrote {out}")


def cmd_upload(args):
    ctx = default_context()
    with open(args.ct, "rb") as f:
        data = f.read()
    ct = wire.decode_ciphertext(ctx, data)  # validates before storing
    store = CiphertextStore(os.path.join(args.dir, "store"))
    store.upload(StoreRecord(ct.k, args.label, ct.attrs, data))
    print(f"stored ciphertext of client {ct.k} under label {args.label!r}")


def cmd_align(args):
    ctx = default_context()
    if args.items:
        report = run_alignment(AlignmentConfig(
            workdir=args.dir, d=args.d, item_files=args.items,
            attrs=args.attrs.split(","), label=args.label, policy=args.policy,
            pair=args.pair, seed=args.seed), ctx)
        print(report.format())
        return
    # aggregator-only mode against an existing deployment
    with open(_path(args, "pp.bin"), "rb") as f:
        pp = wire.decode_public_params(ctx, f.read())
    w, v = args.pair
    with open(_path(args, f"sk_{w}_{v}.bin"), "rb") as f:
        sk = wire.decode_decryption_key(ctx, f.read())
    store = CiphertextStore(os.path.join(args.dir, "store"))
    ct_w = wire.decode_ciphertext(ctx, store.fetch(w, args.label).ct_bytes)
    ct_v = wire.decode_ciphertext(ctx, store.fetch(v, args.label).ct_bytes)
    result = scheme.decrypt(ctx, pp, ct_w, ct_v, sk)
    if isinstance(result, Reject):
        print(AlignmentReport("policy-unsatisfied", args.pair, []).format())
        return
    codec = ItemCodec(ctx)
    if args.candidates:
        for path in args.candidates:
            for it in read_item_file(path):
                codec.encode(it)
    matches = []
    for ew, ev, m in result.matches:
        decoded = codec.decode(m)
        matches.append((ew, ev, decoded.decode("utf-8", "replace")
                        if decoded is not None else f"<unknown:{m.encode().hex()[:16]}>"))
    print(AlignmentReport("ok", args.pair, sorted(matches)).format())


def cmd_bench(args):
    names = list(bench_mod.CASES) if args.case == "all" else [args.case]
    results = [bench_mod.run_bench(bench_mod.CASES[n], seed=args.seed or 2024)
               for n in names]
    print(bench_mod.format_table(results))


def build_parser():
    p = argparse.ArgumentParser(prog="mcfe-si",
                                description="multi-client set-intersection FE simulator")
    sub = p.add_subparsers(dest="verb", required=True)

    sp = sub.add_parser("setup", help="generate params and keys (authority)")
    sp.add_argument("--dir", required=True)
    sp.add_argument("--d", type=int, required=True, help="attribute dimension")
    sp.add_argument("--clients", type=int, required=True)
    sp.add_argument("--seed", type=int)
    sp.set_defaults(func=cmd_setup)

    sp = sub.add_parser("keygen", help="derive a pair+policy decryption key")
    sp.add_argument("--dir", required=True)
    sp.add_argument("--policy", required=True)
    sp.add_argument("--pair", type=_parse_pair, required=True, metavar="w,v")
    sp.add_argument("--seed", type=int)
    sp.set_defaults(func=cmd_keygen)

    sp = sub.add_parser("encrypt", help="encrypt one client's item file")
    sp.add_argument("--dir", required=True)
    sp.add_argument("--client", type=int, required=True)
    sp.add_argument("--items", required=True, help="file with one item per line")
    sp.add_argument("--attrs", required=True, help="comma-separated attribute labels")
    sp.add_argument("--label", required=True)
    sp.add_argument("--out")
    sp.add_argument("--seed", type=int)
    sp.set_defaults(func=cmd_encrypt)

    sp = sub.add_parser("upload", help="push a ciphertext into the store")
    sp.add_argument("--dir", required=True)
    sp.add_argument("--ct", required=True)
    sp.add_argument("--label", required=True)
    sp.set_defaults(func=cmd_upload)

    sp = sub.add_parser("align", help="compute the pairwise intersection")
    sp.add_argument("--dir", required=True)
    sp.add_argument("--pair", type=_parse_pair, required=True, metavar="w,v")
    sp.add_argument("--label", required=True)
    sp.add_argument("--d", type=int, help="attribute dimension (end-to-end mode)")
    sp.add_argument("--policy", help="policy string (end-to-end mode)")
    sp.add_argument("--attrs", help="attribute labels (end-to-end mode)")
    sp.add_argument("--items", nargs="+",
                    help="per-client item files; runs the full pipeline when given")
    sp.add_argument("--candidates", nargs="+",
                    help="item files used to decode results (store mode)")
    sp.add_argument("--seed", type=int)
    sp.set_defaults(func=cmd_align)

    sp = sub.add_parser("bench", help="time the four algorithms")
    sp.add_argument("--case", choices=[*bench_mod.CASES, "all"], default="all")
    sp.add_argument("--seed", type=int)
    sp.set_defaults(func=cmd_bench)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.verb == "align" and args.items and not (args.d and args.policy and args.attrs):
        print("align with --items needs --d, --policy and --attrs", file=sys.stderr)
        return 2
    args.func(args)
    return 0


if __name__ == "__main__":
    sys.exit(main())
