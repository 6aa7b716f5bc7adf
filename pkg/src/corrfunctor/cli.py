"""Command-line front end.

Exit status: 0 on success, 1 when a verification fails, 2 on bad input.
"""

from __future__ import annotations

import argparse
import itertools
import os
import sys
from typing import Callable, Sequence

from . import algfunctor as alg
from . import theorems as th
from .config import DEFAULT_BOUND, DEFAULT_SEED, SweepConfig
from .functors import (constant, functor_FT, hom_is_exact, hom_solver, regular_module, representable, tensor,
                       zero_functor)
from .lattices import Lattice, LatticeError, corpus, format_lattice, named_lattice, parse_lattice, product
from .relations import ParseError, compose, format_correspondence, parse_correspondences


class InputError(Exception):
    pass


# --- named inputs ------------------------------------------------------------------

def load_lattice(spec: str) -> Lattice:
    if os.path.exists(spec):
        with open(spec) as fh:
            return parse_lattice(fh.read(), name=os.path.basename(spec))
    try:
        return named_lattice(spec)
    except KeyError:
        raise InputError(f"unknown lattice {spec!r} (not a file or built-in name)") from None


def load_functor(spec: str, bound: int):
    if spec in ("k", "constant"):
        return constant(bound)
    if spec == "zero":
        return zero_functor(bound)
    if spec.startswith("rep:"):
        return representable(int(spec[4:]), bound)
    if spec.startswith("ft:"):
        return functor_FT(load_lattice(spec[3:]), bound)
    raise InputError(f"unknown functor {spec!r}; use k, zero, rep:<n> or ft:<lattice>")


def load_algebra_spec(spec: str, bound: int) -> alg.AlgebraFunctorRep:
    if spec.startswith("ft:"):
        return alg.algebra_FT(load_lattice(spec[3:]), bound)
    if not os.path.exists(spec):
        raise InputError(f"unknown algebra {spec!r}; use ft:<lattice> or a file path")
    with open(spec) as fh:
        return alg.load_algebra(fh.read())


# --- commands ---------------------------------------------------------------------

def cmd_compose(args, out) -> int:
    with open(args.file) as fh:
        items = parse_correspondences(fh.read())
    if not items:
        raise InputError("no correspondences in file")
    acc = items[-1]
    for v in reversed(items[:-1]):
        acc = compose(v, acc)
    out.write(format_correspondence(acc))
    return 0


def _table(rows) -> str:
    return "\n".join(" ".join(str(x) for x in row) for row in rows)


def cmd_lattice_check(args, out) -> int:
    t = load_lattice(args.file)
    out.write(f"lattice {t.size} ok bottom={t.bottom} top={t.top} distributive={t.is_distributive()}\n")
    out.write("join\n" + _table(t.join_table) + "\n")
    out.write("meet\n" + _table(t.meet_table) + "\n")
    return 0


def cmd_ft_dims(args, out) -> int:
    for spec in args.lattice or ["chain1"]:
        f = functor_FT(load_lattice(spec), args.bound)
        out.write(", ".join(map(str, f.dims)) + "\n")
    return 0


def cmd_tensor_dims(args, out) -> int:
    specs = args.lattice or ["chain1", "chain1"]
    if len(specs) != 2:
        raise InputError("tensor-dims needs exactly two --lattice arguments")
    t, tp = (load_lattice(s) for s in specs)
    left = tensor(functor_FT(t, args.bound), functor_FT(tp, args.bound))
    right = functor_FT(product(t, tp), args.bound)
    out.write("tensor: " + ", ".join(map(str, left.dims)) + "\n")
    out.write("product: " + ", ".join(map(str, right.dims)) + "\n")
    tau = th.tau_morphism(t, tp, args.bound)
    ok = left.dims == right.dims and all(th._is_permutation(c) for c in tau.components)
    out.write(f"tau basis bijection: {'yes' if ok else 'no'}\n")
    return 0 if ok else 1


def cmd_hom_dims(args, out) -> int:
    src = load_functor(args.source, args.bound)
    tgt = load_functor(args.target, args.bound)
    basis = hom_solver(src, tgt)
    label = "exact" if hom_is_exact(src) else "upper bound at truncation"
    out.write(f"dim Hom({src.name}, {tgt.name}) = {len(basis)} ({label}, N={args.bound})\n")
    return 0


def cmd_reconstruct(args, out) -> int:
    spec = args.algebra
    if spec is None:
        spec = "ft:" + (args.lattice[0] if args.lattice else "diamond")
    a = load_algebra_spec(spec, args.bound)
    if a.bound < 2:
        raise InputError("reconstruction needs bound >= 2")
    rec = alg.reconstruct_lattice(a, SweepConfig(samples=200, seed=args.seed))
    if not rec.ok:
        out.write(f"reconstruction failed at {rec.diagnosis}\n")
        return 1
    out.write(format_lattice(rec.lattice))
    out.write(f"top {rec.top}\n")
    if spec.startswith("ft:"):
        t = load_lattice(spec[3:])
        perm = alg.match_to_reference(rec, t)
        same = perm is not None and alg.meet_tables_agree(rec, t, perm)
        out.write(f"isomorphic to {spec[3:]}: {'yes' if same else 'no'}")
        out.write(f" relabeling {perm}\n" if same else "\n")
        return 0 if same else 1
    return 0


# --- verify -----------------------------------------------------------------------

def _pairs_within(limit: int):
    lats = corpus()
    names = sorted(lats)
    for a, b in itertools.product(names, names):
        if lats[a].size * lats[b].size <= limit:
            yield lats[a], lats[b]


def _verifiers(args) -> dict[str, Callable[[], list]]:
    n = args.bound
    cfg = SweepConfig(seed=args.seed)
    lattices = [load_lattice(s) for s in args.lattice] if args.lattice else None
    sizes = args.size or None

    def functors():
        if args.functor:
            return [load_functor(s, n) for s in args.functor]
        return [constant(n), representable(1, n), functor_FT(named_lattice("chain1"), n)]

    def tau():
        if lattices:
            if len(lattices) != 2:
                raise InputError("verify tau needs two --lattice arguments")
            return [th.verify_tau(lattices[0], lattices[1], n, cfg)]
        return [th.verify_tau(a, b, n, cfg) for a, b in _pairs_within(12)]

    def rep_tensor():
        e, ep = (sizes or [1, 1])[:2]
        return [th.verify_representable_tensor(e, ep, n, cfg)]

    def lev():
        e, f = (sizes or [1, 1])[:2]
        return [th.verify_LEV_tensor(e, regular_module(e), f, regular_module(f), n, cfg)]

    def pairing():
        return [th.verify_pairing_roundtrip(functors(), args.samples, args.seed)]

    def laws():
        fs = functors()
        return [th.verify_tensor_laws(*(fs * 3)[:3])]

    def adjunction():
        fs = functors()
        if args.functor and len(fs) == 3:
            return [th.verify_adjunction_dims(*fs, cfg=cfg)]
        return [th.verify_adjunction_dims(m, mp, mpp, cfg) for m, mp, mpp in itertools.product(fs, repeat=3)]

    def internal():
        targets = [load_functor(s, n) for s in args.functor] if args.functor else \
            [constant(n), functor_FT(named_lattice("chain1"), n)]
        return [th.verify_internal_hom_identities(m, e, cfg=cfg) for m in targets for e in (sizes or [0, 1])]

    def reconstruct():
        lats = lattices or list(corpus().values())
        return [alg.verify_reconstruction(t, n, SweepConfig(samples=200, seed=args.seed)) for t in lats]

    def idempotents():
        lats = lattices or list(corpus().values())
        return [alg.verify_idempotent_calculus(t, n) for t in lats]

    def exponential():
        return [alg.check_exponential(load_algebra_spec(args.algebra or "ft:diamond", n))]

    def product_union():
        lats = lattices or list(corpus().values())
        return [alg.verify_product_union(alg.algebra_FT(t, n), t) for t in lats]

    return {
        "tau": tau, "representable-tensor": rep_tensor, "lev-tensor": lev, "pairing": pairing,
        "tensor-laws": laws, "adjunction": adjunction, "internal-hom": internal, "reconstruct": reconstruct,
        "idempotents": idempotents, "exponential": exponential, "product-union": product_union,
    }


ALL_ORDER = ["tau", "representable-tensor", "tensor-laws", "pairing", "lev-tensor", "adjunction",
             "internal-hom", "reconstruct", "idempotents", "product-union"]


def cmd_verify(args, out) -> int:
    table = _verifiers(args)
    if args.theorem == "all":
        ids = ALL_ORDER
    elif args.theorem in table:
        ids = [args.theorem]
    else:
        raise InputError(f"unknown theorem {args.theorem!r}; choose from all, {', '.join(sorted(table))}")
    if args.bound < 2 and any(i in ("reconstruct", "idempotents") for i in ids):
        raise InputError("reconstruction needs --bound >= 2")
    status = 0
    for tid in ids:
        for rep in table[tid]():
            out.write((rep.to_json() if args.json else rep.to_line()) + "\n")
            out.flush()
            if not rep.passed:
                status = 1
    return status


# --- parser -----------------------------------------------------------------------

def _shared_flags(parser: argparse.ArgumentParser, defaults: bool) -> argparse.ArgumentParser:
    # subcommands get SUPPRESS defaults so flags given before the verb survive
    d = (lambda v: v) if defaults else (lambda v: argparse.SUPPRESS)
    parser.add_argument("--bound", type=int, default=d(DEFAULT_BOUND), help="truncation bound N (default 3)")
    parser.add_argument("--seed", type=int, default=d(DEFAULT_SEED))
    parser.add_argument("--json", action="store_true", default=d(False), help="one JSON object per report")
    parser.add_argument("--lattice", action="append", default=d(None), help="built-in name or file (repeatable)")
    parser.add_argument("--algebra", default=d(None), help="ft:<lattice> or an algebra file")
    return parser


def build_parser() -> argparse.ArgumentParser:
    common = _shared_flags(argparse.ArgumentParser(add_help=False), defaults=False)
    p = _shared_flags(argparse.ArgumentParser(prog="corrfunctor",
                                              description="Correspondence functors, lattices and algebra functors."),
                      defaults=True)
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compose", parents=[common], help="compose the correspondences in a file")
    c.add_argument("file")
    c.set_defaults(func=cmd_compose)

    c = sub.add_parser("lattice-check", parents=[common], help="validate a lattice, print join and meet tables")
    c.add_argument("file")
    c.set_defaults(func=cmd_lattice_check)
    c = sub.add_parser("lattice", parents=[common], help="lattice subcommands")
    c.add_argument("action", choices=["check"])
    c.add_argument("file")
    c.set_defaults(func=cmd_lattice_check)

    c = sub.add_parser("ft-dims", parents=[common], help="dimensions of F_T up to the bound")
    c.set_defaults(func=cmd_ft_dims)
    c = sub.add_parser("tensor-dims", parents=[common], help="dimensions of F_T ⊗ F_T' and F_{TxT'}")
    c.set_defaults(func=cmd_tensor_dims)
    c = sub.add_parser("hom-dims", parents=[common], help="dimension of a truncated Hom space")
    c.add_argument("source")
    c.add_argument("target")
    c.set_defaults(func=cmd_hom_dims)
    c = sub.add_parser("reconstruct", parents=[common], help="recover a lattice from an algebra functor")
    c.set_defaults(func=cmd_reconstruct)
    c = sub.add_parser("verify", parents=[common], help="run a verifier (or all of them)")
    c.add_argument("theorem")
    c.add_argument("--size", type=int, action="append", help="set sizes E, F (repeatable)")
    c.add_argument("--functor", action="append", help="k, zero, rep:<n> or ft:<lattice> (repeatable)")
    c.add_argument("--samples", type=int, default=20)
    c.set_defaults(func=cmd_verify)
    return p


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    if args.bound < 0:
        err.write("error: --bound must be non-negative\n")
        return 2
    if args.bound >= 4:
        err.write(f"warning: bound {args.bound} can take a long time\n")
    try:
        return args.func(args, out)
    except (InputError, ParseError, LatticeError, alg.AlgebraError, OSError) as exc:
        err.write(f"error: {exc}\n")
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
