"""Command-line front end: generate graphs, embed minors, verify models,
and extract sparse cuts.

Exit codes: 0 = model found / verification passed, 2 = sparse-cut
certificate / verification failed, 3 = probabilistic failure after retries,
1 = usage or I/O error.
"""
from __future__ import annotations

import argparse
import math
import os
import sys
import time
from fractions import Fraction

from . import rng
from .embedding import EmbedConfig, Failed, Model, NotAnExpander, embed_minor
from .errors import (DisconnectedGraphError, GraphFormatError, OracleBudgetError,
                     SizeGuardRejected, TerminalShortage)
from .flows import routing_params
from .generators import GenSpec, generate
from .graphs import Cut, Graph, cut_of, load_graph, save_graph
from .models import load_model, save_model, verify_model
from .spectral import exact_expansion, sweep_cut


class _Parser(argparse.ArgumentParser):
    """argparse defaults to exit status 2 on usage errors; the contract
    reserves 2 for cut certificates, so remap usage errors to 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _resolve_seed(seed: int | None) -> int:
    if seed is not None:
        return seed
    fresh = int.from_bytes(os.urandom(8), "big") & ((1 << 63) - 1)
    print(f"seed = {fresh} (derived from entropy; pass --seed to replay)")
    return fresh


def _parse_alpha(text: str) -> Fraction:
    try:
        val = Fraction(text)
    except (ValueError, ZeroDivisionError) as ex:
        raise ValueError(f"cannot parse alpha {text!r}: {ex}")
    if val <= 0:
        raise ValueError(f"alpha must be positive, got {val}")
    return val


def _write_cut(path: str, cut: Cut) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write("A: " + " ".join(str(v) for v in cut.side_a) + "\n")
        fh.write("B: " + " ".join(str(v) for v in cut.side_b) + "\n")
        fh.write(f"sparsity: {cut.sparsity.numerator}/{cut.sparsity.denominator}\n")


def cmd_gen(args) -> int:
    seed = _resolve_seed(args.seed)
    params = {}
    for name in ("n", "d", "a", "b", "k", "p"):
        val = getattr(args, name)
        if val is not None:
            params[name] = val
    g = generate(GenSpec(args.kind, params, seed))
    save_graph(g, args.out)
    print(f"wrote {args.out}: n = {g.n}, m = {g.m}")
    return 0


def _report_lines(outcome: str, trial: int, seed: int, alpha: Fraction,
                  g: Graph, h: Graph, cfg: EmbedConfig,
                  certificate: str, failure: str) -> list[str]:
    n, d = g.n, max(1, g.max_degree)
    log2n = math.log2(max(2, n))
    rho = 3 * math.ceil(4 * cfg.rho_constant * d * d * log2n * log2n
                        / float(alpha) ** 2)
    if n >= 2:
        rp = routing_params(alpha, d, n, cfg.eps, cfg.c_eta)
        big_l, eta = rp.L, rp.eta
    else:
        big_l, eta = 0, 0
    return [
        f"outcome = {outcome}",
        f"trial = {trial}",
        f"seed = {seed}",
        f"alpha = {alpha.numerator}/{alpha.denominator}",
        f"host_n = {g.n}",
        f"host_m = {g.m}",
        f"host_d = {d}",
        f"target_n = {h.n}",
        f"target_m = {h.m}",
        f"rho = {rho}",
        f"q = {rho}",
        f"L = {big_l}",
        f"eta = {eta}",
        f"retries = {cfg.max_retries}",
        f"certificate = {certificate}",
        f"failure = {failure}",
    ]


def cmd_embed(args) -> int:
    g = load_graph(args.host)
    h = load_graph(args.target)
    alpha = _parse_alpha(args.alpha)
    base_seed = _resolve_seed(args.seed)
    os.makedirs(args.out_dir, exist_ok=True)
    results = []
    for trial in range(args.trials):
        suffix = f"_t{trial}" if args.trials > 1 else ""
        trial_seed = base_seed if args.trials == 1 else rng.derive(base_seed, trial)
        cfg = EmbedConfig(alpha=alpha, max_retries=args.retries,
                          seed=trial_seed, size_guard=args.mode)
        started = time.perf_counter()
        try:
            out = embed_minor(g, cfg, h)
        except TerminalShortage as ts:
            out = Failed((f"terminal shortage: {ts}",))
        elapsed_ms = (time.perf_counter() - started) * 1000.0
        print(f"# trial {trial}: embed took {elapsed_ms:.1f} ms", file=sys.stderr)
        if isinstance(out, Model):
            model_path = os.path.join(args.out_dir, f"model{suffix}.txt")
            save_model(out.model, model_path)
            certificate, failure, outcome = model_path, "none", "model"
            print(f"trial {trial}: model -> {model_path}")
        elif isinstance(out, NotAnExpander):
            cut_path = os.path.join(args.out_dir, f"cut{suffix}.txt")
            _write_cut(cut_path, out.cut)
            spars = out.cut.sparsity
            certificate = f"{spars.numerator}/{spars.denominator}"
            failure, outcome = "none", "cut"
            print(f"trial {trial}: cut of sparsity {certificate} -> {cut_path}")
        else:
            assert isinstance(out, Failed)
            certificate, outcome = "none", "failed"
            failure = out.diagnostics[-1] if out.diagnostics else "no diagnostics"
            print(f"trial {trial}: failed ({len(out.diagnostics)} attempts)")
        report_path = os.path.join(args.out_dir, f"report{suffix}.txt")
        with open(report_path, "w", encoding="utf-8") as fh:
            fh.write("\n".join(_report_lines(outcome, trial, trial_seed, alpha,
                                             g, h, cfg, certificate, failure)) + "\n")
        results.append(outcome)
    if "model" in results:
        return 0
    if "cut" in results:
        return 2
    return 3


def cmd_verify(args) -> int:
    g = load_graph(args.host)
    h = load_graph(args.target)
    model = load_model(args.model, g, h)
    res = verify_model(model)
    if res.ok:
        print("Valid")
        return 0
    for v in res.violations:
        print(str(v))
    return 2


def cmd_cut(args) -> int:
    g = load_graph(args.graph)
    if g.n < 2:
        raise ValueError("cut extraction needs at least 2 vertices")
    if args.mode == "exact":
        if g.n > 22:
            raise ValueError(f"exact mode supports n <= 22, got n = {g.n}")
        phi, cut = exact_expansion(g)
    else:
        cut = sweep_cut(g)
        phi = cut.sparsity
    _write_cut(args.out, cut)
    print(f"sparsity = {phi.numerator}/{phi.denominator}")
    print(f"wrote {args.out}")
    return 0


def _build_parser() -> _Parser:
    parser = _Parser(prog="expander-minors",
                     description="Minor embedding into bounded-degree expanders")
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("gen", help="generate a graph file")
    p_gen.add_argument("--kind", required=True,
                       choices=["cycle", "path", "grid", "clique", "barbell",
                                "two-expanders-bridge", "gnp", "random-regular"])
    p_gen.add_argument("--n", type=int)
    p_gen.add_argument("--d", type=int)
    p_gen.add_argument("--a", type=int)
    p_gen.add_argument("--b", type=int)
    p_gen.add_argument("--k", type=int)
    p_gen.add_argument("--p", type=float)
    p_gen.add_argument("--seed", type=int)
    p_gen.add_argument("--out", required=True)

    p_embed = sub.add_parser("embed", help="embed a target minor into a host")
    p_embed.add_argument("--host", required=True)
    p_embed.add_argument("--target", required=True)
    p_embed.add_argument("--alpha", required=True,
                         help="expansion parameter, rational like 1/4")
    p_embed.add_argument("--seed", type=int)
    p_embed.add_argument("--retries", type=int, default=5)
    p_embed.add_argument("--mode", choices=["permissive", "strict"],
                         default="permissive")
    p_embed.add_argument("--trials", type=int, default=1)
    p_embed.add_argument("--out-dir", default=".")

    p_verify = sub.add_parser("verify", help="verify a model file")
    p_verify.add_argument("--host", required=True)
    p_verify.add_argument("--target", required=True)
    p_verify.add_argument("--model", required=True)

    p_cut = sub.add_parser("cut", help="extract a sparse cut")
    p_cut.add_argument("--graph", required=True)
    p_cut.add_argument("--mode", choices=["sweep", "exact"], default="sweep")
    p_cut.add_argument("--out", default="cut.txt")
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {"gen": cmd_gen, "embed": cmd_embed,
                "verify": cmd_verify, "cut": cmd_cut}
    try:
        return handlers[args.command](args)
    except (GraphFormatError, DisconnectedGraphError, SizeGuardRejected,
            OracleBudgetError, OSError, ValueError) as ex:
        print(f"error: {ex}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
