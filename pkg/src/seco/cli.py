"""Command-line surface: compress | ablate | verify | flops | gen-synthetic.

Exit codes: 0 success, 1 verification failure, 2 usage/format error,
3 numeric overflow, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .compress import (
    CompressionConfig,
    Variant,
    compress,
    compress_ablation,
    num_compressed_tokens,
)
from .flops import (
    FlopsOverflowError,
    ModelShape,
    compression_flops,
    generation_flops,
    transformer_forward_flops,
)
from .posbias import NoiseSpec
from .synthetic import SyntheticTokenModel, generate
from .tensor import DimensionMismatchError, HiddenStates, make_rng
from .tensorfile import TensorFormatError, read_tensor, write_tensor
from .verify import SUITES, run_suites

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_OVERFLOW = 3
EXIT_IO = 4


def _provenance(result) -> dict:
    return {
        "k": result.k,
        "centers": list(result.centers),
        "group_of": result.group_of.tolist(),
        "weights_alpha": result.weights_alpha.tolist(),
        "weights_w": result.weights_w.tolist(),
        "relevance": result.relevance.tolist(),
    }


def _write_json(path, payload) -> None:
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _cmd_compress(args) -> int:
    context = read_tensor(args.context)
    query = read_tensor(args.query)
    h = HiddenStates(context=context, query=query)
    variant = Variant(args.variant)
    cfg = CompressionConfig(tau=args.tau, variant=variant)
    if variant is Variant.DEFAULT:
        result = compress(h, cfg)
    else:
        result = compress_ablation(h, cfg)
    out = Path(args.out)
    write_tensor(out, result.compressed)
    prov = {"tau": args.tau, "variant": variant.value, "seed": args.seed}
    prov.update(_provenance(result))
    _write_json(out.with_suffix(out.suffix + ".provenance.json"), prov)
    print(f"wrote {out} ({result.k} x {context.shape[1]})")
    return EXIT_OK


def _cmd_verify(args) -> int:
    results = run_suites(args.suite, seed=args.seed, trials=args.trials)
    doc = json.dumps(results, indent=2, sort_keys=True)
    if args.out:
        Path(args.out).write_text(doc + "\n")
    print(doc)
    return EXIT_OK if results["passed"] else EXIT_FAIL


def _cmd_flops(args) -> int:
    shape = ModelShape(
        n_layers=args.layers,
        d_model=args.d_model,
        d_ff=args.d_ff,
        n_heads=args.heads,
        vocab=args.vocab,
    )
    l_total = args.context_len + args.query_len
    k = num_compressed_tokens(args.context_len, args.tau)
    breakdown = compression_flops(shape, l_total, args.context_len, k, args.d_model)
    gen = generation_flops(shape, k, args.query_len, args.answer_len)
    doc = breakdown.to_dict()
    doc.update({"generation": gen, "total": breakdown.total + gen, "k": k, "tau": args.tau})
    if args.compare_uncompressed:
        # uncompressed: same prefill, decoding over the raw context prefix
        gen_full = transformer_forward_flops(shape, l_total, args.answer_len)
        uncompressed_total = breakdown.encoder_prefill + gen_full
        doc["uncompressed_generation"] = gen_full
        doc["uncompressed_total"] = uncompressed_total
        doc["total_ratio"] = doc["total"] / uncompressed_total
    if args.out:
        _write_json(args.out, doc)
    print(json.dumps(doc, indent=2, sort_keys=True))
    return EXIT_OK


def _cmd_gen_synthetic(args) -> int:
    if args.pe == "rotary" and args.dim % 2 != 0:
        raise DimensionMismatchError("rotary positional encoding requires even dim")
    model = SyntheticTokenModel(
        n_tokens=args.n_context,
        dim=args.dim,
        n_query=args.n_query,
        semantic_gen=args.semantic,
        n_clusters=args.clusters,
        pe_family=args.pe,
        noise=NoiseSpec(sigma_p=args.sigma_p),
    )
    data = generate(model, make_rng(args.seed))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_tensor(out / "context.seco", data["context"])
    write_tensor(out / "query.seco", data["query"])
    write_tensor(out / "semantic.seco", data["semantic"])
    manifest = {"seed": args.seed, **data["metadata"],
                "files": ["context.seco", "query.seco", "semantic.seco"]}
    _write_json(out / "manifest.json", manifest)
    print(f"wrote synthetic tensors to {out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="seco", description="Semantic-consistency context compression toolkit"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    variants = [v.value for v in Variant]

    p = sub.add_parser("compress", help="compress a context/query tensor pair")
    p.add_argument("context", help="context TensorFile (N_c x d)")
    p.add_argument("query", help="query TensorFile (N_q x d)")
    p.add_argument("--tau", type=int, required=True, help="compression rate")
    p.add_argument("--variant", choices=variants, default=Variant.DEFAULT.value)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output TensorFile path")
    p.set_defaults(func=_cmd_compress)

    p = sub.add_parser("ablate", help="compress with an ablation variant")
    p.add_argument("context")
    p.add_argument("query")
    p.add_argument("--tau", type=int, required=True)
    p.add_argument(
        "--variant",
        choices=[v for v in variants if v != Variant.DEFAULT.value],
        required=True,
    )
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_compress)

    p = sub.add_parser("verify", help="run position-bias verification suites")
    p.add_argument("suite", choices=list(SUITES) + ["all"])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--out", default=None, help="also write the JSON report here")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("flops", help="analytical FLOPs breakdown")
    p.add_argument("--layers", type=int, required=True)
    p.add_argument("--d-model", type=int, required=True)
    p.add_argument("--d-ff", type=int, required=True)
    p.add_argument("--heads", type=int, default=8)
    p.add_argument("--vocab", type=int, default=32000)
    p.add_argument("--context-len", type=int, required=True)
    p.add_argument("--query-len", type=int, default=32)
    p.add_argument("--answer-len", type=int, default=64)
    p.add_argument("--tau", type=int, required=True)
    p.add_argument("--compare-uncompressed", action="store_true")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_flops)

    p = sub.add_parser("gen-synthetic", help="write synthetic token tensors")
    p.add_argument("--n-context", type=int, required=True)
    p.add_argument("--n-query", type=int, default=4)
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--semantic", choices=["gaussian-clusters", "fixed"],
                   default="gaussian-clusters")
    p.add_argument("--clusters", type=int, default=4)
    p.add_argument("--pe", choices=["none", "additive-sinusoidal", "rotary"],
                   default="none")
    p.add_argument("--sigma-p", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=_cmd_gen_synthetic)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (TensorFormatError, DimensionMismatchError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FlopsOverflowError as exc:
        print(f"overflow: {exc}", file=sys.stderr)
        return EXIT_OVERFLOW
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
