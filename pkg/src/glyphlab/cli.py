"""Command-line interface.

Subcommands:
  gen         generate a CDS dataset from a preset pipeline
  show        export a contact sheet (P5 graymap) from a CDS file
  train       train an MLP or SDA on CDS data, write a CNM1 checkpoint
  eval        evaluate a checkpoint on CDS data (optionally class-restricted)
  experiment  run the full desk-scale model/dataset grid
  report      render result tables (ours or the stored full-scale reference)

All randomness is controlled by --seed; repeating a command reproduces
its outputs byte for byte.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import harness, nnet
from .dataset import export_contact_sheet, read_cds, write_cds
from .harness import GridConfig, ResultTable, format_report, reference_results, run_grid
from .pipeline import DEFAULT_MIX, SourceMix, generate_dataset, preset_spec
from .rng import RngStream

TASK_CHOICES = ("all", "digits", "upper", "lower")


def _parse_mix(text: str) -> dict[str, float]:
    weights = {}
    for part in text.split(","):
        name, value = part.split(":")
        weights[name.strip()] = float(value)
    return weights


def _cmd_gen(args) -> int:
    mix = SourceMix.from_dict(_parse_mix(args.mix) if args.mix else DEFAULT_MIX)
    spec = preset_spec(args.preset)
    ds = generate_dataset(args.n, mix, spec, args.seed, workers=args.workers)
    write_cds(ds, args.out)
    print(f"wrote {len(ds)} items to {args.out}")
    return 0


def _cmd_show(args) -> int:
    ds = read_cds(args.data)
    export_contact_sheet(ds, args.rows, args.cols, args.out)
    print(f"wrote {args.rows}x{args.cols} sheet to {args.out}")
    return 0


def _cmd_train(args) -> int:
    train = read_cds(args.train)
    valid = read_cds(args.valid)
    cfg = nnet.TrainConfig(
        learning_rate=args.lr,
        pretrain_learning_rate=args.pretrain_lr,
        epochs=args.epochs,
        pretrain_epochs=args.pretrain_epochs,
        minibatch=args.minibatch,
        seed=args.seed,
    )
    rng = RngStream(args.seed, spawn_key=(0x11,))
    if args.model == "mlp":
        model = nnet.init_mlp(rng, hidden=args.hidden)
    else:
        model = nnet.init_sda(rng, width=args.hidden, corruption_fraction=args.corruption)
        nnet.pretrain(model, train.matrix(), cfg)
    model = nnet.finetune(model, train, valid, cfg)
    nnet.save_model(model, args.out)
    err = nnet.evaluate(model, valid)
    print(f"wrote {args.out}; validation error {err:.4f}")
    return 0


def _cmd_eval(args) -> int:
    model = nnet.load_model(args.model_file)
    ds = read_cds(args.data)
    subset = harness.TASKS["all62" if args.classes == "all" else args.classes]
    if subset is not None:
        import numpy as np

        keep = np.isin(ds.labels, subset)
        ds = ds.subset(keep)
        if len(ds) == 0:
            print("no examples with labels in the requested class subset", file=sys.stderr)
            return 1
    err = nnet.evaluate(model, ds, class_subset=subset)
    print(f"error {err:.4f} +- {harness.stderr_of_rate(err, len(ds)):.4f} on {len(ds)} examples")
    return 0


def _cmd_experiment(args) -> int:
    if args.grid_config:
        with open(args.grid_config, encoding="utf-8") as fh:
            cfg = GridConfig.from_text(fh.read())
    else:
        cfg = GridConfig()
    if args.seed is not None:
        cfg.seed = args.seed
    os.makedirs(args.out_dir, exist_ok=True)
    models: dict = {}
    table = run_grid(cfg, models_out=models)
    tsv_path = os.path.join(args.out_dir, "results.tsv")
    with open(tsv_path, "w", encoding="utf-8") as fh:
        fh.write(table.to_tsv())
    report = format_report(table)
    report_path = os.path.join(args.out_dir, "report.txt")
    with open(report_path, "w", encoding="utf-8") as fh:
        fh.write(report)
    for name, model in models.items():
        nnet.save_model(model, os.path.join(args.out_dir, f"{name}.cnm"))
    print(report)
    print(f"results in {tsv_path}, report in {report_path}")
    return 0


def _cmd_report(args) -> int:
    if args.reference:
        table = reference_results()
    else:
        if not args.table:
            print("report needs --table FILE or --reference", file=sys.stderr)
            return 2
        with open(args.table, encoding="utf-8") as fh:
            table = ResultTable.from_tsv(fh.read())
    print(format_report(table), end="")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="glyphlab", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a CDS dataset")
    p.add_argument("--preset", choices=("raw", "nistp", "p07"), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mix", help="source weights, e.g. fonts:0.1,captcha:0.25,ocr:0.25,nist:0.4")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("show", help="export a contact sheet")
    p.add_argument("--data", required=True)
    p.add_argument("--rows", type=int, default=8)
    p.add_argument("--cols", type=int, default=8)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_show)

    p = sub.add_parser("train", help="train a model")
    p.add_argument("--model", choices=("mlp", "sda"), required=True)
    p.add_argument("--train", required=True)
    p.add_argument("--valid", required=True)
    p.add_argument("--hidden", type=int, default=64)
    p.add_argument("--lr", type=float, default=0.1)
    p.add_argument("--pretrain-lr", type=float, default=0.025)
    p.add_argument("--epochs", type=int, default=20)
    p.add_argument("--pretrain-epochs", type=int, default=10)
    p.add_argument("--minibatch", type=int, default=20)
    p.add_argument("--corruption", type=float, default=0.2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("eval", help="evaluate a checkpoint")
    p.add_argument("--model-file", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--classes", choices=TASK_CHOICES, default="all")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("experiment", help="run the desk-scale grid")
    p.add_argument("--grid-config")
    p.add_argument("--seed", type=int)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=_cmd_experiment)

    p = sub.add_parser("report", help="render result tables")
    p.add_argument("--table")
    p.add_argument("--reference", action="store_true",
                   help="print the stored full-scale reference results")
    p.set_defaults(func=_cmd_report)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
