"""Experiment orchestration, error-rate bookkeeping, and report tables.

The grid trains {MLP, SDA} x {clean, nistp, p07} (model names MLP0/SDA0
for clean training data, 1 for nistp, 2 for p07), evaluates every model
on all three test sets and on the digits/upper/lower subsets with the
restricted-argmax rule, and also trains single-task baselines for the
multi-task comparison. Hyper-parameter candidates are selected on the
nistp validation set.

Two relative-improvement conventions appear in published summaries of
this kind of experiment and they disagree in sign; both are exposed:

  * rel_ood_change(a, b)            = 100 * (a / b - 1)
  * rel_multitask_improvement(s, m) = 100 * (1 - s / m)

Reports print the multi-task table with the second convention.
"""

from __future__ import annotations

import math
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from . import nnet
from .dataset import LabeledDataset
from .pipeline import DEFAULT_MIX, SourceMix, generate_dataset, preset_spec, standin_sources
from .rng import RngStream

TRAIN_SETS = ("clean", "nistp", "p07")  # index 0, 1, 2 in model names
EVAL_SETS = ("clean", "nistp", "p07")
TASKS = {
    "all62": None,
    "digits": tuple(range(0, 10)),
    "upper": tuple(range(10, 36)),
    "lower": tuple(range(36, 62)),
}


# ---------------------------------------------------------------------------
# Metrics
# ---------------------------------------------------------------------------

def rel_ood_change(err_clean_trained: float, err_perturbed_trained: float) -> float:
    """Percent change 100 * (clean-trained error / perturbed-trained error - 1).

    Positive means training on perturbed data helped on the given test set.
    """
    if not 0.0 < err_perturbed_trained <= 1.0 or not 0.0 < err_clean_trained <= 1.0:
        raise ValueError("error rates must lie in (0, 1]")
    return 100.0 * (err_clean_trained / err_perturbed_trained - 1.0)


def rel_multitask_improvement(err_single: float, err_multi: float) -> float:
    """Percent improvement 100 * (1 - single-task error / multi-task error)."""
    if not 0.0 < err_multi <= 1.0 or not 0.0 < err_single <= 1.0:
        raise ValueError("error rates must lie in (0, 1]")
    return 100.0 * (1.0 - err_single / err_multi)


def stderr_of_rate(err: float, n: int) -> float:
    """Binomial standard error sqrt(err * (1 - err) / n)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if not 0.0 <= err <= 1.0:
        raise ValueError("error rate must lie in [0, 1]")
    return math.sqrt(err * (1.0 - err) / n)


# ---------------------------------------------------------------------------
# Result table
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ResultRow:
    model: str
    train_set: str
    eval_set: str
    task: str
    error: float
    stderr: float
    n: int


@dataclass
class ResultTable:
    rows: list[ResultRow] = field(default_factory=list)

    HEADER = "model\ttrain_set\teval_set\ttask\terror\tstderr\tn"

    def add(self, **kw) -> None:
        self.rows.append(ResultRow(**kw))

    def lookup(self, model: str, eval_set: str, task: str) -> ResultRow | None:
        for row in self.rows:
            if (row.model, row.eval_set, row.task) == (model, eval_set, task):
                return row
        return None

    def to_tsv(self) -> str:
        lines = [self.HEADER]
        for r in self.rows:
            lines.append(
                f"{r.model}\t{r.train_set}\t{r.eval_set}\t{r.task}\t{r.error:.6f}\t{r.stderr:.6f}\t{r.n}"
            )
        return "\n".join(lines) + "\n"

    @classmethod
    def from_tsv(cls, text: str) -> "ResultTable":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines or lines[0] != cls.HEADER:
            raise ValueError("not a result table (unexpected header)")
        table = cls()
        for ln in lines[1:]:
            model, train_set, eval_set, task, error, stderr, n = ln.split("\t")
            table.add(model=model, train_set=train_set, eval_set=eval_set, task=task,
                      error=float(error), stderr=float(stderr), n=int(n))
        return table


# ---------------------------------------------------------------------------
# Full-scale reference results (fixtures for the metric arithmetic)
# ---------------------------------------------------------------------------

def reference_results() -> ResultTable:
    """Error rates from the full-scale experiments this engine mirrors at
    desk scale; used to validate the derived-table arithmetic and as demo
    input for `report`."""
    t = ResultTable()
    # (model, train_set, clean/all62, nistp/all62, p07/all62, clean/digits), stderr per column
    rates = [
        ("Humans", "-", (0.182, 0.001), (0.394, 0.001), (0.469, 0.001), (0.014, 0.000), 0),
        ("SDA0", "clean", (0.237, 0.0014), (0.652, 0.0034), (0.9745, 0.0006), (0.027, 0.0014), 82587),
        ("SDA1", "nistp", (0.171, 0.0013), (0.297, 0.003), (0.297, 0.003), (0.014, 0.001), 82587),
        ("SDA2", "p07", (0.187, 0.0013), (0.336, 0.003), (0.399, 0.0017), (0.017, 0.001), 82587),
        ("MLP0", "clean", (0.242, 0.0015), (0.688, 0.0033), (0.787, 0.0014), (0.0345, 0.0015), 82587),
        ("MLP1", "nistp", (0.230, 0.0015), (0.418, 0.0035), (0.904, 0.001), (0.0385, 0.0016), 82587),
        ("MLP2", "p07", (0.243, 0.0015), (0.460, 0.0035), (0.547, 0.0017), (0.0485, 0.0018), 82587),
    ]
    for model, train_set, clean, nistp, p07, digits, n in rates:
        for eval_set, task, (err, se) in (
            ("clean", "all62", clean),
            ("nistp", "all62", nistp),
            ("p07", "all62", p07),
            ("clean", "digits", digits),
        ):
            t.add(model=model, train_set=train_set, eval_set=eval_set, task=task,
                  error=err, stderr=se, n=n)
    # single-task vs multi-task baselines (clean data only)
    multitask = [
        ("MLP", "digits", 0.0377, 0.0399),
        ("MLP", "lower", 0.174, 0.168),
        ("MLP", "upper", 0.0784, 0.0754),
        ("SDA", "digits", 0.026, 0.0356),
        ("SDA", "lower", 0.123, 0.144),
        ("SDA", "upper", 0.0593, 0.0678),
    ]
    for family, task, single, multi in multitask:
        t.add(model=f"{family}-{task}-single", train_set="clean", eval_set="clean",
              task=task, error=single, stderr=0.0, n=0)
        t.add(model=f"{family}-{task}-multi", train_set="clean", eval_set="clean",
              task=task, error=multi, stderr=0.0, n=0)
    return t


# ---------------------------------------------------------------------------
# Grid configuration
# ---------------------------------------------------------------------------

@dataclass
class GridConfig:
    """Desk-scale defaults: 62-class synthetic task, 5k/1k/1k splits,
    width-64 models, minutes-scale runtime."""

    train_n: int = 5000
    valid_n: int = 1000
    test_n: int = 1000
    hidden: int = 64
    minibatch: int = 20
    mlp_epochs: int = 15
    sda_pretrain_epochs: int = 6
    sda_finetune_epochs: int = 15
    single_task_epochs: int = 15
    mlp_learning_rates: tuple[float, ...] = (0.1,)
    sda_learning_rates: tuple[float, ...] = (0.1,)
    sda_pretrain_learning_rates: tuple[float, ...] = (0.025,)
    corruption_fractions: tuple[float, ...] = (0.2,)
    include_multitask: bool = True
    seed: int = 0

    _INT_KEYS = ("train_n", "valid_n", "test_n", "hidden", "minibatch", "mlp_epochs",
                 "sda_pretrain_epochs", "sda_finetune_epochs", "single_task_epochs", "seed")
    _LIST_KEYS = ("mlp_learning_rates", "sda_learning_rates",
                  "sda_pretrain_learning_rates", "corruption_fractions")

    @classmethod
    def from_text(cls, text: str) -> "GridConfig":
        """Parse line-oriented key=value config ('#' starts a comment)."""
        cfg = cls()
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"line {lineno}: expected key=value, got {line!r}")
            key, value = (s.strip() for s in line.split("=", 1))
            if key in cls._INT_KEYS:
                setattr(cfg, key, int(value))
            elif key in cls._LIST_KEYS:
                setattr(cfg, key, tuple(float(v) for v in value.split(",") if v.strip()))
            elif key == "include_multitask":
                setattr(cfg, key, value.lower() in ("1", "true", "yes"))
            else:
                raise ValueError(f"line {lineno}: unknown key {key!r}")
        return cfg


# ---------------------------------------------------------------------------
# Grid runner
# ---------------------------------------------------------------------------

_DATASET_SEED_OFFSETS = {
    ("clean", "train"): 11, ("clean", "valid"): 12, ("clean", "test"): 13,
    ("nistp", "train"): 21, ("nistp", "valid"): 22, ("nistp", "test"): 23,
    ("p07", "train"): 31, ("p07", "valid"): 32, ("p07", "test"): 33,
}

_PRESET_FOR_SET = {"clean": "raw", "nistp": "nistp", "p07": "p07"}


def _grid_datasets(cfg: GridConfig, log) -> dict[tuple[str, str], LabeledDataset]:
    sources = standin_sources()
    mix = SourceMix.from_dict(DEFAULT_MIX)
    sizes = {"train": cfg.train_n, "valid": cfg.valid_n, "test": cfg.test_n}
    out = {}
    for set_name in TRAIN_SETS:
        spec = preset_spec(_PRESET_FOR_SET[set_name])
        for split, n in sizes.items():
            seed = cfg.seed * 100 + _DATASET_SEED_OFFSETS[(set_name, split)]
            t0 = time.time()
            out[(set_name, split)] = generate_dataset(n, mix, spec, seed, sources=sources)
            log(f"dataset {set_name}/{split}: n={n} ({time.time() - t0:.1f}s)")
    return out


def _task_subset(ds: LabeledDataset, task: str) -> LabeledDataset:
    classes = TASKS[task]
    if classes is None:
        return ds
    keep = np.isin(ds.labels, classes)
    return ds.subset(keep)


def _remap_labels(ds: LabeledDataset, classes: tuple[int, ...]) -> LabeledDataset:
    lut = {c: i for i, c in enumerate(classes)}
    remapped = np.array([lut[int(lab)] for lab in ds.labels], dtype=np.int64)
    return LabeledDataset(ds.images, remapped, dict(ds.meta))


def _train_mlp(cfg, train, valid_sel, classes, epochs, seed_key):
    best = (np.inf, None)
    for lr in cfg.mlp_learning_rates:
        rng = RngStream(cfg.seed, spawn_key=seed_key + (int(lr * 1e6),))
        model = nnet.init_mlp(rng, hidden=cfg.hidden, classes=classes)
        tc = nnet.TrainConfig(learning_rate=lr, minibatch=cfg.minibatch,
                              epochs=epochs, seed=cfg.seed)
        model = nnet.finetune(model, train, valid_sel, tc)
        err = nnet.evaluate(model, valid_sel)
        if err < best[0]:
            best = (err, model)
    return best[1]


def _train_sda(cfg, train, valid_sel, classes, pretrain_epochs, finetune_epochs, seed_key):
    best = (np.inf, None)
    for corr in cfg.corruption_fractions:
        for plr in cfg.sda_pretrain_learning_rates:
            for lr in cfg.sda_learning_rates:
                key = seed_key + (int(corr * 1e3), int(plr * 1e6), int(lr * 1e6))
                rng = RngStream(cfg.seed, spawn_key=key)
                model = nnet.init_sda(rng, width=cfg.hidden, classes=classes,
                                      corruption_fraction=corr)
                tc = nnet.TrainConfig(learning_rate=lr, pretrain_learning_rate=plr,
                                      minibatch=cfg.minibatch, epochs=finetune_epochs,
                                      pretrain_epochs=pretrain_epochs, seed=cfg.seed)
                nnet.pretrain(model, train.matrix(), tc)
                model = nnet.finetune(model, train, valid_sel, tc)
                err = nnet.evaluate(model, valid_sel)
                if err < best[0]:
                    best = (err, model)
    return best[1]


def run_grid(cfg: GridConfig, log=None, models_out: dict | None = None) -> ResultTable:
    """Train the 6-model grid, evaluate every (eval set, task) cell, and
    append single-task baselines. A diverged cell is recorded with NaN
    error; the grid keeps going."""
    log = log or (lambda msg: print(msg, file=sys.stderr))
    data = _grid_datasets(cfg, log)
    nistp_valid = data[("nistp", "valid")]
    table = ResultTable()

    for family in ("MLP", "SDA"):
        for idx, set_name in enumerate(TRAIN_SETS):
            model_name = f"{family}{idx}"
            t0 = time.time()
            try:
                if family == "MLP":
                    model = _train_mlp(cfg, data[(set_name, "train")], nistp_valid, 62,
                                       cfg.mlp_epochs, (1, idx))
                else:
                    model = _train_sda(cfg, data[(set_name, "train")], nistp_valid, 62,
                                       cfg.sda_pretrain_epochs, cfg.sda_finetune_epochs, (2, idx))
            except nnet.DivergenceError as exc:
                log(f"{model_name}: diverged ({exc})")
                for eval_set in EVAL_SETS:
                    for task in TASKS:
                        table.add(model=model_name, train_set=set_name, eval_set=eval_set,
                                  task=task, error=float("nan"), stderr=float("nan"), n=0)
                continue
            if models_out is not None:
                models_out[model_name] = model
            for eval_set in EVAL_SETS:
                for task in TASKS:
                    sub = _task_subset(data[(eval_set, "test")], task)
                    err = nnet.evaluate(model, sub, class_subset=TASKS[task])
                    table.add(model=model_name, train_set=set_name, eval_set=eval_set,
                              task=task, error=err, stderr=stderr_of_rate(err, len(sub)),
                              n=len(sub))
            log(f"{model_name}: trained on {set_name} ({time.time() - t0:.1f}s)")

    if cfg.include_multitask:
        for family in ("MLP", "SDA"):
            for task_idx, (task, classes) in enumerate(TASKS.items()):
                if classes is None:
                    continue
                train = _remap_labels(_task_subset(data[("clean", "train")], task), classes)
                valid = _remap_labels(_task_subset(data[("clean", "valid")], task), classes)
                test = _remap_labels(_task_subset(data[("clean", "test")], task), classes)
                name = f"{family}-{task}-single"
                t0 = time.time()
                try:
                    if family == "MLP":
                        model = _train_mlp(cfg, train, valid, len(classes),
                                           cfg.single_task_epochs, (3, task_idx))
                    else:
                        model = _train_sda(cfg, train, valid, len(classes),
                                           cfg.sda_pretrain_epochs, cfg.single_task_epochs,
                                           (4, task_idx))
                except nnet.DivergenceError as exc:
                    log(f"{name}: diverged ({exc})")
                    table.add(model=name, train_set="clean", eval_set="clean", task=task,
                              error=float("nan"), stderr=float("nan"), n=0)
                    continue
                if models_out is not None:
                    models_out[name] = model
                err = nnet.evaluate(model, test)
                table.add(model=name, train_set="clean", eval_set="clean", task=task,
                          error=err, stderr=stderr_of_rate(err, len(test)), n=len(test))
                log(f"{name}: trained ({time.time() - t0:.1f}s)")
    return table


# ---------------------------------------------------------------------------
# Report formatting
# ---------------------------------------------------------------------------

_REPORT_COLUMNS = (("clean", "all62"), ("nistp", "all62"), ("p07", "all62"), ("clean", "digits"))
_REPORT_HEADERS = ("clean test", "nistp test", "p07 test", "clean digits")


def _fmt_cell(row: ResultRow | None) -> str:
    if row is None or not math.isfinite(row.error):
        return "-"
    return f"{100 * row.error:.2f}% +-{100 * row.stderr:.2f}"


def _pad_table(lines: list[list[str]]) -> str:
    widths = [max(len(row[i]) for row in lines) for i in range(len(lines[0]))]
    out = []
    for row in lines:
        out.append("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())
    return "\n".join(out)


def format_report(table: ResultTable) -> str:
    """Three aligned text tables: raw error rates, relative change from
    perturbed-data training, and the multi-task comparison."""
    sections = []

    models = []
    for name in ("Humans", "MLP0", "MLP1", "MLP2", "SDA0", "SDA1", "SDA2"):
        if any(r.model == name for r in table.rows):
            models.append(name)
    if models:
        lines = [["model"] + list(_REPORT_HEADERS)]
        for name in models:
            lines.append([name] + [_fmt_cell(table.lookup(name, es, tk)) for es, tk in _REPORT_COLUMNS])
        sections.append("Test error rates (error +- standard error)\n" + _pad_table(lines))

    pairs = [("SDA0", "SDA1"), ("SDA0", "SDA2"), ("MLP0", "MLP1"), ("MLP0", "MLP2")]
    lines = [["comparison"] + list(_REPORT_HEADERS)]
    have_pairs = False
    for base, pert in pairs:
        cells = [f"{base}/{pert}-1"]
        for es, tk in _REPORT_COLUMNS:
            r0 = table.lookup(base, es, tk)
            r1 = table.lookup(pert, es, tk)
            if r0 is None or r1 is None or not (math.isfinite(r0.error) and math.isfinite(r1.error)) \
                    or r0.error <= 0 or r1.error <= 0:
                cells.append("-")
            else:
                cells.append(f"{rel_ood_change(r0.error, r1.error):+.1f}%")
                have_pairs = True
        lines.append(cells)
    if have_pairs:
        sections.append(
            "Relative change from training on perturbed data, 100*(err0/errK - 1)\n"
            + _pad_table(lines)
        )

    lines = [["model-task", "single-task", "multi-task", "improvement"]]
    have_multi = False
    for family in ("MLP", "SDA"):
        for task in ("digits", "lower", "upper"):
            single = table.lookup(f"{family}-{task}-single", "clean", task)
            multi = table.lookup(f"{family}-{task}-multi", "clean", task)
            if multi is None:
                multi = table.lookup(f"{family}0", "clean", task)
            if single is None or multi is None:
                continue
            if not (math.isfinite(single.error) and math.isfinite(multi.error)):
                row = [f"{family}-{task}", _fmt_cell(single), _fmt_cell(multi), "-"]
            else:
                imp = rel_multitask_improvement(single.error, multi.error)
                row = [f"{family}-{task}", f"{100 * single.error:.2f}%",
                       f"{100 * multi.error:.2f}%", f"{imp:+.1f}%"]
            lines.append(row)
            have_multi = True
    if have_multi:
        sections.append(
            "Multi-task comparison, improvement = 100*(1 - single/multi)\n" + _pad_table(lines)
        )

    return "\n\n".join(sections) + "\n"
