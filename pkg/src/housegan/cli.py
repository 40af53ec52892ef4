"""`housegan` command line: train, generate, evaluate, synth-corpus, serve."""

from __future__ import annotations

import json
import os
from pathlib import Path

import click
import numpy as np

from .core import BubbleDiagram, dump_json_canonical
from .dataio import GROUPS, CorpusConfig, Palette, load_corpus, rasterize, save_corpus, synthesize_corpus
from .metrics import (
    EvalProtocol,
    GedConfig,
    compatibility_report,
    diversity_report,
    get_feature_extractor,
    layout_sampler_from_checkpoint,
)
from .models import AblationMode, PRESETS, load_checkpoint
from .training import TrainConfig, train_run

CHECKPOINT_DIR_ENV = "HOUSEGAN_CHECKPOINT_DIR"

_ABLATION_CHOICES = ("full", "no-conn", "no-type", "cnn-only", "gcn")


def _variant_and_mode(ablation: str) -> tuple[str, AblationMode]:
    if ablation == "cnn-only":
        return "cnn-only", AblationMode()
    if ablation == "gcn":
        return "gcn", AblationMode()
    return "housegan", AblationMode.from_name(ablation)


def _resolve_checkpoint(ckpt: str) -> Path:
    path = Path(ckpt)
    if path.is_file():
        return path
    base = os.environ.get(CHECKPOINT_DIR_ENV)
    if base:
        for candidate in (Path(base) / ckpt, Path(base) / f"{ckpt}.npz"):
            if candidate.is_file():
                return candidate
    raise click.ClickException(f"checkpoint {ckpt!r} not found (set ${CHECKPOINT_DIR_ENV} or pass a path)")


@click.group()
def main():
    """Graph-constrained house layout generation."""


@main.command("synth-corpus")
@click.option("--out", "out_dir", required=True, type=click.Path(path_type=Path))
@click.option("--seed", default=0, show_default=True, type=int)
@click.option(
    "--counts",
    default="1-3=40,4-6=40,7-9=40,10-12=40,13+=40",
    show_default=True,
    help="samples per group, e.g. '1-3=100,4-6=200'",
)
@click.option("--max-rooms", default=18, show_default=True, type=int)
@click.option("--inset-prob", default=0.15, show_default=True, type=float)
def synth_corpus(out_dir: Path, seed: int, counts: str, max_rooms: int, inset_prob: float):
    """Generate the synthetic stand-in corpus."""
    parsed = {}
    for item in counts.split(","):
        group, _, num = item.partition("=")
        parsed[group.strip()] = int(num)
    config = CorpusConfig(counts=parsed, max_rooms=max_rooms, inset_probability=inset_prob)
    corpus = synthesize_corpus(config, seed)
    save_corpus(corpus, out_dir)
    click.echo(f"wrote {len(corpus)} samples to {out_dir} (groups: {corpus.group_counts()})")


@main.command()
@click.option("--corpus", "corpus_dir", required=True, type=click.Path(exists=True, path_type=Path))
@click.option("--group", required=True, type=click.Choice(GROUPS))
@click.option("--ablation", default="full", show_default=True, type=click.Choice(_ABLATION_CHOICES))
@click.option("--iters", default=None, type=int, help="iteration budget (default: the full 200000)")
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--out", "out_path", required=True, type=click.Path(path_type=Path))
@click.option("--preset", default="default", show_default=True, type=click.Choice(sorted(PRESETS)))
@click.option("--batch-size", default=None, type=int)
@click.option("--lr-g", default=None, type=float)
@click.option("--lr-d", default=None, type=float)
@click.option("--beta2", default=None, type=float)
@click.option("--n-critic", default=None, type=int)
@click.option("--gp-weight", default=None, type=float)
@click.option("--log", "log_path", default=None, type=click.Path(path_type=Path), help="metrics CSV (default: <out>.csv)")
@click.option("--checkpoint-every", default=None, type=int)
@click.option("--progress-every", default=100, show_default=True, type=int)
def train(corpus_dir, group, ablation, iters, seed, out_path, preset, batch_size, lr_g, lr_d, beta2, n_critic, gp_weight, log_path, checkpoint_every, progress_every):
    """Train with the target group held out (k-fold exclusion)."""
    corpus = load_corpus(corpus_dir)
    overrides = {
        k: v
        for k, v in {
            "iterations": iters,
            "seed": seed,
            "batch_size": batch_size,
            "learning_rate_g": lr_g,
            "learning_rate_d": lr_d,
            "adam_beta2": beta2,
            "n_critic": n_critic,
            "gp_weight": gp_weight,
        }.items()
        if v is not None
    }
    config = TrainConfig(**overrides)
    variant, mode = _variant_and_mode(ablation)
    log_path = log_path or out_path.with_suffix(".csv")
    train_run(
        config,
        corpus,
        group,
        variant=variant,
        preset=PRESETS[preset],
        ablation=mode,
        checkpoint_path=out_path,
        log_path=log_path,
        checkpoint_every=checkpoint_every,
        progress_every=progress_every,
    )
    click.echo(f"checkpoint: {out_path}\nmetrics log: {log_path}")


@main.command()
@click.option("--ckpt", required=True, help="checkpoint path or id under $" + CHECKPOINT_DIR_ENV)
@click.option("--diagram", "diagram_path", required=True, type=click.Path(exists=True, path_type=Path))
@click.option("-n", "--num-samples", default=10, show_default=True, type=int)
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--out", "out_dir", required=True, type=click.Path(path_type=Path))
@click.option("--png/--no-png", default=True, show_default=True, help="also render each layout")
def generate(ckpt, diagram_path, num_samples, seed, out_dir, png):
    """Generate layout variations for a bubble diagram."""
    from .metrics import compatibility

    checkpoint = load_checkpoint(_resolve_checkpoint(ckpt))
    sampler = layout_sampler_from_checkpoint(checkpoint)
    diagram = BubbleDiagram.from_json_dict(json.loads(diagram_path.read_text()))
    palette = Palette.default()
    rng = np.random.default_rng(seed)
    out_dir.mkdir(parents=True, exist_ok=True)
    for index in range(num_samples):
        layout = sampler(diagram, rng)
        score = compatibility(diagram, layout)
        payload = {
            "layout": layout.to_json_dict(),
            "compatibility": {
                "distance": score.distance,
                "exact": score.exact,
                "degenerate_rooms": score.degenerate_rooms,
            },
        }
        (out_dir / f"sample_{index:03d}.json").write_text(dump_json_canonical(payload) + "\n")
        if png:
            from PIL import Image

            image = rasterize(layout, palette, 256)
            Image.fromarray(image).save(out_dir / f"sample_{index:03d}.png")
        click.echo(f"sample {index}: compatibility={score.distance:g}")


@main.command()
@click.option("--ckpt", required=True)
@click.option("--corpus", "corpus_dir", required=True, type=click.Path(exists=True, path_type=Path))
@click.option("--group", required=True, type=click.Choice(GROUPS))
@click.option("--metric", required=True, type=click.Choice(["compat", "fid"]))
@click.option("--samples", default=None, type=int, help="diagram budget (default: published protocol)")
@click.option("--timeout", default=10.0, show_default=True, type=float, help="GED seconds per pair")
@click.option("--ged-upper-bound", default=40.0, show_default=True, type=float)
@click.option("--extractor", default="pixels-rp64", show_default=True)
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--report", "report_path", required=True, type=click.Path(path_type=Path))
def evaluate(ckpt, corpus_dir, group, metric, samples, timeout, ged_upper_bound, extractor, seed, report_path):
    """Score a checkpoint on the held-out group; write the report JSON."""
    checkpoint = load_checkpoint(_resolve_checkpoint(ckpt))
    sampler = layout_sampler_from_checkpoint(checkpoint)
    corpus = load_corpus(corpus_dir)
    group_samples = corpus.by_group(group)
    if not group_samples:
        raise click.ClickException(f"corpus has no samples in group {group!r}")
    if metric == "compat":
        protocol = EvalProtocol.compatibility_default(group)
        if samples is not None:
            protocol = EvalProtocol(samples, protocol.variations_per_diagram)
        report = compatibility_report(
            sampler,
            group_samples,
            group=group,
            protocol=protocol,
            ged_config=GedConfig(upper_bound=ged_upper_bound, timeout=timeout),
            seed=seed,
        )
    else:
        protocol = EvalProtocol.diversity_default()
        if samples is not None:
            protocol = EvalProtocol(samples, protocol.variations_per_diagram)
        report = diversity_report(
            sampler,
            group_samples,
            group=group,
            protocol=protocol,
            extractor=get_feature_extractor(extractor),
            seed=seed,
        )
    report["checkpoint"] = checkpoint.describe()
    report_path.parent.mkdir(parents=True, exist_ok=True)
    report_path.write_text(json.dumps(report, indent=2) + "\n")
    click.echo(f"report: {report_path}")


@main.command()
@click.option("--checkpoint-dir", default=None, type=click.Path(path_type=Path), help="default: $" + CHECKPOINT_DIR_ENV)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8480, show_default=True, type=int)
def serve(checkpoint_dir, host, port):
    """Run the HTTP generation service."""
    import uvicorn

    from .service import create_app

    checkpoint_dir = checkpoint_dir or os.environ.get(CHECKPOINT_DIR_ENV)
    if checkpoint_dir is None:
        raise click.ClickException(f"pass --checkpoint-dir or set ${CHECKPOINT_DIR_ENV}")
    app = create_app(checkpoint_dir=checkpoint_dir)
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
