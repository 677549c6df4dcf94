"""Command-line entry points: one-shot generation, the service, inspection.

Exit codes: 2 for input problems (bad flags, malformed analysis or corpora),
3 for failures inside the pipeline itself.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import pipeline
from .annotate import dump_manifest
from .config import load_config
from .corpus import EmptyCorpus, MalformedChord
from .emit import dump_timeline
from .vision import EmptyAnalysis, NoFaces, SchemaError

INPUT_ERRORS = (SchemaError, EmptyAnalysis, NoFaces, MalformedChord,
                EmptyCorpus, json.JSONDecodeError, UnicodeDecodeError, OSError)


@click.group()
def main():
    """Film-score generation from visual analysis documents."""


@main.command()
@click.option("--analysis", "analysis_path", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="Film analysis JSON document.")
@click.option("--melody-corpus", "melody_path", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="Melody training corpus (ABC subset).")
@click.option("--chord-corpus", "chord_path", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="Chord-sheet training corpus.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False),
              default=None, help="YAML config overriding engine defaults.")
@click.option("--out-dir", type=click.Path(file_okay=False), default=".",
              show_default=True)
@click.option("--candidates-only", is_flag=True,
              help="Write the annotated pool manifests and stop.")
def generate(analysis_path, melody_path, chord_path, seed, config_path,
             out_dir, candidates_only):
    """Generate score.mid, score.chords.txt and timeline.json."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    try:
        cfg = load_config(config_path)
        analysis_doc = json.loads(Path(analysis_path).read_text())
        melody_text = Path(melody_path).read_text()
        chord_text = Path(chord_path).read_text()
    except INPUT_ERRORS as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)

    try:
        if candidates_only:
            pools = pipeline.build_pools(melody_text, chord_text, seed, cfg)
            (out / "melodies.manifest.json").write_text(
                dump_manifest(pools.melody_manifest))
            (out / "progressions.manifest.json").write_text(
                dump_manifest(pools.progression_manifest))
            click.echo(f"wrote pool manifests to {out}")
            return
        result = pipeline.run_pipeline(analysis_doc, melody_text, chord_text,
                                       seed, cfg)
    except INPUT_ERRORS as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    except Exception as exc:
        click.echo(f"pipeline error: {exc}", err=True)
        sys.exit(3)

    (out / "score.mid").write_bytes(result.render.midi)
    (out / "score.chords.txt").write_text(result.render.chord_sheet)
    (out / "timeline.json").write_text(dump_timeline(result.render.timeline))
    click.echo(f"wrote score.mid, score.chords.txt, timeline.json to {out}")


@main.command()
@click.option("--port", type=int, default=8420, show_default=True)
@click.option("--data-dir", type=click.Path(file_okay=False), required=True)
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False),
              default=None)
@click.option("--ui-dir", type=click.Path(file_okay=False), default=None,
              help="Optional static frontend to serve at /.")
@click.option("--host", default="127.0.0.1", show_default=True)
def serve(port, data_dir, config_path, ui_dir, host):
    """Run the project service for the selection UI."""
    import uvicorn

    from .service import create_app

    app = create_app(data_dir, load_config(config_path), ui_dir)
    uvicorn.run(app, host=host, port=port, log_level="warning")


@main.command()
@click.option("--project", "project_id", required=True)
@click.option("--data-dir", type=click.Path(exists=True, file_okay=False),
              required=True)
def inspect(project_id, data_dir):
    """Print a project's state as JSON."""
    from .project import ProjectNotFound, ProjectStore

    store = ProjectStore(data_dir)
    try:
        info = store.describe(project_id)
        info["segments_detail"] = store.segments(project_id)
    except ProjectNotFound:
        click.echo(f"error: no project {project_id!r}", err=True)
        sys.exit(2)
    click.echo(json.dumps(info, indent=2, sort_keys=True))


if __name__ == "__main__":
    main()
