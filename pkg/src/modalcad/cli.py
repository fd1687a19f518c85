"""Command line entry points: `modalcad serve` and `modalcad replay`."""
from __future__ import annotations

import argparse
import asyncio
import sys

from .bindings import KeymapError, default_keymap, load_keymap
from .lexicon import LexiconError, default_lexicon, load_lexicon
from .replay import TraceError, load_trace, metrics, replay, write_actions, write_metrics
from .scene import scene_hash, write_scene


def _load_configs(args):
    lexicon = load_lexicon(args.lexicon) if args.lexicon else default_lexicon()
    keymap = load_keymap(args.keymap) if args.keymap else default_keymap()
    return lexicon, keymap


def _cmd_serve(args) -> int:
    from .server import configure_logging, run_server

    configure_logging()
    lexicon, keymap = _load_configs(args)
    try:
        asyncio.run(run_server(args.host, args.port, lexicon, keymap))
    except KeyboardInterrupt:
        pass
    return 0


def _cmd_replay(args) -> int:
    lexicon, keymap = _load_configs(args)
    records = load_trace(args.trace)
    result = replay(records, lexicon, keymap)
    if args.out_scene:
        write_scene(result.scene, args.out_scene)
    if args.out_actions:
        write_actions(result.actions, args.out_actions)
    if args.out_metrics:
        write_metrics(metrics(result.log, result.trace_start_ms), args.out_metrics)
    directive_count = sum(len(e.directives) for e in result.log)
    print(
        f"replayed {len(records)} records: {len(result.scene.objects)} objects, "
        f"{directive_count} directives, {len(result.actions)} actions, "
        f"scene {scene_hash(result.scene)[:12]}"
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="modalcad",
        description="Multimodal command inference engine for collaborative 3D modeling",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    serve = sub.add_parser("serve", help="host shared scene sessions over websockets")
    serve.add_argument("--port", type=int, required=True)
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--lexicon", help="lexicon config JSON (default: packaged)")
    serve.add_argument("--keymap", help="keymap config JSON (default: packaged)")
    serve.set_defaults(func=_cmd_serve)

    rep = sub.add_parser("replay", help="deterministically replay a recorded trace")
    rep.add_argument("--trace", required=True, help="line-delimited JSON trace file")
    rep.add_argument("--lexicon", help="lexicon config JSON (default: packaged)")
    rep.add_argument("--keymap", help="keymap config JSON (default: packaged)")
    rep.add_argument("--out-scene", help="write the final scene as canonical JSON")
    rep.add_argument("--out-actions", help="write the lowered action log (JSONL)")
    rep.add_argument("--out-metrics", help="write session metrics JSON")
    rep.set_defaults(func=_cmd_replay)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (LexiconError, KeymapError, TraceError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
