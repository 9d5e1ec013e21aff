"""Extractor command line: video -> keypoints JSON, and side-by-side rendering.

Exit codes: 0 on success, 1 on any failure.
"""

from __future__ import annotations

import argparse
import sys

from .backends import BACKEND_NAMES
from .cropping import TRACKER_REINIT_INTERVAL
from .errors import ExtractorError
from .extract import CROPPERS, ExtractorConfig, extract
from .render import render_side_by_side


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="poseextract", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_extract = sub.add_parser("extract", help="extract keypoints from a video")
    p_extract.add_argument("--video", required=True)
    p_extract.add_argument("--out", required=True, help="keypoint sequence JSON")
    p_extract.add_argument("--cropper", choices=CROPPERS, default="detector")
    p_extract.add_argument("--backend", choices=BACKEND_NAMES, default="torchvision")
    p_extract.add_argument("--threshold", type=float, default=0.5)
    p_extract.add_argument("--stride", type=int, default=1)
    p_extract.add_argument(
        "--reinit-interval", type=int, default=TRACKER_REINIT_INTERVAL,
        help="tracker mode: frames between detector re-seeds",
    )

    p_render = sub.add_parser("render", help="render synchronized videos side by side")
    p_render.add_argument("--ref-video", required=True)
    p_render.add_argument("--test-video", required=True)
    p_render.add_argument("--alignment", required=True, help="alignment result JSON")
    p_render.add_argument("--out", required=True, help="output video path")

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code else 0

    try:
        if args.command == "extract":
            config = ExtractorConfig(
                video=args.video,
                out=args.out,
                cropper=args.cropper,
                backend=args.backend,
                detection_threshold=args.threshold,
                stride=args.stride,
                reinit_interval=args.reinit_interval,
            )
            out = extract(config)
            print(f"wrote {out}")
        else:
            out = render_side_by_side(
                args.ref_video, args.test_video, args.alignment, args.out
            )
            print(f"wrote {out}")
        return 0
    except (ExtractorError, ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
