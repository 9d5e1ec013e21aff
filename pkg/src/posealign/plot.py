"""Self-contained SVG rendering of a warping path, plus its cost profile CSV.

The plot uses the same pixel scale on both axes (one frame = one unit), so the
visual slope of the polyline equals the test-frames-per-reference-frame rate.
Floats are written with six decimal places to keep output byte-stable.
"""

from __future__ import annotations

from pathlib import Path

from .dtw import AlignmentResult

_MARGIN = 40.0
_MAX_SPAN = 600.0


def _fmt(x: float) -> str:
    return f"{x:.6f}"


def write_path_svg(alignment: AlignmentResult, out_path: str | Path) -> None:
    """Draw the warping path over the (reference, test) index grid."""
    pairs = alignment.path.pairs
    n_ref = max(i for i, _ in pairs) + 1
    n_test = max(j for _, j in pairs) + 1
    scale = _MAX_SPAN / max(n_ref - 1, n_test - 1, 1)
    width = 2 * _MARGIN + (n_ref - 1) * scale
    height = 2 * _MARGIN + (n_test - 1) * scale

    def px(i: int) -> float:
        return _MARGIN + i * scale

    points = " ".join(f"{_fmt(px(i))},{_fmt(px(j))}" for i, j in pairs)
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(width)}" '
        f'height="{_fmt(height)}" viewBox="0 0 {_fmt(width)} {_fmt(height)}">',
        f'<rect x="0" y="0" width="{_fmt(width)}" height="{_fmt(height)}" fill="white"/>',
        f'<rect x="{_fmt(_MARGIN)}" y="{_fmt(_MARGIN)}" '
        f'width="{_fmt(max((n_ref - 1) * scale, 1.0))}" '
        f'height="{_fmt(max((n_test - 1) * scale, 1.0))}" '
        f'fill="none" stroke="#999" stroke-width="1"/>',
        f'<polyline points="{points}" fill="none" stroke="#d62728" stroke-width="2"/>',
        f'<text x="{_fmt(width / 2)}" y="{_fmt(height - 8)}" font-size="14" '
        f'text-anchor="middle">reference frame (0..{n_ref - 1})</text>',
        f'<text x="14" y="{_fmt(height / 2)}" font-size="14" text-anchor="middle" '
        f'transform="rotate(-90 14 {_fmt(height / 2)})">test frame (0..{n_test - 1})</text>',
        "</svg>",
    ]
    Path(out_path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_cost_profile_csv(alignment: AlignmentResult, out_path: str | Path) -> None:
    """Per-step cost along the path; the cost column is empty when the
    alignment file carried no step costs."""
    rows = ["step,ref,test,step_cost"]
    steps = alignment.step_costs
    for k, (i, j) in enumerate(alignment.path):
        cost = _fmt(steps[k]) if steps is not None else ""
        rows.append(f"{k},{i},{j},{cost}")
    Path(out_path).write_text("\n".join(rows) + "\n", encoding="utf-8")
