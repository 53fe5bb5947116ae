"""Signature functions in the angle coordinate ``t`` (``omega = exp(2 pi i t)``).

Step functions are stored over the rational parameter ``s``; the angle is
``t = atan(s) / pi``, which maps ``s in (0, oo)`` onto ``t in (0, 1/2)``.
Jump locations are irrational in general, so they are refined to a tiny
bracket and then converted at float precision, which is plenty for drawing.
"""

from __future__ import annotations

import csv
import io
import math
from fractions import Fraction
from typing import Optional

from .seifert import SignatureStepFunction

PLOT_WIDTH = Fraction(1, 10**15)


def s_to_t(s) -> float:
    return math.atan(float(s)) / math.pi


def t_segments(sfn: SignatureStepFunction) -> list[tuple[float, float, int]]:
    """``(t_lo, t_hi, value)`` for each segment, covering ``(0, 1/2)``."""
    fine = sfn.refined(PLOT_WIDTH)
    out = []
    for left, right, value in fine.segments():
        t_lo = 0.0 if left is None else s_to_t(left.midpoint())
        t_hi = 0.5 if right is None else s_to_t(right.midpoint())
        out.append((t_lo, t_hi, value))
    return out


def segments_csv(sfn: SignatureStepFunction) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t_lo", "t_hi", "value"])
    for t_lo, t_hi, v in t_segments(sfn):
        w.writerow([f"{t_lo:.12f}", f"{t_hi:.12f}", v])
    w.writerow(["0.5", "0.5", sfn.value_at_minus_one])
    return buf.getvalue()


def render_svg(sfn: SignatureStepFunction, path, title: Optional[str] = None) -> None:
    """Draw the step function over ``t in (0, 1/2]`` into an SVG file.

    Segment ends are open circles; the averaged value at each jump and the
    value at ``t = 1/2`` are filled markers.
    """
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    segs = t_segments(sfn)
    fig, ax = plt.subplots(figsize=(5, 3))
    for t_lo, t_hi, v in segs:
        ax.plot([t_lo, t_hi], [v, v], color="C0", linewidth=2)
    for (t_lo, t_hi, v), jump in zip(segs[1:], sfn.jumps):
        ax.plot([t_lo, t_lo], [jump.left, jump.right], color="C0", linewidth=0.6, linestyle=":")
        ax.plot([t_lo, t_lo], [jump.left, jump.right], "o", mfc="white", mec="C0", markersize=5)
        ax.plot([t_lo], [float(jump.value_at_jump)], "o", color="C0", markersize=4)
    if segs:
        last = segs[-1]
        if last[2] != sfn.value_at_minus_one:
            ax.plot([0.5], [last[2]], "o", mfc="white", mec="C0", markersize=5)
    ax.plot([0.5], [sfn.value_at_minus_one], "o", color="C0", markersize=5)
    values = sorted(sfn.all_values() | {0})
    ax.set_xlim(0, 0.52)
    ax.set_ylim(values[0] - 1, values[-1] + 1)
    ax.set_yticks(range(values[0], values[-1] + 1, 2 if values[-1] - values[0] > 8 else 1))
    ax.axhline(0, color="0.7", linewidth=0.5)
    ax.set_xlabel("t")
    ax.set_ylabel("signature")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)
