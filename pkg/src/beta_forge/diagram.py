"""SVG pictures of the maps T_i and the interval catalog on a fixed canvas."""

from __future__ import annotations

from xml.sax.saxutils import escape

from .geometry import ExpansionParams, build_catalog

SIZE = 1000
MARGIN = 80
PLOT = SIZE - 2 * MARGIN
ROW = 14
MAX_BANDS = 320


def _fmt(v: float) -> str:
    return f"{v:.3f}"


def _line(x1: float, y1: float, x2: float, y2: float, **attrs) -> str:
    extra = "".join(f' {k.replace("_", "-")}="{v}"' for k, v in attrs.items())
    return f'<line x1="{_fmt(x1)}" y1="{_fmt(y1)}" x2="{_fmt(x2)}" y2="{_fmt(y2)}"{extra}/>'


def _text(x: float, y: float, body: str, size: int = 14, anchor: str = "start") -> str:
    return (f'<text x="{_fmt(x)}" y="{_fmt(y)}" font-family="serif" font-size="{size}" '
            f'text-anchor="{anchor}">{escape(body)}</text>')


def render_svg(params: ExpansionParams) -> str:
    """Graphs of T_0..T_m over I (normalised to the unit square) and the interval bands below.

    Digit intervals are thin solid bars, choice intervals thick bars, the switch
    region is dotted and fixed-digit intervals are dashed.
    """
    cat = build_catalog(params)
    right = float(params.right_end)
    m = params.m
    # m+1 digit rows plus choice, switch and fixed rows, squeezed for large m
    rows = m + 4
    row = min(ROW, MAX_BANDS / rows)
    height = PLOT - row * rows - 30
    band_top = MARGIN + height + 30
    label = max(1, min(11, int(row)))
    sx = lambda v: MARGIN + PLOT * (v / right)
    sy = lambda v: MARGIN + height * (1 - v / right)
    out = [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
        '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">',
        f"<title>{escape(f'Interval geometry for m={m}, beta={float(params.beta):.6f}')}</title>",
        f'<rect x="0" y="0" width="{SIZE}" height="{SIZE}" fill="white"/>',
        f'<rect x="{MARGIN}" y="{MARGIN}" width="{PLOT}" height="{_fmt(height)}" fill="none" stroke="black" stroke-width="1"/>',
    ]
    out.append('<g id="maps" stroke="black" stroke-width="2">')
    for i, iv in enumerate(cat.digit):
        lo, hi = iv.as_floats()
        out.append(_line(sx(lo), sy(0), sx(hi), sy(right)))
    out.append("</g>")

    out.append('<g id="digit-intervals" stroke="black" stroke-width="1">')
    for i, iv in enumerate(cat.digit):
        lo, hi = iv.as_floats()
        y = band_top + row * i
        out.append(_line(sx(lo), y, sx(hi), y))
        out.append(_text(MARGIN - 8, y + label / 3, f"D{i}", label, "end"))
    out.append("</g>")

    y_choice = band_top + row * (m + 1)
    out.append('<g id="choice-intervals" stroke="black" stroke-width="4">')
    for i in sorted(cat.choice):
        lo, hi = cat.choice[i].as_floats()
        out.append(_line(sx(lo), y_choice, sx(hi), y_choice))
    out.append("</g>")
    out.append(_text(MARGIN - 8, y_choice + label / 3, "C", label, "end"))

    y_switch = y_choice + row
    lo, hi = cat.switch_region.as_floats()
    out.append('<g id="switch-region" stroke="black" stroke-width="2" stroke-dasharray="2,4">')
    out.append(_line(sx(lo), y_switch, sx(hi), y_switch))
    out.append("</g>")
    out.append(_text(MARGIN - 8, y_switch + label / 3, "S", label, "end"))

    y_fixed = y_switch + row
    out.append('<g id="fixed-digit-intervals" stroke="black" stroke-width="2" stroke-dasharray="8,4">')
    for i in sorted(cat.fixed_digit):
        lo, hi = cat.fixed_digit[i].as_floats()
        out.append(_line(sx(lo), y_fixed, sx(hi), y_fixed))
    out.append("</g>")
    out.append(_text(MARGIN - 8, y_fixed + label / 3, "F", label, "end"))

    out.append('<g id="ticks" stroke="black" stroke-width="1">')
    for i in range(1, m + 1):
        t = sx(i / float(params.beta))
        out.append(_line(t, sy(0) - 5, t, sy(0) + 5))
    out.append("</g>")
    out.append(_text(sx(0), sy(0) + 18, "0", 12, "middle"))
    out.append(_text(sx(right), sy(0) + 18, f"{right:.4f}", 12, "middle"))
    out.append(_text(SIZE / 2, MARGIN / 2, f"m = {m}, beta = {float(params.beta):.6f}", 18, "middle"))
    out.append("</svg>")
    return "\n".join(out) + "\n"
