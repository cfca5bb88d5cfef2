"""Self-contained SVG rendering of the entry/exit-probability figure.

This module only draws coordinates handed to it (see cavity.RegionGeometry);
it computes no physics.  The viewBox is the probability unit square; the
y axis is flipped at formatting time because SVG y grows downward.
"""

_STROKE = 0.004
_HAIRLINE = 0.002
_DASH = "0.02,0.012"


def _pt(x: float, y: float) -> str:
    return f"{x:.6f},{1.0 - y:.6f}"


def _poly(points, ident: str, style: str) -> str:
    coords = " ".join(_pt(x, y) for x, y in points)
    return f'<polygon id="{ident}" points="{coords}" {style}/>'


def _line(p1, p2, ident: str, style: str) -> str:
    x1, y1 = p1
    x2, y2 = p2
    return (
        f'<line id="{ident}" x1="{x1:.6f}" y1="{1.0 - y1:.6f}" '
        f'x2="{x2:.6f}" y2="{1.0 - y2:.6f}" {style}/>'
    )


def region_figure_svg(geom) -> str:
    """Render a RegionGeometry: unit square, diagonal, bands, thermal lines,
    and (when the bands overlap) the operating point with its work arrow."""
    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 1 1" '
        'width="640" height="640">',
        "<defs>",
        '<marker id="arrowhead" viewBox="0 0 4 4" refX="2" refY="2" '
        'markerWidth="4" markerHeight="4" orient="auto-start-reverse">'
        '<path d="M 0 0 L 4 2 L 0 4 z" fill="#8a6d00"/></marker>',
        "</defs>",
        f'<rect id="frame" x="0" y="0" width="1" height="1" fill="#ffffff" '
        f'stroke="#222222" stroke-width="{_HAIRLINE}"/>',
        _poly(geom.hot_upper_polygon, "hot-region", 'fill="#e8b4b0" fill-opacity="0.65"'),
        _poly(geom.cold_lower_polygon, "cold-region", 'fill="#b0c6e8" fill-opacity="0.65"'),
        _poly(
            geom.cold_reflected_polygon,
            "cold-region-reflected",
            f'fill="none" stroke="#8c8c8c" stroke-width="{_HAIRLINE}" '
            f'stroke-dasharray="{_DASH}"',
        ),
    ]
    if geom.overlap_polygon:
        parts.append(
            _poly(geom.overlap_polygon, "overlap", 'fill="#f2d47a" fill-opacity="0.8"')
        )
    parts.extend(
        [
            _line((0.0, 0.0), (1.0, 1.0), "diagonal",
                  f'stroke="#222222" stroke-width="{_HAIRLINE}"'),
            _line(*geom.hot_boundary, ident="hot-boundary",
                  style=f'stroke="#b03a2e" stroke-width="{_STROKE}"'),
            _line(*geom.cold_boundary, ident="cold-boundary",
                  style=f'stroke="#1f618d" stroke-width="{_STROKE}"'),
            _line((0.0, geom.gibbs_hot), (1.0, geom.gibbs_hot), "thermal-hot",
                  f'stroke="#b03a2e" stroke-width="{_HAIRLINE}" '
                  f'stroke-dasharray="{_DASH}"'),
            _line((0.0, geom.gibbs_cold), (1.0, geom.gibbs_cold), "thermal-cold",
                  f'stroke="#1f618d" stroke-width="{_HAIRLINE}" '
                  f'stroke-dasharray="{_DASH}"'),
        ]
    )
    if geom.work_arrow is not None:
        parts.append(
            _line(*geom.work_arrow, ident="work-arrow",
                  style=f'stroke="#8a6d00" stroke-width="{_STROKE}" '
                  'marker-start="url(#arrowhead)" marker-end="url(#arrowhead)"')
        )
    if geom.operating_point is not None:
        x, y = geom.operating_point
        parts.append(
            f'<circle id="operating-point" cx="{x:.6f}" cy="{1.0 - y:.6f}" '
            f'r="0.01" fill="#8a6d00"/>'
        )
        parts.append(
            f'<circle id="operating-point-mirror" cx="{y:.6f}" cy="{1.0 - x:.6f}" '
            f'r="0.01" fill="none" stroke="#8a6d00" stroke-width="{_HAIRLINE}"/>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def timeseries_figure_svg(points, bound_lo: float, bound_hi: float,
                          gibbs_point: float) -> str:
    """Render an occupation trace: (x, p) vertices already scaled to the
    unit square on the x axis, with the reachable band and the Gibbs line."""
    coords = " ".join(_pt(x, y) for x, y in points)
    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 1 1" '
        'width="640" height="640">',
        f'<rect id="frame" x="0" y="0" width="1" height="1" fill="#ffffff" '
        f'stroke="#222222" stroke-width="{_HAIRLINE}"/>',
        _line((0.0, bound_lo), (1.0, bound_lo), "bound-lo",
              f'stroke="#8c8c8c" stroke-width="{_HAIRLINE}" stroke-dasharray="{_DASH}"'),
        _line((0.0, bound_hi), (1.0, bound_hi), "bound-hi",
              f'stroke="#8c8c8c" stroke-width="{_HAIRLINE}" stroke-dasharray="{_DASH}"'),
        _line((0.0, gibbs_point), (1.0, gibbs_point), "gibbs-line",
              f'stroke="#b03a2e" stroke-width="{_HAIRLINE}" stroke-dasharray="{_DASH}"'),
        f'<polyline id="occupation" points="{coords}" fill="none" '
        f'stroke="#1f618d" stroke-width="{_STROKE}"/>',
        "</svg>",
    ]
    return "\n".join(parts) + "\n"
