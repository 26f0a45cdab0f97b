from typing import List

from app.schemas.report import FiberOut, PointReport, Report, ResolutionOut, TripleOut

WIDTH = 78


def _triple(triple: TripleOut) -> str:
    return f"({triple.a},{triple.b},{triple.d})"


def _fiber(fiber: FiberOut) -> str:
    return f"{fiber.symbol} {_triple(fiber.orders)}"


def _resolution_lines(resolution: ResolutionOut) -> List[str]:
    lines = [
        f"  resolution     {resolution.status} (depth {resolution.depth}, exit {resolution.exit_code})",
        f"  ledger         nets {[e.net for e in resolution.ledger.entries]}, total "
        f"{resolution.ledger.total_discrepancy} " + ("crepant" if resolution.crepant else "NOT crepant"),
        f"  canonical      {resolution.canonical_bound.message}",
    ]
    if resolution.detail:
        lines.append(f"  stopped        {resolution.detail}")
    for step in resolution.steps:
        parent = f" from {step.parent}" if step.parent else ""
        lines.append(
            f"  {step.label:<4} at ({', '.join(step.center)}) on {step.parent_chart}{parent}: k={step.twist_k}"
        )
        lines.append(f"       {step.chart_u.name}: f = {step.chart_u.f}")
        lines.append(f"       {' ' * len(step.chart_u.name)}  g = {step.chart_u.g}")
    for surface in resolution.surfaces:
        places = ", ".join(
            f"{place.fiber.symbol}@{place.location}" + (f"x{place.geometric_points}" if place.geometric_points > 1 else "")
            for place in surface.places
        ) or "none"
        lines.append(
            f"  surface {surface.step:<4} f|E = {surface.f_restricted}; g|E = {surface.g_restricted}; "
            f"delta|E = {surface.delta_restricted}"
        )
        lines.append(f"       fibers {places}; total {surface.total_delta_degree}")
        flags = [
            "rational" if surface.rational else "not rational",
            "isotrivial" if surface.isotrivial else "",
            "(4,6,12) point" if surface.has_46_12_point else "",
            "singular generic fiber" if surface.generic_fiber_singular else "",
        ]
        lines.append("       " + ", ".join(flag for flag in flags if flag))
        mw = surface.mordell_weil
        if mw is not None:
            lines.append(
                f"       MW rank {mw.rank}, torsion {mw.torsion_structure} (order {mw.torsion_order}), "
                f"census {mw.census.sections} + {mw.census.fiber_components} = {mw.census.total}, {mw.dichotomy}"
            )
    bounds = resolution.bounds
    if bounds is not None:
        upper = bounds.upper_extremal if bounds.upper_extremal is not None else "n/a"
        lines.append(
            f"  bounds (n={bounds.n_surfaces})  any >= {bounds.lower_any}, generic >= {bounds.lower_generic}, "
            f"chain >= {bounds.lower_chain}, product >= {bounds.lower_product}, upper <= {upper}"
        )
        for footnote in bounds.footnotes:
            lines.append(f"  note           {footnote}")
    return lines


def _point_lines(point: PointReport) -> List[str]:
    lines = [f"point ({', '.join(point.point)})"]
    if point.fiber is not None:
        lines.append(f"  fiber          {_fiber(point.fiber)}")
    if point.isolation is not None:
        mode = "" if point.isolation.mode == "class" else f" [{point.isolation.mode} mode]"
        lines.append(f"  isolation      {point.isolation.reason}{mode}")
        for candidate in point.isolation.candidates:
            lines.append(f"    {candidate.source:<4} {candidate.divisor}: {_triple(candidate.orders)}")
    if point.resolution is not None:
        lines.extend(_resolution_lines(point.resolution))
    if point.error is not None:
        lines.append(f"  error          {point.error.kind}: {point.error.detail} (exit {point.error.exit_code})")
    return lines


def render_report(report: Report) -> str:
    """Fixed-width human summary of a report"""
    lines = [
        "=" * WIDTH,
        f"{report.version} :: {report.command}",
        f"variables {', '.join(report.job.variables)}",
        f"f     = {report.job.f}",
        f"g     = {report.job.g}",
        f"delta = {report.model.delta}",
        "minimal" if report.model.minimality.minimal else f"NOT minimal (witness {report.model.minimality.witness})",
        "-" * WIDTH,
    ]
    for point in report.points:
        lines.extend(_point_lines(point))
    for divisor in report.divisors:
        if divisor.error is not None:
            lines.append(f"divisor {divisor.divisor}: {divisor.error.kind}: {divisor.error.detail}")
        else:
            lines.append(f"divisor {divisor.divisor}: {_fiber(divisor.fiber)} twist k={divisor.twist_k}")
    for warning in report.warnings:
        lines.append(f"warning: {warning}")
    lines.append("=" * WIDTH)
    lines.append(f"exit code {report.exit_code}")
    return "\n".join(lines)
