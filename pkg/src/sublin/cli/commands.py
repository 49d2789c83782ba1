"""One function per subcommand; each returns a JSON-ready result and writes its files."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable

from ..boundary import lipschitz_certificate
from ..coverings import ShrinkParams, fit_lojasiewicz, judge_one_regular, shrink_to_regular
from ..errors import ConfigurationError, SublinError
from ..fixtures import HALF, cusp_open, germ_catalog, u12_family
from ..geometry import Grid, write_pgm
from ..growth import gevrey_membership, harmonic_estimate_check, temperate_order_estimate
from ..sheaf import ConstructibleSheaf, cech_complex, cohomology, germ_cusp_F, sheaf_N_sections, sheaf_mv_check
from .plots import overlay_svg
from .scene import Scene

APERTURES = (1, 2, 4)
BATTERY_EPS = Fraction(1, 4)


@dataclass
class Outputs:
    """Where plots go, and which kinds were asked for."""

    out: Path | None = None
    pgm: bool = False
    svg: bool = False
    written: list[str] = field(default_factory=list)

    def _path(self, name: str) -> Path:
        if self.out is None:
            raise ConfigurationError("--pgm and --svg need --out DIR")
        self.out.mkdir(parents=True, exist_ok=True)
        return self.out / name

    def mask(self, name: str, mask) -> None:
        if self.pgm:
            write_pgm(mask, self._path(f"{name}.pgm"))
            self.written.append(f"{name}.pgm")

    def overlay(self, name: str, masks, points=(), title: str = "") -> None:
        if self.svg:
            self._path(f"{name}.svg").write_text(overlay_svg(masks, points, title))
            self.written.append(f"{name}.svg")


def _finest(scene: Scene, bbox) -> Grid:
    return Grid(bbox, scene.grids[-1])


def cover_check(scene: Scene, name: str, outputs: Outputs) -> dict:
    cov = scene.covering(name)
    if not cov.members:
        raise ConfigurationError(f"covering {name!r} is empty")
    verdict = judge_one_regular(cov.members, cov.ambient, scene.grids)
    try:
        fit = fit_lojasiewicz(cov.members, cov.ambient, scene.grids).to_json()
    except SublinError as exc:
        fit = {"error": str(exc)}
    grid = _finest(scene, cov.bbox)
    outputs.overlay(
        f"{name}-cover",
        [(m.label or f"U{k}", m.rasterize(grid)) for k, m in enumerate(cov.members, 1)],
        [(f"sup ratio {w.ratio:.3g}", w.point) for w in verdict.witnesses[-1:]],
        f"{name}: {verdict.kind.value}",
    )
    return {"covering": name, "verdict": verdict.to_json(), "lojasiewicz": fit}


def cover_refine(scene: Scene, name: str, outputs: Outputs, C=None, D=None, epsilon=None) -> dict:
    cov = scene.covering(name)
    if not cov.members:
        raise ConfigurationError(f"covering {name!r} is empty")
    params = None
    if C is not None:
        c = Fraction(C)
        d = Fraction(D) if D is not None else c + 1
        params = ShrinkParams(c, d, Fraction(epsilon) if epsilon is not None else 1 / (2 * (d + 1)))
    grid = _finest(scene, cov.bbox)
    result = shrink_to_regular(cov.members, params, grid, ambient=cov.ambient, resolutions=scene.grids)
    for k, m in enumerate(result.shrunk, 1):
        outputs.mask(f"{name}-shrunk-{k}", m)
    outputs.overlay(
        f"{name}-shrunk", [(f"U'{k}", m) for k, m in enumerate(result.shrunk, 1)], title=f"{name}: shrunk covering"
    )
    return {
        "covering": name,
        "resolution": grid.resolution,
        "certificate": result.certificate_json(),
        "shrunk_cells": [m.count() for m in result.shrunk],
    }


def parse_sheaf(spec: str | None, scene: Scene, default) -> ConstructibleSheaf:
    """``name[:mult],name[:mult]`` as a direct sum of constant sheaves k_V."""
    if not spec:
        return ConstructibleSheaf.k(default)
    parts = []
    for item in spec.split(","):
        name, _, mult = item.strip().partition(":")
        try:
            parts.append(ConstructibleSheaf.k(scene.region(name), int(mult) if mult else 1))
        except ValueError:
            raise ConfigurationError(f"bad multiplicity in {item!r}") from None
    return ConstructibleSheaf.direct_sum(*parts)


def mv_battery(u1, u2, grid: Grid, apertures=APERTURES) -> list[dict]:
    """Cokernel of the sheaf Mayer-Vietoris map over V = U_{A,1/4}, beside N(V)."""
    rows = []
    for a in apertures:
        v = cusp_open(a, BATTERY_EPS, u1.bbox)
        mv = sheaf_mv_check(u1, u2, v, grid)
        rows.append({
            "A": str(a),
            "epsilon": str(BATTERY_EPS),
            "coker_rank": mv.coker_rank,
            "N_rank": sheaf_N_sections(v),
            "fully_exact": mv.fully_exact,
        })
    return rows


def cech(scene: Scene, name: str, outputs: Outputs, sheaf: str | None = None, battery: bool = False) -> dict:
    cov = scene.covering(name)
    F = parse_sheaf(sheaf, scene, cov.ambient)
    grid = _finest(scene, cov.bbox)
    complex_ = cech_complex(cov, F, grid)
    report = cohomology(complex_)
    out = {
        "covering": name,
        "resolution": grid.resolution,
        "sheaf": F.describe(),
        "complex": complex_.to_json(),
        "cohomology": report.to_json(),
    }
    if battery:
        if len(cov.members) != 2:
            raise ConfigurationError("the Mayer-Vietoris battery needs a two-member covering")
        out["mv_battery"] = mv_battery(*cov.members, grid)
    return out


def lipschitz(scene: Scene, name: str, outputs: Outputs, samples: int = 48) -> dict:
    region = scene.region(name)
    cert = lipschitz_certificate(region, samples, resolutions=scene.grids)
    grid = _finest(scene, region.bbox)
    outputs.mask(f"{name}-region", region.rasterize(grid))
    outputs.overlay(
        f"{name}-lipschitz",
        [(name, region.rasterize(grid))],
        [(r.status.value, r.point) for r in cert.records if r.status.value != "Certified"],
        f"{name}: {cert.verdict.value}",
    )
    return {"region": name, "certificate": cert.to_json()}


def growth(
    scene: Scene,
    function: str,
    region: str,
    outputs: Outputs,
    mode: str = "temperate",
    *,
    s: float | None = None,
    h_ladder=None,
    max_deriv: int | None = None,
    alpha=(1, 0),
    stencil_order: int = 2,
) -> dict:
    f = scene.function(function, stencil_order)
    u = scene.region(region)
    head = {"function": f.to_json(), "region": region, "mode": mode}
    if mode == "temperate":
        rep = temperate_order_estimate(f, u, 2 if max_deriv is None else max_deriv, scene.grids)
        return {**head, "report": rep.to_json()}
    if mode == "gevrey":
        if s is None:
            raise ConfigurationError("gevrey mode needs --s")
        kwargs = {"h_ladder": h_ladder} if h_ladder else {}
        rep = gevrey_membership(f, u, s, resolutions=scene.grids, max_deriv=max_deriv or 0, **kwargs)
        return {**head, "report": rep.to_json()}
    if mode == "harmonic":
        rep = harmonic_estimate_check(f, u, 0.0 if s is None else s, tuple(alpha), scene.grids)
        return {**head, "report": rep.to_json()}
    raise ConfigurationError(f"unknown growth mode {mode!r}")


# demos --------------------------------------------------------------------------------
def _demo_germ_cusp(scene: Scene, outputs: Outputs) -> dict:
    rows = []
    grid = Grid(HALF, scene.grids[-1])
    for region, f_expected, n_expected in germ_catalog():
        verdict = germ_cusp_F(region, resolutions=scene.grids)
        n = sheaf_N_sections(region, resolutions=scene.grids)
        rows.append({
            "region": region.label,
            "F": verdict.rank,
            "N": n,
            "F_expected": f_expected,
            "N_expected": n_expected,
            "stable": verdict.stable,
        })
        outputs.mask(f"germ-{region.label}", region.rasterize(grid))
    outputs.overlay(
        "germ-catalog",
        [(r.label, r.rasterize(grid)) for r, _, _ in germ_catalog()[:4]],
        [("origin", (0.0, 0.0))],
        "germ catalog",
    )
    return {"demo": "germ-cusp", "table": rows, "agrees": all(r["F"] == r["F_expected"] and r["N"] == r["N_expected"] for r in rows)}


def _demo_u12(scene: Scene, outputs: Outputs) -> dict:
    fam = u12_family()
    grid = Grid(HALF, scene.grids[-1])
    rows = mv_battery(fam["U1"], fam["U2"], grid)
    outputs.overlay(
        "u12",
        [(k, fam[k].rasterize(grid)) for k in ("U", "U1", "U2", "U12")],
        [("origin", (0.0, 0.0))],
        "U1, U2 and U12 in the half disk",
    )
    for k in ("U1", "U2", "U12"):
        outputs.mask(f"u12-{k}", fam[k].rasterize(grid))
    return {"demo": "u12", "resolution": grid.resolution, "table": rows,
            "matches_N": all(r["coker_rank"] == r["N_rank"] for r in rows)}


DEMOS: dict[str, Callable[[Scene, Outputs], dict]] = {
    "germ-cusp": _demo_germ_cusp,
    "u12": _demo_u12,
}


def demo(scene: Scene, name: str, outputs: Outputs) -> dict:
    if name not in DEMOS:
        raise ConfigurationError(f"unknown demo {name!r}; choose from {sorted(DEMOS)}")
    return DEMOS[name](scene, outputs)


def jsonable(value):
    """Plain JSON values: non-finite floats become strings, tuples lists, Fractions strings."""
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, Fraction):
        return str(value)
    if hasattr(value, "item"):  # numpy scalars
        return jsonable(value.item())
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return value
    raise TypeError(f"cannot serialize {type(value).__name__}")

