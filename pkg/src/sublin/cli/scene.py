"""Scene files: named regions, coverings and functions over one bbox.

A scene is JSON::

    {
      "bbox": ["-1", "1", "-1", "1"],
      "ambient": {"where": [{"atom": {"x1^1 x2^0": "1"}}]},
      "regions": {"strip": {"where": [...]}, "both": {"op": "intersection", "args": ["a", "b"]}},
      "coverings": {"pair": ["a", "b"]},
      "functions": {"f": "1/x1**3"},
      "grids": [64, 128, 256],
      "fixtures": ["u1-u3"]
    }

Built-in fixtures are always resolvable by name: region fixtures under their own
name, covering fixtures as coverings with members ``<fixture>.<label>``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from ..errors import ConfigurationError
from ..fixtures import FIXTURE_COVERINGS, FIXTURE_REGIONS, UNIT, Covering, cusp_open, u12_family
from ..geometry import BBox, Region, predicate_from_json, region_algebra
from ..growth import TestFunction

DEFAULT_GRIDS = (64, 128, 256)


def _bbox(spec) -> BBox:
    if not isinstance(spec, list) or len(spec) != 4:
        raise ConfigurationError("bbox must be a list of four rational strings")
    try:
        return BBox(*(Fraction(str(v)) for v in spec))
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigurationError(f"bad bbox: {exc}") from None


def _ladder(spec) -> tuple[int, ...]:
    if not isinstance(spec, list) or not spec or not all(isinstance(n, int) for n in spec):
        raise ConfigurationError("grids must be a nonempty list of integers")
    if any(b <= a for a, b in zip(spec, spec[1:])):
        raise ConfigurationError("the grid ladder must be strictly increasing")
    return tuple(spec)


def parse_ladder(text: str) -> tuple[int, ...]:
    try:
        return _ladder([int(p) for p in text.split(",") if p.strip()])
    except ValueError:
        raise ConfigurationError(f"bad grid ladder {text!r}") from None


def builtin_regions(bbox: BBox | None) -> dict[str, Region]:
    out = {}
    for name, make in FIXTURE_REGIONS.items():
        out[name] = make(bbox) if bbox else make()
    fam = u12_family(bbox) if bbox else u12_family()
    out.update({f"u12.{k}": v for k, v in fam.items()})
    for name, make in FIXTURE_COVERINGS.items():
        cov = make(bbox) if bbox else make()
        for m in cov.members:
            out[f"{name}.{m.label}"] = m
        out[f"{name}.ambient"] = cov.ambient
    return out


def builtin_coverings(bbox: BBox | None) -> dict[str, Covering]:
    return {name: (make(bbox) if bbox else make()) for name, make in FIXTURE_COVERINGS.items()}


@dataclass
class Scene:
    bbox: BBox = UNIT
    explicit_bbox: bool = False
    ambient: Region | None = None
    regions: dict[str, Region] = field(default_factory=dict)
    coverings: dict[str, Covering] = field(default_factory=dict)
    functions: dict[str, TestFunction] = field(default_factory=dict)
    grids: tuple[int, ...] = DEFAULT_GRIDS

    def region(self, name: str) -> Region:
        if name in self.regions:
            return self.regions[name]
        builtin = builtin_regions(self.bbox if self.explicit_bbox else None)
        if name in builtin:
            return builtin[name]
        raise ConfigurationError(f"unknown region {name!r}")

    def covering(self, name: str) -> Covering:
        if name in self.coverings:
            return self.coverings[name]
        builtin = builtin_coverings(self.bbox if self.explicit_bbox else None)
        if name in builtin:
            return builtin[name]
        raise ConfigurationError(f"unknown covering {name!r}")

    def function(self, name: str, stencil_order: int = 2) -> TestFunction:
        if name in self.functions:
            return self.functions[name]
        return TestFunction(name, stencil_order)


def _region(name: str, spec, scene: Scene, raw: dict, resolving: set) -> Region:
    if name in scene.regions:
        return scene.regions[name]
    if name in resolving:
        raise ConfigurationError(f"region {name!r} refers to itself")
    resolving.add(name)
    if not isinstance(spec, dict):
        raise ConfigurationError(f"region {name!r} must be an object")

    def ref(other: str) -> Region:
        if other in raw:
            return _region(other, raw[other], scene, raw, resolving)
        return scene.region(other)

    if "fixture" in spec:
        region = scene.region(spec["fixture"])
    elif "where" in spec:
        parts = spec["where"]
        if not isinstance(parts, list) or not parts:
            raise ConfigurationError(f"region {name!r}: 'where' needs a nonempty list")
        region = Region.where(scene.bbox, *(predicate_from_json(p) for p in parts))
    elif "predicate" in spec:
        region = Region(predicate_from_json(spec["predicate"]), scene.bbox)
    elif "cusp" in spec:
        c = spec["cusp"]
        region = cusp_open(Fraction(str(c["A"])), Fraction(str(c["eps"])), scene.bbox)
    elif "op" in spec:
        args = spec.get("args", [])
        if spec["op"] == "not" and len(args) == 1:
            region = ref(args[0]).complement()
        elif len(args) == 2:
            region = region_algebra(spec["op"], ref(args[0]), ref(args[1]))
        else:
            raise ConfigurationError(f"region {name!r}: bad op arguments")
    else:
        raise ConfigurationError(f"region {name!r}: unknown spec keys {sorted(spec)}")
    resolving.discard(name)
    region = region.labelled(spec.get("label", name))
    scene.regions[name] = region
    return region


def scene_from_dict(data: dict) -> Scene:
    if not isinstance(data, dict):
        raise ConfigurationError("a scene must be a JSON object")
    known = {"bbox", "ambient", "regions", "coverings", "functions", "grids", "fixtures"}
    extra = set(data) - known
    if extra:
        raise ConfigurationError(f"unknown scene keys {sorted(extra)}")
    scene = Scene()
    if "bbox" in data:
        scene.bbox, scene.explicit_bbox = _bbox(data["bbox"]), True
    if "grids" in data:
        scene.grids = _ladder(data["grids"])
    for fx in data.get("fixtures", []):
        if fx not in FIXTURE_REGIONS and fx not in FIXTURE_COVERINGS:
            raise ConfigurationError(f"unknown fixture {fx!r}")
    raw = data.get("regions", {})
    if not isinstance(raw, dict):
        raise ConfigurationError("regions must be an object")
    builtin = set(builtin_regions(None))
    clash = builtin & set(raw)
    if clash:
        raise ConfigurationError(f"region names {sorted(clash)} shadow built-in fixtures")
    for name, spec in raw.items():
        _region(name, spec, scene, raw, set())
    if "ambient" in data:
        scene.ambient = _region("ambient", data["ambient"], scene, {"ambient": data["ambient"]}, set())
    for name, spec in data.get("coverings", {}).items():
        if name in scene.coverings or name in FIXTURE_COVERINGS:
            raise ConfigurationError(f"duplicate covering name {name!r}")
        names = spec.get("members", []) if isinstance(spec, dict) else spec
        if not isinstance(names, list):
            raise ConfigurationError(f"covering {name!r} must list region names")
        members = tuple(scene.region(n) for n in names)
        if isinstance(spec, dict) and "ambient" in spec:
            amb = scene.region(spec["ambient"])
        elif scene.ambient is not None:
            amb = scene.ambient
        elif members:
            amb = members[0]
            for m in members[1:]:
                amb = amb | m
        else:
            amb = Region.empty(scene.bbox)
        scene.coverings[name] = Covering(members, amb, name)
    for name, spec in data.get("functions", {}).items():
        if isinstance(spec, str):
            scene.functions[name] = TestFunction(spec)
        elif isinstance(spec, dict) and "expression" in spec:
            scene.functions[name] = TestFunction(spec["expression"], int(spec.get("stencil_order", 2)))
        else:
            raise ConfigurationError(f"function {name!r} must be an expression string")
    return scene


def load_scene(path: str | Path | None) -> Scene:
    if path is None:
        return Scene()
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigurationError(f"cannot read scene: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"scene is not valid JSON: {exc}") from None
    return scene_from_dict(data)
