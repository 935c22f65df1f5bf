"""Config-file front end and seeded point sampling.

The format is flat, sectioned text (INI syntax) with every tensor
component given as an expression string over the declared coordinates:

* ``[chart]`` — ``coordinates`` (comma-separated names), optional
  ``dimension`` (validated) and ``exclusion`` expression whose zero set
  is avoided while sampling.
* ``[metric]`` — lower-triangular entries keyed ``<name>.<name>``;
  missing entries are zero, the matrix is mirrored on load, and giving
  both orders of an off-diagonal pair with different expressions is
  rejected.
* ``[field NAME]`` / ``[oneform NAME]`` — components keyed by coordinate
  name; missing components are zero.
* ``[frame NAME]`` — one section per frame vector, in frame order.
* ``[structure]`` — (1,1) tensor entries keyed ``<out>.<in>``.
* ``[sampling]`` — ``box.<name> = lo, hi`` per coordinate plus ``count``
  and ``seed``; or ``[points]`` with explicit comma-separated points.
* ``[soliton]`` — per-run defaults: ``field``, ``kind``, ``connection``,
  ``pi``, ``p``, ``tol``.

Sampling draws from the per-coordinate boxes with a PCG64 generator
seeded by a 64-bit integer and rejects points where the exclusion
expression is within 1e-6 of zero or the metric condition number exceeds
1e8; failure to collect enough points within 10x the requested count is
an error.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field

import numpy as np

from .expr import EvalDomainError, ParseError, eval_jet2, parse
from .geometry import (
    Chart,
    FrameField,
    MetricField,
    OneFormField,
    SingularMetricError,
    VectorField,
)
from .solitons import StructureTensorField
from .zoo import zoo_config_text

__all__ = [
    "ConfigError",
    "SamplingError",
    "ManifoldConfig",
    "load_config",
    "load_config_text",
    "load_zoo",
    "sample_points",
    "EXCLUSION_CUTOFF",
    "SAMPLING_COND_LIMIT",
]

EXCLUSION_CUTOFF = 1e-6
SAMPLING_COND_LIMIT = 1e8


class ConfigError(ValueError):
    """Aggregated configuration problems, each with its location."""

    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


class SamplingError(RuntimeError):
    pass


@dataclass(frozen=True)
class ManifoldConfig:
    name: str
    text: str
    chart: Chart
    metric: MetricField
    fields: dict[str, VectorField]
    oneforms: dict[str, OneFormField]
    frame: FrameField | None
    frame_names: tuple[str, ...]
    structure: StructureTensorField | None
    boxes: dict[str, tuple[float, float]] | None
    count: int
    seed: int
    explicit_points: tuple[tuple[float, ...], ...] | None
    soliton: dict[str, str] = field(default_factory=dict)


def _split_list(value: str) -> list[str]:
    return [part.strip() for part in value.split(",") if part.strip()]


class _Loader:
    def __init__(self, text: str, name: str):
        self.text = text
        self.name = name
        self.problems: list[str] = []

    def fail(self, where: str, message: str):
        self.problems.append(f"{where}: {message}")

    def parse_expr(self, where: str, text: str, coords):
        try:
            return parse(text, coords)
        except ParseError as exc:
            self.fail(where, str(exc))
            return None

    def load(self) -> ManifoldConfig:
        cp = configparser.ConfigParser(interpolation=None, delimiters=("=",))
        cp.optionxform = str
        try:
            cp.read_string(self.text, source=self.name)
        except configparser.Error as exc:
            raise ConfigError([f"{self.name}: {exc}"]) from None

        if not cp.has_section("chart"):
            raise ConfigError([f"{self.name}: missing [chart] section"])
        coords = tuple(_split_list(cp.get("chart", "coordinates", fallback="")))
        if len(coords) < 2:
            raise ConfigError([f"chart.coordinates: need at least two names, got {coords}"])
        dim_text = cp.get("chart", "dimension", fallback=None)
        if dim_text is not None and int(dim_text) != len(coords):
            raise ConfigError([
                f"chart.dimension: {dim_text} does not match {len(coords)} coordinates"])
        exclusion_text = cp.get("chart", "exclusion", fallback=None)
        exclusion = None
        if exclusion_text:
            exclusion = self.parse_expr("chart.exclusion", exclusion_text, coords)
        try:
            chart = Chart(coords, exclusion)
        except ValueError as exc:
            raise ConfigError([f"chart: {exc}"]) from None

        metric = self._load_metric(cp, chart)
        fields, oneforms, frame, frame_names, structure = self._load_tensors(cp, chart)
        boxes, count, seed, points = self._load_sampling(cp, chart)
        soliton = dict(cp.items("soliton")) if cp.has_section("soliton") else {}
        if not self.problems:
            if soliton.get("pi") and soliton["pi"] not in oneforms:
                self.fail("soliton.pi", f"1-form {soliton['pi']!r} is not declared")
            if soliton.get("field") and soliton["field"] not in fields:
                self.fail("soliton.field", f"field {soliton['field']!r} is not declared")

        if self.problems:
            raise ConfigError(self.problems)
        return ManifoldConfig(self.name, self.text, chart, metric, fields,
                              oneforms, frame, frame_names, structure, boxes,
                              count, seed, points, soliton)

    def _load_metric(self, cp, chart) -> MetricField | None:
        if not cp.has_section("metric"):
            self.fail("metric", "missing [metric] section")
            return None
        index = {c: i for i, c in enumerate(chart.coords)}
        entries: dict[tuple[int, int], str] = {}
        section_ok = True
        for key, value in cp.items("metric"):
            parts = key.split(".")
            if len(parts) != 2 or parts[0] not in index or parts[1] not in index:
                self.fail(f"metric.{key}", "keys must be <coordinate>.<coordinate>")
                section_ok = False
                continue
            i, j = index[parts[0]], index[parts[1]]
            pair = (min(i, j), max(i, j))
            if pair in entries and entries[pair] != value:
                self.fail(f"metric.{key}",
                          f"conflicts with the mirrored entry {entries[pair]!r}")
                section_ok = False
                continue
            entries[pair] = value
            if self.parse_expr(f"metric.{key}", value, chart.coords) is None:
                section_ok = False
        if not section_ok:
            return None
        return MetricField.from_lower_triangular(chart, entries)

    def _component_map(self, cp, section, chart):
        index = {c: i for i, c in enumerate(chart.coords)}
        comps = ["0"] * chart.dim
        ok = True
        for key, value in cp.items(section):
            if key not in index:
                self.fail(f"{section}.{key}", f"unknown coordinate {key!r}")
                ok = False
                continue
            comps[index[key]] = value
            if self.parse_expr(f"{section}.{key}", value, chart.coords) is None:
                ok = False
        return comps, ok

    def _load_tensors(self, cp, chart):
        fields: dict[str, VectorField] = {}
        oneforms: dict[str, OneFormField] = {}
        frame_vectors: list[VectorField] = []
        frame_names: list[str] = []
        frame_ok = True
        structure = None
        for section in cp.sections():
            if section.startswith("field "):
                name = section.split(None, 1)[1]
                comps, ok = self._component_map(cp, section, chart)
                if ok:
                    fields[name] = VectorField.from_strings(chart, comps)
            elif section.startswith("oneform "):
                name = section.split(None, 1)[1]
                comps, ok = self._component_map(cp, section, chart)
                if ok:
                    oneforms[name] = OneFormField.from_strings(chart, comps)
            elif section.startswith("frame "):
                name = section.split(None, 1)[1]
                comps, ok = self._component_map(cp, section, chart)
                if ok:
                    frame_names.append(name)
                    frame_vectors.append(VectorField.from_strings(chart, comps))
                else:
                    frame_ok = False
            elif section == "structure":
                index = {c: i for i, c in enumerate(chart.coords)}
                rows = [["0"] * chart.dim for _ in range(chart.dim)]
                ok = True
                for key, value in cp.items(section):
                    parts = key.split(".")
                    if len(parts) != 2 or parts[0] not in index or parts[1] not in index:
                        self.fail(f"structure.{key}",
                                  "keys must be <coordinate>.<coordinate>")
                        ok = False
                        continue
                    rows[index[parts[0]]][index[parts[1]]] = value
                    if self.parse_expr(f"structure.{key}", value, chart.coords) is None:
                        ok = False
                if ok:
                    structure = StructureTensorField.from_strings(chart, rows)
        frame = None
        if frame_vectors and frame_ok:
            if len(frame_vectors) != chart.dim:
                self.fail("frame", f"expected {chart.dim} frame vectors, "
                                   f"got {len(frame_vectors)}")
            else:
                frame = FrameField(chart, tuple(frame_vectors))
        return fields, oneforms, frame, tuple(frame_names), structure

    def _load_sampling(self, cp, chart):
        boxes = None
        count = 10
        seed = 0
        points = None
        if cp.has_section("sampling"):
            boxes = {}
            for key, value in cp.items("sampling"):
                if key.startswith("box."):
                    coord = key[4:]
                    if coord not in chart.coords:
                        self.fail(f"sampling.{key}", f"unknown coordinate {coord!r}")
                        continue
                    parts = _split_list(value)
                    if len(parts) != 2:
                        self.fail(f"sampling.{key}", "expected 'lo, hi'")
                        continue
                    lo, hi = float(parts[0]), float(parts[1])
                    if not lo < hi:
                        self.fail(f"sampling.{key}", "need lo < hi")
                        continue
                    boxes[coord] = (lo, hi)
                elif key == "count":
                    count = int(value)
                elif key == "seed":
                    seed = int(value)
                else:
                    self.fail(f"sampling.{key}", "unknown sampling option")
            missing = [c for c in chart.coords if c not in boxes]
            if missing:
                self.fail("sampling", f"missing box for coordinates {missing}")
        if cp.has_section("points"):
            rows = []
            for key, value in cp.items("points"):
                parts = _split_list(value)
                if len(parts) != chart.dim:
                    self.fail(f"points.{key}", f"expected {chart.dim} components")
                    continue
                rows.append(tuple(float(v) for v in parts))
            points = tuple(rows)
        if boxes is None and points is None:
            self.fail("sampling", "need a [sampling] or [points] section")
        return boxes, count, seed, points


def load_config_text(text: str, name: str = "<config>") -> ManifoldConfig:
    return _Loader(text, name).load()


def load_config(path: str) -> ManifoldConfig:
    """Load a config file; all expressions are pre-parsed and problems are
    aggregated with their field paths into one :class:`ConfigError`."""
    with open(path, "r", encoding="utf-8") as handle:
        text = handle.read()
    return load_config_text(text, name=str(path))


def load_zoo(name: str) -> ManifoldConfig:
    try:
        text = zoo_config_text(name)
    except KeyError as exc:
        raise ConfigError([str(exc)]) from None
    return load_config_text(text, name=name)


def sample_points(config: ManifoldConfig, seed: int | None = None,
                  count: int | None = None) -> np.ndarray:
    """Seeded rejection sampling of chart points.

    The generator is PCG64 (numpy's default 64-bit generator) and only
    ``random()`` draws are used, so identical seeds reproduce identical
    points across platforms.
    """
    if config.explicit_points is not None:
        return np.array(config.explicit_points, dtype=float)
    n = config.chart.dim
    want = config.count if count is None else count
    if want < 1:
        raise SamplingError("need at least one sample point")
    rng = np.random.Generator(np.random.PCG64(config.seed if seed is None else seed))
    lows = np.array([config.boxes[c][0] for c in config.chart.coords])
    highs = np.array([config.boxes[c][1] for c in config.chart.coords])
    accepted = []
    for _ in range(10 * want):
        if len(accepted) == want:
            break
        p = lows + rng.random(n) * (highs - lows)
        if config.chart.exclusion is not None:
            try:
                value = eval_jet2(config.chart.exclusion, p).value
            except EvalDomainError:
                continue
            if abs(value) < EXCLUSION_CUTOFF:
                continue
        try:
            from .geometry import metric_jets_at
            mj = metric_jets_at(config.metric, p)
        except (EvalDomainError, SingularMetricError):
            continue
        if mj.cond > SAMPLING_COND_LIMIT:
            continue
        accepted.append(p)
    if len(accepted) < want:
        raise SamplingError(
            f"found only {len(accepted)} of {want} admissible points in "
            f"{10 * want} attempts")
    return np.array(accepted)
