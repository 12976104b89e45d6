"""Problem instances: planar targets and depots with a symmetric travel metric.

Vertices are indexed globally: targets take ids ``0 .. n-1`` and depot ``j``
takes id ``n + j``.  Travel costs are Euclidean distances at unit vehicle
speed; the rounded mode applies the TSPLIB EUC_2D nearest-integer rule and
exists only for comparing tour costs against published optima (rounding
breaks the exact triangle inequality that the proxy costs rely on).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from enum import Enum
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import SchemaError, TsplibFormatError, TsplibParseError

SCHEMA_VERSION = 1


class Metric(Enum):
    EXACT = "exact"
    ROUNDED = "rounded"


@dataclass(frozen=True)
class Point:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"coordinates must be finite, got ({self.x!r}, {self.y!r})")

    def distance_to(self, other: "Point") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)


def perturb_depot(p: Point, radius: float, angle: float) -> Point:
    """Point at exactly ``radius`` from ``p`` at bearing ``angle`` (radians)."""
    if radius < 0:
        raise ValueError(f"radius must be >= 0, got {radius!r}")
    return Point(p.x + radius * math.cos(angle), p.y + radius * math.sin(angle))


@dataclass
class Instance:
    """Immutable-by-convention container; share freely across workers."""

    targets: list[Point]
    depots: list[Point]
    metric: Metric = Metric.EXACT
    name: str = ""

    def __post_init__(self):
        if len(self.targets) < 1:
            raise ValueError("need at least one target")
        if len(self.depots) < 1:
            raise ValueError("need at least one depot")

    @property
    def n_targets(self) -> int:
        return len(self.targets)

    @property
    def n_vehicles(self) -> int:
        return len(self.depots)

    @property
    def n_vertices(self) -> int:
        return len(self.targets) + len(self.depots)

    def depot_vertex(self, j: int) -> int:
        """Global vertex id of depot ``j``."""
        if not 0 <= j < len(self.depots):
            raise IndexError(f"depot index {j} out of range")
        return len(self.targets) + j

    def point(self, vertex: int) -> Point:
        n = len(self.targets)
        if 0 <= vertex < n:
            return self.targets[vertex]
        if n <= vertex < self.n_vertices:
            return self.depots[vertex - n]
        raise IndexError(f"vertex id {vertex} out of range for {self.n_vertices} vertices")

    @cached_property
    def cost_matrix(self) -> np.ndarray:
        """Dense symmetric matrix of travel times over all vertices."""
        pts = np.array([(p.x, p.y) for p in self.targets + self.depots])
        diff = pts[:, None, :] - pts[None, :, :]
        dist = np.sqrt((diff**2).sum(axis=2))
        if self.metric is Metric.ROUNDED:
            dist = np.floor(dist + 0.5)
        dist.flags.writeable = False
        return dist

    @cached_property
    def _cost_rows(self) -> list[list[float]]:
        # plain nested lists: faster than ndarray indexing in tour loops
        return self.cost_matrix.tolist()

    def cost(self, a: int, b: int) -> float:
        nv = self.n_vertices
        if not (0 <= a < nv and 0 <= b < nv):
            raise IndexError(f"vertex pair ({a}, {b}) out of range for {nv} vertices")
        return self._cost_rows[a][b]


def cost(a: int, b: int, inst: Instance) -> float:
    """Travel time between the vertices with global ids ``a`` and ``b``."""
    return inst.cost(a, b)


# --- TSPLIB ingestion -------------------------------------------------------

def parse_tsplib(text: str, depot_nodes: Sequence[int] = (1,), metric: Metric = Metric.EXACT) -> Instance:
    """Parse a TSPLIB NODE_COORD_SECTION document into an Instance.

    Only Euclidean (EUC_2D or unspecified) edge weights are supported.
    ``depot_nodes`` selects which 1-indexed nodes become depots; by default
    node 1 is the single depot and all remaining nodes are targets.
    """
    name = ""
    edge_type = None
    coords: dict[int, Point] = {}
    in_coords = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.upper() == "EOF":
            break
        if not in_coords:
            if line.upper().startswith("NODE_COORD_SECTION"):
                in_coords = True
                continue
            if ":" in line:
                key, _, value = line.partition(":")
                key = key.strip().upper()
                value = value.strip()
                if key == "NAME":
                    name = value
                elif key == "EDGE_WEIGHT_TYPE":
                    edge_type = value.upper()
            continue
        parts = line.split()
        if len(parts) != 3:
            raise TsplibParseError(f"expected 'id x y', got {line!r}", line=lineno)
        try:
            node_id = int(parts[0])
            x, y = float(parts[1]), float(parts[2])
        except ValueError:
            raise TsplibParseError(f"non-numeric coordinate entry {line!r}", line=lineno) from None
        if node_id in coords:
            raise TsplibParseError(f"duplicate node id {node_id}", line=lineno)
        coords[node_id] = Point(x, y)

    if edge_type is not None and edge_type != "EUC_2D":
        raise TsplibFormatError(
            f"unsupported EDGE_WEIGHT_TYPE {edge_type!r}: only EUC_2D (planar Euclidean) is handled"
        )
    if not in_coords:
        raise TsplibParseError("no NODE_COORD_SECTION found")
    if not coords:
        raise TsplibParseError("NODE_COORD_SECTION contains no nodes")

    depot_set = set(depot_nodes)
    missing = depot_set - set(coords)
    if missing:
        raise TsplibParseError(f"depot node(s) {sorted(missing)} not present in file")
    targets = [coords[i] for i in sorted(coords) if i not in depot_set]
    depots = [coords[i] for i in depot_nodes]
    if not targets:
        raise TsplibParseError("all nodes were claimed as depots; no targets remain")
    return Instance(targets=targets, depots=depots, metric=metric, name=name)


# --- native JSON format -----------------------------------------------------

def _check_coord_list(value, key: str) -> list[Point]:
    if not isinstance(value, list) or not value:
        raise SchemaError(f"'{key}' must be a nonempty list of [x, y] pairs")
    pts = []
    for i, entry in enumerate(value):
        if (
            not isinstance(entry, (list, tuple))
            or len(entry) != 2
            or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in entry)
        ):
            raise SchemaError(f"'{key}[{i}]' must be an [x, y] pair of numbers")
        try:
            pts.append(Point(float(entry[0]), float(entry[1])))
        except ValueError as exc:
            raise SchemaError(f"'{key}[{i}]': {exc}") from None
    return pts


def load_json_instance(text: str) -> Instance:
    """Parse the native JSON instance document (schema version 1)."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise SchemaError("top-level document must be an object")
    if doc.get("v") != SCHEMA_VERSION:
        raise SchemaError(f"unsupported or missing schema version {doc.get('v')!r}")
    for key in ("name", "targets", "depots", "metric"):
        if key not in doc:
            raise SchemaError(f"missing required field '{key}'")
    if not isinstance(doc["name"], str):
        raise SchemaError("'name' must be a string")
    metric_value = doc["metric"]
    try:
        metric = Metric(metric_value)
    except ValueError:
        raise SchemaError(f"'metric' must be 'exact' or 'rounded', got {metric_value!r}") from None
    targets = _check_coord_list(doc["targets"], "targets")
    depots = _check_coord_list(doc["depots"], "depots")
    return Instance(targets=targets, depots=depots, metric=metric, name=doc["name"])


def save_json_instance(inst: Instance) -> str:
    """Serialize to the native JSON format; inverse of load_json_instance."""
    doc = {
        "v": SCHEMA_VERSION,
        "name": inst.name,
        "targets": [[p.x, p.y] for p in inst.targets],
        "depots": [[p.x, p.y] for p in inst.depots],
        "metric": inst.metric.value,
    }
    return json.dumps(doc)


# --- random generation ------------------------------------------------------

class SpatialDist(Enum):
    UNIFORM = "uniform"
    CLUSTERED = "clustered"


def generate_random_instance(
    n: int,
    m: int,
    dist: SpatialDist = SpatialDist.UNIFORM,
    seed: int = 0,
    scale: float = 1000.0,
) -> Instance:
    """Random instance with ``n`` targets and ``m`` depots in a ``scale`` square.

    Uniform mode draws i.i.d. points; clustered mode draws
    ``max(2, ceil(n/10))`` Gaussian clusters whose centers are themselves
    uniform.  Deterministic for a fixed seed.
    """
    if n < 1 or m < 1:
        raise ValueError(f"need n >= 1 targets and m >= 1 depots, got n={n}, m={m}")
    rng = np.random.default_rng(seed)
    if dist is SpatialDist.UNIFORM:
        coords = rng.random((n, 2)) * scale
    else:
        k = max(2, math.ceil(n / 10))
        centers = rng.random((k, 2)) * scale
        which = rng.integers(0, k, size=n)
        coords = centers[which] + rng.normal(0.0, 0.05 * scale, size=(n, 2))
    depot_coords = rng.random((m, 2)) * scale
    return Instance(
        targets=[Point(float(x), float(y)) for x, y in coords],
        depots=[Point(float(x), float(y)) for x, y in depot_coords],
        metric=Metric.EXACT,
        name=f"rand-{dist.value}-n{n}-m{m}-s{seed}",
    )


def with_depots(inst: Instance, depots: Iterable[Point]) -> Instance:
    """Copy of ``inst`` with replaced depot locations (same targets/metric)."""
    return replace(inst, depots=list(depots))
