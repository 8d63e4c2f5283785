"""
Комбинаторные орошары над конечными графами, усечённые по глубине
"""

from dataclasses import dataclass, field

import numpy as np

from relhyp_hub.core.exceptions import DisconnectedGraphError, UnknownVertexError, ValidationError
from relhyp_hub.core.graphs import LabeledGraph, VertexLabel
from relhyp_hub.logging_config import get_logger

logger = get_logger("relhyp.horoball")

HORIZONTAL = "horizontal"
VERTICAL = "vertical"


def horizontal_pairs(distances: np.ndarray, level: int) -> np.ndarray:
    """
    Пары индексов (i < j) с 0 < d(i, j) < 2^level
    """
    upper = np.triu(np.ones_like(distances, dtype=bool), k=1)
    mask = upper & (distances > 0) & (distances < 2 ** level)
    return np.argwhere(mask)


@dataclass
class Horoball:
    """
    Орошар над графом base, усечённый глубиной max_depth.
    Вершина (v, k) имеет id = k * |V(base)| + позиция v в base.vertex_ids.
    """
    base: LabeledGraph
    max_depth: int
    graph: LabeledGraph
    base_order: list[int] = field(default_factory=list)
    positions: dict[int, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        self.positions = {v: i for i, v in enumerate(self.base_order)}

    def vertex_id(self, base_vertex: int, depth: int) -> int:
        if depth < 0 or depth > self.max_depth:
            raise UnknownVertexError(f"({base_vertex}, {depth})")
        if base_vertex not in self.positions:
            raise UnknownVertexError(base_vertex)
        return depth * len(self.base_order) + self.positions[base_vertex]

    def horizontal_edges(self, depth: int) -> list[tuple[int, int]]:
        return [(u, v) for u, v, label in self.graph.edges
                if label != VERTICAL and self.graph.label(u).depth == depth]

    @property
    def vertex_count(self) -> int:
        return self.graph.vertex_count

    @property
    def edge_count(self) -> int:
        return self.graph.edge_count

    def to_dict(self) -> dict:
        return {"base": self.base.to_dict(), "graph": self.graph.to_dict(), "max_depth": self.max_depth}


def build_horoball(base: LabeledGraph, max_depth: int) -> Horoball:
    """
    Строит орошар: уровень 0 повторяет base, на уровне k >= 1 вершины
    (v, k) и (w, k) соединены, если 0 < d_base(v, w) < 2^k; вертикальные
    рёбра соединяют (v, k) и (v, k + 1).
    """
    if max_depth < 0:
        raise ValidationError("depth", "глубина должна быть неотрицательной")
    if not base.is_connected():
        raise DisconnectedGraphError("base")

    order = base.vertex_ids
    n = len(order)
    position = {v: i for i, v in enumerate(order)}
    distances = base.distance_matrix

    graph = LabeledGraph(f"horoball({base.name}, depth={max_depth})")
    for k in range(max_depth + 1):
        for i, v in enumerate(order):
            graph.add_vertex(k * n + i, VertexLabel(base.label(v).tag, k, v))

    for u, v, label in base.edges:
        graph.add_edge(position[u], position[v], label or HORIZONTAL)
    for k in range(1, max_depth + 1):
        for i, j in horizontal_pairs(distances, k):
            graph.add_edge(k * n + int(i), k * n + int(j), HORIZONTAL)
    for k in range(max_depth):
        for i in range(n):
            graph.add_edge(k * n + i, (k + 1) * n + i, VERTICAL)

    logger.debug(f"Орошар глубины {max_depth} над {n} вершинами: {graph.edge_count} рёбер")
    return Horoball(base, max_depth, graph.freeze(), order)


def depth_of(horoball: Horoball, vertex_id: int) -> int:
    return horoball.graph.label(vertex_id).depth
