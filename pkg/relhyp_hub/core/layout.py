"""
Раскладка "дерево окружностей" для одномерной развёртки
"""

import math
from collections import defaultdict, deque
from dataclasses import dataclass, field

import networkx as nx
import numpy as np

from relhyp_hub.core.boundary import GluingClass
from relhyp_hub.core.development import Development, TreeDevelopment
from relhyp_hub.core.exceptions import NotATreeError, ValidationError
from relhyp_hub.infra.settings import SettingsLoader
from relhyp_hub.logging_config import get_logger

logger = get_logger("relhyp.layout")

PALETTE = ("red", "blue", "green", "orange", "purple", "brown", "teal", "gray")
DIGITS = 9


@dataclass
class LayoutNode:
    object_id: int
    kind: str
    base: str
    level: int
    parent: int | None
    center: tuple[float, float]
    radius: float
    color: str
    class_id: int | None = None
    limit_set_empty: bool = False
    vertex: bool = True

    def to_dict(self, dev: Development) -> dict:
        return {
            "base": self.base,
            "center": [round(self.center[0], DIGITS), round(self.center[1], DIGITS)],
            "class": self.class_id,
            "color": self.color,
            "level": self.level,
            "limit_set_empty": self.limit_set_empty,
            "object": dev.objects[self.object_id].name,
            "parent": dev.objects[self.parent].name if self.parent is not None else None,
            "radius": round(self.radius, DIGITS),
            "type": self.kind,
            "vertex": self.vertex,
        }


@dataclass
class TreeOfCircles:
    nodes: list[LayoutNode]
    depth: int
    seed: int
    colors: dict[str, str] = field(default_factory=dict)

    def children(self, object_id: int) -> list[LayoutNode]:
        return [n for n in self.nodes if n.parent == object_id]

    @property
    def circles(self) -> list[LayoutNode]:
        return [n for n in self.nodes if n.vertex]

    def to_dict(self, dev: Development) -> dict:
        return {
            "colors": dict(sorted(self.colors.items())),
            "depth": self.depth,
            "nodes": [n.to_dict(dev) for n in self.nodes],
            "schema_version": 1,
            "seed": self.seed,
        }

    def to_networkx(self, dev: Development) -> nx.Graph:
        """
        Граф раскладки с атрибутом pos в формате neato
        """
        graph = nx.Graph()
        for n in self.nodes:
            x, y = (round(c, 4) for c in n.center)
            graph.add_node(dev.objects[n.object_id].name, shape="circle" if n.kind == "circle" else "point",
                           color=n.color, pos=f"{x},{y}!", width=round(2 * n.radius, 4))
        for n in self.nodes:
            if n.parent is not None:
                graph.add_edge(dev.objects[n.parent].name, dev.objects[n.object_id].name)
        return graph


def _class_index(classes: list[GluingClass] | None) -> dict[int, int]:
    index: dict[int, int] = {}
    for i, cls in enumerate(classes or []):
        for obj in cls.objects():
            index.setdefault(obj, i)
    return index


def tree_of_circles(dev: Development, classes: list[GluingClass] | None, depth: int, seed: int,
                    child_scale: float | None = None) -> TreeOfCircles:
    """
    Вершины развёртки - окружности (точки для конечных групп), рёбра - точки
    касания на окружности родителя. Угол ребра: 2*pi*rank/n плюс сдвиг из rng.
    """
    if not isinstance(dev, TreeDevelopment):
        raise NotATreeError(type(dev).__name__)
    if depth < 0:
        raise ValidationError("depth", "глубина неотрицательна")
    if depth > dev.radius:
        raise ValidationError("depth", f"глубина {depth} больше радиуса развёртки {dev.radius}")
    scale = child_scale if child_scale is not None else SettingsLoader().layout_child_scale
    rng = np.random.default_rng(seed)
    dims = dev.cog.scwol.dimensions
    vertex_bases = sorted(o for o in dev.cog.scwol.objects if dims[o] == 0)
    colors = {base: PALETTE[i % len(PALETTE)] for i, base in enumerate(vertex_bases)}
    class_of = _class_index(classes)
    below: dict[int, list[int]] = defaultdict(list)
    for obj in dev.objects:
        if obj.parent is not None:
            below[obj.parent].append(obj.id)

    def circle(object_id: int, center: tuple[float, float], radius: float, parent: int | None) -> LayoutNode:
        obj = dev.objects[object_id]
        finite = dev.cog.groups[obj.base].is_finite() is True
        return LayoutNode(object_id, "point" if finite else "circle", obj.base, obj.level, parent, center,
                          radius, colors.get(obj.base, "black"), limit_set_empty=finite)

    root = dev.objects[0]
    nodes = [circle(root.id, (0.0, 0.0), 1.0, None)]
    queue = deque(nodes)
    while queue:
        current = queue.popleft()
        if current.level >= depth:
            continue
        edges = [dev.objects[i] for i in below[current.object_id] if dims[dev.objects[i].base] == 1]
        offset = float(rng.uniform(0.0, 2 * math.pi))
        for rank, edge in enumerate(edges):
            angle = 2 * math.pi * rank / len(edges) + offset
            direction = (math.cos(angle), math.sin(angle))
            touch = (current.center[0] + current.radius * direction[0], current.center[1] + current.radius * direction[1])
            nodes.append(LayoutNode(edge.id, "point", edge.base, edge.level, current.object_id, touch, 0.0,
                                    "black", class_of.get(edge.id), vertex=False))
            for child in below[edge.id]:
                if dev.objects[child].level > depth:
                    continue
                radius = current.radius * scale
                center = (touch[0] + radius * direction[0], touch[1] + radius * direction[1])
                node = circle(child, center, radius, edge.id)
                nodes.append(node)
                queue.append(node)
    result = TreeOfCircles(nodes, depth, seed, colors)
    logger.info(f"Дерево окружностей: {len(nodes)} узлов, глубина {depth}", extra={"object_count": len(nodes)})
    return result
