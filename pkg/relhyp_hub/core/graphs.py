"""
Помеченные графы (обёртка над networkx.MultiGraph) и шары графа Кэли
"""

from collections.abc import Iterable
from dataclasses import dataclass
from functools import cached_property

import networkx as nx
import numpy as np

from relhyp_hub.core.exceptions import BudgetExhaustedError, UnknownVertexError, ValidationError
from relhyp_hub.core.groups import Element, GroupSpec, Word
from relhyp_hub.logging_config import get_logger

logger = get_logger("relhyp.graphs")


@dataclass(frozen=True)
class VertexLabel:
    """
    Метка вершины: элемент группы или тег смежного класса и глубина
    """
    tag: str
    depth: int = 0
    base_id: int | None = None

    def to_dict(self) -> dict:
        return {"base_id": self.base_id, "depth": self.depth, "tag": self.tag}


class LabeledGraph:
    """
    Неориентированный мультиграф с типизированными вершинами
    """
    def __init__(self, name: str = "graph", allow_self_loops: bool = False):
        self.name = name
        self.allow_self_loops = allow_self_loops
        self._graph = nx.MultiGraph(name=name)
        self._by_label: dict[tuple[str, int], int] = {}

    def add_vertex(self, vertex_id: int, label: VertexLabel) -> None:
        if vertex_id in self._graph:
            raise ValidationError("vertex", f"вершина {vertex_id} уже существует")
        self._graph.add_node(vertex_id, label=label)
        self._by_label.setdefault((label.tag, label.depth), vertex_id)

    def add_edge(self, u: int, v: int, label: str = "") -> None:
        for w in (u, v):
            if w not in self._graph:
                raise UnknownVertexError(w)
        if u == v and not self.allow_self_loops:
            raise ValidationError("edge", f"петля в вершине {u} запрещена")
        self._graph.add_edge(u, v, label=label)

    def freeze(self) -> "LabeledGraph":
        nx.freeze(self._graph)
        return self

    @property
    def nx_graph(self) -> nx.MultiGraph:
        return self._graph

    @cached_property
    def simple_graph(self) -> nx.Graph:
        return nx.Graph(self._graph)

    @property
    def vertex_ids(self) -> list[int]:
        return sorted(self._graph.nodes)

    @property
    def vertices(self) -> list[tuple[int, VertexLabel]]:
        return [(v, self._graph.nodes[v]["label"]) for v in self.vertex_ids]

    @property
    def edges(self) -> list[tuple[int, int, str]]:
        result = [(min(u, v), max(u, v), data.get("label", "")) for u, v, data in self._graph.edges(data=True)]
        return sorted(result)

    @property
    def vertex_count(self) -> int:
        return self._graph.number_of_nodes()

    @property
    def edge_count(self) -> int:
        return self._graph.number_of_edges()

    def has_vertex(self, vertex_id) -> bool:
        return vertex_id in self._graph

    def label(self, vertex_id: int) -> VertexLabel:
        if vertex_id not in self._graph:
            raise UnknownVertexError(vertex_id)
        return self._graph.nodes[vertex_id]["label"]

    def find(self, tag: str, depth: int = 0) -> int:
        try:
            return self._by_label[(tag, depth)]
        except KeyError:
            raise UnknownVertexError(f"{tag}@{depth}") from None

    def neighbors(self, vertex_id: int) -> list[int]:
        if vertex_id not in self._graph:
            raise UnknownVertexError(vertex_id)
        return sorted(self._graph.neighbors(vertex_id))

    def has_edge(self, u: int, v: int) -> bool:
        return self._graph.has_edge(u, v)

    def is_connected(self) -> bool:
        return self.vertex_count > 0 and nx.is_connected(self._graph)

    @cached_property
    def distance_matrix(self) -> np.ndarray:
        """
        Матрица расстояний по порядку vertex_ids; -1 для недостижимых пар
        """
        ids = self.vertex_ids
        position = {v: i for i, v in enumerate(ids)}
        matrix = np.full((len(ids), len(ids)), -1, dtype=np.int64)
        for source, lengths in nx.all_pairs_shortest_path_length(self.simple_graph):
            row = position[source]
            for target, length in lengths.items():
                matrix[row, position[target]] = length
        return matrix

    def subgraph(self, vertex_ids: Iterable[int], name: str | None = None) -> "LabeledGraph":
        keep = set(vertex_ids)
        result = LabeledGraph(name or self.name, self.allow_self_loops)
        for v, label in self.vertices:
            if v in keep:
                result.add_vertex(v, label)
        for u, v, label in self.edges:
            if u in keep and v in keep:
                result.add_edge(u, v, label)
        return result

    def to_dict(self) -> dict:
        return {
            "edges": [[u, v, label] for u, v, label in self.edges],
            "name": self.name,
            "vertices": [{"id": v, **label.to_dict()} for v, label in self.vertices],
        }

    def to_networkx(self) -> nx.MultiGraph:
        """
        Копия для экспорта в DOT/GraphML с атрибутами tag, depth, base_id
        """
        graph = nx.MultiGraph(name=self.name)
        for v, label in self.vertices:
            attrs = {"depth": label.depth, "tag": label.tag}
            if label.base_id is not None:
                attrs["base_id"] = label.base_id
            graph.add_node(v, **attrs)
        for u, v, label in self.edges:
            graph.add_edge(u, v, label=label)
        return graph

    @classmethod
    def from_dict(cls, data: dict) -> "LabeledGraph":
        graph = cls(data.get("name", "graph"))
        for item in data["vertices"]:
            graph.add_vertex(int(item["id"]), VertexLabel(item["tag"], int(item.get("depth", 0)), item.get("base_id")))
        for u, v, label in data["edges"]:
            graph.add_edge(int(u), int(v), label)
        return graph

    @classmethod
    def from_networkx(cls, graph: nx.Graph, name: str = "graph") -> "LabeledGraph":
        """
        Переносит произвольный граф networkx; вершины перенумеровываются по порядку сортировки
        """
        result = cls(name)
        order = sorted(graph.nodes, key=str)
        position = {v: i for i, v in enumerate(order)}
        for v in order:
            result.add_vertex(position[v], VertexLabel(str(v)))
        for u, v in graph.edges():
            result.add_edge(position[u], position[v])
        return result

    def __repr__(self) -> str:
        return f"LabeledGraph({self.name!r}, V={self.vertex_count}, E={self.edge_count})"


def cayley_ball(group: GroupSpec, radius: int) -> LabeledGraph:
    """
    Шар радиуса radius графа Кэли с центром в единице.
    Вершины - элементы длины не более radius, рёбра - умножения справа на образующие.
    """
    if radius < 0:
        raise ValidationError("radius", "радиус должен быть неотрицательным")
    graph = LabeledGraph(f"cayley_ball(r={radius})")
    ids: dict[Word, int] = {(): 0}
    graph.add_vertex(0, VertexLabel(group.format(()), 0))
    frontier: list[Element] = [group.identity]
    for _ in range(radius):
        next_frontier: list[Element] = []
        for element in frontier:
            for letter in group.letters:
                product = group.multiply(element, (letter,))
                if not product.canonical:
                    raise BudgetExhaustedError(
                        "cayley_ball", getattr(group, "budget", 0),
                        f"равенство для {group.format(product)} не установлено",
                    )
                if product.normal_form not in ids:
                    ids[product.normal_form] = len(ids)
                    graph.add_vertex(ids[product.normal_form], VertexLabel(group.format(product), 0))
                    next_frontier.append(product)
        frontier = next_frontier

    for normal_form, vertex in sorted(ids.items(), key=lambda item: item[1]):
        for i in range(1, group.rank + 1):
            target = group.multiply(normal_form, (i,)).normal_form
            # образующая, равная единице, дала бы петлю
            if target in ids and ids[target] != vertex:
                graph.add_edge(vertex, ids[target], group.generators[i - 1])
    logger.debug(f"Шар Кэли радиуса {radius}: {graph.vertex_count} вершин, {graph.edge_count} рёбер")
    return graph.freeze()
