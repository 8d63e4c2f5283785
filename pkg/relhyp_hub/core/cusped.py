"""
Усечённые каспидальные пространства и оценки гиперболичности
"""

from dataclasses import dataclass, field
from fractions import Fraction

import networkx as nx
import numpy as np

from relhyp_hub.core.exceptions import (
    BudgetExceededError,
    DisconnectedGraphError,
    PeripheralNotInGeneratingSetError,
    UnknownVertexError,
    ValidationError,
)
from relhyp_hub.core.graphs import LabeledGraph, VertexLabel, cayley_ball
from relhyp_hub.core.groups import Element, GroupSpec
from relhyp_hub.core.horoball import HORIZONTAL, VERTICAL, horizontal_pairs
from relhyp_hub.core.subgroups import SubgroupSpec
from relhyp_hub.infra.settings import SettingsLoader
from relhyp_hub.logging_config import get_logger

logger = get_logger("relhyp.cusped")


@dataclass(frozen=True)
class HoroballComponent:
    """
    Орошар над пересечением шара со смежным классом gP_i
    """
    peripheral: int
    coset_rep: str
    base_vertices: tuple[int, ...]
    vertex_ids: tuple[int, ...]

    def to_dict(self) -> dict:
        return {
            "base_vertices": list(self.base_vertices),
            "coset_rep": self.coset_rep,
            "peripheral": self.peripheral,
            "vertex_count": len(self.vertex_ids),
        }


@dataclass
class CuspedSpace:
    group: GroupSpec
    peripherals: list[SubgroupSpec]
    radius: int
    depth: int
    graph: LabeledGraph
    ball: LabeledGraph
    horoballs: list[HoroballComponent] = field(default_factory=list)

    @property
    def coset_index(self) -> dict[int, tuple[int, str]]:
        return {i: (h.peripheral, h.coset_rep) for i, h in enumerate(self.horoballs)}

    def to_dict(self) -> dict:
        return {
            "depth": self.depth,
            "graph": self.graph.to_dict(),
            "group": self.group.to_dict(),
            "horoballs": [h.to_dict() for h in self.horoballs],
            "peripherals": [[self.group.format(g) for g in p.generators] for p in self.peripherals],
            "radius": self.radius,
        }


def _check_peripheral_letters(group: GroupSpec, index: int, peripheral: SubgroupSpec) -> set[str]:
    names: set[str] = set()
    for g in peripheral.generators:
        if len(g.word) != 1:
            raise PeripheralNotInGeneratingSetError(index, group.format(g.word))
        names.add(group.generators[abs(g.word[0]) - 1])
    return names


def _coset_classes(subgroup: SubgroupSpec, elements: dict[int, Element]) -> list[tuple[Element, list[int]]]:
    """
    Разбивает вершины шара по левым смежным классам gP
    """
    classes: list[tuple[Element, list[int]]] = []
    keyed: dict[tuple, int] = {}
    for vertex in sorted(elements):
        element = elements[vertex]
        rep = subgroup.coset_rep(element)
        if rep is not None:
            key = rep.normal_form
            if key not in keyed:
                keyed[key] = len(classes)
                classes.append((rep, []))
            classes[keyed[key]][1].append(vertex)
            continue
        for _rep, members in classes:
            if subgroup.same_coset(elements[members[0]], element):
                members.append(vertex)
                break
        else:
            classes.append((element, [vertex]))
    return classes


def build_cusped(group: GroupSpec, peripherals: list[SubgroupSpec], radius: int, depth: int) -> CuspedSpace:
    """
    Шар графа Кэли радиуса radius с орошарами глубины depth над каждым
    смежным классом периферической подгруппы, пересекающим шар
    """
    if depth < 0:
        raise ValidationError("depth", "глубина должна быть неотрицательной")
    letter_sets = [_check_peripheral_letters(group, i, p) for i, p in enumerate(peripherals)]

    ball = cayley_ball(group, radius)
    elements = {v: group.parse(label.tag) for v, label in ball.vertices}

    graph = LabeledGraph(f"cusped(r={radius}, depth={depth})")
    for v, label in ball.vertices:
        graph.add_vertex(v, label)
    for u, v, label in ball.edges:
        graph.add_edge(u, v, label)

    next_id = ball.vertex_count
    horoballs: list[HoroballComponent] = []
    for index, (peripheral, letters) in enumerate(zip(peripherals, letter_sets, strict=True)):
        for rep, members in _coset_classes(peripheral, elements):
            coset_graph = LabeledGraph("coset")
            for v in members:
                coset_graph.add_vertex(v, ball.label(v))
            for u, v, label in ball.edges:
                if label in letters and u in members and v in members:
                    coset_graph.add_edge(u, v, label)
            for component in sorted(nx.connected_components(coset_graph.nx_graph), key=min):
                base = coset_graph.subgraph(component)
                order = base.vertex_ids
                layer_ids = [order]
                for k in range(1, depth + 1):
                    ids = list(range(next_id, next_id + len(order)))
                    next_id += len(order)
                    for new_id, v in zip(ids, order, strict=True):
                        graph.add_vertex(new_id, VertexLabel(ball.label(v).tag, k, v))
                    layer_ids.append(ids)
                distances = base.distance_matrix
                for k in range(1, depth + 1):
                    for i, j in horizontal_pairs(distances, k):
                        graph.add_edge(layer_ids[k][int(i)], layer_ids[k][int(j)], HORIZONTAL)
                    for lower, upper in zip(layer_ids[k - 1], layer_ids[k], strict=True):
                        graph.add_edge(lower, upper, VERTICAL)
                all_ids = tuple(v for layer in layer_ids for v in layer)
                horoballs.append(HoroballComponent(index, group.format(rep), tuple(order), all_ids))

    logger.info(
        f"Каспидальное пространство: {graph.vertex_count} вершин, {len(horoballs)} орошаров",
        extra={"vertex_count": graph.vertex_count, "edge_count": graph.edge_count},
    )
    return CuspedSpace(group, list(peripherals), radius, depth, graph.freeze(), ball, horoballs)


def _require(graph: LabeledGraph, *vertices: int) -> None:
    for v in vertices:
        if not graph.has_vertex(v):
            raise UnknownVertexError(v)


def graph_distance(graph: LabeledGraph, u: int, v: int) -> int:
    _require(graph, u, v)
    try:
        return nx.shortest_path_length(graph.simple_graph, u, v)
    except nx.NetworkXNoPath:
        raise DisconnectedGraphError(graph.name, u, v) from None


def geodesic(graph: LabeledGraph, u: int, v: int) -> list[int]:
    """
    Кратчайший путь; среди равных выбирается лексикографически наименьший по id
    """
    _require(graph, u, v)
    to_target = nx.single_source_shortest_path_length(graph.simple_graph, v)
    if u not in to_target:
        raise DisconnectedGraphError(graph.name, u, v)
    path = [u]
    current = u
    while current != v:
        current = min(w for w in graph.neighbors(current) if to_target.get(w) == to_target[current] - 1)
        path.append(current)
    return path


def gromov_product(graph: LabeledGraph, x: int, y: int, basepoint: int) -> Fraction:
    """
    (x, y)_z = (d(x, z) + d(y, z) - d(x, y)) / 2
    """
    return Fraction(
        graph_distance(graph, x, basepoint) + graph_distance(graph, y, basepoint) - graph_distance(graph, x, y), 2
    )


def distance_report(space: CuspedSpace, u: int, v: int) -> dict:
    """
    Расстояние с флагом усечения: кратчайший путь через верхний уровень
    может укоротиться при большей глубине
    """
    distance = graph_distance(space.graph, u, v)
    from_u = nx.single_source_shortest_path_length(space.graph.simple_graph, u)
    from_v = nx.single_source_shortest_path_length(space.graph.simple_graph, v)
    touches_top = space.depth > 0 and any(
        from_u[p] + from_v.get(p, distance + 1) == distance and space.graph.label(p).depth == space.depth
        for p in from_u
    )
    return {
        "distance": distance,
        "geodesic": geodesic(space.graph, u, v),
        "may_shrink_with_depth": touches_top,
    }


@dataclass(frozen=True)
class DeltaReport:
    """
    delta хранится удвоенным целым (doubled_delta), чтобы избежать сравнения дробей
    """
    doubled_delta: int
    method: str
    witness: tuple[int, int, int, int] | None
    vertex_count: int
    seed: int | None = None
    sample_count: int | None = None

    @property
    def delta(self) -> Fraction:
        return Fraction(self.doubled_delta, 2)

    def to_dict(self) -> dict:
        settings = SettingsLoader()
        return {
            "delta": str(self.delta),
            "delta0": settings.get("delta0"),
            "doubled_delta": self.doubled_delta,
            "method": self.method,
            "sample_count": self.sample_count,
            "seed": self.seed,
            "vertex_count": self.vertex_count,
            "witness": list(self.witness) if self.witness else None,
        }


def _doubled_defect(s1, s2, s3):
    """
    Разность наибольшей и средней из трёх сумм (поэлементно для массивов)
    """
    stacked = np.sort(np.stack([s1, s2, s3]), axis=0)
    return stacked[2] - stacked[1]


def four_point_defect(graph: LabeledGraph, x: int, y: int, z: int, w: int) -> Fraction:
    d = graph.distance_matrix
    index = {v: i for i, v in enumerate(graph.vertex_ids)}
    for vertex in (x, y, z, w):
        if vertex not in index:
            raise UnknownVertexError(vertex)
    i, j, k, m = (index[vertex] for vertex in (x, y, z, w))
    doubled = _doubled_defect(np.array(d[i, j] + d[k, m]), np.array(d[i, k] + d[j, m]), np.array(d[i, m] + d[j, k]))
    return Fraction(int(doubled), 2)


def estimate_delta_four_point(graph: LabeledGraph, mode: str = "exhaustive", seed: int | None = None,
                              count: int | None = None, budget: int | None = None) -> DeltaReport:
    """
    Оценка delta по условию четырёх точек. exhaustive перебирает все четвёрки,
    sampled даёт нижнюю оценку по count случайным четвёркам с зерном seed.
    """
    if not graph.is_connected():
        raise DisconnectedGraphError(graph.name)
    settings = SettingsLoader()
    ids = graph.vertex_ids
    n = len(ids)
    d = graph.distance_matrix

    if mode == "exhaustive":
        budget = budget if budget is not None else settings.delta_exhaustive_budget
        if n ** 4 > budget:
            raise BudgetExceededError(n, budget)
        best, witness = -1, None
        for x in range(n):
            dx = d[x]
            s1 = dx[:, None, None] + d[None, :, :]
            s2 = dx[None, :, None] + d[:, None, :]
            s3 = dx[None, None, :] + d[:, :, None]
            defect = _doubled_defect(s1, s2, s3)
            flat = int(np.argmax(defect))
            if int(defect.flat[flat]) > best:
                best = int(defect.flat[flat])
                y, z, w = np.unravel_index(flat, defect.shape)
                witness = (ids[x], ids[int(y)], ids[int(z)], ids[int(w)])
        report = DeltaReport(best, "exhaustive", witness, n)
    elif mode == "sampled":
        if seed is None:
            raise ValidationError("seed", "для режима sampled требуется --seed")
        count = count if count is not None else settings.default_sample_count
        if count < 1:
            raise ValidationError("count", "число выборок должно быть положительным")
        rng = np.random.default_rng(seed)
        quads = rng.integers(0, n, size=(count, 4))
        x, y, z, w = quads.T
        defect = _doubled_defect(d[x, y] + d[z, w], d[x, z] + d[y, w], d[x, w] + d[y, z])
        flat = int(np.argmax(defect))
        witness = tuple(ids[int(i)] for i in quads[flat])
        report = DeltaReport(int(defect[flat]), "sampled", witness, n, seed, count)
    else:
        raise ValidationError("mode", f"неизвестный режим '{mode}' (exhaustive | sampled)")

    logger.info(f"delta = {report.delta} ({mode})", extra={"delta": str(report.delta), "vertex_count": n})
    return report


@dataclass(frozen=True)
class ThinTriangleReport:
    slimness: int
    witness: tuple[int, int, int] | None
    vertex_count: int

    def to_dict(self) -> dict:
        return {
            "slimness": self.slimness,
            "vertex_count": self.vertex_count,
            "witness": list(self.witness) if self.witness else None,
        }


def thin_triangle(graph: LabeledGraph, max_vertices: int | None = None) -> ThinTriangleReport:
    """
    Тонкость треугольников по интервалам: для каждой стороны [x, y] и каждой
    точки p интервала I(x, y) берётся расстояние до I(y, z) ∪ I(x, z)
    """
    max_vertices = max_vertices if max_vertices is not None else SettingsLoader().thin_triangle_max_vertices
    if not graph.is_connected():
        raise DisconnectedGraphError(graph.name)
    ids = graph.vertex_ids
    n = len(ids)
    if n > max_vertices:
        raise ValidationError("vertex_count", f"проверка треугольников доступна для не более {max_vertices} вершин, получено {n}")
    d = graph.distance_matrix
    # intervals[x, y, p]: p лежит на некотором геодезическом из x в y
    intervals = (d[:, None, :] + d.T[None, :, :]) == d[:, :, None]
    to_interval = np.empty((n, n, n), dtype=np.int64)
    for x in range(n):
        for y in range(n):
            to_interval[x, y] = d[:, intervals[x, y]].min(axis=1)

    best, witness = 0, None
    for x in range(n):
        for y in range(n):
            mask = intervals[x, y]
            nearest = np.minimum(to_interval[y], to_interval[x])[:, mask]
            side = nearest.max(axis=1)
            z = int(np.argmax(side))
            if int(side[z]) > best:
                best = int(side[z])
                witness = (ids[x], ids[y], ids[z])
    return ThinTriangleReport(best, witness, n)
