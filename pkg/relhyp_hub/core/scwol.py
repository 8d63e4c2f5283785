"""
Сквол (малая категория без петель), сквол клеточного комплекса
и его геометрическая реализация
"""

from collections.abc import Iterator, Mapping, Sequence
from functools import cached_property

import networkx as nx

from relhyp_hub.core.cells import Cell, CellComplex
from relhyp_hub.core.exceptions import InvalidTreeError, ValidationError
from relhyp_hub.logging_config import get_logger

logger = get_logger("relhyp.scwol")

ARROW_SEPARATOR = "/"
CHAIN_SEPARATOR = "|"


class Scwol:
    """
    Объекты, стрелки a: i(a) -> t(a) и композиция ab для пар с i(a) = t(b)
    """
    def __init__(self, objects: Sequence[str], arrows: Mapping[str, tuple[str, str]],
                 composition: Mapping[tuple[str, str], str] | None = None, name: str = "scwol"):
        self.name = name
        self.objects: list[str] = [str(o) for o in objects]
        self.arrows: dict[str, tuple[str, str]] = {str(a): (str(s), str(t)) for a, (s, t) in arrows.items()}
        self.composition: dict[tuple[str, str], str] = dict(composition or {})
        self._validate()

    def _validate(self) -> None:
        if len(set(self.objects)) != len(self.objects):
            raise ValidationError("objects", "имена объектов повторяются")
        known = set(self.objects)
        for arrow, (source, target) in self.arrows.items():
            if source not in known or target not in known:
                raise ValidationError("arrows", f"стрелка '{arrow}' ссылается на неизвестный объект")
            if source == target:
                raise ValidationError("arrows", f"стрелка '{arrow}' является петлёй")
        for a, b in self.composable_pairs():
            if (a, b) not in self.composition:
                raise ValidationError("composition", f"композиция ({a}, {b}) не задана")
        for (a, b), ab in self.composition.items():
            if ab not in self.arrows or self.source(a) != self.target(b):
                raise ValidationError("composition", f"некорректная композиция ({a}, {b}) -> {ab}")
            if self.source(ab) != self.source(b) or self.target(ab) != self.target(a):
                raise ValidationError("composition", f"концы {ab} не согласованы с ({a}, {b})")
        for a, b, c in self.composable_triples():
            if self.compose(self.compose(a, b), c) != self.compose(a, self.compose(b, c)):
                raise ValidationError("composition", f"композиция не ассоциативна на ({a}, {b}, {c})")

    def source(self, arrow: str) -> str:
        return self.arrows[arrow][0]

    def target(self, arrow: str) -> str:
        return self.arrows[arrow][1]

    def compose(self, a: str, b: str) -> str:
        return self.composition[(a, b)]

    @cached_property
    def arrows_from(self) -> dict[str, list[str]]:
        result: dict[str, list[str]] = {o: [] for o in self.objects}
        for arrow in sorted(self.arrows):
            result[self.source(arrow)].append(arrow)
        return result

    @cached_property
    def arrows_to(self) -> dict[str, list[str]]:
        result: dict[str, list[str]] = {o: [] for o in self.objects}
        for arrow in sorted(self.arrows):
            result[self.target(arrow)].append(arrow)
        return result

    def composable_pairs(self) -> list[tuple[str, str]]:
        return [(a, b) for b in sorted(self.arrows) for a in self.arrows_from[self.target(b)]]

    def composable_triples(self) -> list[tuple[str, str, str]]:
        return [(a, b, c) for b, c in self.composable_pairs() for a in self.arrows_from[self.target(b)]]

    @property
    def is_simple(self) -> bool:
        ends = list(self.arrows.values())
        return len(set(ends)) == len(ends)

    @cached_property
    def dimensions(self) -> dict[str, int]:
        """
        Размерность объекта - длина самой длинной цепочки стрелок из него
        """
        order = list(nx.topological_sort(self.underlying_digraph))
        dims = {o: 0 for o in self.objects}
        for obj in reversed(order):
            for arrow in self.arrows_from[obj]:
                dims[obj] = max(dims[obj], dims[self.target(arrow)] + 1)
        return dims

    @cached_property
    def underlying_digraph(self) -> nx.MultiDiGraph:
        graph = nx.MultiDiGraph()
        graph.add_nodes_from(self.objects)
        for arrow in sorted(self.arrows):
            graph.add_edge(*self.arrows[arrow], key=arrow)
        return graph

    @cached_property
    def underlying_graph(self) -> nx.MultiGraph:
        """
        1-остов геометрической реализации: вершины - объекты, рёбра - стрелки
        """
        return nx.MultiGraph(self.underlying_digraph)

    def is_connected(self) -> bool:
        return bool(self.objects) and nx.is_connected(self.underlying_graph)

    def check_tree(self, tree: Sequence[str]) -> None:
        unknown = [a for a in tree if a not in self.arrows]
        if unknown:
            raise InvalidTreeError(f"неизвестные стрелки {unknown}")
        if len(set(tree)) != len(self.objects) - 1:
            raise InvalidTreeError(f"ожидалось {len(self.objects) - 1} стрелок, получено {len(set(tree))}")
        subgraph = nx.MultiGraph()
        subgraph.add_nodes_from(self.objects)
        for arrow in tree:
            subgraph.add_edge(*self.arrows[arrow], key=arrow)
        if not nx.is_tree(subgraph):
            raise InvalidTreeError("набор стрелок содержит цикл или несвязен")

    def default_tree(self) -> list[str]:
        if not self.is_connected():
            raise InvalidTreeError("сквол несвязен")
        edges = nx.minimum_spanning_edges(self.underlying_graph, algorithm="kruskal", keys=True, data=False)
        return sorted(key for _, _, key in edges)

    def spanning_trees(self) -> Iterator[list[str]]:
        """
        Все остовные деревья 1-остова |Y| (только для простых сквольных графов)
        """
        simple = nx.Graph()
        simple.add_nodes_from(self.objects)
        names: dict[frozenset, str] = {}
        for arrow, (source, target) in sorted(self.arrows.items()):
            pair = frozenset((source, target))
            if pair in names:
                raise ValidationError("scwol", "перечисление деревьев требует не более одной стрелки между объектами")
            names[pair] = arrow
            simple.add_edge(source, target)
        for tree in nx.SpanningTreeIterator(simple):
            yield sorted(names[frozenset(edge)] for edge in tree.edges())

    def to_dict(self) -> dict:
        return {
            "arrows": {a: list(ends) for a, ends in sorted(self.arrows.items())},
            "composition": [[a, b, ab] for (a, b), ab in sorted(self.composition.items())],
            "name": self.name,
            "objects": list(self.objects),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Scwol":
        composition = {(a, b): ab for a, b, ab in data.get("composition", [])}
        arrows = {a: (ends[0], ends[1]) for a, ends in data.get("arrows", {}).items()}
        return cls(data["objects"], arrows, composition, data.get("name", "scwol"))

    def __repr__(self) -> str:
        return f"Scwol({self.name!r}, objects={len(self.objects)}, arrows={len(self.arrows)})"


def arrow_name(source: str, target: str) -> str:
    return f"{source}{ARROW_SEPARATOR}{target}"


def scwolify(complex_: CellComplex) -> Scwol:
    """
    Объекты - клетки, стрелки - все строгие включения граней (от большей клетки к меньшей)
    """
    complex_.check_regular()
    objects = [c.name for c in sorted(complex_.cells, key=lambda c: (-c.dim, c.name))]
    arrows: dict[str, tuple[str, str]] = {}
    for cell in complex_.cells:
        for face in complex_.proper_faces(cell.name):
            arrows[arrow_name(cell.name, face)] = (cell.name, face)
    composition: dict[tuple[str, str], str] = {}
    for b, (upper, middle) in arrows.items():
        for face in complex_.proper_faces(middle):
            composition[(arrow_name(middle, face), b)] = arrow_name(upper, face)
    scwol = Scwol(objects, arrows, composition, f"scwol({complex_.name})")
    logger.debug(f"Сквол {complex_.name}: {len(objects)} объектов, {len(arrows)} стрелок")
    return scwol


def composable_chains(scwol: Scwol, length: int) -> list[tuple[str, ...]]:
    """
    Цепочки (c_1, ..., c_k) с t(c_j) = i(c_{j+1}); объекты i(c_1), t(c_1), ..., t(c_k)
    """
    chains: list[tuple[str, ...]] = [(a,) for a in sorted(scwol.arrows)]
    for _ in range(length - 1):
        chains = [chain + (nxt,) for chain in chains for nxt in scwol.arrows_from[scwol.target(chain[-1])]]
    return chains


def geometric_realization(scwol: Scwol) -> CellComplex:
    """
    Симплициальный комплекс: k-симплексы - цепочки из k компонуемых стрелок
    """
    cells = [Cell(o, 0) for o in scwol.objects]
    length = 1
    chains = composable_chains(scwol, length)
    while chains:
        for chain in chains:
            if length == 1:
                faces = (scwol.target(chain[0]), scwol.source(chain[0]))
            else:
                faces_list = [CHAIN_SEPARATOR.join(chain[1:]), CHAIN_SEPARATOR.join(chain[:-1])]
                for j in range(len(chain) - 1):
                    # удаление внутренней вершины - композиция соседних стрелок
                    merged = scwol.compose(chain[j + 1], chain[j])
                    faces_list.append(CHAIN_SEPARATOR.join(chain[:j] + (merged,) + chain[j + 2:]))
                faces = tuple(faces_list)
            cells.append(Cell(CHAIN_SEPARATOR.join(chain), length, faces))
        length += 1
        chains = composable_chains(scwol, length)
    return CellComplex(cells, f"|{scwol.name}|")


def barycentric_subdivision(complex_: CellComplex) -> CellComplex:
    """
    Симплексы подразделения - флаги клеток sigma_0 > sigma_1 > ... > sigma_k.
    Результат сверяется с геометрической реализацией сквола комплекса.
    """
    complex_.check_regular()
    flags: list[tuple[str, ...]] = [(c.name,) for c in complex_.cells]
    frontier = list(flags)
    while frontier:
        frontier = [flag + (face,) for flag in frontier for face in complex_.proper_faces(flag[-1])]
        flags.extend(frontier)

    cells = []
    for flag in flags:
        faces = tuple(">".join(flag[:i] + flag[i + 1:]) for i in range(len(flag))) if len(flag) > 1 else ()
        cells.append(Cell(">".join(flag), len(flag) - 1, faces))
    result = CellComplex(cells, f"sd({complex_.name})")

    realization = geometric_realization(scwolify(complex_))
    if realization.counts != result.counts:
        raise AssertionError(f"подразделение {result.counts} не совпадает с реализацией {realization.counts}")
    return result
