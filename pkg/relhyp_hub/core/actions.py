"""
Комплексы групп, индуцированные действием конечной группы на
барицентрическом подразделении клеточного комплекса
"""

from collections.abc import Callable, Hashable, Sequence
from dataclasses import dataclass, field

import numpy as np

from relhyp_hub.core.cells import CellComplex, polygon
from relhyp_hub.core.complexes import ComplexOfGroups
from relhyp_hub.core.exceptions import ValidationError
from relhyp_hub.core.groups import Element, FiniteTable
from relhyp_hub.core.scwol import Scwol, arrow_name, barycentric_subdivision, scwolify
from relhyp_hub.logging_config import get_logger

logger = get_logger("relhyp.actions")

FLAG_SEPARATOR = ">"


@dataclass
class GroupAction:
    """
    Конечная группа, заданная конкретными образующими, и её действие на клетках
    """
    complex_: CellComplex
    generators: list[Hashable]
    generator_names: list[str]
    multiply: Callable[[Hashable, Hashable], Hashable]
    identity: Hashable
    act: Callable[[Hashable, str], str]
    name: str = "action"

    def __post_init__(self):
        if len(self.generators) != len(self.generator_names):
            raise ValidationError("generators", "число образующих не совпадает с числом имён")


@dataclass
class InducedComplex:
    """
    Результат индукции: комплекс групп над фактором, сама группа и данные выбора
    (представители орбит, переносящие элементы h_a)
    """
    cog: ComplexOfGroups
    group: FiniteTable
    elements: list[Hashable]
    cover: Scwol
    representative: dict[str, str]
    transport: dict[str, int]
    lifts: dict[str, int]
    act: Callable[[int, str], str] = field(repr=False)


def _vertex_sets(complex_: CellComplex) -> dict[str, frozenset[str]]:
    result: dict[str, frozenset[str]] = {}
    for cell in complex_.cells:
        below = [cell.name, *complex_.proper_faces(cell.name)]
        result[cell.name] = frozenset(n for n in below if complex_.cell(n).dim == 0)
    return result


def _permutation_action(complex_: CellComplex) -> Callable[[tuple[tuple[int, ...], int], str], str]:
    """
    Элемент (перестановка вершин, центральная компонента) действует на клетки
    через их множества вершин
    """
    vertex_sets = _vertex_sets(complex_)
    by_vertices = {vs: name for name, vs in vertex_sets.items()}
    if len(by_vertices) != len(vertex_sets):
        raise ValidationError("complex", "клетки не определяются своими вершинами")
    vertex_names = [c.name for c in complex_.cells_of_dim(0)]
    position = {name: i for i, name in enumerate(vertex_names)}

    def act(element: tuple[tuple[int, ...], int], cell: str) -> str:
        perm = element[0]
        image = frozenset(vertex_names[perm[position[v]]] for v in vertex_sets[cell])
        try:
            return by_vertices[image]
        except KeyError:
            raise ValidationError("action", f"образ клетки '{cell}' не является клеткой") from None

    return act


def _product_multiply(m: int) -> Callable:
    def multiply(x: tuple[tuple[int, ...], int], y: tuple[tuple[int, ...], int]) -> tuple[tuple[int, ...], int]:
        return tuple(x[0][i] for i in y[0]), (x[1] + y[1]) % m

    return multiply


def dihedral_elements(n: int, m: int = 1) -> list[tuple[tuple[int, ...], int]]:
    """
    Все элементы D_n x Z/m; вершины многоугольника v0..v{n-1} (в порядке клеток)
    """
    elements = []
    for c in range(m):
        for k in range(n):
            elements.append((_vertex_perm(n, k, False), c))
            elements.append((_vertex_perm(n, k, True), c))
    return elements


def _vertex_perm(n: int, shift: int, reflect: bool) -> tuple[int, ...]:
    # вершины в порядке cells_of_dim(0): v0, v1, ..., v{n-1} сортируются как строки
    names = sorted(f"v{i}" for i in range(n))
    index = [int(name[1:]) for name in names]
    position = {v: i for i, v in enumerate(index)}
    return tuple(position[((-v if reflect else v) + shift) % n] for v in index)


def dihedral_action_on_polygon(n: int, m: int = 1, generators: Sequence[tuple[tuple[int, ...], int]] | None = None) -> GroupAction:
    """
    Действие подгруппы D_n x Z/m на n-угольнике; Z/m действует тривиально.
    По умолчанию - вся группа (поворот, отражение, центральный элемент).
    """
    if n < 3 or m < 1:
        raise ValidationError("action", "нужны n >= 3 и m >= 1")
    complex_ = polygon(n)
    if generators is None:
        generators = [(_vertex_perm(n, 1, False), 0), (_vertex_perm(n, 0, True), 0)]
        if m > 1:
            generators.append((_vertex_perm(n, 0, False), 1))
    names = [f"g{i}" for i in range(len(generators))]
    identity = (_vertex_perm(n, 0, False), 0)
    return GroupAction(complex_, list(generators), names, _product_multiply(m), identity,
                       _permutation_action(complex_), f"D{n}xZ{m}")


def random_polygon_action(rng: np.random.Generator, sides: Sequence[int] = (3, 4), max_central: int = 3,
                          max_generators: int = 2) -> GroupAction:
    """
    Случайная подгруппа D_n x Z/m, действующая на треугольнике или квадрате
    """
    n = int(rng.choice(list(sides)))
    m = int(rng.integers(1, max_central + 1))
    pool = dihedral_elements(n, m)
    count = int(rng.integers(1, max_generators + 1))
    chosen = [pool[int(i)] for i in rng.integers(0, len(pool), size=count)]
    return dihedral_action_on_polygon(n, m, chosen)


def induce_from_action(action: GroupAction, rng: np.random.Generator | None = None) -> InducedComplex:
    """
    Фактор сквола подразделения по действию: G_sigma - стабилизатор
    представителя орбиты, psi_a - сопряжение элементом h_a,
    g_(a,b) = h_a h_b h_ab^-1. При заданном rng h_a выбирается случайно
    в допустимом классе.
    """
    cover = scwolify(barycentric_subdivision(action.complex_))
    table, elements = FiniteTable.from_closure(action.generators, action.multiply, action.identity, action.generator_names)
    order = len(elements)

    def act(index: int, obj: str) -> str:
        return FLAG_SEPARATOR.join(action.act(elements[index], cell) for cell in obj.split(FLAG_SEPARATOR))

    known_arrows = set(cover.arrows.values())
    for source, target in cover.arrows.values():
        for i in range(order):
            if (act(i, source), act(i, target)) not in known_arrows:
                raise ValidationError("action", f"элемент #{i} не сохраняет стрелку {source} -> {target}")

    representative: dict[str, str] = {}
    transport: dict[str, int] = {}
    for obj in cover.objects:
        images = [act(i, obj) for i in range(order)]
        rep = min(images)
        representative[obj] = rep
        transport[obj] = images.index(rep)

    reps = [o for o in cover.objects if representative[o] == o]
    stabilizers = {rep: [i for i in range(order) if act(i, rep) == rep] for rep in reps}

    arrows: dict[str, tuple[str, str]] = {}
    for name, (source, target) in sorted(cover.arrows.items()):
        if representative[source] != source:
            continue
        for g in stabilizers[source]:
            if act(g, target) != target:
                raise ValidationError("action", f"действие с инверсией: элемент #{g} сдвигает стрелку {name}")
        arrows[name] = (source, representative[target])

    def quotient_arrow(source: str, target: str) -> str:
        g = transport[source]
        return arrow_name(act(g, source), act(g, target))

    lifts: dict[str, int] = {}
    for name in sorted(arrows):
        target = cover.target(name)
        h = transport[target]
        if rng is not None:
            stabilizer = stabilizers[representative[target]]
            h = table.product_index(stabilizer[int(rng.integers(0, len(stabilizer)))], h)
        lifts[name] = h

    composition: dict[tuple[str, str], str] = {}
    for b in sorted(arrows):
        for a in sorted(arrows):
            if arrows[a][0] != arrows[b][1]:
                continue
            moved = act(table.inverse_index(lifts[b]), cover.target(a))
            composition[(a, b)] = quotient_arrow(cover.source(b), moved)

    quotient = Scwol(reps, arrows, composition, f"{action.name}\\{cover.name}")

    local: dict[str, FiniteTable] = {}
    members: dict[str, dict[int, int]] = {}
    for rep in reps:
        sub, indices = table.subgroup_table(stabilizers[rep])
        local[rep] = sub
        members[rep] = {g: j for j, g in enumerate(indices)}

    def local_element(rep: str, g: int) -> Element:
        return local[rep].element_at(members[rep][g])

    def conjugate(h: int, g: int) -> int:
        return table.product_index(table.product_index(h, g), table.inverse_index(h))

    psi: dict[str, tuple[Element, ...]] = {}
    for name, (source, target) in arrows.items():
        sub = local[source]
        globals_of = {j: g for g, j in members[source].items()}
        images = []
        for gen in sub.generators:
            g = globals_of[sub.element_names.index(gen)]
            images.append(local_element(target, conjugate(lifts[name], g)))
        psi[name] = tuple(images)

    twist: dict[tuple[str, str], Element] = {}
    for (a, b), ab in composition.items():
        g = table.product_index(table.product_index(lifts[a], lifts[b]), table.inverse_index(lifts[ab]))
        if g not in members[arrows[a][1]]:
            raise ValidationError("action", f"скручивающий элемент пары ({a}, {b}) не лежит в локальной группе")
        twist[(a, b)] = local_element(arrows[a][1], g)

    cog = ComplexOfGroups(quotient, dict(local), psi, twist, name=f"induced({action.name})")
    logger.debug(f"Индуцирован комплекс групп {cog.name}: {len(reps)} объектов, |G| = {order}")
    return InducedComplex(cog, table, elements, cover, representative, transport, lifts, act)
