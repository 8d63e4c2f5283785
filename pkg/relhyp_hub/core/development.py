"""
Развёртка (универсальное накрытие) комплекса групп, усечённая по радиусу,
и действие фундаментальной группы на ней левыми умножениями.

Стратегия "tree" - для скволов без компонуемых пар (графы групп): объекты
кодируются приведёнными путями из корня в дереве Басса-Серра, действие
вычисляется символически с переносом остатка в локальных группах.
Стратегия "finite" - регулярное представление конечной группы pi_1,
полученное перечислением Тодда-Коксетера.
"""

from abc import ABC, abstractmethod
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple

import networkx as nx

from relhyp_hub.core.complexes import ComplexOfGroups, Presentation, fundamental_group_presentation, validate_cocycles
from relhyp_hub.core.exceptions import (
    ActionViolationError,
    BudgetExhaustedError,
    CocycleInvalidError,
    UnknownSymbolError,
    ValidationError,
)
from relhyp_hub.core.groups import CosetGraph, Element, GroupSpec, Word, free_reduce, invert_word, is_enumerable
from relhyp_hub.core.subgroups import CosetTable, enumerate_cosets
from relhyp_hub.infra.settings import SettingsLoader
from relhyp_hub.logging_config import get_logger

logger = get_logger("relhyp.development")

UP = "up"
DOWN = "down"


class Move(NamedTuple):
    kind: str
    arrow: str
    key: Word = ()


@dataclass
class DevObject:
    """
    Объект развёртки (g G_sigma, sigma); rep - слово g в образующих pi_1
    """
    id: int
    base: str
    level: int
    rep: Word
    path: tuple[Move, ...] = ()
    parent: int | None = None
    star_complete: bool = True
    boundary: bool = False

    @property
    def name(self) -> str:
        return f"o{self.id}"

    def to_dict(self, presentation: Presentation) -> dict:
        return {
            "base": self.base,
            "boundary": self.boundary,
            "id": self.id,
            "level": self.level,
            "rep": presentation.format_relator(self.rep),
            "star_complete": self.star_complete,
        }


@dataclass(frozen=True)
class DevArrow:
    source: int
    target: int
    base: str

    @property
    def name(self) -> str:
        return f"o{self.source}/o{self.target}"

    def to_dict(self) -> dict:
        return {"base": self.base, "source": self.source, "target": self.target}


def finite_elements(group: GroupSpec) -> list[Element] | None:
    """
    Все элементы локальной группы, если их можно перебрать
    """
    if is_enumerable(group):
        return [group.element_at(i) for i in range(group.order())]
    if group.order() == 1:
        return [group.identity]
    return None


class Development(ABC):
    """
    Общий интерфейс усечённой развёртки
    """
    strategy: str = "abstract"

    def __init__(self, cog: ComplexOfGroups, bound: int, radius: int):
        if bound < 0 or radius < 0:
            raise ValidationError("development", "bound и radius должны быть неотрицательными")
        self.cog = cog
        self.bound = bound
        self.radius = radius
        self.presentation = fundamental_group_presentation(cog, tietze=True)
        self.objects: list[DevObject] = []
        self.arrows: list[DevArrow] = []
        self._symbols = {name: i for i, name in enumerate(self.presentation.generators, start=1)}

    # --- слова pi_1 ---

    def local_word(self, obj: str, element: Element | Word) -> Word:
        word = element.normal_form if isinstance(element, Element) else tuple(element)
        index = self.presentation.local_index
        return tuple(index[(obj, abs(x))] * (1 if x > 0 else -1) for x in word)

    def arrow_word(self, arrow: str) -> Word:
        """
        Слово для a+ (пустое для стрелок максимального дерева)
        """
        index = self.presentation.arrow_index.get(arrow)
        return (index,) if index is not None else ()

    def parse(self, text: str) -> Word:
        """
        Слово pi_1 вида "u.a1*e/v+^-1"; имена - образующие копредставления после Титце
        """
        word: list[int] = []
        for token in text.replace("*", " ").split():
            if token in ("1", "e"):
                continue
            name, exponent = token, 1
            head, sep, tail = token.rpartition("^")
            if sep and tail.lstrip("-").isdigit():
                name, exponent = head, int(tail)
            if name not in self._symbols:
                raise UnknownSymbolError(name, self.presentation.generators)
            letter = self._symbols[name]
            word.extend([letter if exponent > 0 else -letter] * abs(exponent))
        return tuple(word)

    def format(self, word: Word) -> str:
        return self.presentation.format_relator(word)

    @property
    def letters(self) -> list[int]:
        return [sign * i for i in range(1, self.presentation.rank + 1) for sign in (1, -1)]

    # --- структура ---

    @property
    def object_count(self) -> int:
        return len(self.objects)

    @property
    def arrow_count(self) -> int:
        return len(self.arrows)

    def objects_over(self, base: str) -> list[DevObject]:
        return [o for o in self.objects if o.base == base]

    def interior(self) -> list[DevObject]:
        return [o for o in self.objects if not o.boundary]

    def arrows_from(self, obj: int) -> list[DevArrow]:
        return [a for a in self.arrows if a.source == obj]

    def arrows_to(self, obj: int) -> list[DevArrow]:
        return [a for a in self.arrows if a.target == obj]

    def degree(self, obj: int) -> int:
        return sum(1 for a in self.arrows if obj in (a.source, a.target))

    @abstractmethod
    def base_object(self, base: str) -> int | None:
        """
        Объект (G_sigma, sigma), если он попал в усечение
        """

    @abstractmethod
    def expected_target(self, arrow: DevArrow) -> int | None:
        """
        Конец стрелки по формуле инцидентности
        """

    @abstractmethod
    def arrow_correction(self, arrow: DevArrow) -> Element:
        """
        u из G_t(a): rep_target = rep_source * a- * u
        """

    @abstractmethod
    def act_with_residual(self, word: Word, obj: int) -> tuple[int, Element] | None:
        """
        Образ S' объекта S и остаток r из G_sigma: word * rep_S = rep_S' * r
        """

    def act(self, word: Word, obj: int) -> int | None:
        """
        Образ объекта под действием слова; None, если образ вне усечения
        """
        found = self.act_with_residual(word, obj)
        return found[0] if found is not None else None

    def to_networkx(self) -> nx.MultiDiGraph:
        graph = nx.MultiDiGraph(name=f"development({self.cog.name})")
        for o in self.objects:
            graph.add_node(o.name, base=o.base, level=o.level, boundary=o.boundary, rep=self.format(o.rep))
        for a in self.arrows:
            graph.add_edge(f"o{a.source}", f"o{a.target}", key=a.base, base=a.base)
        return graph

    def to_dict(self) -> dict:
        return {
            "arrows": [a.to_dict() for a in self.arrows],
            "bound": self.bound,
            "complex": self.cog.to_dict(),
            "generators": list(self.presentation.generators),
            "object_count": self.object_count,
            "objects": [o.to_dict(self.presentation) for o in self.objects],
            "radius": self.radius,
            "schema_version": 1,
            "strategy": self.strategy,
        }


class TreeDevelopment(Development):
    """
    Дерево Басса-Серра: объекты вершинного типа (цели стрелок) и рёберного
    типа (начала стрелок). Ход up(a, k) ведёт из вершины в ребро k a+ G_e,
    где k - канонический представитель класса k psi_a(G_e); ход down(b) - из
    ребра в вершину b- G_w.

    Граничные объекты: уровень radius, рёбра с ключом длины bound из
    оборванной таблицы классов и все их потомки.
    """
    strategy = "tree"

    def __init__(self, cog: ComplexOfGroups, bound: int, radius: int, budget: int | None = None):
        super().__init__(cog, bound, radius)
        if cog.has_composable_pairs:
            raise ValidationError("strategy", "стратегия tree требует сквол без компонуемых пар")
        self.budget = budget if budget is not None else SettingsLoader().coset_budget
        self._cosets: dict[str, CosetTable] = {}
        self._up: dict[tuple[int, str, Word], int] = {}
        self._down: dict[tuple[int, str], int] = {}
        self._keys: dict[str, list[Word]] = {}
        self._frontier: dict[str, int] = {}
        self._syllable_cache: dict[tuple[str, Word, int], tuple[int, Element] | None] = {}
        self._build()
        self._base_objects = self._locate_base_objects()

    def cosets(self, arrow: str) -> CosetTable:
        """
        Представители классов G_t(a) / psi_a(G_i(a)) длины не больше bound
        """
        if arrow not in self._cosets:
            subgroup = self.cog.psi_subgroup(arrow)
            if subgroup.coset_rep(subgroup.ambient.identity) is None:
                raise BudgetExhaustedError("cosets", self.budget, f"нет канонических представителей для {subgroup.describe()}")
            self._cosets[arrow] = enumerate_cosets(subgroup, budget=self.budget, max_length=self.bound)
        return self._cosets[arrow]

    def coset_keys(self, arrow: str) -> list[Word]:
        """
        Канонические представители найденных классов в порядке перечисления
        """
        if arrow not in self._keys:
            subgroup = self.cog.psi_subgroup(arrow)
            keys = dict.fromkeys(subgroup.coset_rep(rep).normal_form for rep in self.cosets(arrow).representatives)
            self._keys[arrow] = list(keys)
        return self._keys[arrow]

    def _add(self, base: str, rep: Word, path: tuple[Move, ...], parent: int | None, frontier: bool = False) -> DevObject:
        obj = DevObject(len(self.objects), base, len(path), free_reduce(rep), path, parent)
        behind = parent is not None and self.objects[parent].boundary
        obj.boundary = obj.level == self.radius or frontier or behind
        self.objects.append(obj)
        return obj

    def is_frontier_key(self, arrow: str, key: Word) -> bool:
        """
        Ключ длины bound в оборванной таблице: за ним перечисление классов
        не продолжалось, поэтому объект и всё, что за ним, не точны
        """
        table = self.cosets(arrow)
        if table.is_complete:
            return False
        if arrow not in self._frontier:
            self._frontier[arrow] = min(self.bound, max(len(rep.word) for rep in table.representatives))
        return len(key) >= self._frontier[arrow]

    def _build(self) -> None:
        scwol = self.cog.scwol
        root = self._add(self.cog.root, (), (), None)
        queue = deque([root.id])
        while queue:
            obj = self.objects[queue.popleft()]
            if obj.level >= self.radius:
                continue
            last = obj.path[-1] if obj.path else None
            for arrow in scwol.arrows_to[obj.base]:
                table = self.cosets(arrow)
                obj.star_complete = obj.star_complete and table.is_complete
                group = self.cog.groups[obj.base]
                for key in self.coset_keys(arrow):
                    if last == Move(DOWN, arrow) and not key:
                        continue
                    k = group.normalize(key)
                    rep = obj.rep + self.local_word(obj.base, k) + self.arrow_word(arrow)
                    child = self._add(scwol.source(arrow), rep, obj.path + (Move(UP, arrow, key),), obj.id,
                                      frontier=self.is_frontier_key(arrow, key))
                    self._up[(obj.id, arrow, key)] = child.id
                    queue.append(child.id)
            for arrow in scwol.arrows_from[obj.base]:
                if last is not None and last.kind == UP and last.arrow == arrow:
                    continue
                rep = obj.rep + invert_word(self.arrow_word(arrow))
                child = self._add(scwol.target(arrow), rep, obj.path + (Move(DOWN, arrow),), obj.id)
                self._down[(obj.id, arrow)] = child.id
                queue.append(child.id)

        for obj in self.objects:
            for arrow in scwol.arrows_from[obj.base]:
                found = self.down_neighbor(obj.id, arrow)
                if found is not None:
                    self.arrows.append(DevArrow(obj.id, found[0], arrow))
        logger.info(f"Развёртка {self.cog.name}: {self.object_count} объектов, {self.arrow_count} стрелок",
                    extra={"object_count": self.object_count, "operation": "develop"})

    def up_neighbor(self, obj: int, arrow: str, key: Word) -> int | None:
        o = self.objects[obj]
        if o.path and o.path[-1] == Move(DOWN, arrow) and not key:
            return o.parent
        return self._up.get((obj, arrow, key))

    def down_neighbor(self, obj: int, arrow: str) -> tuple[int, Element] | None:
        """
        Сосед (D, u) с rep_D = rep_obj * b- * u, u из G_t(b)
        """
        o = self.objects[obj]
        group = self.cog.groups[self.cog.scwol.target(arrow)]
        last = o.path[-1] if o.path else None
        if last is not None and last.kind == UP and last.arrow == arrow:
            return o.parent, group.inverse(group.normalize(last.key))
        child = self._down.get((obj, arrow))
        if child is None:
            return None
        return child, group.identity

    def expected_target(self, arrow: DevArrow) -> int | None:
        found = self.down_neighbor(arrow.source, arrow.base)
        return found[0] if found is not None else None

    def _locate_base_objects(self) -> dict[str, int | None]:
        """
        Объекты (G_sigma, sigma) связаны стрелками максимального дерева
        """
        scwol = self.cog.scwol
        tree = set(self.cog.tree)
        found: dict[str, int | None] = {self.cog.root: 0}
        queue = deque([self.cog.root])
        while queue:
            base = queue.popleft()
            current = found[base]
            for arrow in scwol.arrows_to[base]:
                other = scwol.source(arrow)
                if arrow in tree and other not in found:
                    found[other] = self.up_neighbor(current, arrow, ()) if current is not None else None
                    queue.append(other)
            for arrow in scwol.arrows_from[base]:
                other = scwol.target(arrow)
                if arrow in tree and other not in found:
                    step = self.down_neighbor(current, arrow) if current is not None else None
                    found[other] = step[0] if step is not None else None
                    queue.append(other)
        return found

    def base_object(self, base: str) -> int | None:
        return self._base_objects.get(base)

    @cached_property
    def _symbol_owner(self) -> dict[int, tuple[str, int | str]]:
        owners: dict[int, tuple[str, int | str]] = {}
        for (obj, j), index in self.presentation.local_index.items():
            owners[index] = (obj, j)
        for arrow, index in self.presentation.arrow_index.items():
            owners[index] = ("", arrow)
        return owners

    def _syllables(self, word: Word) -> list[tuple[str, Word]]:
        """
        Разбиение слова на максимальные куски из одной локальной группы;
        буквы стрелок - отдельные куски с пустым именем объекта
        """
        result: list[tuple[str, list[int]]] = []
        for letter in word:
            if abs(letter) not in self._symbol_owner:
                raise UnknownSymbolError(letter, self.presentation.generators)
            owner, j = self._symbol_owner[abs(letter)]
            if owner == "":
                result.append(("", [letter]))
                continue
            local = j if letter > 0 else -j
            if result and result[-1][0] == owner:
                result[-1][1].append(local)
            else:
                result.append((owner, [local]))
        return [(owner, tuple(letters)) for owner, letters in result]

    def _anchor(self, owner: str, letters: Word) -> tuple[int, int, Element] | None:
        """
        Объект A, его образ и остаток r: x * rep_A = rep_A' * r
        """
        if owner:
            anchor = self.base_object(owner)
            if anchor is None:
                return None
            return anchor, anchor, self.cog.groups[owner].normalize(letters)
        letter = letters[0]
        _, arrow = self._symbol_owner[abs(letter)]
        edge = self.base_object(self.cog.scwol.source(arrow))
        vertex = self.base_object(self.cog.scwol.target(arrow))
        step = self.down_neighbor(edge, arrow) if edge is not None else None
        if step is None or vertex is None:
            return None
        other, u = step
        if letter > 0:
            return other, vertex, u
        return vertex, other, self.cog.groups[self.cog.scwol.target(arrow)].inverse(u)

    def _route(self, start: int, goal: int) -> list[Move]:
        """
        Ходы из start в goal через общего предка в дереве путей
        """
        a, b = self.objects[start].path, self.objects[goal].path
        common = 0
        while common < min(len(a), len(b)) and a[common] == b[common]:
            common += 1
        moves: list[Move] = []
        for move in reversed(a[common:]):
            moves.append(Move(DOWN, move.arrow) if move.kind == UP else Move(UP, move.arrow, ()))
        moves.extend(b[common:])
        return moves

    def _act_syllable(self, owner: str, letters: Word, obj: int) -> tuple[int, Element] | None:
        key = (owner, letters, obj)
        if key in self._syllable_cache:
            return self._syllable_cache[key]
        result = None
        anchor = self._anchor(owner, letters)
        if anchor is not None:
            source, image, residual = anchor
            for move in self._route(source, obj):
                translate = self._translate_up if move.kind == UP else self._translate_down
                step = translate(source, image, residual, move)
                if step is None:
                    break
                source, image, residual = step
            else:
                result = (image, residual)
        self._syllable_cache[key] = result
        return result

    def act_with_residual(self, word: Word, obj: int) -> tuple[int, Element] | None:
        group = self.cog.groups[self.objects[obj].base]
        current, residual = obj, group.identity
        for owner, letters in reversed(self._syllables(word)):
            if owner:
                letters = self.cog.groups[owner].normalize(letters).normal_form
                if not letters:
                    continue
            step = self._act_syllable(owner, letters, current)
            if step is None:
                return None
            current, r = step
            residual = group.multiply(r, residual)
        return current, residual

    def arrow_correction(self, arrow: DevArrow) -> Element:
        found = self.down_neighbor(arrow.source, arrow.base)
        if found is None or found[0] != arrow.target:
            raise ActionViolationError("incidence", arrow.name)
        return found[1]

    def _translate_up(self, source: int, image: int, residual: Element, move: Move) -> tuple[int, int, Element] | None:
        # r k = k' psi_a(h)  =>  x rep_E = rep_E' h
        scwol = self.cog.scwol
        vertex_group = self.cog.groups[scwol.target(move.arrow)]
        edge_group = self.cog.groups[scwol.source(move.arrow)]
        subgroup = self.cog.psi_subgroup(move.arrow)
        rk = vertex_group.multiply(residual, move.key)
        k2 = subgroup.coset_rep(rk)
        h_word = subgroup.express(vertex_group.multiply(vertex_group.inverse(k2), rk))
        if h_word is None:
            raise ValidationError("development", f"остаток вне psi({move.arrow})")
        next_source = self.up_neighbor(source, move.arrow, move.key)
        next_image = self.up_neighbor(image, move.arrow, k2.normal_form)
        if next_source is None or next_image is None:
            return None
        return next_source, next_image, edge_group.normalize(h_word)

    def _translate_down(self, source: int, image: int, residual: Element, move: Move) -> tuple[int, int, Element] | None:
        # остаток u_D'^-1 psi_b(r) u_D
        group = self.cog.groups[self.cog.scwol.target(move.arrow)]
        here = self.down_neighbor(source, move.arrow)
        there = self.down_neighbor(image, move.arrow)
        if here is None or there is None:
            return None
        r = group.multiply(group.inverse(there[1]), self.cog.psi_apply(move.arrow, residual), here[1])
        return here[0], there[0], r


class FiniteDevelopment(Development):
    """
    Развёртка для конечной pi_1: объекты - левые классы g G_sigma в
    регулярном представлении, действие - левое умножение
    """
    strategy = "finite"

    def __init__(self, cog: ComplexOfGroups, bound: int, radius: int):
        super().__init__(cog, bound, radius)
        graph = self.presentation.to_group().regular_representation
        if graph is None:
            raise BudgetExhaustedError("todd_coxeter", SettingsLoader().todd_coxeter_max_cosets, "pi_1 не перечисляется")
        self.graph: CosetGraph = graph
        self._member: dict[tuple[str, int], int] = {}
        self._build()

    def _orbits(self, base: str) -> list[list[int]]:
        group = self.cog.groups[base]
        words = [self.local_word(base, group.generator(j)) for j in range(1, group.rank + 1)]
        seen: set[int] = set()
        orbits = []
        for start in range(self.graph.size):
            if start in seen:
                continue
            orbit = [start]
            seen.add(start)
            queue = deque([start])
            while queue:
                x = queue.popleft()
                for w in words:
                    y = self.graph.trace(w, x)
                    if y not in seen:
                        seen.add(y)
                        orbit.append(y)
                        queue.append(y)
            orbits.append(sorted(orbit))
        return orbits

    def _build(self) -> None:
        scwol = self.cog.scwol
        raw: list[tuple[str, int]] = []
        member: dict[tuple[str, int], int] = {}
        for base in scwol.objects:
            for orbit in self._orbits(base):
                for x in orbit:
                    member[(base, x)] = len(raw)
                raw.append((base, orbit[0]))
        raw_arrows: list[tuple[int, int, str]] = []
        for arrow in sorted(scwol.arrows):
            source, target = scwol.arrows[arrow]
            inverse = invert_word(self.arrow_word(arrow))
            for i, (base, x) in enumerate(raw):
                if base == source:
                    raw_arrows.append((i, member[(target, self.graph.trace(inverse, x))], arrow))

        adjacency = nx.Graph()
        adjacency.add_nodes_from(range(len(raw)))
        adjacency.add_edges_from((s, t) for s, t, _ in raw_arrows)
        levels = nx.single_source_shortest_path_length(adjacency, member[(self.cog.root, 0)])
        kept = sorted((i for i in levels if levels[i] <= self.radius), key=lambda i: (levels[i], raw[i][1], raw[i][0]))
        renumber = {old: new for new, old in enumerate(kept)}
        for old in kept:
            base, x = raw[old]
            obj = DevObject(renumber[old], base, levels[old], self.graph.words[x])
            obj.boundary = any(levels.get(n, self.radius + 1) > self.radius for n in adjacency.neighbors(old))
            self.objects.append(obj)
        for (base, x), old in member.items():
            if old in renumber:
                self._member[(base, x)] = renumber[old]
        for s, t, arrow in raw_arrows:
            if s in renumber and t in renumber:
                self.arrows.append(DevArrow(renumber[s], renumber[t], arrow))
        self._raw_arrows = {(renumber[s], arrow): renumber.get(t) for s, t, arrow in raw_arrows if s in renumber}
        logger.info(f"Развёртка {self.cog.name}: |pi_1| = {self.graph.size}, {self.object_count} объектов",
                    extra={"object_count": self.object_count, "operation": "develop"})

    def base_object(self, base: str) -> int | None:
        return self._member.get((base, 0))

    def expected_target(self, arrow: DevArrow) -> int | None:
        return self._raw_arrows.get((arrow.source, arrow.base))

    def _element(self, word: Word, start: int = 0) -> int:
        return self.graph.trace(word, start)

    def act(self, word: Word, obj: int) -> int | None:
        o = self.objects[obj]
        return self._member.get((o.base, self._element(o.rep, self._element(word))))

    def _local_search(self, base: str, source: int, target: int) -> Element:
        # r из G_sigma с source * r = target в регулярном представлении
        for r in finite_elements(self.cog.groups[base]) or []:
            if self._element(self.local_word(base, r), source) == target:
                return r
        raise ActionViolationError("residual", f"нет остатка в G_{base}")

    def act_with_residual(self, word: Word, obj: int) -> tuple[int, Element] | None:
        image = self.act(word, obj)
        if image is None:
            return None
        o, o2 = self.objects[obj], self.objects[image]
        return image, self._local_search(o.base, self._element(o2.rep), self._element(o.rep, self._element(word)))

    def arrow_correction(self, arrow: DevArrow) -> Element:
        source, target = self.objects[arrow.source], self.objects[arrow.target]
        moved = self._element(invert_word(self.arrow_word(arrow.base)), self._element(source.rep))
        return self._local_search(target.base, self._element(target.rep), moved)


def build_development(cog: ComplexOfGroups, bound: int, radius: int, strategy: str | None = None,
                      check_cocycles: bool = True) -> Development:
    """
    Выбирает стратегию: tree для скволов без компонуемых пар, иначе finite
    """
    if check_cocycles:
        report = validate_cocycles(cog)
        if not report.valid:
            raise CocycleInvalidError(len(report.violations))
    strategy = strategy or ("finite" if cog.has_composable_pairs else "tree")
    if strategy == "tree":
        return TreeDevelopment(cog, bound, radius)
    if strategy == "finite":
        return FiniteDevelopment(cog, bound, radius)
    raise ValidationError("strategy", f"неизвестная стратегия '{strategy}'")


@dataclass
class ActionReport:
    checks: dict[str, dict] = field(default_factory=dict)
    stabilizer_orders: dict[str, int] = field(default_factory=dict)
    quotient_objects: list[str] = field(default_factory=list)
    unavailable: int = 0

    @property
    def passed(self) -> bool:
        return all(c["status"] != "FAIL" for c in self.checks.values())

    def to_dict(self) -> dict:
        return {
            "checks": self.checks,
            "passed": self.passed,
            "quotient_objects": list(self.quotient_objects),
            "stabilizer_orders": dict(sorted(self.stabilizer_orders.items())),
            "unavailable": self.unavailable,
        }


def _reduced_words(letters: list[int], length: int, limit: int) -> list[Word]:
    words: list[Word] = [()]
    level: list[Word] = [()]
    for _ in range(length):
        level = [w + (x,) for w in level for x in letters if not w or w[-1] != -x]
        words.extend(level)
        if len(words) >= limit:
            return words[:limit]
    return words


def _neighbors(dev: Development, obj: int) -> list[int]:
    return [a.target for a in dev.arrows_from(obj)] + [a.source for a in dev.arrows_to(obj)]


def _stabilizer_exhaustive(dev: FiniteDevelopment, obj: DevObject, elements: list[Element]) -> None:
    """
    Перебор всей pi_1: множество неподвижных элементов совпадает с rep G_sigma rep^-1
    """
    graph = dev.graph
    expected = {graph.trace(obj.rep + dev.local_word(obj.base, h) + invert_word(obj.rep)) for h in elements}
    fixers = {x for x in range(graph.size) if dev.act(graph.words[x], obj.id) == obj.id}
    if fixers != expected or len(expected) != len(elements):
        raise ActionViolationError(
            "stabilizer", f"{obj.name}: |Stab| = {len(fixers)}, |G_{obj.base}| = {len(elements)}")


def _stabilizer_bounded(dev: Development, obj: DevObject, elements: list[Element], words: list[Word]) -> int:
    """
    Сопряжённые rep h rep^-1 фиксируют объект с остатком ровно h; каждое
    слово из ограниченного набора, фиксирующее объект, имеет остаток в
    G_sigma и действует на звезде так же, как сопряжённый этому остатку.
    Возвращает число недоступных образов.
    """
    group = dev.cog.groups[obj.base]
    expected = {h.normal_form for h in elements}
    unavailable = 0
    found: set[Word] = set()
    for h in elements:
        word = obj.rep + dev.local_word(obj.base, h) + invert_word(obj.rep)
        step = dev.act_with_residual(word, obj.id)
        if step is None:
            unavailable += 1
            continue
        if step[0] != obj.id or group.normalize(step[1]).normal_form != h.normal_form:
            raise ActionViolationError("stabilizer", f"{obj.name}: {dev.format(word)}")
        found.add(h.normal_form)
    star = _neighbors(dev, obj.id)
    for word in words:
        step = dev.act_with_residual(word, obj.id)
        if step is None:
            unavailable += 1
            continue
        if step[0] != obj.id:
            continue
        residual = group.normalize(step[1])
        if residual.normal_form not in expected:
            raise ActionViolationError("stabilizer", f"{obj.name}: остаток {group.format(residual)} вне G_{obj.base}")
        twin = obj.rep + dev.local_word(obj.base, residual) + invert_word(obj.rep)
        for other in star:
            image, twin_image = dev.act(word, other), dev.act(twin, other)
            if image is not None and twin_image is not None and image != twin_image:
                raise ActionViolationError("stabilizer", f"{dev.format(word)} и {dev.format(twin)} различаются на o{other}")
        found.add(residual.normal_form)
    if found - expected or (not unavailable and found != expected):
        raise ActionViolationError("stabilizer", f"{obj.name}: найдено {len(found)} из |G_{obj.base}| = {len(expected)}")
    return unavailable


def verify_action(dev: Development) -> ActionReport:
    """
    (i) образующие переводят стрелки в стрелки; (ii) rep_S переводит
    (G_sigma, sigma) в S, и внутренность усечения покрывает все объекты
    сквола; (iii) для конечных G_sigma стабилизатор S равен rep G_sigma rep^-1:
    перебором всей pi_1 в стратегии finite и по словам длины не больше bound
    в стратегии tree. На стрелке E -> V ровно |G_e| элементов Stab(V) фиксируют E.
    """
    report = ActionReport()
    index = {(a.source, a.target, a.base) for a in dev.arrows}

    checked = 0
    for arrow in dev.arrows:
        if dev.expected_target(arrow) != arrow.target:
            raise ActionViolationError("incidence", arrow.name)
        for letter in dev.letters:
            source, target = dev.act((letter,), arrow.source), dev.act((letter,), arrow.target)
            if source is None or target is None:
                report.unavailable += 1
                continue
            if (source, target, arrow.base) not in index:
                raise ActionViolationError("arrows", f"{dev.format((letter,))} * {arrow.name}")
            checked += 1
    report.checks["arrows"] = {"checked": checked, "status": "PASS"}

    checked = 0
    for obj in dev.interior():
        anchor = dev.base_object(obj.base)
        image = dev.act(obj.rep, anchor) if anchor is not None else None
        if image is None:
            report.unavailable += 1
            continue
        if image != obj.id:
            raise ActionViolationError("orbit", f"{dev.format(obj.rep)} * B_{obj.base} = o{image}, ожидался {obj.name}")
        checked += 1
    report.quotient_objects = sorted({o.base for o in dev.interior()})
    missing = sorted(set(dev.cog.scwol.objects) - set(report.quotient_objects))
    report.checks["orbits"] = {"checked": checked, "missing_bases": missing, "status": "FAIL" if missing else "PASS"}
    if missing:
        logger.warning(f"Внутренность развёртки {dev.cog.name} не покрывает объекты {', '.join(missing)}",
                       extra={"result": "FAIL"})

    exhaustive = isinstance(dev, FiniteDevelopment)
    words = [] if exhaustive else _reduced_words(dev.letters, dev.bound, SettingsLoader().coset_budget)
    checked = 0
    status = "SKIPPED"
    for obj in dev.interior():
        elements = finite_elements(dev.cog.groups[obj.base])
        if elements is None:
            continue
        status = "PASS"
        if exhaustive:
            _stabilizer_exhaustive(dev, obj, elements)
        else:
            report.unavailable += _stabilizer_bounded(dev, obj, elements, words)
        checked += 1
        report.stabilizer_orders[obj.base] = len(elements)
        conjugates = [obj.rep + dev.local_word(obj.base, g) + invert_word(obj.rep) for g in elements]
        for arrow in dev.arrows_to(obj.id):
            edge = dev.objects[arrow.source]
            edge_elements = finite_elements(dev.cog.groups[edge.base])
            if edge.boundary or edge_elements is None:
                continue
            images = [dev.act(word, edge.id) for word in conjugates]
            if None in images:
                report.unavailable += 1
                continue
            fixing = sum(1 for image in images if image == edge.id)
            if fixing != len(edge_elements):
                raise ActionViolationError("stabilizer", f"{arrow.name}: {fixing} != |G_{edge.base}| = {len(edge_elements)}")
            checked += 1
    report.checks["stabilizers"] = {
        "checked": checked,
        "mode": "exhaustive" if exhaustive else "bounded-words",
        "status": status,
        "word_count": len(words),
    }
    result = "пройдена" if report.passed else "не пройдена"
    logger.info(f"Проверка действия на развёртке {dev.cog.name}: {result}", extra={"result": "OK" if report.passed else "FAIL"})
    return report
