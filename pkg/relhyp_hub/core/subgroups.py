"""
Подгруппы, смежные классы и ограниченный поиск высоты подгруппы
"""

import itertools
from collections import deque
from collections.abc import Sequence
from dataclasses import dataclass, field
from functools import cached_property

from relhyp_hub.core.exceptions import UndecidableMembershipError, ValidationError
from relhyp_hub.core.groups import (
    Element,
    Equality,
    FinitelyPresented,
    FreeGroup,
    FreeProductOfFinites,
    GroupSpec,
    Word,
    is_enumerable,
    shortlex_key,
    todd_coxeter,
)
from relhyp_hub.infra.settings import SettingsLoader
from relhyp_hub.logging_config import get_logger

logger = get_logger("relhyp.subgroups")

_FINITE_CLOSURE_LIMIT = 5000


@dataclass(frozen=True, eq=False)
class SubgroupSpec:
    """
    Подгруппа, заданная образующими в объемлющей группе
    """
    ambient: GroupSpec
    generators: tuple[Element, ...]
    name: str = "H"

    def __post_init__(self):
        normalized = tuple(self.ambient.normalize(g) for g in self.generators)
        object.__setattr__(self, "generators", normalized)

    @classmethod
    def from_words(cls, ambient: GroupSpec, words: Sequence[Sequence[int] | str], name: str = "H") -> "SubgroupSpec":
        elements = []
        for word in words:
            elements.append(ambient.parse(word) if isinstance(word, str) else ambient.normalize(word))
        return cls(ambient, tuple(elements), name)

    @classmethod
    def whole(cls, ambient: GroupSpec, name: str = "G") -> "SubgroupSpec":
        return cls(ambient, tuple(ambient.generator(i) for i in range(1, ambient.rank + 1)), name)

    @cached_property
    def nontrivial_generators(self) -> tuple[Element, ...]:
        return tuple(g for g in self.generators if self.ambient.is_identity(g) != Equality.EQUAL)

    @cached_property
    def kind(self) -> str:
        """
        Вид подгруппы, определяющий алгоритм проверки принадлежности:
        trivial, whole, cyclic, finite, finite_index или unsupported
        """
        if not self.nontrivial_generators:
            return "trivial"
        if self._whole_letters is not None:
            return "whole"
        if (
            len(self.nontrivial_generators) == 1
            and isinstance(self.ambient, (FreeGroup, FreeProductOfFinites))
            and self.ambient.has_infinite_order(self.nontrivial_generators[0])
        ):
            return "cyclic"
        if self.ambient.has_canonical_forms and self._finite_elements is not None:
            return "finite"
        if isinstance(self.ambient, FinitelyPresented) and self._index_graph is not None:
            return "finite_index"
        return "unsupported"

    @cached_property
    def _whole_letters(self) -> dict[int, int] | None:
        mapping: dict[int, int] = {}
        for j, g in enumerate(self.generators, start=1):
            if len(g.normal_form) == 1 and g.canonical:
                letter = g.normal_form[0]
                mapping.setdefault(letter, j)
                mapping.setdefault(-letter, -j)
        if all(i in mapping for i in range(1, self.ambient.rank + 1)):
            return mapping
        return None

    @cached_property
    def _finite_elements(self) -> dict[Word, Word] | None:
        """
        Нормальная форма -> кратчайшее слово в образующих подгруппы
        """
        if isinstance(self.ambient, FreeGroup):
            return None
        found: dict[Word, Word] = {(): ()}
        queue = deque([((), ())])
        letters = [sign * j for j in range(1, len(self.generators) + 1) for sign in (1, -1)]
        while queue:
            normal_form, word = queue.popleft()
            for letter in letters:
                g = self.generators[abs(letter) - 1]
                step = g if letter > 0 else self.ambient.inverse(g)
                product = self.ambient.multiply(normal_form, step)
                if product.normal_form not in found:
                    found[product.normal_form] = word + (letter,)
                    if len(found) > _FINITE_CLOSURE_LIMIT:
                        return None
                    queue.append((product.normal_form, word + (letter,)))
        return found

    @cached_property
    def _index_graph(self):
        return todd_coxeter(
            self.ambient.rank,
            self.ambient.relators(),
            [g.normal_form for g in self.nontrivial_generators],
        )

    def _unsupported(self) -> UndecidableMembershipError:
        return UndecidableMembershipError(self.describe(), self.ambient.backend)

    def describe(self) -> str:
        gens = ", ".join(self.ambient.format(g) for g in self.generators)
        return f"{self.name}=<{gens}>"

    def _cyclic_power(self, element: Element) -> int | None:
        generator = self.nontrivial_generators[0]
        inverse = self.ambient.inverse(generator)
        target = element.normal_form
        if not target:
            return 0
        # |w^k| >= |k| для элементов бесконечного порядка
        positive, negative = self.ambient.identity, self.ambient.identity
        for exponent in range(1, len(target) + 2):
            positive = self.ambient.multiply(positive, generator)
            negative = self.ambient.multiply(negative, inverse)
            if positive.normal_form == target:
                return exponent
            if negative.normal_form == target:
                return -exponent
        return None

    def contains(self, element: Element | Sequence[int]) -> bool:
        x = element if isinstance(element, Element) else self.ambient.normalize(element)
        kind = self.kind
        if kind == "trivial":
            answer = self.ambient.is_identity(x)
            if answer == Equality.UNKNOWN:
                raise self._unsupported()
            return answer == Equality.EQUAL
        if kind == "whole":
            return True
        if kind == "cyclic":
            return self._cyclic_power(x) is not None
        if kind == "finite":
            return self.ambient.normalize(x).normal_form in self._finite_elements
        if kind == "finite_index":
            return self._index_graph.trace(x.normal_form) == 0
        raise self._unsupported()

    def express(self, element: Element | Sequence[int]) -> Word | None:
        """
        Слово в образующих подгруппы, равное элементу, или None
        """
        x = element if isinstance(element, Element) else self.ambient.normalize(element)
        kind = self.kind
        if kind == "trivial":
            return () if self.contains(x) else None
        if kind == "whole":
            return tuple(self._whole_letters[letter] for letter in x.normal_form)
        if kind == "cyclic":
            power = self._cyclic_power(x)
            if power is None:
                return None
            index = self.generators.index(self.nontrivial_generators[0]) + 1
            return (index,) * power if power >= 0 else (-index,) * (-power)
        if kind == "finite":
            return self._finite_elements.get(self.ambient.normalize(x).normal_form)
        raise self._unsupported()

    def elements(self) -> list[Element]:
        """
        Все элементы конечной подгруппы
        """
        if self.kind == "trivial":
            return [self.ambient.identity]
        if self.kind == "finite":
            return [self.ambient.normalize(nf) for nf in sorted(self._finite_elements, key=shortlex_key)]
        if self.kind == "whole" and is_enumerable(self.ambient):
            return [self.ambient.element_at(i) for i in range(self.ambient.order())]
        raise ValidationError("subgroup", f"подгруппа {self.describe()} не является конечной перечислимой")

    def is_finite(self) -> bool | None:
        kind = self.kind
        if kind in ("trivial", "finite"):
            return True
        if kind == "cyclic":
            return False
        if kind == "whole":
            return self.ambient.is_finite()
        if kind == "finite_index":
            return self.ambient.is_finite()
        return None

    def coset_rep(self, element: Element | Sequence[int]) -> Element | None:
        """
        Канонический (shortlex-наименьший) представитель левого смежного класса xH,
        если он вычислим
        """
        x = element if isinstance(element, Element) else self.ambient.normalize(element)
        kind = self.kind
        if kind == "trivial":
            return x if x.canonical else None
        if kind == "whole":
            return self.ambient.identity
        if kind == "cyclic":
            generator = self.nontrivial_generators[0]
            best = x
            for step in (generator, self.ambient.inverse(generator)):
                current = x
                for _ in range(2 * len(x.normal_form) + 1):
                    current = self.ambient.multiply(current, step)
                    if shortlex_key(current.normal_form) < shortlex_key(best.normal_form):
                        best = current
            return best
        if kind == "finite":
            candidates = [self.ambient.multiply(x, nf) for nf in self._finite_elements]
            return min(candidates, key=lambda c: shortlex_key(c.normal_form))
        return None

    def same_coset(self, left: Element, right: Element) -> bool:
        return self.contains(self.ambient.multiply(self.ambient.inverse(left), right))


@dataclass(frozen=True)
class CosetTable:
    """
    Представители левых смежных классов gH в порядке обхода в ширину
    """
    subgroup: SubgroupSpec
    representatives: tuple[Element, ...]
    status: str
    index: int | None
    budget: int

    @property
    def is_complete(self) -> bool:
        return self.status == "complete"

    def locate(self, element: Element) -> int | None:
        for i, rep in enumerate(self.representatives):
            if self.subgroup.same_coset(rep, element):
                return i
        return None

    def words(self) -> list[Word]:
        return [rep.word for rep in self.representatives]


def enumerate_cosets(h: SubgroupSpec, budget: int | None = None, max_length: int | None = None) -> CosetTable:
    """
    Перечисляет левые смежные классы gH обходом слов в shortlex-порядке.
    Новые кандидаты строятся приписыванием буквы слева к уже найденным
    представителям, поэтому каждый суффикс представителя тоже представитель.
    Для левых классов это то же, что замкнутость по префиксам у шрайеровой
    трансверсали правых классов Hg: переход g -> g^-1 переводит одно в другое.
    """
    budget = budget if budget is not None else SettingsLoader().coset_budget
    group = h.ambient
    identity = group.identity
    reps: list[Element] = [identity]
    keys: dict[Word, int] = {}
    use_keys = h.coset_rep(identity) is not None
    if use_keys:
        keys[h.coset_rep(identity).normal_form] = 0

    def is_new(candidate: Element) -> bool:
        if use_keys:
            key = h.coset_rep(candidate).normal_form
            if key in keys:
                return False
            keys[key] = len(reps)
            return True
        return all(not h.same_coset(rep, candidate) for rep in reps)

    level = [identity]
    length = 0
    status = "complete"
    while level:
        if max_length is not None and length >= max_length:
            status = "truncated"
            break
        next_level: list[Element] = []
        for letter in group.letters:
            for rep in level:
                if rep.word and rep.word[0] == -letter:
                    continue
                word = (letter,) + rep.word
                candidate = group.normalize(word)
                if is_new(candidate):
                    element = Element(word, candidate.normal_form, candidate.canonical)
                    reps.append(element)
                    next_level.append(element)
                    if len(reps) >= budget:
                        status = "truncated"
                        break
            if status == "truncated":
                break
        if status == "truncated":
            break
        level = next_level
        length += 1

    index = len(reps) if status == "complete" else None
    logger.debug(f"Смежные классы {h.describe()}: {len(reps)} представителей, статус {status}")
    return CosetTable(h, tuple(reps), status, index, budget)


@dataclass(frozen=True)
class HeightReport:
    """
    Ограниченный поиск высоты: сертифицированная нижняя граница и кандидат в верхнюю
    """
    subgroup: str
    lower_bound: int
    witness_cosets: tuple[str, ...]
    witness_element: str | None
    upper_bound_candidate: int | None
    exact: bool
    coset_count: int
    word_length: int
    tuple_size: int
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "coset_count": self.coset_count,
            "exact": self.exact,
            "lower_bound": self.lower_bound,
            "notes": list(self.notes),
            "subgroup": self.subgroup,
            "tuple_size": self.tuple_size,
            "upper_bound_candidate": self.upper_bound_candidate,
            "witness_cosets": list(self.witness_cosets),
            "witness_element": self.witness_element,
            "word_length": self.word_length,
        }


def _bounded_subgroup_elements(h: SubgroupSpec, word_len: int) -> list[Element]:
    group = h.ambient
    found: dict[Word, Element] = {}
    frontier: list[Word] = [()]
    letters = [sign * j for j in range(1, len(h.generators) + 1) for sign in (1, -1)]
    for _ in range(word_len):
        next_frontier: list[Word] = []
        for word in frontier:
            for letter in letters:
                if word and word[-1] == -letter:
                    continue
                extended = word + (letter,)
                next_frontier.append(extended)
                product = group.identity
                for symbol in extended:
                    g = h.generators[abs(symbol) - 1]
                    product = group.multiply(product, g if symbol > 0 else group.inverse(g))
                if product.normal_form and product.normal_form not in found and len(product.normal_form) <= word_len:
                    found[product.normal_form] = product
        frontier = next_frontier
    return sorted(found.values(), key=lambda e: shortlex_key(e.normal_form))


def subgroup_height_bounded(h: SubgroupSpec, word_len: int, tuple_size: int) -> HeightReport:
    """
    Ищет наборы попарно различных смежных классов с бесконечным пересечением
    сопряжённых подгрупп g_i H g_i^-1 (свидетель - общий элемент бесконечного порядка
    ограниченной длины)
    """
    if word_len < 0 or tuple_size < 1:
        raise ValidationError("height", "word_len >= 0 и tuple_size >= 1")
    group = h.ambient
    table = enumerate_cosets(h, max_length=word_len)
    reps = list(table.representatives)

    if group.is_finite():
        return HeightReport(h.describe(), 0, (), None, 0, True, len(reps), word_len, tuple_size,
                            ["объемлющая группа конечна: все пересечения конечны"])

    candidates = [e for e in _bounded_subgroup_elements(h, word_len) if group.has_infinite_order(e)]
    lower = 0
    witness_cosets: tuple[str, ...] = ()
    witness_element: str | None = None
    upper: int | None = None
    for size in range(1, tuple_size + 1):
        found = None
        for combo in itertools.combinations(reps, size):
            first = combo[0]
            for h_element in candidates:
                y = group.conjugate(h_element, first)
                if all(h.contains(group.multiply(group.inverse(g), y, g)) for g in combo[1:]):
                    found = (combo, y)
                    break
            if found:
                break
        if found is None:
            upper = size - 1
            break
        lower = size
        witness_cosets = tuple(group.format(g) for g in found[0])
        witness_element = group.format(found[1])
    notes = [] if upper is not None else [f"свидетели найдены для всех наборов размера <= {tuple_size}"]
    return HeightReport(h.describe(), lower, witness_cosets, witness_element, upper, False, len(reps), word_len, tuple_size, notes)
