"""
Конечно порождённые группы с бэкендами для проблемы равенства слов.

Слово - кортеж ненулевых целых: +i означает i-ю образующую (нумерация с 1),
-i - обратную к ней.
"""

import re
from abc import ABC, abstractmethod
from collections import deque
from collections.abc import Callable, Hashable, Iterable, Sequence
from dataclasses import dataclass
from enum import Enum
from functools import cached_property

import numpy as np
from sympy import Matrix
from sympy.combinatorics.fp_groups import FpGroup
from sympy.combinatorics.free_groups import free_group

from relhyp_hub.core.exceptions import BudgetExhaustedError, UnknownSymbolError, ValidationError
from relhyp_hub.infra.settings import SettingsLoader
from relhyp_hub.logging_config import get_logger

logger = get_logger("relhyp.groups")

Word = tuple[int, ...]

_TOKEN = re.compile(r"^([A-Za-z_][A-Za-z0-9_.+\-']*?)(?:\^(-?\d+))?$")


class Equality(Enum):
    EQUAL = "Equal"
    NOT_EQUAL = "NotEqual"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class Element:
    """
    Элемент группы: исходное слово и его нормальная форма.
    canonical=False означает, что нормальная форма не доказана каноничной
    (только для конечно определённых групп).
    """
    word: Word
    normal_form: Word
    canonical: bool = True

    def __len__(self) -> int:
        return len(self.normal_form)

    @property
    def is_identity(self) -> bool:
        return self.canonical and not self.normal_form


def free_reduce(word: Iterable[int]) -> Word:
    stack: list[int] = []
    for letter in word:
        if stack and stack[-1] == -letter:
            stack.pop()
        else:
            stack.append(letter)
    return tuple(stack)


def invert_word(word: Sequence[int]) -> Word:
    return tuple(-letter for letter in reversed(word))


def letter_rank(letter: int) -> int:
    """
    Порядок букв: a < a^-1 < b < b^-1 < ...
    """
    return 2 * (abs(letter) - 1) + (0 if letter > 0 else 1)


def shortlex_key(word: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    return len(word), tuple(letter_rank(letter) for letter in word)


def exponent_sums(word: Sequence[int], rank: int) -> list[int]:
    sums = [0] * rank
    for letter in word:
        sums[abs(letter) - 1] += 1 if letter > 0 else -1
    return sums


class GroupSpec(ABC):
    """
    Абстрактная конечно порождённая группа
    """
    backend: str = "abstract"

    def __init__(self, generators: Sequence[str]):
        names = [str(name) for name in generators]
        if len(set(names)) != len(names):
            raise ValidationError("generators", f"имена образующих повторяются: {names}")
        for name in names:
            if not _TOKEN.match(name) or "^" in name:
                raise ValidationError("generators", f"недопустимое имя образующей '{name}'")
        self._generators = tuple(names)

    @property
    def generators(self) -> tuple[str, ...]:
        return self._generators

    @property
    def rank(self) -> int:
        return len(self._generators)

    @property
    def letters(self) -> tuple[int, ...]:
        return tuple(sign * i for i in range(1, self.rank + 1) for sign in (1, -1))

    def check_word(self, word: Sequence[int]) -> Word:
        for letter in word:
            if not isinstance(letter, (int, np.integer)) or letter == 0 or abs(letter) > self.rank:
                raise UnknownSymbolError(letter, list(self._generators))
        return tuple(int(letter) for letter in word)

    @abstractmethod
    def _reduce(self, word: Word) -> tuple[Word, bool]:
        """
        Возвращает нормальную форму и флаг её каноничности
        """

    def normalize(self, word: Sequence[int] | Element) -> Element:
        if isinstance(word, Element):
            word = word.normal_form
        checked = self.check_word(word)
        normal_form, canonical = self._reduce(checked)
        return Element(checked, normal_form, canonical)

    @property
    def identity(self) -> Element:
        return Element((), (), True)

    def generator(self, index: int) -> Element:
        return self.normalize((index,))

    def multiply(self, *elements: Element | Sequence[int]) -> Element:
        word: list[int] = []
        for element in elements:
            word.extend(element.normal_form if isinstance(element, Element) else element)
        return self.normalize(tuple(word))

    def inverse(self, element: Element | Sequence[int]) -> Element:
        word = element.normal_form if isinstance(element, Element) else tuple(element)
        return self.normalize(invert_word(word))

    def power(self, element: Element, exponent: int) -> Element:
        base = element if exponent >= 0 else self.inverse(element)
        word: list[int] = []
        for _ in range(abs(exponent)):
            word.extend(base.normal_form)
        return self.normalize(tuple(word))

    def conjugate(self, element: Element, by: Element) -> Element:
        """
        by * element * by^-1
        """
        return self.multiply(by, element, self.inverse(by))

    def equals(self, left: Element | Sequence[int], right: Element | Sequence[int]) -> Equality:
        x = left if isinstance(left, Element) else self.normalize(left)
        y = right if isinstance(right, Element) else self.normalize(right)
        if x.canonical and y.canonical:
            return Equality.EQUAL if x.normal_form == y.normal_form else Equality.NOT_EQUAL
        return Equality.UNKNOWN

    def is_identity(self, element: Element | Sequence[int]) -> Equality:
        return self.equals(element, self.identity)

    def is_finite(self) -> bool | None:
        return None

    def order(self) -> int | None:
        return None

    def has_infinite_order(self, element: Element) -> bool | None:
        return None

    @property
    def has_canonical_forms(self) -> bool:
        return True

    def relators(self) -> list[Word]:
        return []

    def parse(self, text: str) -> Element:
        return self.normalize(parse_word(self._generators, text))

    def format(self, element: Element | Sequence[int]) -> str:
        word = element.normal_form if isinstance(element, Element) else tuple(element)
        return format_word(self._generators, word)

    @abstractmethod
    def to_dict(self) -> dict:
        """
        Сериализация в JSON-схему группы
        """

    def __repr__(self) -> str:
        return f"{type(self).__name__}({', '.join(self._generators)})"


def parse_word(generators: Sequence[str], text: str) -> Word:
    """
    Разбирает слово вида "a*b^-1*a^2" (пробелы тоже разделяют буквы; "1" - единица)
    """
    index = {name: i + 1 for i, name in enumerate(generators)}
    text = text.strip()
    if text in ("", "1", "e"):
        return ()
    word: list[int] = []
    for token in re.split(r"[*\s]+", text):
        if not token:
            continue
        if token == "1":
            continue
        match = _TOKEN.match(token)
        if not match or match.group(1) not in index:
            raise UnknownSymbolError(token, list(generators))
        letter = index[match.group(1)]
        exponent = int(match.group(2)) if match.group(2) is not None else 1
        word.extend([letter if exponent > 0 else -letter] * abs(exponent))
    return tuple(word)


def format_word(generators: Sequence[str], word: Sequence[int]) -> str:
    if not word:
        return "1"
    parts: list[str] = []
    run_letter, run_length = word[0], 0
    for letter in list(word) + [0]:
        if letter == run_letter:
            run_length += 1
            continue
        name = generators[abs(run_letter) - 1]
        exponent = run_length if run_letter > 0 else -run_length
        parts.append(name if exponent == 1 else f"{name}^{exponent}")
        run_letter, run_length = letter, 1
    return "*".join(parts)


class CosetGraph:
    """
    Полная таблица смежных классов (результат Тодда-Коксетера или таблицы умножения).
    Столбцы упорядочены как буквы a, a^-1, b, b^-1, ...
    """
    def __init__(self, table: Sequence[Sequence[int]], rank: int):
        self.table = [list(row) for row in table]
        self.rank = rank
        self.words = self._shortlex_words()

    def _column(self, letter: int) -> int:
        return letter_rank(letter)

    def step(self, coset: int, letter: int) -> int:
        return self.table[coset][self._column(letter)]

    def trace(self, word: Sequence[int], start: int = 0) -> int:
        coset = start
        for letter in word:
            coset = self.step(coset, letter)
        return coset

    @property
    def size(self) -> int:
        return len(self.table)

    def _shortlex_words(self) -> list[Word]:
        words: list[Word | None] = [None] * len(self.table)
        words[0] = ()
        queue = deque([0])
        letters = [sign * i for i in range(1, self.rank + 1) for sign in (1, -1)]
        while queue:
            coset = queue.popleft()
            for letter in letters:
                target = self.step(coset, letter)
                if words[target] is None:
                    words[target] = words[coset] + (letter,)
                    queue.append(target)
        if any(w is None for w in words):
            raise ValidationError("table", "таблица смежных классов несвязна")
        return words  # type: ignore[return-value]


def todd_coxeter(rank: int, relators: Sequence[Word], subgroup: Sequence[Word] = (), max_cosets: int | None = None) -> CosetGraph | None:
    """
    Перечисление смежных классов подгруппы средствами sympy.
    Возвращает None, если перечисление не уложилось в max_cosets.
    """
    if max_cosets is None:
        max_cosets = SettingsLoader().todd_coxeter_max_cosets
    if rank == 0:
        return CosetGraph([[]], 0)

    free, *gens = free_group(",".join(f"x{i}" for i in range(rank)))

    def to_sympy(word: Sequence[int]):
        result = free.identity
        for letter in word:
            gen = gens[abs(letter) - 1]
            result = result * (gen if letter > 0 else gen ** -1)
        return result

    group = FpGroup(free, [to_sympy(r) for r in relators if r])
    try:
        table = group.coset_enumeration([to_sympy(w) for w in subgroup], max_cosets=max_cosets)
    except ValueError as e:
        logger.debug(f"Тодд-Коксетер остановлен: {e}")
        return None
    if not table.is_complete():
        return None
    table.compress()
    table.standardize()
    return CosetGraph(table.table, rank)


class FiniteTable(GroupSpec):
    """
    Конечная группа, заданная таблицей умножения
    """
    backend = "finite_table"

    def __init__(self, table: Sequence[Sequence[int]], element_names: Sequence[str], generators: Sequence[str]):
        super().__init__(generators)
        self._table = np.asarray(table, dtype=np.int64)
        self._names = [str(name) for name in element_names]
        self._validate()
        name_index = {name: i for i, name in enumerate(self._names)}
        missing = [g for g in self._generators if g not in name_index]
        if missing:
            raise ValidationError("generators", f"образующие {missing} не являются элементами таблицы")
        self._gen_elements = [name_index[g] for g in self._generators]
        self._identity_index = int(np.flatnonzero((self._table == np.arange(len(self._names))).all(axis=1))[0])
        self._inverses = [int(np.flatnonzero(self._table[i] == self._identity_index)[0]) for i in range(len(self._names))]
        if self._reachable() != len(self._names):
            raise ValidationError("generators", "образующие не порождают группу")

    def _validate(self) -> None:
        n = len(self._names)
        if self._table.shape != (n, n):
            raise ValidationError("table", f"ожидалась таблица {n}x{n}, получено {self._table.shape}")
        if n == 0 or self._table.min() < 0 or self._table.max() >= n:
            raise ValidationError("table", "элементы таблицы вне диапазона")
        expected = np.arange(n)
        for axis in (0, 1):
            if not (np.sort(self._table, axis=axis) == (expected[:, None] if axis == 0 else expected[None, :])).all():
                raise ValidationError("table", "таблица не является латинским квадратом")
        identity_rows = np.flatnonzero((self._table == expected).all(axis=1))
        if len(identity_rows) != 1 or not (self._table[:, identity_rows[0]] == expected).all():
            raise ValidationError("table", "нет двусторонней единицы")
        left = self._table[self._table]
        right = self._table[expected[:, None, None], self._table[None, :, :]]
        if not np.array_equal(left, right):
            raise ValidationError("table", "умножение не ассоциативно")

    def _reachable(self) -> int:
        return len(_closure(self._identity_index, self._gen_elements, self.product_index))

    @cached_property
    def element_words(self) -> list[Word]:
        """
        Shortlex-наименьшее слово для каждого индекса элемента
        """
        words: list[Word | None] = [None] * len(self._names)
        words[self._identity_index] = ()
        queue = deque([self._identity_index])
        while queue:
            i = queue.popleft()
            for letter in self.letters:
                j = self.step(i, letter)
                if words[j] is None:
                    words[j] = words[i] + (letter,)
                    queue.append(j)
        return words  # type: ignore[return-value]

    @cached_property
    def _index_of_word(self) -> dict[Word, int]:
        return {word: i for i, word in enumerate(self.element_words)}

    def step(self, index: int, letter: int) -> int:
        gen = self._gen_elements[abs(letter) - 1]
        if letter < 0:
            gen = self._inverses[gen]
        return int(self._table[index, gen])

    def evaluate(self, word: Sequence[int]) -> int:
        index = self._identity_index
        for letter in word:
            index = self.step(index, letter)
        return index

    def _reduce(self, word: Word) -> tuple[Word, bool]:
        return self.element_words[self.evaluate(word)], True

    @property
    def element_names(self) -> list[str]:
        return list(self._names)

    @property
    def identity_index(self) -> int:
        return self._identity_index

    def product_index(self, i: int, j: int) -> int:
        return int(self._table[i, j])

    def inverse_index(self, i: int) -> int:
        return self._inverses[i]

    def element_index(self, element: Element | Sequence[int]) -> int:
        word = element.normal_form if isinstance(element, Element) else tuple(element)
        return self.evaluate(word)

    def element_at(self, index: int) -> Element:
        word = self.element_words[index]
        return Element(word, word, True)

    def elements(self) -> list[Element]:
        return [self.element_at(i) for i in range(len(self._names))]

    def is_finite(self) -> bool:
        return True

    def order(self) -> int:
        return len(self._names)

    def has_infinite_order(self, element: Element) -> bool:
        return False

    def relators(self) -> list[Word]:
        """
        Таблица как копредставление: w_g * s = w_{gs} для всех g и образующих s
        """
        result: set[Word] = set()
        for i, word in enumerate(self.element_words):
            for letter in range(1, self.rank + 1):
                target = self.element_words[self.step(i, letter)]
                relator = free_reduce(word + (letter,) + invert_word(target))
                if relator:
                    result.add(cyclic_normal(relator))
        return sorted(result, key=shortlex_key)

    def subgroup_table(self, indices: Iterable[int]) -> tuple["FiniteTable", list[int]]:
        """
        Подгруппа как самостоятельная таблица; возвращает её и отображение
        новых индексов в старые
        """
        members = sorted(set(indices), key=lambda i: shortlex_key(self.element_words[i]))
        member_set = set(members)
        if self._identity_index not in member_set:
            raise ValidationError("subgroup", "подмножество не содержит единицу")
        gens: list[int] = []
        closure = {self._identity_index}
        for candidate in members:
            if candidate in closure:
                continue
            gens.append(candidate)
            closure = _closure(self._identity_index, gens, self.product_index)
        if closure != member_set:
            raise ValidationError("subgroup", "подмножество не замкнуто")
        position = {old: new for new, old in enumerate(members)}
        table = [[position[self.product_index(a, b)] for b in members] for a in members]
        names = [self._names[i] for i in members]
        return FiniteTable(table, names, [self._names[g] for g in gens]), members

    @classmethod
    def cyclic(cls, order: int, generator: str = "t") -> "FiniteTable":
        if order < 1:
            raise ValidationError("cyclic_order", "порядок должен быть положительным")
        names = ["1"] + [generator if k == 1 else f"{generator}^{k}" for k in range(1, order)]
        table = [[(i + j) % order for j in range(order)] for i in range(order)]
        return cls(table, names, [generator] if order > 1 else [])

    @classmethod
    def from_closure(cls, generators: Sequence[Hashable], multiply: Callable, identity: Hashable,
                     generator_names: Sequence[str]) -> tuple["FiniteTable", list]:
        """
        Строит таблицу замыканием конкретных элементов (перестановок, пар и т.п.).
        Возвращает таблицу и список элементов в порядке индексов.
        """
        elements = [identity]
        seen = {identity: 0}
        queue = deque([identity])
        while queue:
            x = queue.popleft()
            for g in generators:
                y = multiply(x, g)
                if y not in seen:
                    seen[y] = len(elements)
                    elements.append(y)
                    queue.append(y)
        table = [[seen[multiply(x, y)] for y in elements] for x in elements]
        names = ["1"] + [f"el{i}" for i in range(1, len(elements))]
        gen_names: list[str] = []
        for g, name in zip(generators, generator_names, strict=True):
            index = seen[g]
            if index == 0 or names[index] in gen_names:
                continue
            names[index] = name
            gen_names.append(name)
        return cls(table, names, gen_names), elements

    def to_dict(self) -> dict:
        return {
            "backend": self.backend,
            "elements": list(self._names),
            "generators": list(self._generators),
            "table": self._table.tolist(),
        }


def _closure(identity: int, generators: Sequence[int], product: Callable[[int, int], int]) -> set[int]:
    seen = {identity}
    queue = deque([identity])
    while queue:
        x = queue.popleft()
        for g in generators:
            y = product(x, g)
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return seen


def cyclic_normal(word: Word) -> Word:
    """
    Канонический представитель циклического класса слова и его обратного
    """
    candidates = []
    for w in (word, invert_word(word)):
        for i in range(len(w)):
            candidates.append(w[i:] + w[:i])
    return min(candidates, key=shortlex_key)


class FreeGroup(GroupSpec):
    """
    Свободная группа; нормальная форма - свободно приведённое слово
    """
    backend = "free"

    def __init__(self, generators: Sequence[str] | int):
        if isinstance(generators, int):
            generators = [chr(ord("a") + i) for i in range(generators)]
        super().__init__(generators)

    def _reduce(self, word: Word) -> tuple[Word, bool]:
        return free_reduce(word), True

    def is_finite(self) -> bool:
        return self.rank == 0

    def order(self) -> int | None:
        return 1 if self.rank == 0 else None

    def has_infinite_order(self, element: Element) -> bool:
        return bool(element.normal_form)

    def to_dict(self) -> dict:
        return {"backend": self.backend, "generators": list(self._generators), "rank": self.rank}


class FreeProductOfFinites(GroupSpec):
    """
    Свободное произведение конечных групп; нормальная форма - чередующиеся слоги
    """
    backend = "free_product"

    def __init__(self, factors: Sequence[FiniteTable]):
        names: list[str] = []
        for factor in factors:
            names.extend(factor.generators)
        super().__init__(names)
        self._factors = list(factors)
        self._offsets: list[int] = []
        offset = 0
        for factor in self._factors:
            self._offsets.append(offset)
            offset += factor.rank

    @property
    def factors(self) -> list[FiniteTable]:
        return list(self._factors)

    def _locate(self, letter: int) -> tuple[int, int]:
        for f in range(len(self._factors) - 1, -1, -1):
            if abs(letter) > self._offsets[f]:
                local = abs(letter) - self._offsets[f]
                return f, local if letter > 0 else -local
        raise UnknownSymbolError(letter, list(self._generators))

    def syllables(self, word: Sequence[int]) -> list[tuple[int, int]]:
        """
        Список слогов (номер множителя, индекс элемента множителя)
        """
        stack: list[tuple[int, int]] = []
        for letter in word:
            f, local = self._locate(letter)
            factor = self._factors[f]
            if stack and stack[-1][0] == f:
                merged = factor.step(stack[-1][1], local)
                if merged == factor.identity_index:
                    stack.pop()
                else:
                    stack[-1] = (f, merged)
            else:
                stack.append((f, factor.step(factor.identity_index, local)))
        return stack

    def _syllables_to_word(self, syllables: Sequence[tuple[int, int]]) -> Word:
        word: list[int] = []
        for f, index in syllables:
            offset = self._offsets[f]
            word.extend(letter + offset if letter > 0 else letter - offset for letter in self._factors[f].element_words[index])
        return tuple(word)

    def _reduce(self, word: Word) -> tuple[Word, bool]:
        return self._syllables_to_word(self.syllables(word)), True

    def factor_of(self, element: Element) -> int | None:
        """
        Номер множителя, если элемент лежит в одном множителе
        """
        syllables = self.syllables(element.normal_form)
        if len(syllables) == 1:
            return syllables[0][0]
        return None

    def has_infinite_order(self, element: Element) -> bool:
        syllables = self.syllables(element.normal_form)
        while len(syllables) >= 2 and syllables[0][0] == syllables[-1][0]:
            f = syllables[0][0]
            factor = self._factors[f]
            merged = factor.product_index(syllables[-1][1], syllables[0][1])
            middle = syllables[1:-1]
            syllables = middle if merged == factor.identity_index else middle + [(f, merged)]
        return len(syllables) >= 2

    def is_finite(self) -> bool:
        return self.order() is not None

    def order(self) -> int | None:
        nontrivial = [f for f in self._factors if f.order() > 1]
        if not nontrivial:
            return 1
        if len(nontrivial) == 1:
            return nontrivial[0].order()
        return None

    def relators(self) -> list[Word]:
        result: list[Word] = []
        for f, factor in enumerate(self._factors):
            offset = self._offsets[f]
            for relator in factor.relators():
                result.append(tuple(letter + offset if letter > 0 else letter - offset for letter in relator))
        return result

    def to_dict(self) -> dict:
        return {"backend": self.backend, "factors": [factor.to_dict() for factor in self._factors]}


class FinitelyPresented(GroupSpec):
    """
    Конечно определённая группа. Равенство: точное, если перечисление
    Тодда-Коксетера замыкается; иначе ограниченное переписывание и
    проверка через абелизацию, с честным ответом Unknown.
    """
    backend = "fp"

    def __init__(self, generators: Sequence[str], relators: Sequence[Sequence[int]], budget: int | None = None):
        super().__init__(generators)
        self._relators = [free_reduce(self.check_word(r)) for r in relators]
        self._relators = [r for r in self._relators if r]
        self.budget = budget if budget is not None else SettingsLoader().fp_rewrite_budget

    @cached_property
    def regular_representation(self) -> CosetGraph | None:
        graph = todd_coxeter(self.rank, self._relators)
        if graph is None:
            logger.info(f"Группа {self!r}: перечисление Тодда-Коксетера не замкнулось")
        return graph

    @cached_property
    def _cyclic_relators(self) -> list[Word]:
        result: set[Word] = set()
        for relator in self._relators:
            core = cyclic_reduce(relator)
            for w in (core, invert_word(core)):
                for i in range(len(w)):
                    result.add(w[i:] + w[:i])
        return sorted(result, key=shortlex_key)

    @cached_property
    def _relator_matrix(self) -> Matrix:
        rows = [exponent_sums(r, self.rank) for r in self._relators]
        return Matrix(rows) if rows else Matrix.zeros(0, self.rank)

    def rewrite(self, word: Word, budget: int | None = None) -> tuple[Word, bool]:
        """
        Жадное переписывание Дена: заменяет подслово длиннее половины
        циклической перестановки соотношения на обратное к остатку.
        Возвращает слово и признак того, что бюджет не исчерпан.
        """
        budget = self.budget if budget is None else budget
        current = free_reduce(word)
        for _ in range(budget):
            replaced = self._dehn_step(current)
            if replaced is None:
                return current, True
            current = replaced
        return current, False

    def _dehn_step(self, word: Word) -> Word | None:
        for start in range(len(word)):
            for relator in self._cyclic_relators:
                common = 0
                limit = min(len(relator), len(word) - start)
                while common < limit and word[start + common] == relator[common]:
                    common += 1
                if 2 * common > len(relator):
                    rest = relator[common:]
                    return free_reduce(word[:start] + invert_word(rest) + word[start + common:])
        return None

    def _reduce(self, word: Word) -> tuple[Word, bool]:
        graph = self.regular_representation
        if graph is not None:
            return graph.words[graph.trace(word)], True
        rewritten, _ = self.rewrite(word)
        return rewritten, not rewritten

    @property
    def has_canonical_forms(self) -> bool:
        return self.regular_representation is not None

    def abelian_image_is_nonzero(self, word: Word) -> bool:
        """
        Достаточное условие нетривиальности: вектор сумм показателей
        не лежит в рациональной оболочке строк соотношений
        """
        vector = Matrix([exponent_sums(word, self.rank)])
        if all(v == 0 for v in vector):
            return False
        base_rank = self._relator_matrix.rank() if self._relator_matrix.rows else 0
        stacked = vector if not self._relator_matrix.rows else self._relator_matrix.col_join(vector)
        return stacked.rank() > base_rank

    def equals(self, left: Element | Sequence[int], right: Element | Sequence[int]) -> Equality:
        x = left if isinstance(left, Element) else self.normalize(left)
        y = right if isinstance(right, Element) else self.normalize(right)
        if x.canonical and y.canonical:
            return Equality.EQUAL if x.normal_form == y.normal_form else Equality.NOT_EQUAL
        difference = free_reduce(x.normal_form + invert_word(y.normal_form))
        rewritten, _ = self.rewrite(difference)
        if not rewritten:
            return Equality.EQUAL
        if self.abelian_image_is_nonzero(difference):
            return Equality.NOT_EQUAL
        return Equality.UNKNOWN

    def require_canonical(self, element: Element) -> Element:
        if not element.canonical:
            raise BudgetExhaustedError("normalize", self.budget, f"слово {self.format(element)} не приведено к канонической форме")
        return element

    def is_finite(self) -> bool | None:
        return True if self.regular_representation is not None else None

    def order(self) -> int | None:
        graph = self.regular_representation
        return graph.size if graph is not None else None

    def element_index(self, element: Element | Sequence[int]) -> int:
        graph = self.regular_representation
        if graph is None:
            raise BudgetExhaustedError("element_index", self.budget, "группа не перечислена")
        word = element.normal_form if isinstance(element, Element) else tuple(element)
        return graph.trace(word)

    def element_at(self, index: int) -> Element:
        graph = self.regular_representation
        if graph is None:
            raise BudgetExhaustedError("element_at", self.budget, "группа не перечислена")
        word = graph.words[index]
        return Element(word, word, True)

    def has_infinite_order(self, element: Element) -> bool | None:
        if self.regular_representation is not None:
            return False
        if self.abelian_image_is_nonzero(element.normal_form):
            return True
        return None

    def relators(self) -> list[Word]:
        return list(self._relators)

    def to_dict(self) -> dict:
        return {
            "backend": self.backend,
            "budget": self.budget,
            "generators": list(self._generators),
            "relators": [format_word(self._generators, r) for r in self._relators],
        }


def cyclic_reduce(word: Word) -> Word:
    word = free_reduce(word)
    while len(word) >= 2 and word[0] == -word[-1]:
        word = word[1:-1]
    return word


def is_enumerable(group: GroupSpec) -> bool:
    """
    Можно ли перебирать элементы группы по индексам
    """
    if isinstance(group, FiniteTable):
        return True
    if isinstance(group, FinitelyPresented):
        return group.regular_representation is not None
    return False
