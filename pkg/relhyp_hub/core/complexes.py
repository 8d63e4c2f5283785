"""
Комплексы групп над скволами: проверка коциклов и копредставление
фундаментальной группы
"""

from collections.abc import Sequence
from dataclasses import dataclass, field
from functools import cached_property

from sympy import ZZ, Matrix
from sympy.combinatorics.fp_groups import FpGroup, simplify_presentation
from sympy.combinatorics.free_groups import free_group
from sympy.matrices.normalforms import smith_normal_form

from relhyp_hub.core.exceptions import UndecidableEqualityError, ValidationError
from relhyp_hub.core.groups import (
    Element,
    Equality,
    FinitelyPresented,
    FreeGroup,
    GroupSpec,
    Word,
    cyclic_normal,
    exponent_sums,
    free_reduce,
    invert_word,
    is_enumerable,
    shortlex_key,
)
from relhyp_hub.core.scwol import Scwol
from relhyp_hub.core.subgroups import SubgroupSpec
from relhyp_hub.logging_config import get_logger

logger = get_logger("relhyp.complexes")

# длина слов при ограниченной проверке инъективности для свободных групп
_INJECTIVITY_WORD_LENGTH = 4


@dataclass
class ComplexOfGroups:
    """
    Локальные группы G_sigma, мономорфизмы psi_a: G_i(a) -> G_t(a), заданные
    образами образующих, и скручивающие элементы g_(a,b) из G_t(a)
    """
    scwol: Scwol
    groups: dict[str, GroupSpec]
    psi: dict[str, tuple[Element, ...]]
    twist: dict[tuple[str, str], Element] = field(default_factory=dict)
    tree: list[str] | None = None
    peripherals: dict[str, list[SubgroupSpec]] = field(default_factory=dict)
    peripheral_maps: dict[str, list[tuple[int, Element]]] = field(default_factory=dict)
    base_object: str | None = None
    name: str = "complex_of_groups"

    def __post_init__(self):
        missing = [o for o in self.scwol.objects if o not in self.groups]
        if missing:
            raise ValidationError("groups", f"нет локальных групп для объектов {missing}")
        normalized: dict[str, tuple[Element, ...]] = {}
        for arrow in self.scwol.arrows:
            if arrow not in self.psi:
                raise ValidationError("psi", f"не задан мономорфизм для стрелки '{arrow}'")
            source, target = self.scwol.arrows[arrow]
            images = self.psi[arrow]
            if len(images) != self.groups[source].rank:
                raise ValidationError("psi", f"стрелка '{arrow}': ожидалось {self.groups[source].rank} образов")
            normalized[arrow] = tuple(self.groups[target].normalize(img) for img in images)
        self.psi = normalized

        pairs = set(self.scwol.composable_pairs())
        twist: dict[tuple[str, str], Element] = {}
        for key, value in self.twist.items():
            if key not in pairs:
                raise ValidationError("twist", f"пара {key} не компонуема")
            twist[key] = self.groups[self.scwol.target(key[0])].normalize(value)
        self.twist = twist

        if self.tree is None:
            self.tree = self.scwol.default_tree()
        self.scwol.check_tree(self.tree)

        for obj, subgroups in self.peripherals.items():
            if obj not in self.groups:
                raise ValidationError("peripherals", f"неизвестный объект '{obj}'")
            for p in subgroups:
                if p.ambient is not self.groups[obj]:
                    raise ValidationError("peripherals", f"подгруппа {p.describe()} не лежит в G_{obj}")
        maps: dict[str, list[tuple[int, Element]]] = {}
        for arrow, entries in self.peripheral_maps.items():
            if arrow not in self.scwol.arrows:
                raise ValidationError("peripheral_maps", f"неизвестная стрелка '{arrow}'")
            source, target = self.scwol.arrows[arrow]
            if len(entries) != len(self.peripherals.get(source, [])):
                raise ValidationError("peripheral_maps", f"стрелка '{arrow}': число образов не равно числу периферических подгрупп")
            for index, _ in entries:
                if not 0 <= index < len(self.peripherals.get(target, [])):
                    raise ValidationError("peripheral_maps", f"стрелка '{arrow}': нет периферической подгруппы #{index} в {target}")
            maps[arrow] = [(int(index), self.groups[target].normalize(conj)) for index, conj in entries]
        self.peripheral_maps = maps
        if self.base_object is not None and self.base_object not in self.groups:
            raise ValidationError("base_object", f"неизвестный объект '{self.base_object}'")

    @property
    def root(self) -> str:
        """
        Базовый объект развёртки: заданный явно или первый объект наименьшей размерности
        """
        if self.base_object is not None:
            return self.base_object
        dims = self.scwol.dimensions
        lowest = min(dims.values())
        return next(o for o in self.scwol.objects if dims[o] == lowest)

    @property
    def has_composable_pairs(self) -> bool:
        return bool(self.scwol.composable_pairs())

    def psi_apply(self, arrow: str, element: Element | Sequence[int]) -> Element:
        word = element.normal_form if isinstance(element, Element) else tuple(element)
        target = self.groups[self.scwol.target(arrow)]
        images = self.psi[arrow]
        result: list[int] = []
        for letter in word:
            image = images[abs(letter) - 1].normal_form
            result.extend(image if letter > 0 else invert_word(image))
        return target.normalize(tuple(result))

    def twist_element(self, a: str, b: str) -> Element:
        return self.twist.get((a, b), self.groups[self.scwol.target(a)].identity)

    @cached_property
    def _psi_subgroups(self) -> dict[str, SubgroupSpec]:
        return {
            arrow: SubgroupSpec(self.groups[self.scwol.target(arrow)], self.psi[arrow], f"psi_{arrow}")
            for arrow in self.scwol.arrows
        }

    def psi_subgroup(self, arrow: str) -> SubgroupSpec:
        return self._psi_subgroups[arrow]

    def to_dict(self) -> dict:
        def fmt(obj: str, element: Element) -> str:
            return self.groups[obj].format(element)

        return {
            "base_object": self.base_object,
            "groups": {o: g.to_dict() for o, g in sorted(self.groups.items())},
            "name": self.name,
            "peripheral_maps": {
                a: [[index, fmt(self.scwol.target(a), conj)] for index, conj in entries]
                for a, entries in sorted(self.peripheral_maps.items())
            },
            "peripherals": {
                o: [[fmt(o, g) for g in p.generators] for p in subgroups] for o, subgroups in sorted(self.peripherals.items())
            },
            "psi": {a: [fmt(self.scwol.target(a), img) for img in imgs] for a, imgs in sorted(self.psi.items())},
            "scwol": self.scwol.to_dict(),
            "tree": sorted(self.tree or []),
            "twist": [[a, b, fmt(self.scwol.target(a), g)] for (a, b), g in sorted(self.twist.items())],
        }


@dataclass
class CocycleReport:
    valid: bool
    violations: list[dict]
    checked_pairs: int
    checked_triples: int
    checked_arrows: int

    def to_dict(self) -> dict:
        return {
            "checked_arrows": self.checked_arrows,
            "checked_pairs": self.checked_pairs,
            "checked_triples": self.checked_triples,
            "valid": self.valid,
            "violations": self.violations,
        }


def _require_equal(group: GroupSpec, left: Element, right: Element, context: str) -> bool:
    answer = group.equals(left, right)
    if answer == Equality.UNKNOWN:
        raise UndecidableEqualityError(group.format(left), group.format(right), context)
    return answer == Equality.EQUAL


def _bounded_words(rank: int, length: int) -> list[Word]:
    letters = [sign * i for i in range(1, rank + 1) for sign in (1, -1)]
    words: list[Word] = []
    frontier: list[Word] = [()]
    for _ in range(length):
        frontier = [w + (x,) for w in frontier for x in letters if not w or w[-1] != -x]
        words.extend(frontier)
    return words


def _check_homomorphism(cog: ComplexOfGroups, arrow: str) -> list[dict]:
    """
    Образы соотношений тривиальны; инъективность - точно для конечных
    источников и на словах ограниченной длины для свободных
    """
    source_name, target_name = cog.scwol.arrows[arrow]
    source, target = cog.groups[source_name], cog.groups[target_name]
    violations: list[dict] = []
    for relator in source.relators():
        image = cog.psi_apply(arrow, relator)
        if not _require_equal(target, image, target.identity, f"psi_{arrow}"):
            violations.append({
                "arrow": arrow,
                "condition": "homomorphism",
                "left": target.format(image),
                "relator": source.format(relator),
                "right": "1",
            })
    if violations:
        return violations

    if is_enumerable(source):
        images: dict[Word, Word] = {}
        for index in range(source.order()):
            element = source.element_at(index)
            key = cog.psi_apply(arrow, element).normal_form
            if key in images:
                violations.append({
                    "arrow": arrow,
                    "condition": "injective",
                    "left": source.format(images[key]),
                    "right": source.format(element),
                })
                break
            images[key] = element.normal_form
    elif isinstance(source, FreeGroup):
        for word in _bounded_words(source.rank, _INJECTIVITY_WORD_LENGTH):
            if _require_equal(target, cog.psi_apply(arrow, word), target.identity, f"psi_{arrow}"):
                violations.append({"arrow": arrow, "condition": "injective", "left": source.format(word), "right": "1"})
                break
    return violations


def validate_cocycles(cog: ComplexOfGroups) -> CocycleReport:
    """
    (a) Ad(g_(a,b)) psi_ab = psi_a psi_b на образующих G_i(b);
    (b) psi_a(g_(b,c)) g_(a,bc) = g_(a,b) g_(ab,c) для компонуемых троек
    """
    scwol = cog.scwol
    violations: list[dict] = []
    for arrow in sorted(scwol.arrows):
        violations.extend(_check_homomorphism(cog, arrow))

    pairs = scwol.composable_pairs()
    for a, b in pairs:
        ab = scwol.compose(a, b)
        source = cog.groups[scwol.source(b)]
        target = cog.groups[scwol.target(a)]
        g = cog.twist_element(a, b)
        for i in range(1, source.rank + 1):
            s = source.generator(i)
            left = target.conjugate(cog.psi_apply(ab, s), g)
            right = cog.psi_apply(a, cog.psi_apply(b, s))
            if not _require_equal(target, left, right, f"({a}, {b})"):
                violations.append({
                    "condition": "a",
                    "generator": source.format(s),
                    "left": target.format(left),
                    "pair": [a, b],
                    "right": target.format(right),
                })

    triples = scwol.composable_triples()
    for a, b, c in triples:
        target = cog.groups[scwol.target(a)]
        left = target.multiply(cog.psi_apply(a, cog.twist_element(b, c)), cog.twist_element(a, scwol.compose(b, c)))
        right = target.multiply(cog.twist_element(a, b), cog.twist_element(scwol.compose(a, b), c))
        if not _require_equal(target, left, right, f"({a}, {b}, {c})"):
            violations.append({
                "condition": "b",
                "left": target.format(left),
                "right": target.format(right),
                "triple": [a, b, c],
            })

    report = CocycleReport(not violations, violations, len(pairs), len(triples), len(scwol.arrows))
    logger.info(f"Проверка коциклов {cog.name}: нарушений {len(violations)}", extra={"result": "OK" if report.valid else "FAIL"})
    return report


@dataclass
class Presentation:
    """
    Копредставление: имена образующих, соотношения (слова над номерами
    образующих) и семейство, из которого пришло каждое соотношение
    """
    generators: list[str]
    relators: list[Word]
    families: list[str]
    killed: list[str] = field(default_factory=list)
    local_index: dict[tuple[str, int], int] = field(default_factory=dict)
    arrow_index: dict[str, int] = field(default_factory=dict)

    @property
    def rank(self) -> int:
        return len(self.generators)

    def format_relator(self, relator: Word) -> str:
        if not relator:
            return "1"
        parts = []
        for letter in relator:
            name = self.generators[abs(letter) - 1]
            parts.append(name if letter > 0 else f"{name}^-1")
        return "*".join(parts)

    def to_group(self, budget: int | None = None) -> FinitelyPresented:
        return FinitelyPresented([f"x{i}" for i in range(self.rank)], self.relators, budget)

    def to_dict(self) -> dict:
        rank, torsion = abelian_invariants(self)
        return {
            "abelianization": {"free_rank": rank, "torsion": list(torsion)},
            "generators": list(self.generators),
            "killed": list(self.killed),
            "relators": [{"family": f, "word": self.format_relator(r)} for r, f in zip(self.relators, self.families, strict=True)],
        }


def fundamental_group_presentation(cog: ComplexOfGroups, tietze: bool = False, simplify: bool = False) -> Presentation:
    """
    Образующие: образующие всех G_sigma и символы a+, a- для каждой стрелки.
    Соотношения: соотношения G_sigma; a+ a- = 1; a+ b+ = g_(a,b) (ab)+;
    a+ s a- = psi_a(s); a+ = 1 для a из дерева.
    """
    scwol = cog.scwol
    scwol.check_tree(cog.tree)
    generators: list[str] = []
    local_index: dict[tuple[str, int], int] = {}
    for obj in scwol.objects:
        for i, name in enumerate(cog.groups[obj].generators, start=1):
            generators.append(f"{obj}.{name}")
            local_index[(obj, i)] = len(generators)
    plus: dict[str, int] = {}
    minus: dict[str, int] = {}
    for arrow in sorted(scwol.arrows):
        generators.append(f"{arrow}+")
        plus[arrow] = len(generators)
        generators.append(f"{arrow}-")
        minus[arrow] = len(generators)

    def lift(obj: str, word: Sequence[int]) -> Word:
        return tuple(local_index[(obj, abs(x))] * (1 if x > 0 else -1) for x in word)

    relators: list[Word] = []
    families: list[str] = []
    for obj in scwol.objects:
        for relator in cog.groups[obj].relators():
            relators.append(lift(obj, relator))
            families.append("local")
    for arrow in sorted(scwol.arrows):
        relators.append((plus[arrow], minus[arrow]))
        families.append("inverse")
    for a, b in scwol.composable_pairs():
        g = cog.twist_element(a, b).normal_form
        relators.append((plus[a], plus[b], -plus[scwol.compose(a, b)]) + lift(scwol.target(a), invert_word(g)))
        families.append("composition")
    for arrow in sorted(scwol.arrows):
        source, target = scwol.arrows[arrow]
        for i in range(1, cog.groups[source].rank + 1):
            image = cog.psi[arrow][i - 1].normal_form
            relators.append((plus[arrow], local_index[(source, i)], minus[arrow]) + lift(target, invert_word(image)))
            families.append("conjugation")
    for arrow in sorted(cog.tree):
        relators.append((plus[arrow],))
        families.append("tree")

    presentation = Presentation(generators, relators, families, [], local_index, dict(plus))
    if tietze:
        presentation = _tietze(presentation, minus, set(cog.tree))
        if simplify:
            presentation = _simplify(presentation)
    logger.debug(f"Копредставление {cog.name}: {presentation.rank} образующих, {len(presentation.relators)} соотношений")
    return presentation


def _tietze(presentation: Presentation, minus: dict[str, int], tree: set[str]) -> Presentation:
    """
    a- заменяется на (a+)^-1, a+ = 1 для стрелок дерева
    """
    substitution: dict[int, Word] = {}
    for arrow, index in presentation.arrow_index.items():
        substitution[minus[arrow]] = () if arrow in tree else (-index,)
        if arrow in tree:
            substitution[index] = ()
    kept = [i for i in range(1, presentation.rank + 1) if i not in substitution]
    renumber = {old: new for new, old in enumerate(kept, start=1)}

    relators: list[Word] = []
    families: list[str] = []
    seen: set[Word] = set()
    for relator, family in zip(presentation.relators, presentation.families, strict=True):
        word: list[int] = []
        for letter in relator:
            if abs(letter) in substitution:
                part = substitution[abs(letter)]
                word.extend(part if letter > 0 else invert_word(part))
            else:
                word.append(letter)
        reduced = free_reduce(word)
        while len(reduced) >= 2 and reduced[0] == -reduced[-1]:
            reduced = reduced[1:-1]
        if not reduced:
            continue
        renumbered = tuple(renumber[abs(x)] * (1 if x > 0 else -1) for x in reduced)
        key = cyclic_normal(renumbered)
        if key in seen:
            continue
        seen.add(key)
        relators.append(renumbered)
        families.append(family)

    killed = sorted(presentation.generators[i - 1] for i in substitution)
    local_index = {key: renumber[i] for key, i in presentation.local_index.items()}
    arrow_index = {a: renumber[i] for a, i in presentation.arrow_index.items() if a not in tree}
    return Presentation([presentation.generators[i - 1] for i in kept], relators, families, killed, local_index, arrow_index)


def _simplify(presentation: Presentation) -> Presentation:
    """
    Дальнейшее упрощение преобразованиями Титце средствами sympy
    """
    if presentation.rank == 0:
        return presentation
    free, *symbols = free_group(",".join(f"x{i}" for i in range(presentation.rank)))

    def to_sympy(word: Word):
        result = free.identity
        for letter in word:
            result = result * (symbols[abs(letter) - 1] ** (1 if letter > 0 else -1))
        return result

    simplified = simplify_presentation(FpGroup(free, [to_sympy(r) for r in presentation.relators]))
    names = [str(g) for g in simplified.generators]
    position = {name: i for i, name in enumerate(names, start=1)}
    relators: list[Word] = []
    for relator in simplified.relators:
        word: list[int] = []
        for symbol, exponent in relator.array_form:
            letter = position[str(symbol)]
            word.extend([letter if exponent > 0 else -letter] * abs(exponent))
        relators.append(tuple(word))
    generators = [presentation.generators[int(name[1:])] for name in names]
    relators.sort(key=shortlex_key)
    killed = sorted(set(presentation.generators) - set(generators) | set(presentation.killed))
    return Presentation(generators, relators, ["simplified"] * len(relators), killed)


def abelian_invariants(presentation: Presentation) -> tuple[int, tuple[int, ...]]:
    """
    Свободный ранг и периодические инварианты абелизации (форма Смита)
    """
    n = presentation.rank
    rows = {tuple(exponent_sums(r, n)) for r in presentation.relators}
    rows.discard(tuple([0] * n))
    if n == 0:
        return 0, ()
    if not rows:
        return n, ()
    ordered = sorted(rows)
    size = max(len(ordered), n)
    padded = [list(row) + [0] * (size - n) for row in ordered] + [[0] * size for _ in range(size - len(ordered))]
    diagonal = smith_normal_form(Matrix(padded), domain=ZZ)
    factors = [abs(int(diagonal[i, i])) for i in range(size)]
    nonzero = [f for f in factors if f != 0]
    torsion = tuple(sorted(f for f in nonzero if f > 1))
    return n - len(nonzero), torsion


def amalgam_invariants(orders: Sequence[int], relations: Sequence[Sequence[int]]) -> tuple[int, tuple[int, ...]]:
    """
    Абелизация группы с циклическими образующими порядков orders и
    дополнительными соотношениями (векторы показателей)
    """
    n = len(orders)
    rows: list[Word] = []
    for i, order in enumerate(orders, start=1):
        rows.append((i,) * order)
    for vector in relations:
        word: list[int] = []
        for i, exponent in enumerate(vector, start=1):
            word.extend([i if exponent > 0 else -i] * abs(exponent))
        rows.append(tuple(word))
    return abelian_invariants(Presentation([f"x{i}" for i in range(n)], rows, ["oracle"] * len(rows)))


def spanning_tree_invariants(cog: ComplexOfGroups) -> list[tuple[int, tuple[int, ...]]]:
    """
    Инварианты абелизации для каждого остовного дерева
    """
    results = []
    for tree in cog.scwol.spanning_trees():
        variant = ComplexOfGroups(cog.scwol, cog.groups, cog.psi, cog.twist, tree, name=cog.name)
        results.append(abelian_invariants(fundamental_group_presentation(variant, tietze=True)))
    return results
