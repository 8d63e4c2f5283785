"""
JSON-схемы групп, комплексов групп, периферических разметок и развёрток
"""

from dataclasses import replace
from typing import Any

from relhyp_hub.core.cells import CellComplex
from relhyp_hub.core.complexes import ComplexOfGroups
from relhyp_hub.core.development import Development, build_development
from relhyp_hub.core.exceptions import RelHypError, SchemaError, ValidationError
from relhyp_hub.core.graphs import LabeledGraph
from relhyp_hub.core.groups import (
    Element,
    FiniteTable,
    FinitelyPresented,
    FreeGroup,
    FreeProductOfFinites,
    GroupSpec,
    parse_word,
)
from relhyp_hub.core.scwol import Scwol, scwolify
from relhyp_hub.core.subgroups import SubgroupSpec

SCHEMA_VERSION = 1
BACKENDS = ("free", "finite_table", "free_product", "fp")


def _require(data: Any, key: str, source: str) -> Any:
    if not isinstance(data, dict) or key not in data:
        raise SchemaError(source, f"нет поля '{key}'")
    return data[key]


def check_version(data: dict, source: str) -> None:
    version = data.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise SchemaError(source, f"неподдерживаемая версия схемы {version}")


def load_group(data: dict, source: str = "group") -> GroupSpec:
    """
    {"backend": "free" | "finite_table" | "free_product" | "fp", ...}
    или сокращение {"cyclic_order": n} для циклической группы
    """
    if not isinstance(data, dict):
        raise SchemaError(source, "описание группы должно быть объектом")
    if "cyclic_order" in data:
        return FiniteTable.cyclic(int(data["cyclic_order"]), data.get("generator", "t"))
    backend = data.get("backend")
    if backend not in BACKENDS:
        raise SchemaError(source, f"неизвестный backend '{backend}', ожидался один из {BACKENDS}")
    if backend == "free":
        generators = data.get("generators")
        return FreeGroup(generators if generators is not None else int(data.get("rank", 0)))
    if backend == "finite_table":
        return FiniteTable(_require(data, "table", source), _require(data, "elements", source), _require(data, "generators", source))
    if backend == "free_product":
        factors = []
        for i, factor in enumerate(_require(data, "factors", source)):
            group = load_group(factor, f"{source}.factors[{i}]")
            if not isinstance(group, FiniteTable):
                raise SchemaError(source, "сомножители свободного произведения должны быть конечными")
            factors.append(group)
        return FreeProductOfFinites(factors)
    generators = _require(data, "generators", source)
    relators = [parse_word(generators, r) if isinstance(r, str) else r for r in data.get("relators", [])]
    return FinitelyPresented(generators, relators, data.get("budget"))


def parse_element(group: GroupSpec, value: str | list[int]) -> Element:
    if isinstance(value, str):
        return group.parse(value)
    if isinstance(value, list):
        return group.normalize(value)
    raise SchemaError("word", f"слово должно быть строкой или списком букв, получено {type(value).__name__}")


def load_subgroup(group: GroupSpec, words: list, name: str = "P") -> SubgroupSpec:
    if not isinstance(words, list):
        raise SchemaError(name, "подгруппа задаётся списком слов")
    return SubgroupSpec(group, tuple(parse_element(group, w) for w in words), name)


def load_peripherals(groups: dict[str, GroupSpec], data: dict) -> dict[str, list[SubgroupSpec]]:
    result: dict[str, list[SubgroupSpec]] = {}
    for obj, entries in data.items():
        if obj not in groups:
            raise ValidationError("peripherals", f"неизвестный объект '{obj}'")
        result[obj] = [load_subgroup(groups[obj], words, f"P{obj}{i}") for i, words in enumerate(entries)]
    return result


def load_peripheral_maps(scwol: Scwol, groups: dict[str, GroupSpec], data: dict) -> dict[str, list[tuple[int, Element]]]:
    result: dict[str, list[tuple[int, Element]]] = {}
    for arrow, entries in data.items():
        if arrow not in scwol.arrows:
            raise ValidationError("peripheral_maps", f"неизвестная стрелка '{arrow}'")
        target = groups[scwol.target(arrow)]
        result[arrow] = [(int(index), parse_element(target, conj)) for index, conj in entries]
    return result


def load_scwol(data: dict, source: str = "scwol") -> Scwol:
    """
    Явный сквол {"objects", "arrows", "composition"} или {"cell_complex": {...}}
    """
    if "cell_complex" in data:
        return scwolify(CellComplex.from_dict(data["cell_complex"]))
    _require(data, "objects", source)
    return Scwol.from_dict(data)


def load_complex(data: dict, source: str = "complex") -> ComplexOfGroups:
    check_version(data, source)
    scwol = load_scwol(_require(data, "scwol", source), f"{source}.scwol")
    groups = {obj: load_group(spec, f"{source}.groups.{obj}") for obj, spec in _require(data, "groups", source).items()}
    missing = [o for o in scwol.objects if o not in groups]
    if missing:
        raise SchemaError(source, f"нет локальных групп для {missing}")
    psi = {}
    for arrow, images in _require(data, "psi", source).items():
        if arrow not in scwol.arrows:
            raise SchemaError(source, f"psi задан для неизвестной стрелки '{arrow}'")
        psi[arrow] = tuple(parse_element(groups[scwol.target(arrow)], w) for w in images)
    twist = {}
    for a, b, word in data.get("twist", []):
        if a not in scwol.arrows:
            raise SchemaError(source, f"twist задан для неизвестной стрелки '{a}'")
        twist[(a, b)] = parse_element(groups[scwol.target(a)], word)
    peripherals = load_peripherals(groups, data.get("peripherals", {}))
    maps = load_peripheral_maps(scwol, groups, data.get("peripheral_maps", {}))
    return ComplexOfGroups(scwol, groups, psi, twist, data.get("tree"), peripherals, maps,
                           data.get("base_object"), data.get("name", "complex_of_groups"))


def dump_complex(cog: ComplexOfGroups) -> dict:
    return {**cog.to_dict(), "schema_version": SCHEMA_VERSION}


def apply_assignment(cog: ComplexOfGroups, data: dict) -> ComplexOfGroups:
    """
    Заменяет периферическую разметку комплекса разметкой из файла
    {"peripherals": {...}, "peripheral_maps": {...}}
    """
    check_version(data, "assignment")
    peripherals = load_peripherals(cog.groups, _require(data, "peripherals", "assignment"))
    maps = load_peripheral_maps(cog.scwol, cog.groups, data.get("peripheral_maps", {}))
    return replace(cog, peripherals=peripherals, peripheral_maps=maps)


def dump_assignment(cog: ComplexOfGroups) -> dict:
    data = cog.to_dict()
    return {"peripheral_maps": data["peripheral_maps"], "peripherals": data["peripherals"], "schema_version": SCHEMA_VERSION}


def load_development(data: dict, source: str = "dev") -> Development:
    """
    Развёртка хранится вместе с комплексом и перестраивается детерминированно
    """
    check_version(data, source)
    cog = load_complex(_require(data, "complex", source), f"{source}.complex")
    dev = build_development(cog, int(_require(data, "bound", source)), int(_require(data, "radius", source)),
                            data.get("strategy"))
    if "object_count" in data and data["object_count"] != dev.object_count:
        raise SchemaError(source, f"перестроено {dev.object_count} объектов, в файле {data['object_count']}")
    return dev


def load_graph(data: dict, source: str = "graph") -> LabeledGraph:
    check_version(data, source)
    try:
        return LabeledGraph.from_dict(data)
    except (KeyError, TypeError, RelHypError) as e:
        raise SchemaError(source, str(e)) from e
