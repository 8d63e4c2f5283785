"""
Встроенные примеры: genus2, amalgam-4-2-6, theta-free, zz-horoball
"""

import json
import os
from dataclasses import dataclass, field

from relhyp_hub.core.complexes import ComplexOfGroups
from relhyp_hub.core.exceptions import SchemaError, ValidationError
from relhyp_hub.core.groups import GroupSpec
from relhyp_hub.core.schemas import check_version, load_complex, load_group, load_subgroup
from relhyp_hub.core.subgroups import SubgroupSpec

EXAMPLES_DIR = os.path.join(os.path.dirname(os.path.dirname(__file__)), "data", "examples")


@dataclass
class BundledExample:
    name: str
    kind: str
    description: str
    data: dict
    defaults: dict = field(default_factory=dict)

    def complex_of_groups(self) -> ComplexOfGroups:
        if self.kind != "complex":
            raise ValidationError("example", f"пример '{self.name}' не является комплексом групп")
        return load_complex(self.data["complex"], f"{self.name}.complex")

    def group_with_peripherals(self) -> tuple[GroupSpec, list[SubgroupSpec]]:
        if self.kind != "cusped":
            raise ValidationError("example", f"пример '{self.name}' не задаёт каспидальное пространство")
        group = load_group(self.data["group"], f"{self.name}.group")
        peripherals = [load_subgroup(group, words, f"P{i}") for i, words in enumerate(self.data.get("peripherals", []))]
        return group, peripherals


def list_examples() -> list[str]:
    return sorted(name[:-5] for name in os.listdir(EXAMPLES_DIR) if name.endswith(".json"))


def load_example(name: str) -> BundledExample:
    path = os.path.join(EXAMPLES_DIR, f"{name}.json")
    if not os.path.exists(path):
        raise ValidationError("example", f"неизвестный пример '{name}', доступны: {', '.join(list_examples())}")
    with open(path, encoding="utf-8") as f:
        data = json.load(f)
    check_version(data, name)
    kind = data.get("kind")
    if kind not in ("complex", "cusped"):
        raise SchemaError(name, f"неизвестный вид примера '{kind}'")
    return BundledExample(name, kind, data.get("description", ""), data, dict(data.get("defaults", {})))
