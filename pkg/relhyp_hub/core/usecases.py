from relhyp_hub.core.boundary import (
    DomainResult,
    EmbedReport,
    GluingClass,
    ParabolicPoint,
    SpreadReport,
    boundaries_embed_check,
    class_spread_check,
    compute_domain,
    glue_boundary_classes,
    point_at,
)
from relhyp_hub.core.complexes import (
    CocycleReport,
    ComplexOfGroups,
    Presentation,
    fundamental_group_presentation,
    validate_cocycles,
)
from relhyp_hub.core.cusped import CuspedSpace, DeltaReport, build_cusped, estimate_delta_four_point
from relhyp_hub.core.development import ActionReport, Development, build_development, verify_action
from relhyp_hub.core.examples import load_example
from relhyp_hub.core.exceptions import ValidationError
from relhyp_hub.core.graphs import LabeledGraph
from relhyp_hub.core.groups import GroupSpec
from relhyp_hub.core.layout import TreeOfCircles, tree_of_circles
from relhyp_hub.core.schemas import SCHEMA_VERSION
from relhyp_hub.core.subgroups import SubgroupSpec
from relhyp_hub.decorators import log_action
from relhyp_hub.infra.storage import ArtifactStorage


class CuspedManager:
    """
    Каспидальные пространства и оценка гиперболичности
    """
    @staticmethod
    @log_action("BUILD_CUSPED")
    def build(group: GroupSpec, peripherals: list[SubgroupSpec], radius: int, depth: int) -> CuspedSpace:
        if radius < 0:
            raise ValidationError("radius", "радиус должен быть неотрицательным")
        return build_cusped(group, peripherals, radius, depth)

    @staticmethod
    @log_action("ESTIMATE_DELTA")
    def estimate_delta(graph: LabeledGraph, mode: str = "exhaustive", seed: int | None = None,
                       count: int | None = None) -> DeltaReport:
        return estimate_delta_four_point(graph, mode, seed, count)


class ComplexManager:
    """
    Операции над комплексами групп и их развёртками
    """
    @staticmethod
    @log_action("VALIDATE_COG")
    def validate(cog: ComplexOfGroups) -> CocycleReport:
        return validate_cocycles(cog)

    @staticmethod
    @log_action("PRESENT")
    def present(cog: ComplexOfGroups, tietze: bool = True, simplify: bool = False) -> Presentation:
        return fundamental_group_presentation(cog, tietze=tietze, simplify=simplify)

    @staticmethod
    @log_action("DEVELOP", verbose=True)
    def develop(cog: ComplexOfGroups, bound: int, radius: int, strategy: str | None = None) -> Development:
        return build_development(cog, bound, radius, strategy)

    @staticmethod
    @log_action("VERIFY_ACTION")
    def verify(dev: Development) -> ActionReport:
        return verify_action(dev)


class BoundaryManager:
    """
    Склейка периферических меток, области D(xi) и раскладка
    """
    @staticmethod
    def base_points(dev: Development) -> list[ParabolicPoint]:
        """
        Точки (B_sigma, q, 1) для всех бесконечных периферических подгрупп
        вершинных объектов, попавших в усечение
        """
        dims = dev.cog.scwol.dimensions
        points = []
        for base in dev.cog.scwol.objects:
            anchor = dev.base_object(base)
            if anchor is None or dims[base] != 0:
                continue
            for q, subgroup in enumerate(dev.cog.peripherals.get(base, [])):
                if subgroup.is_finite() is not True:
                    points.append(point_at(dev, anchor, q))
        return points

    @staticmethod
    def parse_point(dev: Development, text: str) -> ParabolicPoint:
        """
        "o3:0:a1*b1" или "u:0:1" (имя объекта сквола - его базовая копия)
        """
        parts = text.split(":")
        if len(parts) not in (2, 3):
            raise ValidationError("point", f"ожидался формат объект:периферическая:класс, получено '{text}'")
        name, index = parts[0], parts[1]
        if name.startswith("o") and name[1:].isdigit():
            vertex = int(name[1:])
            if vertex >= dev.object_count:
                raise ValidationError("point", f"нет объекта {name}")
        else:
            anchor = dev.base_object(name)
            if anchor is None:
                raise ValidationError("point", f"объект '{name}' отсутствует в усечении")
            vertex = anchor
        if not index.isdigit():
            raise ValidationError("point", f"номер периферической подгруппы '{index}' не является числом")
        group = dev.cog.groups[dev.objects[vertex].base]
        coset = group.parse(parts[2]) if len(parts) == 3 else group.identity
        return point_at(dev, vertex, int(index), coset)

    @staticmethod
    @log_action("DOMAINS")
    def domains(dev: Development, points: list[ParabolicPoint], A: int, d_max: int) -> list[DomainResult]:
        return [compute_domain(dev, point, A, d_max) for point in points]

    @staticmethod
    @log_action("GLUE")
    def glue(dev: Development) -> list[GluingClass]:
        return glue_boundary_classes(dev)

    @staticmethod
    @log_action("EMBED_CHECK")
    def embed_check(dev: Development, classes: list[GluingClass]) -> EmbedReport:
        return boundaries_embed_check(classes, dev)

    @staticmethod
    @log_action("SPREAD_CHECK")
    def spread_check(dev: Development, classes: list[GluingClass], A: int) -> SpreadReport:
        return class_spread_check(classes, dev, A)

    @staticmethod
    @log_action("TREE_OF_CIRCLES")
    def tree_of_circles(dev: Development, classes: list[GluingClass] | None, depth: int, seed: int) -> TreeOfCircles:
        return tree_of_circles(dev, classes, depth, seed)


class ExampleManager:
    """
    Полный прогон встроенного примера с записью всех артефактов
    """
    @staticmethod
    @log_action("EXAMPLE", verbose=True)
    def run(name: str, storage: ArtifactStorage, overrides: dict | None = None) -> dict:
        example = load_example(name)
        params = {**example.defaults, **{k: v for k, v in (overrides or {}).items() if v is not None}}
        summary: dict = {"artifacts": [], "example": name, "parameters": dict(sorted(params.items())), "status": "PASS"}

        def save(filename: str, data: dict) -> None:
            summary["artifacts"].append(storage.save_json(filename, data))

        if example.kind == "cusped":
            group, peripherals = example.group_with_peripherals()
            space = CuspedManager.build(group, peripherals, params["radius"], params["depth"])
            save("cusped.json", {**space.to_dict(), "schema_version": SCHEMA_VERSION})
            report = CuspedManager.estimate_delta(space.graph)
            save("delta.json", report.to_dict())
            summary["delta"] = str(report.delta)
            summary["vertex_count"] = space.graph.vertex_count
            return summary

        params["radius"] = max(params["radius"], params["depth"])
        summary["parameters"] = dict(sorted(params.items()))
        cog = example.complex_of_groups()
        cocycles = ComplexManager.validate(cog)
        save("cocycles.json", cocycles.to_dict())
        if not cocycles.valid:
            summary["status"] = "FAIL"
            return summary
        presentation = ComplexManager.present(cog)
        save("presentation.json", presentation.to_dict())
        dev = ComplexManager.develop(cog, params["bound"], params["radius"])
        save("dev.json", dev.to_dict())
        # действие проверяется на своём усечении, если пример его задаёт
        checked = dev
        if "verify_bound" in params or "verify_radius" in params:
            checked = ComplexManager.develop(cog, params.get("verify_bound", params["bound"]),
                                             params.get("verify_radius", params["radius"]))
        action = ComplexManager.verify(checked)
        save("action.json", {**action.to_dict(), "bound": checked.bound, "radius": checked.radius})

        classes = BoundaryManager.glue(dev)
        save("classes.json", {"classes": [c.to_dict(dev) for c in classes], "schema_version": SCHEMA_VERSION})
        embed = BoundaryManager.embed_check(dev, classes)
        save("embed.json", embed.to_dict())
        spread = BoundaryManager.spread_check(dev, classes, params["A"])
        save("spread.json", spread.to_dict())
        results = BoundaryManager.domains(dev, BoundaryManager.base_points(dev), params["A"], params["d_max"])
        save("domains.json", {"domains": [r.to_dict(dev) for r in results], "schema_version": SCHEMA_VERSION})
        if dev.strategy == "tree":
            layout = BoundaryManager.tree_of_circles(dev, classes, params["depth"], params["seed"])
            save("toc.json", layout.to_dict(dev))

        summary["embed_check"] = embed.status
        summary["spread_check"] = spread.status
        summary["action"] = "PASS" if action.passed else "FAIL"
        summary["object_count"] = dev.object_count
        summary["class_count"] = len(classes)
        if embed.status == "FAIL" or spread.status == "FAIL" or not action.passed:
            summary["status"] = "FAIL"
        return summary
