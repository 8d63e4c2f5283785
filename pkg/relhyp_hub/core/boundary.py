"""
Параболические точки развёртки, области D(xi), классы склейки
периферических меток вдоль xi-путей и проверка вложения границ
"""

from collections import defaultdict
from dataclasses import dataclass, field

import networkx as nx
from networkx.utils import UnionFind

from relhyp_hub.core.complexes import ComplexOfGroups
from relhyp_hub.core.development import Development, DevObject, TreeDevelopment
from relhyp_hub.core.exceptions import (
    ActionUnavailableError,
    TruncationTooSmallError,
    UndecidableMembershipError,
    ValidationError,
)
from relhyp_hub.core.groups import Element, Word, invert_word
from relhyp_hub.core.subgroups import SubgroupSpec, enumerate_cosets
from relhyp_hub.logging_config import get_logger

logger = get_logger("relhyp.boundary")

# наибольшая степень образующей периферической подгруппы при поиске
# поточечно неподвижной подгруппы конечного индекса
MAX_POWER = 12


def verify_peripheral_assignment(cog: ComplexOfGroups) -> list[dict]:
    """
    Для каждой стрелки a и периферической P_p из G_i(a) с образом (q, k):
    k^-1 psi_a(y) k лежит в P_q для всех образующих y из P_p
    """
    problems: list[dict] = []
    for arrow in sorted(cog.peripheral_maps):
        source, target = cog.scwol.arrows[arrow]
        target_group = cog.groups[target]
        for p, (q, conjugator) in enumerate(cog.peripheral_maps[arrow]):
            image_subgroup = cog.peripherals[target][q]
            for y in cog.peripherals[source][p].generators:
                moved = target_group.multiply(target_group.inverse(conjugator), cog.psi_apply(arrow, y), conjugator)
                if not image_subgroup.contains(moved):
                    problems.append({
                        "arrow": arrow,
                        "element": target_group.format(moved),
                        "peripheral": p,
                        "target": q,
                    })
    if problems:
        logger.info(f"Периферическая разметка {cog.name}: {len(problems)} нарушений")
    return problems


def _require_infinite(subgroup: SubgroupSpec) -> bool:
    return subgroup.is_finite() is not True


def _canonical(subgroup: SubgroupSpec, element: Element) -> Word:
    rep = subgroup.coset_rep(element)
    if rep is None:
        raise UndecidableMembershipError(subgroup.describe(), subgroup.ambient.backend)
    return rep.normal_form


@dataclass(frozen=True, order=True)
class ParabolicPoint:
    """
    Параболическая точка (rep_S c) * xi_q: объект S, номер периферической
    подгруппы q в G_sigma и канонический представитель класса c P_q
    """
    vertex: int
    peripheral: int
    coset: Word = ()

    def label(self, dev: Development) -> str:
        obj = dev.objects[self.vertex]
        group = dev.cog.groups[obj.base]
        return f"{obj.name}[{self.peripheral}]:{group.format(self.coset)}"

    def to_dict(self, dev: Development) -> dict:
        obj = dev.objects[self.vertex]
        return {
            "coset": dev.cog.groups[obj.base].format(self.coset),
            "label": self.label(dev),
            "object": obj.name,
            "peripheral": self.peripheral,
        }


def point_at(dev: Development, vertex: int, peripheral: int = 0, coset: Element | Word = ()) -> ParabolicPoint:
    obj = dev.objects[vertex]
    subgroups = dev.cog.peripherals.get(obj.base, [])
    if not 0 <= peripheral < len(subgroups):
        raise ValidationError("peripheral", f"у G_{obj.base} нет периферической подгруппы #{peripheral}")
    subgroup = subgroups[peripheral]
    return ParabolicPoint(vertex, peripheral, _canonical(subgroup, subgroup.ambient.normalize(coset)))


def act_on_point(dev: Development, word: Word, point: ParabolicPoint) -> ParabolicPoint | None:
    """
    w * (S, q, c) = (S', q, c') с w rep_S = rep_S' r и c' - представитель класса r c P_q
    """
    found = dev.act_with_residual(word, point.vertex)
    if found is None:
        return None
    image, residual = found
    base = dev.objects[point.vertex].base
    subgroup = dev.cog.peripherals[base][point.peripheral]
    moved = subgroup.ambient.multiply(residual, point.coset)
    return ParabolicPoint(image, point.peripheral, _canonical(subgroup, moved))


@dataclass
class GluingClass:
    """
    Класс эквивалентности меток; witnesses - шаги xi-путей (метка, метка, стрелка)
    """
    members: list[ParabolicPoint]
    witnesses: list[tuple[ParabolicPoint, ParabolicPoint, str]] = field(default_factory=list)

    def objects(self) -> list[int]:
        return sorted({m.vertex for m in self.members})

    def to_dict(self, dev: Development) -> dict:
        return {
            "members": [m.label(dev) for m in self.members],
            "objects": [dev.objects[o].name for o in self.objects()],
            "witnesses": [[a.label(dev), b.label(dev), arrow] for a, b, arrow in self.witnesses],
        }


def _labels_of(dev: Development, obj: DevObject, cache: dict[tuple[str, int], list[Word]]) -> list[ParabolicPoint]:
    """
    Метки объекта: все классы c P_q бесконечных периферических подгрупп с
    представителем длины не больше bound, одинаково для вершин и рёбер
    """
    labels = []
    for q, subgroup in enumerate(dev.cog.peripherals.get(obj.base, [])):
        if not _require_infinite(subgroup):
            continue
        if (obj.base, q) not in cache:
            table = enumerate_cosets(subgroup, max_length=dev.bound)
            cache[(obj.base, q)] = list(dict.fromkeys(_canonical(subgroup, rep) for rep in table.representatives))
        labels.extend(ParabolicPoint(obj.id, q, key) for key in cache[(obj.base, q)])
    return labels


def _image_label(dev: Development, label: ParabolicPoint, arrow: str, target: int, u: Element) -> ParabolicPoint | None:
    # (E, p, c) -> (V, q, u^-1 psi_a(c) k)
    maps = dev.cog.peripheral_maps.get(arrow, [])
    if label.peripheral >= len(maps):
        return None
    q, conjugator = maps[label.peripheral]
    target_base = dev.cog.scwol.target(arrow)
    subgroup = dev.cog.peripherals[target_base][q]
    if not _require_infinite(subgroup):
        return None
    group = subgroup.ambient
    element = group.multiply(group.inverse(u), dev.cog.psi_apply(arrow, label.coset), conjugator)
    return ParabolicPoint(target, q, _canonical(subgroup, element))


def _check_partners(dev: Development, label: ParabolicPoint) -> None:
    """
    Для внутренней вершины каждое ребро, метка которого может попасть в
    данную, должно присутствовать в усечении
    """
    if not isinstance(dev, TreeDevelopment):
        return
    obj = dev.objects[label.vertex]
    if obj.boundary:
        return
    scwol = dev.cog.scwol
    group = dev.cog.groups[obj.base]
    for arrow in scwol.arrows_to[obj.base]:
        for p, (q, conjugator) in enumerate(dev.cog.peripheral_maps.get(arrow, [])):
            if q != label.peripheral or not _require_infinite(dev.cog.peripherals[scwol.source(arrow)][p]):
                continue
            key = dev.cog.psi_subgroup(arrow).coset_rep(group.multiply(label.coset, group.inverse(conjugator)))
            if key is None or dev.up_neighbor(obj.id, arrow, key.normal_form) is None:
                raise TruncationTooSmallError("glue", label.label(dev))


def glue_boundary_classes(dev: Development) -> list[GluingClass]:
    """
    Метки ребра отождествляются с их образами в концах ребра;
    возвращаются классы, содержащие хотя бы одну внутреннюю метку
    """
    problems = verify_peripheral_assignment(dev.cog)
    if problems:
        raise ValidationError("peripheral_maps", f"разметка не согласована со стрелкой {problems[0]['arrow']}")
    union = UnionFind()
    witnesses: list[tuple[ParabolicPoint, ParabolicPoint, str]] = []
    labels: list[ParabolicPoint] = []
    cache: dict[tuple[str, int], list[Word]] = {}
    for obj in dev.objects:
        for label in _labels_of(dev, obj, cache):
            union[label]
            labels.append(label)
    for arrow in dev.arrows:
        u = dev.arrow_correction(arrow)
        for label in _labels_of(dev, dev.objects[arrow.source], cache):
            image = _image_label(dev, label, arrow.base, arrow.target, u)
            if image is None:
                continue
            if image not in union.parents:
                labels.append(image)
            union.union(label, image)
            witnesses.append((label, image, arrow.name))
    for label in labels:
        _check_partners(dev, label)

    members: dict[ParabolicPoint, list[ParabolicPoint]] = defaultdict(list)
    for label in set(labels):
        members[union[label]].append(label)
    classes = []
    for group in members.values():
        if all(dev.objects[m.vertex].boundary for m in group):
            continue
        root = union[group[0]]
        steps = sorted((w for w in witnesses if union[w[0]] == root), key=lambda w: (w[0], w[1], w[2]))
        classes.append(GluingClass(sorted(group), steps))
    classes.sort(key=lambda c: c.members[0])
    logger.info(f"Склейка меток {dev.cog.name}: {len(classes)} классов", extra={"operation": "glue"})
    return classes


@dataclass
class EmbedReport:
    status: str
    checked_classes: int
    violations: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"checked_classes": self.checked_classes, "status": self.status, "violations": self.violations}


def boundaries_embed_check(classes: list[GluingClass], dev: Development) -> EmbedReport:
    """
    PASS, если ни один класс не содержит двух различных меток одного объекта;
    для нарушения приводится xi-петля по шагам склейки
    """
    violations = []
    for cls in classes:
        by_object: dict[int, list[ParabolicPoint]] = defaultdict(list)
        for m in cls.members:
            by_object[m.vertex].append(m)
        for vertex, group in sorted(by_object.items()):
            if len(group) < 2:
                continue
            graph = nx.Graph()
            for a, b, arrow in cls.witnesses:
                graph.add_edge(a, b, arrow=arrow)
            path = nx.shortest_path(graph, group[0], group[1])
            loop = []
            for a, b in zip(path, path[1:], strict=False):
                loop.append({"from": a.label(dev), "to": b.label(dev), "via": graph.edges[a, b]["arrow"]})
            violations.append({"labels": [g.label(dev) for g in group], "object": dev.objects[vertex].name, "xi_loop": loop})
    status = "FAIL" if violations else "PASS"
    logger.info(f"Проверка вложения границ: {status}", extra={"result": status})
    return EmbedReport(status, len(classes), violations)


@dataclass
class SpreadReport:
    status: str
    A: int
    max_spread: int
    violations: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"A": self.A, "max_spread": self.max_spread, "status": self.status, "violations": self.violations}


def _vertices_of(dev: Development, obj: int) -> set[int]:
    dims = dev.cog.scwol.dimensions
    if dims[dev.objects[obj].base] == 0:
        return {obj}
    return {a.target for a in dev.arrows_from(obj) if dims[dev.objects[a.target].base] == 0}


def class_spread_check(classes: list[GluingClass], dev: Development, A: int) -> SpreadReport:
    """
    Никакой класс не смешивает метки симплексов на расстоянии больше A;
    расстояние между симплексами - наименьшее расстояние между их
    вершинами в 1-остове
    """
    if A < 0:
        raise ValidationError("A", "константа должна быть неотрицательной")
    whole = skeleton(dev)
    violations = []
    widest = 0
    for cls in classes:
        spans = {o: _vertices_of(dev, o) for o in cls.objects()}
        near: dict[int, dict[int, int]] = {}
        for vertices in spans.values():
            for v in vertices:
                if v not in near:
                    near[v] = nx.single_source_shortest_path_length(whole, v, cutoff=A + 1)
        objects = sorted(spans)
        for i, first in enumerate(objects):
            for second in objects[i + 1:]:
                distance = min((near[v].get(w, A + 1) for v in spans[first] for w in spans[second]), default=A + 1)
                widest = max(widest, distance)
                if distance > A:
                    violations.append({
                        "class": cls.members[0].label(dev),
                        "objects": [dev.objects[first].name, dev.objects[second].name],
                    })
    status = "FAIL" if violations else "PASS"
    logger.info(f"Разброс классов склейки (A = {A}): {status}", extra={"result": status})
    return SpreadReport(status, A, widest, violations)


@dataclass
class FixedSubcomplex:
    fixed: list[int]
    indeterminate: list[int]
    beyond: dict[int, list[str]] = field(default_factory=dict)

    def to_dict(self, dev: Development) -> dict:
        fixed = set(self.fixed)
        return {
            "arrows": [a.name for a in dev.arrows if a.source in fixed and a.target in fixed],
            "beyond_truncation": {dev.objects[o].name: keys for o, keys in sorted(self.beyond.items())},
            "fixed": [dev.objects[o].name for o in self.fixed],
            "indeterminate": [dev.objects[o].name for o in self.indeterminate],
        }


def _lookahead(dev: Development, obj: DevObject, residuals: list[Element]) -> list[str]:
    """
    Неподвижные соседи граничного объекта за пределами усечения
    """
    if not isinstance(dev, TreeDevelopment):
        return []
    scwol = dev.cog.scwol
    if scwol.arrows_from[obj.base]:
        return [arrow for arrow in scwol.arrows_from[obj.base] if dev.down_neighbor(obj.id, arrow) is None]
    group = dev.cog.groups[obj.base]
    found = []
    for arrow in scwol.arrows_to[obj.base]:
        subgroup = dev.cog.psi_subgroup(arrow)
        for key in dev.coset_keys(arrow):
            if dev.up_neighbor(obj.id, arrow, key) is not None:
                continue
            k = group.normalize(key)
            if all(subgroup.contains(group.multiply(group.inverse(k), r, k)) for r in residuals):
                found.append(f"{arrow}:{group.format(k)}")
    return found


def fixed_subcomplex(dev: Development, gens: list[Word], strict: bool = False) -> FixedSubcomplex:
    """
    Объекты, неподвижные относительно всех образующих; объекты с
    недоступным образом помечаются как неопределённые
    """
    fixed, indeterminate = [], []
    beyond: dict[int, list[str]] = {}
    for obj in dev.objects:
        residuals = []
        status = "fixed"
        for word in gens:
            found = dev.act_with_residual(word, obj.id)
            if found is None:
                status = "indeterminate"
                continue
            if found[0] != obj.id:
                status = "moved"
                break
            residuals.append(found[1])
        if status == "fixed":
            fixed.append(obj.id)
            if obj.boundary:
                extra = _lookahead(dev, obj, residuals)
                if extra:
                    beyond[obj.id] = extra
        elif status == "indeterminate":
            if strict:
                raise ActionUnavailableError(", ".join(dev.format(w) for w in gens), f"образ {obj.name} вне усечения")
            indeterminate.append(obj.id)
    return FixedSubcomplex(fixed, indeterminate, beyond)


@dataclass
class DomainResult:
    point: ParabolicPoint
    objects: list[int]
    diameter: int
    within_bound: bool
    simplex_count: int
    count_within: bool
    connected: bool
    convex: bool
    convexity_check: str
    A: int
    d_max: int
    powers: dict[int, int] = field(default_factory=dict)

    def to_dict(self, dev: Development) -> dict:
        return {
            "A": self.A,
            "connected": self.connected,
            "convex": self.convex,
            "convexity_check": self.convexity_check,
            "count_within": self.count_within,
            "d_max": self.d_max,
            "diameter": self.diameter,
            "objects": [dev.objects[o].name for o in self.objects],
            "point": self.point.to_dict(dev),
            "simplex_count": self.simplex_count,
            "within_bound": self.within_bound,
        }


def parabolic_generators(dev: Development, point: ParabolicPoint) -> list[Word]:
    """
    Образующие rep c y c^-1 rep^-1 стабилизатора точки в pi_1
    """
    obj = dev.objects[point.vertex]
    subgroup = dev.cog.peripherals[obj.base][point.peripheral]
    prefix = obj.rep + dev.local_word(obj.base, point.coset)
    return [prefix + dev.local_word(obj.base, y) + invert_word(prefix) for y in subgroup.nontrivial_generators]


def skeleton(dev: Development, objects: set[int] | None = None) -> nx.Graph:
    """
    1-остов: вершины - объекты размерности 0, рёбра - объекты размерности 1
    """
    dims = dev.cog.scwol.dimensions
    graph = nx.Graph()
    keep = set(range(dev.object_count)) if objects is None else objects
    for o in keep:
        if dims[dev.objects[o].base] == 0:
            graph.add_node(o)
    for o in keep:
        if dims[dev.objects[o].base] != 1:
            continue
        ends = sorted(a.target for a in dev.arrows_from(o) if a.target in keep)
        if len(ends) == 2:
            graph.add_edge(ends[0], ends[1], object=o)
    return graph


def compute_domain(dev: Development, point: ParabolicPoint, A: int, d_max: int, max_power: int = MAX_POWER) -> DomainResult:
    """
    D(xi) - объекты, неподвижные относительно некоторой степени y^m
    (m <= max_power) всех образующих параболической подгруппы
    """
    obj = dev.objects[point.vertex]
    subgroup = dev.cog.peripherals[obj.base][point.peripheral]
    if not _require_infinite(subgroup):
        raise ValidationError("peripheral", "параболическая подгруппа должна быть бесконечной")
    if A < 0 or d_max < 0 or max_power < 1:
        raise ValidationError("domain", "A и d_max неотрицательны, max_power положительно")
    gens = parabolic_generators(dev, point)

    domain: set[int] = set()
    powers: dict[int, int] = {}
    for m in range(1, max_power + 1):
        result = fixed_subcomplex(dev, [w * m for w in gens])
        if result.beyond:
            first = min(result.beyond)
            raise TruncationTooSmallError("domain", dev.objects[first].name)
        for o in result.fixed:
            if o not in domain:
                domain.add(o)
                powers[o] = m

    whole = skeleton(dev)
    local = skeleton(dev, domain)
    connected = local.number_of_nodes() > 0 and nx.is_connected(local)
    diameter = nx.diameter(local) if connected else -1
    exact = isinstance(dev, TreeDevelopment)
    convex = connected
    if connected:
        for u in local.nodes:
            for v in local.nodes:
                if u < v and not set(nx.shortest_path(whole, u, v)) <= set(local.nodes):
                    convex = False
    objects = sorted(domain)
    result = DomainResult(point, objects, diameter, 0 <= diameter <= A, len(objects), len(objects) <= d_max,
                          connected, convex, "exact" if exact else "geodesic-sample", A, d_max, powers)
    logger.info(f"Область {point.label(dev)}: {len(objects)} симплексов, диаметр {diameter}",
                extra={"operation": "domain", "object_count": len(objects)})
    return result
