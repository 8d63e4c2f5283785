"""
Регулярные клеточные комплексы и их барицентрическое подразделение
"""

import itertools
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from functools import cached_property

from relhyp_hub.core.exceptions import NonRegularComplexError, ValidationError
from relhyp_hub.logging_config import get_logger

logger = get_logger("relhyp.cells")


@dataclass(frozen=True)
class Cell:
    name: str
    dim: int
    faces: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {"dim": self.dim, "faces": list(self.faces), "name": self.name}


class CellComplex:
    """
    Конечный клеточный комплекс: у каждой клетки список граней коразмерности 1
    """
    def __init__(self, cells: Iterable[Cell], name: str = "complex"):
        self.name = name
        self._cells: dict[str, Cell] = {}
        for cell in cells:
            if cell.name in self._cells:
                raise ValidationError("cells", f"клетка '{cell.name}' повторяется")
            self._cells[cell.name] = cell
        self._check_incidence()

    def _check_incidence(self) -> None:
        for cell in self._cells.values():
            if cell.dim < 0:
                raise ValidationError("cells", f"отрицательная размерность у '{cell.name}'")
            for face in cell.faces:
                if face not in self._cells:
                    raise ValidationError("cells", f"грань '{face}' клетки '{cell.name}' не найдена")
                if self._cells[face].dim != cell.dim - 1:
                    raise ValidationError("cells", f"грань '{face}' клетки '{cell.name}' имеет неверную размерность")
            if cell.dim > 0 and not cell.faces:
                raise ValidationError("cells", f"клетка '{cell.name}' размерности {cell.dim} без граней")

    def check_regular(self) -> None:
        """
        Грани клетки попарно различны; у ребра ровно две различные вершины
        """
        for cell in self._cells.values():
            if len(set(cell.faces)) != len(cell.faces):
                raise NonRegularComplexError(cell.name, "грань входит в границу несколько раз")
            if cell.dim == 1 and len(cell.faces) != 2:
                raise NonRegularComplexError(cell.name, "ребро должно иметь две различные вершины")
            if cell.dim >= 2:
                # граница клетки - замкнутая цепь: каждая грань коразмерности 2 лежит ровно в двух гранях
                counts: dict[str, int] = {}
                for face in cell.faces:
                    for sub in self._cells[face].faces:
                        counts[sub] = counts.get(sub, 0) + 1
                bad = sorted(sub for sub, count in counts.items() if count != 2)
                if bad:
                    raise NonRegularComplexError(cell.name, f"граница не замкнута в {bad}")

    @property
    def cells(self) -> list[Cell]:
        return sorted(self._cells.values(), key=lambda c: (c.dim, c.name))

    def cell(self, name: str) -> Cell:
        try:
            return self._cells[name]
        except KeyError:
            raise ValidationError("cell", f"клетка '{name}' не найдена") from None

    @property
    def dimension(self) -> int:
        return max((c.dim for c in self._cells.values()), default=-1)

    def cells_of_dim(self, dim: int) -> list[Cell]:
        return [c for c in self.cells if c.dim == dim]

    @property
    def counts(self) -> list[int]:
        return [len(self.cells_of_dim(d)) for d in range(self.dimension + 1)]

    @cached_property
    def _closures(self) -> dict[str, frozenset[str]]:
        closures: dict[str, frozenset[str]] = {}
        for cell in self.cells:
            below: set[str] = set()
            for face in cell.faces:
                below.add(face)
                below |= closures[face]
            closures[cell.name] = frozenset(below)
        return closures

    def proper_faces(self, name: str) -> list[str]:
        """
        Все собственные грани клетки (замыкание отношения инцидентности)
        """
        return sorted(self._closures[name], key=lambda n: (self._cells[n].dim, n))

    def to_dict(self) -> dict:
        return {"cells": [c.to_dict() for c in self.cells], "name": self.name}

    @classmethod
    def from_dict(cls, data: dict) -> "CellComplex":
        return cls((Cell(c["name"], int(c["dim"]), tuple(c.get("faces", []))) for c in data["cells"]), data.get("name", "complex"))

    def __repr__(self) -> str:
        return f"CellComplex({self.name!r}, counts={self.counts})"


def vertex_complex(name: str = "v0") -> CellComplex:
    return CellComplex([Cell(name, 0)], "point")


def simplex(n: int) -> CellComplex:
    """
    n-мерный симплекс; клетки названы списками вершин через дефис
    """
    if n < 0:
        raise ValidationError("n", "размерность симплекса неотрицательна")
    return from_facets([list(range(n + 1))], f"simplex{n}")


def from_facets(facets: Sequence[Sequence[int | str]], name: str = "simplicial") -> CellComplex:
    """
    Симплициальный комплекс по списку максимальных симплексов
    """
    simplices: set[tuple[str, ...]] = set()
    for facet in facets:
        vertices = sorted({str(v) for v in facet}, key=lambda v: (len(v), v))
        for size in range(1, len(vertices) + 1):
            simplices.update(itertools.combinations(vertices, size))
    cells = []
    for s in sorted(simplices, key=lambda s: (len(s), s)):
        faces = tuple("-".join(f) for f in itertools.combinations(s, len(s) - 1)) if len(s) > 1 else ()
        cells.append(Cell("-".join(s), len(s) - 1, faces))
    return CellComplex(cells, name)


def polygon(n: int) -> CellComplex:
    """
    n-угольник: вершины v0..v{n-1}, рёбра e_i = [v_i, v_{i+1}], грань f
    """
    if n < 2:
        raise ValidationError("n", "у многоугольника не менее двух сторон")
    cells = [Cell(f"v{i}", 0) for i in range(n)]
    cells += [Cell(f"e{i}", 1, (f"v{i}", f"v{(i + 1) % n}")) for i in range(n)]
    cells.append(Cell("f", 2, tuple(f"e{i}" for i in range(n))))
    return CellComplex(cells, f"polygon{n}")


def square_grid(m: int, n: int) -> CellComplex:
    """
    Прямоугольник из m x n единичных квадратов
    """
    if m < 1 or n < 1:
        raise ValidationError("grid", "размеры решётки положительны")
    cells = [Cell(f"v{i}_{j}", 0) for i in range(m + 1) for j in range(n + 1)]
    for i in range(m):
        for j in range(n + 1):
            cells.append(Cell(f"h{i}_{j}", 1, (f"v{i}_{j}", f"v{i + 1}_{j}")))
    for i in range(m + 1):
        for j in range(n):
            cells.append(Cell(f"u{i}_{j}", 1, (f"v{i}_{j}", f"v{i}_{j + 1}")))
    for i in range(m):
        for j in range(n):
            cells.append(Cell(f"f{i}_{j}", 2, (f"h{i}_{j}", f"h{i}_{j + 1}", f"u{i}_{j}", f"u{i + 1}_{j}")))
    return CellComplex(cells, f"grid{m}x{n}")


def graph_complex(vertices: Sequence[str], edges: Sequence[tuple[str, str, str]], name: str = "graph") -> CellComplex:
    """
    Одномерный комплекс; рёбра заданы тройками (имя, начало, конец)
    """
    cells = [Cell(v, 0) for v in vertices]
    cells += [Cell(e, 1, (u, v)) for e, u, v in edges]
    return CellComplex(cells, name)


def theta_graph() -> CellComplex:
    return graph_complex(["p", "q"], [("e0", "p", "q"), ("e1", "p", "q"), ("e2", "p", "q")], "theta")
