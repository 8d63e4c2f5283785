import json
import os
from typing import Any

import networkx as nx

from relhyp_hub.core.exceptions import SchemaError
from relhyp_hub.logging_config import get_logger

logger = get_logger("relhyp.storage")

EXPORT_FORMATS = ("json", "dot", "graphml")


def dumps(data: Any) -> str:
    """
    Детерминированная сериализация: ключи отсортированы, отступ 2
    """
    return json.dumps(data, indent=2, ensure_ascii=False, sort_keys=True) + "\n"


class ArtifactStorage:
    """
    Запись артефактов вычислений в каталог вывода
    """
    def __init__(self, out_dir: str = "."):
        self.out_dir = out_dir
        os.makedirs(out_dir, exist_ok=True)

    def path(self, filename: str) -> str:
        if os.path.isabs(filename):
            return filename
        return os.path.join(self.out_dir, filename)

    def _write_atomic(self, filename: str, text: str) -> str:
        path = self.path(filename)
        os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
        temp_file = f"{path}.tmp"
        with open(temp_file, "w", encoding="utf-8") as f:
            f.write(text)
        os.replace(temp_file, path)
        logger.debug(f"Записан артефакт {path}")
        return path

    def save_json(self, filename: str, data: Any) -> str:
        return self._write_atomic(filename, dumps(data))

    @staticmethod
    def load_json(path: str) -> dict:
        """
        Загружает JSON-артефакт; ошибки формата становятся SchemaError
        """
        try:
            with open(path, encoding="utf-8") as f:
                data = json.load(f)
        except json.JSONDecodeError as e:
            raise SchemaError(path, f"некорректный JSON: {e}") from e
        if not isinstance(data, dict):
            raise SchemaError(path, "ожидался JSON-объект")
        return data

    @staticmethod
    def _plain(graph: nx.Graph) -> nx.Graph:
        # GraphML и DOT принимают только скалярные атрибуты
        result = graph.copy()
        for _, attrs in result.nodes(data=True):
            for key, value in list(attrs.items()):
                if value is None:
                    del attrs[key]
                elif not isinstance(value, (str, int, float, bool)):
                    attrs[key] = str(value)
        for *_, attrs in result.edges(data=True):
            for key, value in list(attrs.items()):
                if value is None:
                    del attrs[key]
                elif not isinstance(value, (str, int, float, bool)):
                    attrs[key] = str(value)
        return result

    def save_dot(self, filename: str, graph: nx.Graph) -> str:
        dot = nx.nx_pydot.to_pydot(self._plain(graph))
        return self._write_atomic(filename, dot.to_string())

    def save_graphml(self, filename: str, graph: nx.Graph) -> str:
        text = "\n".join(nx.generate_graphml(self._plain(graph))) + "\n"
        return self._write_atomic(filename, text)

    def export_graph(self, filename: str, graph: nx.Graph, fmt: str) -> str:
        if fmt == "dot":
            return self.save_dot(filename, graph)
        if fmt == "graphml":
            return self.save_graphml(filename, graph)
        raise SchemaError(filename, f"формат '{fmt}' не поддерживается для графов")
