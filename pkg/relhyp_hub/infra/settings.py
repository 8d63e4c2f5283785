import json
import os
from typing import Any

import toml


class SingletonMeta(type):
    """
    Метакласс-синглтон: один экземпляр на класс.
    """

    _instances: dict[type, object] = {}

    def __call__(cls, *args, **kwargs):
        if cls not in cls._instances:
            instance = super().__call__(*args, **kwargs)
            cls._instances[cls] = instance
        return cls._instances[cls]

    @classmethod
    def reset(mcs, cls: type | None = None) -> None:
        """
        Сбрасывает сохранённые экземпляры (используется в тестах)
        """
        if cls is None:
            mcs._instances.clear()
        else:
            mcs._instances.pop(cls, None)


class SettingsLoader(metaclass=SingletonMeta):
    """
    Singleton для загрузки и хранения настроек: бюджеты перечислений,
    каталог логов и параметры логирования
    """
    def __init__(self, config_path: str | None = None):
        self._default_settings = {
            "logs_dir": "logs",
            "log_level": "INFO",
            "log_format": "text",
            "max_log_file_size_mb": 10,
            "max_log_files": 5,
            "coset_budget": 500,
            "fp_rewrite_budget": 2000,
            "todd_coxeter_max_cosets": 20000,
            "delta_exhaustive_budget": 50_000_000,
            "thin_triangle_max_vertices": 200,
            "default_sample_count": 20000,
            "layout_child_scale": 0.35,
            # справочное значение, печатается в отчёте estimate-delta
            "delta0": 0,
        }

        self._settings = self._default_settings.copy()
        self._config_path = config_path or self._find_config_file()
        self.reload()

    def _find_config_file(self) -> str | None:
        """
        Пытается найти файл конфигурации
        """
        possible_paths = [
            "pyproject.toml",
            "relhyp_config.json",
            os.path.join("relhyp_hub", "config.json"),
        ]

        for path in possible_paths:
            if os.path.exists(path):
                return path

        return None

    def reload(self) -> None:
        """
        Перезагружает настройки из файла
        """
        if not self._config_path:
            return

        try:
            if self._config_path.endswith(".toml"):
                config_data = toml.load(self._config_path)
                relhyp_config = config_data.get("tool", {}).get("relhyp", {})
                self._settings.update(relhyp_config)
            elif self._config_path.endswith(".json"):
                with open(self._config_path, encoding="utf-8") as f:
                    json_config = json.load(f)
                self._settings.update(json_config)
        except (FileNotFoundError, json.JSONDecodeError, toml.TomlDecodeError) as e:
            print(f"Warning: Could not load config from {self._config_path}: {e}")

    def get(self, key: str, default: Any = None) -> Any:
        return self._settings.get(key, default)

    def set(self, key: str, value: Any) -> None:
        self._settings[key] = value

    @property
    def logs_dir(self) -> str:
        return self.get("logs_dir")

    @property
    def log_level(self) -> str:
        return self.get("log_level")

    @property
    def log_format(self) -> str:
        return self.get("log_format")

    @property
    def coset_budget(self) -> int:
        """
        Максимальное число представителей смежных классов за одно перечисление
        """
        return int(self.get("coset_budget"))

    @property
    def fp_rewrite_budget(self) -> int:
        """
        Число шагов переписывания при проверке равенства в конечно определённой группе
        """
        return int(self.get("fp_rewrite_budget"))

    @property
    def todd_coxeter_max_cosets(self) -> int:
        return int(self.get("todd_coxeter_max_cosets"))

    @property
    def delta_exhaustive_budget(self) -> int:
        """
        Допустимое значение |V|^4 для полного перебора четвёрок
        """
        return int(self.get("delta_exhaustive_budget"))

    @property
    def thin_triangle_max_vertices(self) -> int:
        return int(self.get("thin_triangle_max_vertices"))

    @property
    def default_sample_count(self) -> int:
        return int(self.get("default_sample_count"))

    @property
    def layout_child_scale(self) -> float:
        return float(self.get("layout_child_scale"))

    def get_log_file_path(self, filename: str) -> str:
        """
        Возвращает полный путь к файлу логов
        """
        logs_dir = self.logs_dir
        os.makedirs(logs_dir, exist_ok=True)
        return os.path.join(logs_dir, filename)

    def __getitem__(self, key: str) -> Any:
        return self.get(key)

    def __setitem__(self, key: str, value: Any) -> None:
        self.set(key, value)

    def __contains__(self, key: str) -> bool:
        return key in self._settings

    def to_dict(self) -> dict[str, Any]:
        return self._settings.copy()
