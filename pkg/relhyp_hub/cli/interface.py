#!/usr/bin/env python3

import argparse
import json
import os
import sys
from dataclasses import dataclass, field

from relhyp_hub.core.development import build_development
from relhyp_hub.core.examples import list_examples, load_example
from relhyp_hub.core.exceptions import (
    ActionViolationError,
    CocycleInvalidError,
    RelHypError,
    SchemaError,
    UnknownSymbolError,
    ValidationError,
)
from relhyp_hub.core.schemas import (
    SCHEMA_VERSION,
    apply_assignment,
    load_complex,
    load_development,
    load_graph,
    load_group,
    load_subgroup,
)
from relhyp_hub.core.usecases import BoundaryManager, ComplexManager, CuspedManager, ExampleManager
from relhyp_hub.infra.storage import ArtifactStorage, dumps
from relhyp_hub.logging_config import setup_logging

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_FAIL = 2

GRAPH_COMMANDS = ("build-cusped", "develop", "tree-of-circles")


@dataclass
class RunConfig:
    """
    Параметры одного запуска подкоманды
    """
    command: str
    inputs: dict[str, str] = field(default_factory=dict)
    budgets: dict[str, int] = field(default_factory=dict)
    seed: int | None = None
    out: str | None = None
    fmt: str = "json"
    sampled: bool = False

    def __post_init__(self):
        for name, value in self.budgets.items():
            if value is not None and value < 0:
                raise ValidationError(name, "значение должно быть неотрицательным")
        if self.budgets.get("count") is not None and self.budgets["count"] < 1:
            raise ValidationError("count", "число выборок должно быть положительным")
        if self.fmt not in ("json", "dot", "graphml"):
            raise ValidationError("format", f"неизвестный формат '{self.fmt}'")
        if self.fmt != "json" and self.command not in GRAPH_COMMANDS:
            raise ValidationError("format", f"команда {self.command} поддерживает только json")
        if self.fmt == "graphml" and self.command == "tree-of-circles":
            raise ValidationError("format", "раскладка экспортируется в json или dot")
        if self.sampled and self.seed is None:
            raise ValidationError("seed", "для выборочного режима требуется --seed")

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        inputs = {k: getattr(args, k) for k in ("group", "peripheral", "input", "complex", "dev", "assign") if getattr(args, k, None)}
        budgets = {k: getattr(args, k) for k in ("radius", "depth", "bound", "A", "dmax", "count") if getattr(args, k, None) is not None}
        return cls(args.command, inputs, budgets, getattr(args, "seed", None), getattr(args, "out", None),
                   getattr(args, "format", "json"), getattr(args, "mode", None) == "sampled")


class RelHypCLI:
    """
    Основной класс CLI интерфейса
    """
    def __init__(self):
        self.parser = self._create_parser()

    def _create_parser(self) -> argparse.ArgumentParser:
        """
        Создаёт парсер аргументов командной строки
        """
        parser = argparse.ArgumentParser(
            prog="relhyp",
            description="RelHyp Hub - орошары, каспидальные пространства, комплексы групп и склейка границ",
            formatter_class=argparse.RawDescriptionHelpFormatter,
            epilog="Используйте 'relhyp <команда> --help' для получения справки по команде"
        )

        subparsers = parser.add_subparsers(
            dest="command",
            help="Доступные команды",
            required=True
        )

        # build-cusped
        cusped_parser = subparsers.add_parser(
            "build-cusped",
            help="Построить усечённое каспидальное пространство",
            formatter_class=argparse.ArgumentDefaultsHelpFormatter
        )
        cusped_parser.add_argument("--group", type=str, required=True, help="JSON-описание группы")
        cusped_parser.add_argument("--peripheral", type=str, help="JSON-список периферических подгрупп (списки слов)")
        cusped_parser.add_argument("--radius", type=int, required=True, help="Радиус шара графа Кэли")
        cusped_parser.add_argument("--depth", type=int, required=True, help="Глубина орошаров")
        self._add_output(cusped_parser, graph=True)

        # estimate-delta
        delta_parser = subparsers.add_parser(
            "estimate-delta",
            help="Оценить delta по условию четырёх точек",
            formatter_class=argparse.ArgumentDefaultsHelpFormatter
        )
        delta_parser.add_argument("--in", dest="input", type=str, required=True, help="cusped.json или JSON графа")
        delta_parser.add_argument("--mode", type=str, choices=["exhaustive", "sampled"], default="exhaustive", help="Режим оценки")
        delta_parser.add_argument("--seed", type=int, help="Зерно для режима sampled")
        delta_parser.add_argument("--count", type=int, help="Число случайных четвёрок")
        self._add_output(delta_parser)

        # validate-cog
        validate_parser = subparsers.add_parser(
            "validate-cog",
            help="Проверить коциклические тождества комплекса групп",
            formatter_class=argparse.ArgumentDefaultsHelpFormatter
        )
        validate_parser.add_argument("--complex", type=str, required=True, help="JSON комплекса групп")
        self._add_output(validate_parser)

        # present
        present_parser = subparsers.add_parser(
            "present",
            help="Копредставление фундаментальной группы",
            formatter_class=argparse.ArgumentDefaultsHelpFormatter
        )
        present_parser.add_argument("--complex", type=str, required=True, help="JSON комплекса групп")
        present_parser.add_argument("--no-tietze", action="store_true", help="Не выполнять преобразования Титце")
        present_parser.add_argument("--simplify", action="store_true", help="Упростить копредставление средствами sympy")
        self._add_output(present_parser)

        # develop
        develop_parser = subparsers.add_parser(
            "develop",
            help="Построить усечённую развёртку",
            formatter_class=argparse.ArgumentDefaultsHelpFormatter
        )
        develop_parser.add_argument("--complex", type=str, required=True, help="JSON комплекса групп")
        develop_parser.add_argument("--bound", type=int, default=4, help="Длина представителей смежных классов")
        develop_parser.add_argument("--radius", type=int, required=True, help="Радиус усечения")
        develop_parser.add_argument("--strategy", type=str, choices=["tree", "finite"], help="Стратегия построения")
        self._add_output(develop_parser, graph=True)

        # verify-action
        action_parser = subparsers.add_parser(
            "verify-action",
            help="Проверить действие pi_1 на развёртке",
            formatter_class=argparse.ArgumentDefaultsHelpFormatter
        )
        action_parser.add_argument("--dev", type=str, required=True, help="dev.json")
        self._add_output(action_parser)

        # domains
        domains_parser = subparsers.add_parser(
            "domains",
            help="Вычислить области D(xi) параболических точек",
            formatter_class=argparse.RawDescriptionHelpFormatter,
            description="""Вычислить области D(xi) параболических точек.
            Примеры:
            domains --dev dev.json --point u:0:1 --A 2 --dmax 12
            domains --dev dev.json --point o5:0:a1 --A 2 --dmax 12
            domains --dev dev.json --A 2 --dmax 12      # все базовые точки"""
        )
        domains_parser.add_argument("--dev", type=str, required=True, help="dev.json")
        domains_parser.add_argument("--assign", type=str, help="JSON периферической разметки")
        domains_parser.add_argument("--point", type=str, action="append", help="Точка объект:периферическая:класс")
        domains_parser.add_argument("--A", dest="A", type=int, required=True, help="Константа ацилиндричности")
        domains_parser.add_argument("--dmax", type=int, required=True, help="Граница числа симплексов")
        self._add_output(domains_parser)

        for name, help_text in (("glue", "Классы склейки периферических меток"),
                                ("embed-check", "Проверить вложение границ локальных групп")):
            boundary_parser = subparsers.add_parser(name, help=help_text, formatter_class=argparse.ArgumentDefaultsHelpFormatter)
            boundary_parser.add_argument("--dev", type=str, required=True, help="dev.json")
            boundary_parser.add_argument("--assign", type=str, help="JSON периферической разметки")
            if name == "glue":
                boundary_parser.add_argument("--A", dest="A", type=int, help="Проверить, что классы не шире A")
            self._add_output(boundary_parser)

        # tree-of-circles
        toc_parser = subparsers.add_parser(
            "tree-of-circles",
            help="Раскладка дерева окружностей",
            formatter_class=argparse.ArgumentDefaultsHelpFormatter
        )
        toc_parser.add_argument("--dev", type=str, required=True, help="dev.json")
        toc_parser.add_argument("--assign", type=str, help="JSON периферической разметки")
        toc_parser.add_argument("--depth", type=int, required=True, help="Глубина раскладки")
        toc_parser.add_argument("--seed", type=int, default=0, help="Зерно угловых сдвигов")
        self._add_output(toc_parser, graph=True)

        # example
        example_parser = subparsers.add_parser(
            "example",
            help="Прогнать встроенный пример целиком",
            formatter_class=argparse.ArgumentDefaultsHelpFormatter
        )
        example_parser.add_argument("name", type=str, help=f"Имя примера: {', '.join(list_examples())}")
        example_parser.add_argument("--depth", type=int, help="Глубина раскладки (по умолчанию из примера)")
        example_parser.add_argument("--radius", type=int, help="Радиус усечения")
        example_parser.add_argument("--bound", type=int, help="Длина представителей смежных классов")
        example_parser.add_argument("--seed", type=int, help="Зерно")
        example_parser.add_argument("--out", type=str, default="out", help="Каталог для артефактов")

        return parser

    @staticmethod
    def _add_output(parser: argparse.ArgumentParser, graph: bool = False) -> None:
        parser.add_argument("--out", type=str, help="Файл результата (по умолчанию - stdout)")
        if graph:
            parser.add_argument("--format", type=str, choices=["json", "dot", "graphml"], default="json", help="Формат вывода")

    def _emit(self, config: RunConfig, data: dict, graph=None) -> None:
        """
        Печатает JSON или записывает артефакт в заданном формате
        """
        if config.out is None:
            print(dumps(data), end="")
            return
        storage = ArtifactStorage()
        if config.fmt == "json" or graph is None:
            path = storage.save_json(config.out, data)
        else:
            path = storage.export_graph(config.out, graph, config.fmt)
        print(f"Записан файл {path}")

    @staticmethod
    def _load(path: str) -> dict:
        return ArtifactStorage.load_json(path)

    @staticmethod
    def _read_json(value: str):
        """
        Путь к JSON-файлу или JSON-текст прямо в аргументе
        """
        if os.path.exists(value):
            with open(value, encoding="utf-8") as f:
                text = f.read()
        else:
            text = value
        try:
            return json.loads(text)
        except json.JSONDecodeError as e:
            raise SchemaError(value, f"некорректный JSON: {e}") from e

    def _development(self, args):
        dev = load_development(self._load(args.dev), args.dev)
        if getattr(args, "assign", None):
            cog = apply_assignment(dev.cog, self._load(args.assign))
            dev = build_development(cog, dev.bound, dev.radius, dev.strategy, check_cocycles=False)
        return dev

    def handle_build_cusped(self, args, config: RunConfig) -> int:
        """
        Обрабатывает команду build-cusped
        """
        data = self._read_json(args.group)
        if not isinstance(data, dict):
            raise SchemaError(args.group, "описание группы должно быть объектом")
        # файл примера несёт группу вместе с периферическими подгруппами
        group = load_group(data.get("group", data), args.group)
        words = data.get("peripherals", [])
        if args.peripheral:
            words = self._read_json(args.peripheral)
            if isinstance(words, dict):
                words = words.get("peripherals", [])
        if not isinstance(words, list):
            raise SchemaError("peripheral", "ожидался список подгрупп")
        peripherals = [load_subgroup(group, w, f"P{i}") for i, w in enumerate(words)]
        space = CuspedManager.build(group, peripherals, args.radius, args.depth)
        self._emit(config, {**space.to_dict(), "schema_version": SCHEMA_VERSION}, space.graph.to_networkx())
        return EXIT_OK

    def handle_estimate_delta(self, args, config: RunConfig) -> int:
        """
        Обрабатывает команду estimate-delta
        """
        data = self._load(args.input)
        graph = load_graph(data["graph"] if "graph" in data else data, args.input)
        report = CuspedManager.estimate_delta(graph, args.mode, args.seed, args.count)
        self._emit(config, report.to_dict())
        return EXIT_OK

    def handle_validate_cog(self, args, config: RunConfig) -> int:
        """
        Обрабатывает команду validate-cog
        """
        cog = load_complex(self._load(args.complex), args.complex)
        report = ComplexManager.validate(cog)
        self._emit(config, report.to_dict())
        return EXIT_OK if report.valid else EXIT_FAIL

    def handle_present(self, args, config: RunConfig) -> int:
        cog = load_complex(self._load(args.complex), args.complex)
        presentation = ComplexManager.present(cog, tietze=not args.no_tietze, simplify=args.simplify)
        self._emit(config, presentation.to_dict())
        return EXIT_OK

    def handle_develop(self, args, config: RunConfig) -> int:
        cog = load_complex(self._load(args.complex), args.complex)
        dev = ComplexManager.develop(cog, args.bound, args.radius, args.strategy)
        self._emit(config, dev.to_dict(), dev.to_networkx())
        return EXIT_OK

    def handle_verify_action(self, args, config: RunConfig) -> int:
        dev = self._development(args)
        report = ComplexManager.verify(dev)
        self._emit(config, report.to_dict())
        return EXIT_OK if report.passed else EXIT_FAIL

    def handle_domains(self, args, config: RunConfig) -> int:
        """
        Обрабатывает команду domains
        """
        dev = self._development(args)
        if args.point:
            points = [BoundaryManager.parse_point(dev, text) for text in args.point]
        else:
            points = BoundaryManager.base_points(dev)
        results = BoundaryManager.domains(dev, points, args.A, args.dmax)
        self._emit(config, {"domains": [r.to_dict(dev) for r in results], "schema_version": SCHEMA_VERSION})
        ok = all(r.within_bound and r.count_within and r.connected for r in results)
        return EXIT_OK if ok else EXIT_FAIL

    def handle_glue(self, args, config: RunConfig) -> int:
        dev = self._development(args)
        classes = BoundaryManager.glue(dev)
        data = {"classes": [c.to_dict(dev) for c in classes], "schema_version": SCHEMA_VERSION}
        if args.A is None:
            self._emit(config, data)
            return EXIT_OK
        spread = BoundaryManager.spread_check(dev, classes, args.A)
        self._emit(config, {**data, "spread": spread.to_dict()})
        return EXIT_OK if spread.status == "PASS" else EXIT_FAIL

    def handle_embed_check(self, args, config: RunConfig) -> int:
        dev = self._development(args)
        classes = BoundaryManager.glue(dev)
        report = BoundaryManager.embed_check(dev, classes)
        self._emit(config, report.to_dict())
        return EXIT_OK if report.status == "PASS" else EXIT_FAIL

    def handle_tree_of_circles(self, args, config: RunConfig) -> int:
        dev = self._development(args)
        classes = BoundaryManager.glue(dev)
        layout = BoundaryManager.tree_of_circles(dev, classes, args.depth, args.seed)
        self._emit(config, layout.to_dict(dev), layout.to_networkx(dev))
        return EXIT_OK

    def handle_example(self, args, config: RunConfig) -> int:
        """
        Обрабатывает команду example
        """
        load_example(args.name)
        overrides = {"bound": args.bound, "depth": args.depth, "radius": args.radius, "seed": args.seed}
        summary = ExampleManager.run(args.name, ArtifactStorage(args.out), overrides)
        print(dumps(summary), end="")
        return EXIT_OK if summary["status"] == "PASS" else EXIT_FAIL

    def run(self, args=None) -> int:
        """
        Запускает CLI с переданными аргументами
        """
        try:
            parsed_args = self.parser.parse_args(args)
        except SystemExit as e:
            return EXIT_OK if e.code == 0 else EXIT_USAGE

        handlers = {
            "build-cusped": self.handle_build_cusped,
            "estimate-delta": self.handle_estimate_delta,
            "validate-cog": self.handle_validate_cog,
            "present": self.handle_present,
            "develop": self.handle_develop,
            "verify-action": self.handle_verify_action,
            "domains": self.handle_domains,
            "glue": self.handle_glue,
            "embed-check": self.handle_embed_check,
            "tree-of-circles": self.handle_tree_of_circles,
            "example": self.handle_example,
        }

        handler = handlers.get(parsed_args.command)
        if handler is None:
            print(f"Неизвестная команда: {parsed_args.command}")
            return EXIT_USAGE

        try:
            config = RunConfig.from_args(parsed_args)
            return handler(parsed_args, config)
        except (CocycleInvalidError, ActionViolationError) as e:
            print(dumps({"error": type(e).__name__, "message": str(e), "status": "FAIL"}), end="")
            return EXIT_FAIL
        except (ValidationError, SchemaError, UnknownSymbolError) as e:
            print(f"Ошибка: {e}")
            print("Используйте 'relhyp <команда> --help' для описания входных схем")
            return EXIT_USAGE
        except RelHypError as e:
            print(f"Ошибка: {e}")
            return EXIT_USAGE
        except FileNotFoundError as e:
            print(f"Ошибка: файл не найден: {e.filename}")
            return EXIT_USAGE


def main(args=None) -> int:
    setup_logging()
    cli = RelHypCLI()
    return cli.run(args)


if __name__ == "__main__":
    sys.exit(main())
