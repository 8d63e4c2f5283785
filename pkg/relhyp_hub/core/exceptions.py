class RelHypError(Exception):
    """
    Базовое исключение для всех ошибок RelHyp Hub
    """
    pass


class ValidationError(RelHypError):
    """
    Ошибка валидации входных данных
    """
    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"Ошибка валидации поля '{field}': {message}")


class SchemaError(RelHypError):
    """
    Неподдерживаемая или повреждённая JSON-схема
    """
    def __init__(self, source: str, reason: str):
        self.source = source
        self.reason = reason
        super().__init__(f"Некорректная схема {source}: {reason}")


class UnknownSymbolError(RelHypError):
    """
    Символ слова не является образующей группы
    """
    def __init__(self, symbol: str | int, generators: list[str] | None = None):
        self.symbol = symbol
        self.generators = generators or []
        known = ", ".join(self.generators)
        super().__init__(f"Неизвестный символ '{symbol}' (образующие: {known})")


class BudgetExhaustedError(RelHypError):
    """
    Бюджет вычисления исчерпан до получения ответа
    """
    def __init__(self, operation: str, budget: int, details: str = ""):
        self.operation = operation
        self.budget = budget
        self.details = details
        message = f"Бюджет операции '{operation}' исчерпан ({budget})"
        if details:
            message += f": {details}"
        super().__init__(message)


class UndecidableMembershipError(RelHypError):
    """
    Проверка принадлежности подгруппе недоступна для данного бэкенда
    """
    def __init__(self, subgroup: str, backend: str):
        self.subgroup = subgroup
        self.backend = backend
        super().__init__(f"Принадлежность подгруппе {subgroup} неразрешима для бэкенда {backend}")


class UndecidableEqualityError(RelHypError):
    """
    Равенство элементов не удалось установить в пределах бюджета
    """
    def __init__(self, left: str, right: str, context: str = ""):
        self.left = left
        self.right = right
        self.context = context
        message = f"Не удалось сравнить {left} и {right}"
        if context:
            message += f" ({context})"
        super().__init__(message)


class DisconnectedGraphError(RelHypError):
    """
    Вершины лежат в разных компонентах связности
    """
    def __init__(self, what: str, u=None, v=None):
        self.what = what
        self.u = u
        self.v = v
        if u is None:
            message = f"Граф '{what}' несвязен"
        else:
            message = f"Вершины {u} и {v} графа '{what}' лежат в разных компонентах"
        super().__init__(message)


class UnknownVertexError(RelHypError):
    """
    Вершина отсутствует в графе
    """
    def __init__(self, vertex_id):
        self.vertex_id = vertex_id
        super().__init__(f"Неизвестная вершина {vertex_id!r}")


class PeripheralNotInGeneratingSetError(RelHypError):
    """
    Образующая периферической подгруппы не входит в порождающее множество группы
    """
    def __init__(self, peripheral_index: int, word: str):
        self.peripheral_index = peripheral_index
        self.word = word
        super().__init__(
            f"Образующая '{word}' периферической подгруппы #{peripheral_index} не является образующей группы"
        )


class BudgetExceededError(RelHypError):
    """
    Полный перебор четвёрок превышает бюджет
    """
    def __init__(self, vertex_count: int, budget: int):
        self.vertex_count = vertex_count
        self.budget = budget
        super().__init__(
            f"Полный перебор для {vertex_count} вершин ({vertex_count ** 4} четвёрок) превышает бюджет {budget}; "
            "используйте режим sampled"
        )


class NonRegularComplexError(RelHypError):
    """
    Клеточный комплекс не является регулярным
    """
    def __init__(self, cell: str, reason: str):
        self.cell = cell
        self.reason = reason
        super().__init__(f"Комплекс нерегулярен в клетке '{cell}': {reason}")


class InvalidTreeError(RelHypError):
    """
    Набор стрелок не является остовным деревом
    """
    def __init__(self, reason: str):
        self.reason = reason
        super().__init__(f"Некорректное максимальное дерево: {reason}")


class CocycleInvalidError(RelHypError):
    """
    Данные комплекса групп нарушают тождества коцикла
    """
    def __init__(self, violations: int):
        self.violations = violations
        super().__init__(f"Комплекс групп некорректен: нарушений {violations}")


class ActionViolationError(RelHypError):
    """
    Действие на развёртке нарушает инцидентность или стабилизаторы
    """
    def __init__(self, check: str, witness: str):
        self.check = check
        self.witness = witness
        super().__init__(f"Нарушение действия ({check}): {witness}")


class ActionUnavailableError(RelHypError):
    """
    Действие элемента на развёртке не может быть вычислено
    """
    def __init__(self, element: str, reason: str):
        self.element = element
        self.reason = reason
        super().__init__(f"Действие элемента {element} недоступно: {reason}")


class TruncationTooSmallError(RelHypError):
    """
    Результат выходит на границу усечения
    """
    def __init__(self, what: str, object_key: str):
        self.what = what
        self.object_key = object_key
        super().__init__(f"Усечение слишком мало для '{what}': достигнут граничный объект {object_key}")


class NotATreeError(RelHypError):
    """
    Развёртка не является деревом
    """
    def __init__(self, strategy: str):
        self.strategy = strategy
        super().__init__(f"Развёртка (стратегия '{strategy}') не является деревом")
