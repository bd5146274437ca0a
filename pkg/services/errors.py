"""Иерархия исключений пакета."""


class TwoRayError(Exception):
    """Базовое исключение для всех ошибок вычислений."""
    pass


class DomainError(TwoRayError):
    """Аргумент вне области определения операции."""
    pass


class PreconditionError(TwoRayError):
    """Не выполнено предусловие операции."""

    def __init__(self, message: str, clause: str | None = None) -> None:
        super().__init__(message)
        self.clause = clause


class InternalError(TwoRayError):
    """Нарушен инвариант, который обязан выполняться (сигнал об ошибке в коде)."""
    pass


class ParseError(DomainError):
    """Некорректный JSON или схема определяющей системы."""

    def __init__(
        self,
        message: str,
        line: int | None = None,
        column: int | None = None,
        position: int | None = None,
    ) -> None:
        location = f" (строка {line}, столбец {column})" if line is not None else ""
        super().__init__(f"{message}{location}")
        self.line = line
        self.column = column
        self.position = position


class InvalidSystemError(DomainError):
    """Определяющая система не прошла проверку ограничений DS1-DS6."""

    def __init__(self, report) -> None:
        ids = ", ".join(v.constraint for v in report.violations)
        super().__init__(f"Определяющая система невалидна: {ids}")
        self.report = report


class StructureError(DomainError):
    """Частичные отображения не образуют комбинаторную структуру."""
    pass


class AncestryError(InternalError):
    """Жадный спуск к фундаментальной системе остановился."""

    def __init__(self, message: str, partial_chain: tuple = ()) -> None:
        super().__init__(message)
        self.partial_chain = partial_chain


class RelationViolation(DomainError):
    """Представление не удовлетворяет соотношениям колчана."""

    def __init__(self, relations: list) -> None:
        names = ", ".join(r.rule for r in relations)
        super().__init__(f"Нарушены соотношения: {names}")
        self.relations = relations


class BudgetExceeded(PreconditionError):
    """Вычисление превышает заданный бюджет."""
    pass
