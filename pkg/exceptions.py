from typing import Optional


class Impossible(Exception):
    """Исключение возникает, когда операцию невозможно выполнить.

Причина указана в сообщении об исключении.
    """


class PDDLSyntaxError(Impossible):
    """Текст PDDL не разбирается. Хранит строку и столбец ошибки."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class UnsupportedFeatureError(Impossible):
    """Текст использует возможность PDDL за пределами STRIPS."""

    def __init__(self, feature: str, line: Optional[int] = None):
        where = f" (line {line})" if line is not None else ""
        super().__init__(f"Unsupported PDDL feature: {feature}{where}")
        self.feature = feature


class PDDLSemanticError(Impossible):
    """Необъявленный предикат или объект, несовпадение арности."""


class PreconditionViolation(Impossible):
    """Действие применяется к состоянию, в котором оно неприменимо."""


class UnsolvableGoalError(Impossible):
    """Цель недостижима даже в релаксированной задаче."""


class SearchExhausted(Impossible):
    """Поиск плана исчерпал пространство или бюджет узлов."""


class InsufficientNoiseError(Impossible):
    """Не хватает действий вне плана, чтобы добавить шум."""


class BundleError(Impossible):
    """Набор файлов задачи распознавания неполон или противоречив."""


class ProblemTimeout(Impossible):
    """Задача не уложилась в отведённое время."""


class RecognitionFailed(SystemExit):
    """Можно поднять, чтобы выйти с кодом 1: настоящая цель не попала в ответ."""

    def __init__(self) -> None:
        super().__init__(1)
