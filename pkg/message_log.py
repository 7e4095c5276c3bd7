"""Журнал отчёта распознавателя.

Повторяющиеся подряд записи склеиваются в одну со счётчиком, каждая запись
сразу уходит и в стандартный logging.
"""
from __future__ import annotations

from typing import List, Optional
import logging

logger = logging.getLogger(__name__)


class ReportEntry:
    def __init__(self, text: str, level: int = logging.INFO):
        self.text = text
        self.level = level
        self.repeats = 1

    def __str__(self) -> str:
        if self.repeats == 1:
            return self.text
        return f"{self.text} (x{self.repeats})"


class MessageLog:
    def __init__(self, logger_name: Optional[str] = None) -> None:
        self.entries: List[ReportEntry] = []
        self.logger = logging.getLogger(logger_name) if logger_name else logger

    def add_message(self, text: str, level: int = logging.INFO, *, stack: bool = True) -> None:
        """Записать `text` и передать его в logging с уровнем `level`.

При `stack=True` запись с тем же текстом, что и последняя, только
увеличивает её счётчик.
        """
        self.logger.log(level, "%s", text)
        last = self.entries[-1] if self.entries else None
        if stack and last is not None and last.text == text:
            last.repeats += 1
            return
        self.entries.append(ReportEntry(text, level))

    def lines(self) -> List[str]:
        return [str(entry) for entry in self.entries]
