from __future__ import annotations

from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from engine import Recognizer


class BaseComponent:
    parent: Recognizer #Распознаватель, к которому подключён компонент

    @property
    def recognizer(self) -> Recognizer:
        return self.parent
