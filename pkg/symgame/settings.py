from __future__ import annotations

import os
import threading
from dataclasses import dataclass, field

from symgame.errors import SearchBudgetExceeded


@dataclass(slots=True)
class Settings:
    threads: int
    max_search_nodes: int
    log_level: str


@dataclass(slots=True)
class SearchBudget:
    max_nodes: int
    used_nodes: int = 0
    # Shared by the worker threads of one search.
    _lock: threading.Lock = field(default_factory=threading.Lock, init=False, repr=False, compare=False)

    def consume(self, count: int = 1) -> None:
        with self._lock:
            self.used_nodes += count
            exceeded = self.used_nodes > self.max_nodes
        if exceeded:
            raise SearchBudgetExceeded(
                "Search budget exceeded while enumerating game bijections. "
                "Increase SYMGAME_MAX_SEARCH_NODES if needed."
            )


def load_settings() -> Settings:
    return Settings(
        threads=max(1, int(os.getenv("SYMGAME_THREADS", "1"))),
        max_search_nodes=int(os.getenv("SYMGAME_MAX_SEARCH_NODES", "5000000")),
        log_level=os.getenv("LOG_LEVEL", "WARNING"),
    )
