from __future__ import annotations

import logging
import threading
from typing import Any, Callable

log = logging.getLogger(__name__)

# Emitted by runner.run_matrix with index, total and spec
EXPERIMENT_START = "experiment.start"
# ... and with index, total, spec and row (the report row dict)
EXPERIMENT_COMPLETE = "experiment.complete"

Handler = Callable[..., Any]


class EventBus:
    """Publish/subscribe bus for matrix progress events.

    Thread-safe so worker threads of a parallel matrix run can emit while
    the CLI subscribes. A handler that raises is logged and skipped; it
    never aborts the run that emitted the event.
    """

    def __init__(self) -> None:
        self._handlers: dict[str, list[Handler]] = {}
        self._lock = threading.Lock()

    def subscribe(self, event_type: str, handler: Handler) -> Callable[[], None]:
        """Register *handler*; returns a callable that unsubscribes it."""
        with self._lock:
            self._handlers.setdefault(event_type, []).append(handler)
        return lambda: self.unsubscribe(event_type, handler)

    def unsubscribe(self, event_type: str, handler: Handler) -> None:
        with self._lock:
            handlers = self._handlers.get(event_type, [])
            if handler in handlers:
                handlers.remove(handler)

    def emit(self, event_type: str, **data: Any) -> None:
        with self._lock:
            handlers = list(self._handlers.get(event_type, []))
        for handler in handlers:
            try:
                handler(**data)
            except Exception:  # pylint: disable=broad-except
                log.exception("handler for %s failed", event_type)
