from typing import Any

from pyee import EventEmitter


class EnhancedEventEmitter(EventEmitter):
    def __init__(self):
        super(EnhancedEventEmitter, self).__init__()

    def emit_for_results(self, event: str, *args, **kwargs) -> list[Any]:
        """
        Call every listener of `event` in registration order and collect the
        truthy return values. A listener that raises is reported through the
        "error" event (when someone listens for it) and its exception is kept
        in the results so callers can account for it.
        """
        results = []
        for f in list(self._events.get(event, {}).values()):
            try:
                result = f(*args, **kwargs)
            except Exception as exc:
                if self._events.get("error"):
                    self.emit("error", exc)
                results.append(exc)
            else:
                if result:
                    results.append(result)
        return results
