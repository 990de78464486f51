import sys
import threading
from datetime import datetime


class Logger:

    def __init__(self):
        self.verbose = True
        self.debug_enabled = False
        self._seen = set()
        self._lock = threading.Lock()

    def info(self, message: str):
        if self.verbose:
            print(message)

    def error(self, message: str):
        print(f"ERROR: {message}", file=sys.stderr)

    def warning(self, message: str):
        print(f"WARNING: {message}", file=sys.stderr)

    def warning_once(self, key: str, message: str):
        # one report per key until reset_warnings()
        with self._lock:
            if key in self._seen:
                return
            self._seen.add(key)
        self.warning(message)

    def reset_warnings(self):
        with self._lock:
            self._seen.clear()

    def debug(self, message: str):
        if self.verbose and self.debug_enabled:
            timestamp = datetime.now().strftime("%H:%M:%S")
            print(f"[{timestamp}] DEBUG: {message}")


logger = Logger()
