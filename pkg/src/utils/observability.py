"""
Langfuse Observability Integration
Traces commands and checks, with rich console logging alongside
"""
import logging
import os
import time
from contextvars import ContextVar
from datetime import datetime
from functools import wraps

from dotenv import load_dotenv
from langfuse import Langfuse
from langfuse.decorators import langfuse_context, observe
from rich.console import Console
from rich.logging import RichHandler

load_dotenv()

LOGGER_NAME = "src"
LANGFUSE_HOST = os.getenv("LANGFUSE_HOST", "https://cloud.langfuse.com")

# Tracing stays off unless both keys are set
TRACING_ENABLED = bool(os.getenv("LANGFUSE_PUBLIC_KEY") and os.getenv("LANGFUSE_SECRET_KEY"))

langfuse_context.configure(
    public_key=os.getenv("LANGFUSE_PUBLIC_KEY"),
    secret_key=os.getenv("LANGFUSE_SECRET_KEY"),
    host=LANGFUSE_HOST,
    enabled=TRACING_ENABLED,
)
langfuse = (
    Langfuse(
        public_key=os.getenv("LANGFUSE_PUBLIC_KEY"),
        secret_key=os.getenv("LANGFUSE_SECRET_KEY"),
        host=LANGFUSE_HOST,
    )
    if TRACING_ENABLED
    else None
)

console = Console()
logger = logging.getLogger(__name__)

_session_id: ContextVar[str | None] = ContextVar("session_id", default=None)


def setup_logging(level: str = "INFO") -> None:
    """
    Install a RichHandler on the package logger.
    Call this once at application startup.

    Args:
        level: Logging level name
    """
    root = logging.getLogger(LOGGER_NAME)
    root.setLevel(level)
    if not any(isinstance(h, RichHandler) for h in root.handlers):
        handler = RichHandler(console=Console(stderr=True), show_path=False, rich_tracebacks=True)
        handler.setFormatter(logging.Formatter("%(message)s"))
        root.addHandler(handler)
    root.propagate = False
    if TRACING_ENABLED:
        logger.info("✅ Langfuse tracing to %s", LANGFUSE_HOST)


def observe_check(name: str | None = None):
    """
    Decorator tracing a check, kernel or command body as a Langfuse observation.

    Usage:
        @observe_check("plain-scan")
        def scan(...):
            ...
    """

    def decorator(func):
        label = name or func.__name__

        @wraps(func)
        @observe(name=label, capture_input=False, capture_output=False)
        def wrapper(*args, **kwargs):
            start = time.perf_counter()
            logger.debug("start %s", label)
            try:
                result = func(*args, **kwargs)
            except Exception as e:
                duration_ms = (time.perf_counter() - start) * 1000
                langfuse_context.update_current_observation(
                    metadata={"status": "error", "error": str(e), "duration_ms": duration_ms}
                )
                logger.error("%s failed after %.0f ms: %s", label, duration_ms, e)
                raise
            duration_ms = (time.perf_counter() - start) * 1000
            langfuse_context.update_current_observation(
                metadata={"status": "success", "duration_ms": duration_ms}
            )
            logger.info("%s done in %.0f ms", label, duration_ms)
            return result

        return wrapper

    return decorator


def track_check_result(check_id: str, q: int, status: str, runtime_ms: float) -> None:
    """Attach a named check's verdict to the current observation and its trace."""
    metadata = {"check_id": check_id, "q": q, "status": status, "runtime_ms": runtime_ms}
    langfuse_context.update_current_observation(name=check_id, metadata=metadata)
    langfuse_context.update_current_trace(tags=[f"q{q}"], metadata={check_id: status})


def track_command(command: str, **metadata) -> None:
    """Name the current trace after a CLI command."""
    langfuse_context.update_current_trace(name=command, session_id=_session_id.get(), metadata=metadata)


class Stopwatch:
    """Elapsed wall time in milliseconds."""

    def __init__(self):
        self.start = time.perf_counter()

    @property
    def elapsed_ms(self) -> float:
        return (time.perf_counter() - self.start) * 1000


class ObservabilityContext:
    """Context manager tracing a command session"""

    def __init__(self, session_id: str):
        self.session_id = session_id
        self.watch = None
        self.trace = None
        self.token = None
        self.status = None

    def __enter__(self):
        self.watch = Stopwatch()
        self.token = _session_id.set(self.session_id)
        if langfuse is not None:
            self.trace = langfuse.trace(
                name="report_session",
                session_id=self.session_id,
                metadata={"start_time": datetime.now().isoformat()},
            )
        logger.info("session %s started", self.session_id)
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        self.status = "error" if exc_type else "success"
        _session_id.reset(self.token)
        if self.trace is not None:
            self.trace.update(
                metadata={
                    "end_time": datetime.now().isoformat(),
                    "status": self.status,
                    "duration_ms": self.watch.elapsed_ms,
                }
            )
        if TRACING_ENABLED:
            langfuse_context.flush()
            langfuse.flush()
        logger.info(
            "session %s finished (%s) in %.0f ms",
            self.session_id,
            self.status,
            self.watch.elapsed_ms,
        )
        return False
