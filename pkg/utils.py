import logging
from colorama import Style

from config import LOG_FILE, LOG_LEVEL, LOG_FORMAT

_configured = False


def get_logger(name):
    """Return a module logger; the file handler is attached on first use."""
    global _configured
    if not _configured:
        root = logging.getLogger("rk")
        root.setLevel(LOG_LEVEL)
        if LOG_FILE:
            handler = logging.FileHandler(LOG_FILE)
            handler.setFormatter(logging.Formatter(LOG_FORMAT))
            root.addHandler(handler)
        root.propagate = False
        _configured = True
    return logging.getLogger(f"rk.{name}")


def agent_print(agent_name, message, color):
    print(f"{color}[Agent {agent_name}]: {message}{Style.RESET_ALL}")
    logging.getLogger("rk.console").info("[%s] %s", agent_name, message)
