"""
Console logging for the PG(2,q) tool.

Every line goes to stderr, so stdout carries nothing but JSON certificates.
Lines at any level other than INFO must open with the `[file.py.function]`
tag of the code that wrote them; untagged lines raise an internal notice.
"""

import os
import re
import sys
import traceback
from datetime import datetime
from pathlib import Path

from dotenv import load_dotenv

ENV_PATH = Path(__file__).parent / '.env'
load_dotenv(dotenv_path=ENV_PATH)

VERBOSITY_ERROR = 0
VERBOSITY_WARNING = 1
VERBOSITY_INFO = 2
VERBOSITY_DEBUG = 3
VERBOSITY_TRACE = 4

LEVEL_NAMES = {
    "error": VERBOSITY_ERROR,
    "warning": VERBOSITY_WARNING,
    "info": VERBOSITY_INFO,
    "debug": VERBOSITY_DEBUG,
    "trace": VERBOSITY_TRACE,
}


def parse_verbosity(value, default=VERBOSITY_WARNING) -> int:
    """0..4 or a level name from LEVEL_NAMES; numbers are clamped, anything else gives `default`."""
    text = str(value).strip().lower()
    if text in LEVEL_NAMES:
        return LEVEL_NAMES[text]
    try:
        level = int(text)
    except ValueError:
        return default
    return min(max(level, VERBOSITY_ERROR), VERBOSITY_TRACE)


def _env_flag(name, default="False"):
    return os.getenv(name, default).lower() in ("true", "1", "yes")


VERBOSITY = parse_verbosity(os.getenv("verbosity", VERBOSITY_WARNING))
write_to_file = _env_flag("write_to_file")
clear_logs_on_start = _env_flag("clear_logs_on_start")
traceback_exit = _env_flag("traceback_exit")
log_file_path = Path(__file__).parent / 'logs' / 'pg2q.log'

_RESET = "\033[0m"
_TAGS = {
    VERBOSITY_ERROR:   ("\033[91m", "[error]"),
    VERBOSITY_WARNING: ("\033[93m", "[warn] "),
    VERBOSITY_INFO:    ("\033[92m", "[info] "),
    VERBOSITY_DEBUG:   ("\033[96m", "[debug]"),
    VERBOSITY_TRACE:   ("\033[95m", "[trace]"),
}
_NOTICE = ("\033[38;5;208m", "[clilog]")

_ansi_escape_re = re.compile(r"\x1B[@-_][0-?]*[ -/]*[@-~]")

_checking_tag = False


def _strip_ansi(text: str) -> str:
    return _ansi_escape_re.sub("", text)


def _paint(colour: str, tag: str) -> str:
    # colour only on a terminal; redirected stderr stays plain
    if sys.stderr.isatty():
        return f"{colour}{tag}{_RESET} "
    return f"{tag} "


def _notice(msg):
    # Printed regardless of verbosity
    print(f"{_paint(*_NOTICE)}{msg}", file=sys.stderr)
    if write_to_file:
        _log_to_file(msg, VERBOSITY_WARNING)


def log(msg, level=None):
    global _checking_tag
    if level is None:
        level = VERBOSITY_INFO
    msg = str(msg)

    if not _checking_tag and level != VERBOSITY_INFO and not msg.startswith('['):
        _checking_tag = True
        _notice(f"[clilog.py.log] Level {level} line without a '[file.py.function]' tag: {msg}")
        _checking_tag = False

    if level > VERBOSITY:
        return

    colour, tag = _TAGS.get(level, ("", ""))
    line = f"{_paint(colour, tag) if tag else ''}{msg}"
    print(line, file=sys.stderr)

    if write_to_file:
        _log_to_file(_strip_ansi(line), level)

    if level == VERBOSITY_ERROR:
        if sys.exc_info()[0] is not None:
            traceback.print_exc()
        if traceback_exit:
            log("[clilog.py.log] Stopping on the first error (traceback_exit)", VERBOSITY_WARNING)
            sys.exit(2)


def _log_to_file(msg, level):
    if level > VERBOSITY:
        return
    timestamp = datetime.now().strftime("%Y-%m-%d %H:%M:%S")
    log_file_path.parent.mkdir(parents=True, exist_ok=True)
    with open(log_file_path, 'a', encoding='utf-8') as log_file:
        log_file.write(f"[{timestamp}] {msg}\n")


def set_verbosity(level):
    """Override the .env verbosity; accepts what `parse_verbosity` accepts."""
    global VERBOSITY
    VERBOSITY = parse_verbosity(level, VERBOSITY)


def clear_logs():
    if clear_logs_on_start and log_file_path.exists():
        log_file_path.unlink()
    return clear_logs_on_start
