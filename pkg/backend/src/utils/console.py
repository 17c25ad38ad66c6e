import os
import sys

CONSOLE_STYLE = {
    "ERROR": "\033[91m",
    "SECONDARY_ERROR": "\033[31m",
    "WARNING": "\033[93m",
    "SECONDARY_WARNING": "\033[33m",
    "SUCCESS": "\033[92m",
    "SECONDARY_SUCCESS": "\033[32m",
    "INFO": "\033[94m",
    "SECONDARY_INFO": "\033[96m",
    "END": "\033[0m",
    None: ""
}

LEVEL_STYLE = {
    "debug": "SECONDARY_INFO",
    "info": "INFO",
    "warning": "WARNING",
    "error": "ERROR",
    "success": "SUCCESS",
}

class Style:
    """
    A class to represent a styled console message.
    """

    def __init__(self, style, message, auto_break=False, max_length=None):
        if style not in CONSOLE_STYLE:
            raise ValueError(f"Invalid style: {style}, must be one of:\n{CONSOLE_STYLE.keys()}")
        self.style = style

        if auto_break and max_length is not None:
            self.message = ""
            line = 0
            for word in str(message).split(" "):
                if line and line + len(word) + 1 > max_length:
                    self.message += "\n"
                    line = 0
                elif line:
                    self.message += " "
                    line += 1
                self.message += word
                line += len(word)

        elif auto_break:
            raise ValueError("If auto_break is True, max_length must be specified.")

        else:
            self.message = str(message)


    def __repr__(self):
        if self.style is None or not _colors_enabled():
            return self.message
        return f"{CONSOLE_STYLE[self.style]}{self.message}{CONSOLE_STYLE['END']}"
    
    def __str__(self):
        return self.__repr__()
    
    def __add__(self, other):
        return self.__repr__() + str(other)


def _colors_enabled() -> bool:
    return not os.getenv("NO_COLOR")


def log(level: str, tag: str, message, max_length: int = None):
    """
    Print a tagged console line on stderr.

    Debug lines only show when ORDLAB_DEBUG is set, stdout is kept for command output.

    :param level: one of debug, info, warning, error, success
    :type level: str
    :param tag: component name printed in brackets
    :type tag: str
    :param message: anything printable
    :param max_length: wrap the message at this width
    :type max_length: int
    """
    if level not in LEVEL_STYLE:
        raise ValueError(f"Invalid level: {level}, must be one of:\n{LEVEL_STYLE.keys()}")
    if level == "debug" and not os.getenv("ORDLAB_DEBUG"):
        return

    styled = Style(LEVEL_STYLE[level], f"[{tag}] {message}", auto_break=max_length is not None, max_length=max_length)
    print(f"[{level}]\t\t", styled, file=sys.stderr)
