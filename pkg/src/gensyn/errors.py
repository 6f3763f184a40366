from __future__ import annotations


class GensynError(Exception):
    """Base class for all errors raised by this package."""


class PathError(GensynError):
    """A constructor path does not lead from the description root to a node."""


class ArityMismatch(GensynError):
    """Wrong number of binders, binder types or children for a node."""


class UnboundName(GensynError):
    def __init__(self, name: str, path: tuple[int, ...] = ()):
        super().__init__(f"unbound name {name!r} at {format_term_path(path)}")
        self.name = name
        self.path = path


class ContextMismatch(GensynError):
    """Two contexts that must agree do not."""


def format_term_path(path) -> str:
    return "/" + "/".join(str(i) for i in path)
