class PrefPersistError(Exception):
    """Base class for errors raised by this package."""


class FormulaSyntaxError(PrefPersistError, ValueError):
    def __init__(self, message: str, text: str = "", pos: int = 0):
        self.text = text
        self.pos = pos
        where = f" at position {pos}" if text else ""
        super().__init__(f"{message}{where}")


class SignatureError(PrefPersistError, ValueError):
    """Unknown atom or predicate, or an arity mismatch."""


class LanguageError(PrefPersistError, ValueError):
    """A formula is outside the language an operation is defined for."""


class BoundExceeded(PrefPersistError):
    """An enumeration would exceed its configured bound."""


class NothingToConstruct(PrefPersistError):
    """A constructive check was asked for a violation that does not exist."""
