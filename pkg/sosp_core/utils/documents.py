from typing import Any, Callable, Iterable, List, Tuple, TypeVar

__all__ = [
    "DocumentParseError",
    "check_keys",
    "as_int",
    "as_float",
    "as_pair",
    "as_list",
]

T = TypeVar("T")


class DocumentParseError(ValueError):
    pass


def check_keys(obj: Any, keys: Iterable[str], path: str, optional: Iterable[str] = ()) -> None:
    """
    Check that a parsed JSON value is an object holding every key of keys and
    nothing outside keys and optional.

    Parameters
    ----------
    obj : Any
        Parsed value.
    keys : iterable of str
        Required keys.
    path : str
        Location of the value in the document, used in error messages.
    optional : iterable of str, optional
        Keys that may be present.

    Raises
    ------
    DocumentParseError : If obj is not an object, misses a key or has an unknown one.
    """
    if not isinstance(obj, dict):
        raise DocumentParseError(f"{path}: expected an object, got {type(obj).__name__}")
    keys = list(keys)
    allowed = set(keys) | set(optional)
    unknown = sorted(set(obj) - allowed)
    if unknown:
        raise DocumentParseError(f"{path}: unknown keys {unknown}")
    missing = [k for k in keys if k not in obj]
    if missing:
        raise DocumentParseError(f"{path}: missing keys {missing}")


def as_int(value: Any, path: str) -> int:
    # JSON booleans parse to bool, a subclass of int
    if isinstance(value, bool) or not isinstance(value, int):
        raise DocumentParseError(f"{path}: expected an integer, got {value!r}")
    return value


def as_float(value: Any, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise DocumentParseError(f"{path}: expected a number, got {value!r}")
    return float(value)


def as_pair(value: Any, path: str, convert: Callable[[Any, str], T]) -> Tuple[T, T]:
    if not isinstance(value, list) or len(value) != 2:
        raise DocumentParseError(f"{path}: expected a list of two numbers, got {value!r}")
    return (convert(value[0], f"{path}[0]"), convert(value[1], f"{path}[1]"))


def as_list(value: Any, path: str) -> List[Any]:
    if not isinstance(value, list):
        raise DocumentParseError(f"{path}: expected a list, got {type(value).__name__}")
    return value
