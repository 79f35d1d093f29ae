"""Function registers keyed by name.

Builders for channels, generators, extrapolation fits, bound formulas and
verification suites are collected in module-level dictionaries so that they
can be referenced by string from experiment configurations. There should
normally be no need to use these functions directly.
"""

from typing import Callable, Dict, Optional, Union


def marker(register: Dict[str, Callable],
           name: str,
           signature,
           ) -> Callable:
    """A registration decorator factory.

    The decorated function is registered under its ``__name__`` unless the
    decorator is called with an explicit ``key``.
    """
    def mark_function(func: Optional[Callable] = None,
                      *,
                      key: Optional[str] = None):
        def mark(inner: Callable) -> Callable:
            register[key if key is not None else inner.__name__] = inner
            return inner
        if func is None:
            return mark
        return mark(func)
    return mark_function


def getter(register: Dict[str, Callable],
           name: str,
           signature,
           ) -> Callable[[str], Callable]:
    """A register retriever factory."""
    def get(func_def: str) -> signature:
        try:
            return register[func_def]
        except (KeyError, TypeError):
            valid = ', '.join(sorted(register))
            raise KeyError(f'unknown {name}: {func_def!r} (valid: {valid})')
    get.__doc__ = f'Return a {name} by its name.'
    return get


def constructer(register: Dict[str, Callable],
                name: str,
                signature,
                ) -> Callable:
    """A register implicit retriever/passthrough function factory."""
    get = getter(register, name, signature)

    def construct(func_def: Union[str, signature]) -> signature:
        return func_def if callable(func_def) else get(func_def)

    construct.__doc__ = (
        f'Construct a {name}: look it up by name in the register or pass a '
        'custom callable through unchanged.'
    )
    return construct


def register_functions(*args, **kwargs):
    """Construct the marker, getter and constructer functions at one call."""
    return (
        marker(*args, **kwargs),
        getter(*args, **kwargs),
        constructer(*args, **kwargs),
    )
