"""Reading identity bases: ``LHS = RHS`` lines plus ``@O``/``@A(n)``... directives."""

from __future__ import annotations

import re
from pathlib import Path

from .deduction import Identity, IdentitySystem
from .families import family

_DIRECTIVE = re.compile(r"@([A-Z])(?:\((\d+)\))?\Z")


class BasisSyntaxError(ValueError):
    pass


def expand_directive(token: str) -> IdentitySystem:
    m = _DIRECTIVE.match(token.strip())
    if m is None:
        raise BasisSyntaxError(f"bad directive {token!r}")
    name, param = m.group(1), m.group(2)
    try:
        return family(name, int(param) if param is not None else None)
    except ValueError as exc:
        raise BasisSyntaxError(str(exc)) from None


def parse_basis(text: str, name: str = "basis") -> IdentitySystem:
    idents: list[Identity] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            if line.startswith("@"):
                for tok in line.split():
                    idents.extend(expand_directive(tok))
            else:
                idents.append(Identity.parse(line))
        except ValueError as exc:
            raise BasisSyntaxError(f"line {lineno}: {exc}") from None
    return IdentitySystem(name, idents)


def load_basis(source: str) -> IdentitySystem:
    """A basis from a file path, inline directives such as ``@O+@A(3)``, or
    inline identities separated by ``;`` such as ``"x y = y x; x x = x"``."""
    if source.startswith("@"):
        idents: list[Identity] = []
        for tok in source.replace(",", "+").split("+"):
            idents.extend(expand_directive(tok))
        return IdentitySystem(source, idents)
    path = Path(source)
    if not path.is_file():
        if "=" in source:
            return parse_basis(source.replace(";", "\n"), name=source)
        raise FileNotFoundError(f"no such basis file: {source}")
    return parse_basis(path.read_text(), name=path.name)


def format_basis(system: IdentitySystem) -> str:
    return "".join(f"{ident}\n" for ident in system)
