"""Append-only registry of kernel variables.

Every name maps to one symbol for the life of the process, so expressions
built by different modules share their variables. Registration order is
kept for REGISTRY.sort; printing follows sympy's own term order and does not
depend on it.
"""
import threading
from typing import Dict, Iterable, List, Tuple

import sympy as sp


class VariableRegistry:
    """Thread safe, append-only map from names to sympy symbols."""
    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._symbols: Dict[str, sp.Symbol] = {}
        self._order: List[str] = []

    def symbol(self, name: str) -> sp.Symbol:
        """Return the symbol registered under name, registering it if new."""
        with self._lock:
            sym = self._symbols.get(name)
            if sym is None:
                sym = sp.Symbol(name)
                self._symbols[name] = sym
                self._order.append(name)
            return sym

    def symbols(self, names: Iterable[str]) -> Tuple[sp.Symbol, ...]:
        return tuple(self.symbol(name) for name in names)

    def index(self, sym: sp.Symbol) -> int:
        name = str(sym)
        with self._lock:
            if name not in self._symbols:
                self._symbols[name] = sp.Symbol(name)
                self._order.append(name)
            return self._order.index(name)

    def names(self) -> Tuple[str, ...]:
        with self._lock:
            return tuple(self._order)

    def sort(self, symbols: Iterable[sp.Symbol]) -> List[sp.Symbol]:
        """Sort symbols by registration order."""
        return sorted(set(symbols), key=self.index)

    def __len__(self) -> int:
        with self._lock:
            return len(self._order)


REGISTRY = VariableRegistry()


def var(name: str) -> sp.Symbol:
    return REGISTRY.symbol(name)


def variables(names: Iterable[str]) -> Tuple[sp.Symbol, ...]:
    return REGISTRY.symbols(names)
