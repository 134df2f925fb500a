"""Shared budget knobs. Every bounded search reports the bound it used."""

from dataclasses import dataclass


@dataclass(frozen=True)
class Budgets:
    max_cyclotomic_order: int = 120
    closure_cap: int = 2000
    truncation: int = 40
    hilbert_window: int = 24
    stabilization_points: int = 6
    ladder_bound: int = 8
    probe_bound: int = 20
    laurent_window: int = 40


DEFAULT = Budgets()


class InputError(ValueError):
    """Malformed input: bad syntax, bad schema, incompatible orders. Exit code 1."""

    exit_code = 1


class BudgetError(RuntimeError):
    """A cap, truncation or window was exhausted before the answer stabilized. Exit code 2."""

    exit_code = 2


class InconsistencyError(RuntimeError):
    """An internal invariant that theory guarantees was violated. Exit code 3."""

    exit_code = 3
