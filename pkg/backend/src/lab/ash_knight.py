"""
Uniform families of orders telling a formula's instances apart by order type.

For phi(x) = forall y psi(x, y) the order of index i is w^n when phi(i) holds
and w^n·(1+eta) when it fails. The base stages C_{i,s} hold the single point 0
while no counterexample y < s to psi(i, y) has shown up; once the least one y
is in view, stage s holds 0 followed by the dyadic codes y + 1 .. s. On
top of them the w-times machine runs once, then the copy machine and the
w-times machine alternate n - 1 more times.

Quantifiers inside psi are evaluated with a window equal to the stage number.
"""
from __future__ import annotations

import asyncio
import json
import os
import threading
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, Iterable, List, Optional, Sequence

from src.errors import FormulaError
from src.lab.jump_copy import jump_inv_copy
from src.lab.jump_omega import JumpOmegaMachine, jump_inv_omega_times, omega_machine
from src.lab.stages import StageSequence, stage_max_presentation, stage_sequence, stage_source
from src.logic.evaluate import evaluate_window
from src.logic.formula import Forall, Formula, free_vars, instantiate, numeral_term, substitute, to_text
from src.logic.goedel import goedel_decode, goedel_encode
from src.orders.constructors import add_top, dyadic_leq
from src.orders.finite import FiniteOrder, PrefixEvidence
from src.orders.presentation import OrderPresentation, explore_prefix
from src.utils.console import log

DEFAULT_BOUNDS = (10, 40, 60)


def _instance(phi: Formula, var: str, i: int) -> Formula:
    return substitute(phi, {var: numeral_term(i)})


def first_counterexample(phi: Formula, var: str, i: int, s: int) -> Optional[int]:
    """Least y < s with psi(i, y) false under the window s, if any."""
    closed = _instance(phi, var, i)
    for y in range(s):
        if evaluate_window(instantiate(closed, y), max(s, 1)).is_false:
            return y
    return None


@stage_source("ash-knight")
def _ash_knight(args, trace):
    phi_code, var, i = args
    phi = goedel_decode(phi_code)

    def stage(s: int) -> FiniteOrder:
        y = first_counterexample(phi, var, i, s)
        if y is None:
            return FiniteOrder([0])
        elements = [0] + list(range(y + 1, s + 1))
        trace.emit(s, "densify", counterexample=y, size=len(elements))
        return FiniteOrder.from_relation(elements, dyadic_leq)

    return stage


def check_shape(phi: Formula, var: str, n: int):
    """
    :raises FormulaError: unless phi is an unbounded universal statement about ``var`` and n >= 0
    """
    if n < 0:
        raise FormulaError(f"Negative exponent {n}")
    if not isinstance(phi, Forall) or phi.bound is not None:
        raise FormulaError("Expected a formula of the form forall y psi", to_text(phi))
    extra = free_vars(phi) - {var}
    if extra:
        raise FormulaError("Unexpected free variables", ", ".join(sorted(extra)))


class AshKnightFamily:
    """
        i -> presentation, uniformly: the presentations of two indices differ
        only in the numeral i inside their stage description.
    """

    def __init__(self, phi: Formula, n: int, var: str = "x"):
        check_shape(phi, var, n)
        self.phi = phi
        self.n = n
        self.var = var
        self.code = goedel_encode(phi)
        self._tops: Dict[int, StageSequence] = {}
        self._presentations: Dict[int, OrderPresentation] = {}
        self._lock = threading.Lock()

    def __repr__(self):
        return f"AshKnightFamily(n={self.n}, {to_text(self.phi)})"

    def base_stages(self, i: int) -> StageSequence:
        return stage_sequence(("ash-knight", self.code, self.var, i))

    def presentation(self, i: int) -> OrderPresentation:
        with self._lock:
            if i in self._presentations:
                return self._presentations[i]
        name = f"ash-knight-{self.n}-{i}"
        stages = self.base_stages(i)
        if self.n == 0:
            p = stage_max_presentation(stages, name, successor=False)
        else:
            p = jump_inv_omega_times(stages, name if self.n == 1 else "omega-times")
            for level in range(1, self.n):
                copy = jump_inv_copy(StageSequence.from_presentation(p))
                stages = StageSequence.from_presentation(copy)
                p = jump_inv_omega_times(stages, name if level == self.n - 1 else "omega-times")
        with self._lock:
            self._tops[i] = stages
            return self._presentations.setdefault(i, p)

    def top_machine(self, i: int) -> Optional[JumpOmegaMachine]:
        """The last w-times machine of index i; None when n = 0."""
        self.presentation(i)
        return omega_machine(self._tops[i]) if self.n else None

    def evidence(self, i: int, bounds: Sequence[int] = DEFAULT_BOUNDS) -> PrefixEvidence:
        """Prefix snapshots at the given bounds, labeled by the last w-times machine."""
        p = self.presentation(i)
        evidence = PrefixEvidence()
        for bound in bounds:
            evidence.add(bound, explore_prefix(p, bound))
        machine = self.top_machine(i)
        if machine is not None and bounds:
            labels = machine.state(max(bounds)).labels
            evidence.labels = {x: labels[x] for x in evidence.final}
        return evidence

    async def explore(self, indices: Iterable[int], bounds: Sequence[int] = DEFAULT_BOUNDS) -> Dict[int, PrefixEvidence]:
        """Evidence for several indices at once, one worker thread per index."""
        indices = list(indices)
        loop = asyncio.get_running_loop()
        with ThreadPoolExecutor(max_workers=max(1, len(indices))) as executor:
            tasks = [loop.run_in_executor(executor, self.evidence, i, bounds) for i in indices]
            results = await asyncio.gather(*tasks)
        return dict(zip(indices, results))

    def explore_all(self, indices: Iterable[int], bounds: Sequence[int] = DEFAULT_BOUNDS) -> Dict[int, PrefixEvidence]:
        """Blocking ``explore``, usable with or without a running event loop."""
        coroutine = self.explore(indices, bounds)
        try:
            asyncio.get_running_loop()
        except RuntimeError:
            return asyncio.run(coroutine)
        with ThreadPoolExecutor(max_workers=1) as executor:
            return executor.submit(asyncio.run, coroutine).result()

    def export(self, directory: str, indices: Iterable[int]) -> List[str]:
        """One ``<i>.presentation`` file per index plus an ``index.json`` listing them."""
        os.makedirs(directory, exist_ok=True)
        paths, listing = [], {}
        for i in indices:
            path = os.path.join(directory, f"{i}.presentation")
            with open(path, "w", encoding="utf-8") as handle:
                handle.write(self.presentation(i).to_text() + "\n")
            paths.append(path)
            listing[str(i)] = os.path.basename(path)
        with open(os.path.join(directory, "index.json"), "w", encoding="utf-8") as handle:
            json.dump({"formula": to_text(self.phi), "variable": self.var, "n": self.n, "files": listing}, handle, indent=1)
        log("success", "Lab", f"Exported {len(paths)} presentations to {directory}")
        return paths


def ash_knight_family(phi: Formula, n: int, var: str = "x") -> AshKnightFamily:
    return AshKnightFamily(phi, n, var)


def sentence_order(phi: Formula, n: int, with_top: bool = False) -> OrderPresentation:
    """
    Order of type w^n when the sentence holds and w^n·(1+eta) otherwise.

    ``with_top`` appends a last element, giving w^n + 1 in the first case.
    """
    p = AshKnightFamily(phi, n).presentation(0)
    return add_top(p) if with_top else p
