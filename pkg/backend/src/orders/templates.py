"""
Prefix templates: is a snapshot (or a series of snapshots at growing bounds)
consistent with being a prefix of a given order type?

Template names::

    finite-N            at most N elements
    omega               no certified element gains predecessors later
    omega-times-K       as omega inside every block, at most K blocks
    omega-pow-N         w-blocks as in omega; the blocks, ordered by their heads and
                        grouped by the outer labels, must pass omega-pow-(N-1)
    omega-pow-N-eta     w^N·(1+eta): a new block appears strictly between two old ones

An element is certified in a snapshot when the segment from the head of its
block up to it is a chain of successor pairs. Blocks come from the evidence
labels when present, otherwise the whole order is one block.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Dict, List, Optional, Union

from src.errors import TemplateError
from src.orders.finite import FiniteOrder, PrefixEvidence

_PATTERN = re.compile(r"^(finite-(?P<finite>\d+)|omega|omega-times-(?P<times>\d+)|omega-pow-(?P<pow>\d+)(?P<eta>-eta)?)$")


@dataclass(frozen=True)
class Template:
    name: str
    kind: str
    size: int = 0

    def __str__(self):
        return self.name


def parse_template(name: str) -> Template:
    match = _PATTERN.match(name.strip())
    if not match:
        raise TemplateError(f"Unknown template <{name}>", "expected finite-N, omega, omega-times-K, omega-pow-N or omega-pow-N-eta")
    if match.group("finite") is not None:
        return Template(name, "finite", int(match.group("finite")))
    if match.group("times") is not None:
        return Template(name, "omega-times", int(match.group("times")))
    if match.group("pow") is not None:
        return Template(name, "omega-pow-eta" if match.group("eta") else "omega-pow", int(match.group("pow")))
    return Template(name, "omega-times", 1)


def _as_evidence(f: Union[FiniteOrder, PrefixEvidence]) -> PrefixEvidence:
    if isinstance(f, PrefixEvidence):
        return f
    return PrefixEvidence().add(len(f), f)


def coherent(evidence: PrefixEvidence) -> bool:
    """Every snapshot keeps the elements of the previous one and orders them alike."""
    for earlier, later in evidence.pairs():
        if any(x not in later for x in earlier) or not earlier.agrees_with(later):
            return False
    return True


def _label(evidence: PrefixEvidence, x: int) -> int:
    return evidence.labels.get(x, 0) if evidence.labels else 0


def blocks(evidence: PrefixEvidence, snapshot: FiniteOrder) -> Dict[int, List[int]]:
    """Elements of the snapshot grouped by label, each group in increasing order."""
    grouped: Dict[int, List[int]] = {}
    for x in snapshot:
        grouped.setdefault(_label(evidence, x), []).append(x)
    return grouped


def certified(evidence: PrefixEvidence, snapshot: FiniteOrder) -> Dict[int, frozenset]:
    """Certified elements and their predecessors inside their block."""
    result = {}
    for members in blocks(evidence, snapshot).values():
        result[members[0]] = frozenset()
        for previous, x in zip(members, members[1:]):
            if not snapshot.is_successor(previous, x):
                break
            result[x] = frozenset(members[:members.index(x)])
    return result


def no_late_predecessors(evidence: PrefixEvidence) -> bool:
    for index, snapshot in enumerate(evidence.snapshots):
        for x, predecessors in certified(evidence, snapshot).items():
            label = _label(evidence, x)
            for later in evidence.snapshots[index + 1:]:
                now = frozenset(y for y in later.below(x) if _label(evidence, y) == label) if x in later else predecessors
                if now != predecessors:
                    return False
    return True


def labels_monotone(evidence: PrefixEvidence) -> bool:
    labels = [_label(evidence, x) for x in evidence.final]
    seen = []
    for label in labels:
        if seen and label != seen[-1] and label in seen:
            return False
        if not seen or label != seen[-1]:
            seen.append(label)
    return True


def densified(evidence: PrefixEvidence) -> bool:
    """
    Some later snapshot has a block strictly between two blocks of an earlier one.
    Without labels every element is its own block.
    """
    if not evidence.labels:
        for index, snapshot in enumerate(evidence.snapshots):
            for later in evidence.snapshots[index + 1:]:
                for low, high in zip(snapshot.elements, snapshot.elements[1:]):
                    if any(z not in snapshot for z in later.between(low, high)):
                        return True
        return False
    for index, snapshot in enumerate(evidence.snapshots):
        heads = [members[0] for members in blocks(evidence, snapshot).values()]
        heads.sort(key=snapshot.position.__getitem__)
        old_labels = {_label(evidence, x) for x in snapshot}
        for later in evidence.snapshots[index + 1:]:
            for low, high in zip(heads, heads[1:]):
                if any(_label(evidence, z) not in old_labels for z in later.between(low, high)):
                    return True
    return False


def block_evidence(evidence: PrefixEvidence) -> PrefixEvidence:
    """
    The evidence one level up: every snapshot becomes the order of its blocks,
    each block named by its label and placed at its head.
    """
    lifted = PrefixEvidence(labels=dict(evidence.outer_labels))
    for bound, snapshot in zip(evidence.bounds, evidence.snapshots):
        heads = [(members[0], label) for label, members in blocks(evidence, snapshot).items()]
        heads.sort(key=lambda pair: snapshot.position[pair[0]])
        lifted.add(bound, FiniteOrder([label for _, label in heads]))
    return lifted


def omega_power(evidence: PrefixEvidence, n: int) -> bool:
    """
    Consistent with a prefix of w^n: w-blocks without late predecessors, and the
    order of the blocks consistent with w^(n-1) one level up.
    """
    if n == 0:
        return len(evidence.final) <= 1
    if n == 1 and evidence.labels and len(blocks(evidence, evidence.final)) > 1:
        return False
    if not (labels_monotone(evidence) and no_late_predecessors(evidence)):
        return False
    if n == 1:
        return True
    lifted = block_evidence(evidence)
    return coherent(lifted) and omega_power(lifted, n - 1)


def prefix_iso_check(f: Union[FiniteOrder, PrefixEvidence], template: Union[str, Template]) -> bool:
    """
    True when the snapshot or series of snapshots is consistent with a prefix of the template.

    :raises TemplateError: on an unknown template name
    """
    template = parse_template(template) if isinstance(template, str) else template
    evidence = _as_evidence(f)
    if not coherent(evidence):
        return False
    kind, size = template.kind, template.size
    if kind == "finite":
        return len(evidence.final) <= size
    if kind == "omega-times":
        if evidence.labels and len(blocks(evidence, evidence.final)) > size:
            return False
        return labels_monotone(evidence) and no_late_predecessors(evidence)
    if kind == "omega-pow":
        return omega_power(evidence, size)
    if kind == "omega-pow-eta":
        return len(evidence.snapshots) < 2 or densified(evidence)
    raise TemplateError(f"Unknown template kind <{kind}>")


def template_names(example_sizes: Optional[List[int]] = None) -> List[str]:
    sizes = example_sizes or [1, 2, 3]
    return [f"finite-{k}" for k in sizes] + ["omega"] + [f"omega-times-{k}" for k in sizes] + \
        [f"omega-pow-{k}" for k in sizes] + [f"omega-pow-{k}-eta" for k in (0, 1)]
