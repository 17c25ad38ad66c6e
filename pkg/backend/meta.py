from functools import partial

from src.logic.grammar import parse
from src.orders.constructors import empty, eta, finite_chain, omega, omega_times, one_plus_eta
from src.orders.templates import prefix_iso_check, template_names
from src.progressions.reflection import TheorySpec

AVAILABLE_TEMPLATES = {name: partial(prefix_iso_check, template=name) for name in template_names([1, 2, 3])}
"""
This dictionary exposes the prefix templates that ``order check`` and ``lab`` reports test against.
The key is the template name and the value takes a FiniteOrder or PrefixEvidence and returns a bool.
Any other well-formed name (finite-7, omega-pow-4...) is still accepted by ``prefix_iso_check``.
"""

STANDARD_PRESENTATIONS = {
    "omega": omega,
    "eta": eta,
    "one-plus-eta": one_plus_eta,
    "empty": empty,
    "finite-1": partial(finite_chain, 1),
    "finite-2": partial(finite_chain, 2),
    "finite-3": partial(finite_chain, 3),
    "omega-times-2": partial(omega_times, 2),
    "omega-times-3": partial(omega_times, 3),
}
"""
This dictionary exposes the built-in order presentations usable wherever a command takes ``--order``.
The key is the presentation name and the value a factory returning an OrderPresentation.

"""

Q0_AXIOMS = (
    "forall x. S(x) != 0",
    "forall x. forall y. S(x) = S(y) -> x = y",
    "forall x. x + 0 = x",
    "forall x. forall y. x + S(y) = S(x + y)",
    "forall x. x * 0 = 0",
    "forall x. forall y. x * S(y) = x * y + x",
)

STANDARD_THEORIES = {
    "Q0": lambda: TheorySpec.finite("Q0", [parse(axiom) for axiom in Q0_AXIOMS]),
    "EVEN": lambda: TheorySpec.schematic("EVEN", parse("exists m < S(n + n). n + n = m + m", free=["n"]), "n"),
}
"""
This dictionary exposes the demo theories the ``prog`` commands reflect over.
The key is the theory name and the value a factory returning a TheorySpec:
Q0 lists the successor, addition and multiplication axioms, EVEN is the schema of
instances saying that 2n is even.

"""
