import itertools

import pytest

from filtra.formulas import Atom, Not, Or
from filtra.worlds import canonical_universe


@pytest.fixture
def u1():
    return canonical_universe(("p",))


@pytest.fixture
def u2():
    return canonical_universe(("p", "q"))


def eval_formula(formula, assignment):
    """Independent truth evaluator used as an oracle (no point sets)."""
    if isinstance(formula, Atom):
        return assignment[formula.name]
    if isinstance(formula, Not):
        return not eval_formula(formula.operand, assignment)
    return eval_formula(formula.left, assignment) or eval_formula(formula.right, assignment)


def brute_entails(premises, conclusion, atoms):
    """Truth-table entailment: every assignment satisfying all premises
    satisfies the conclusion."""
    for values in itertools.product((False, True), repeat=len(atoms)):
        assignment = dict(zip(atoms, values))
        if all(eval_formula(p, assignment) for p in premises):
            if not eval_formula(conclusion, assignment):
                return False
    return True


def enumerate_formulas(atoms, max_depth):
    """Every formula AST up to the given depth (oracle-side enumeration)."""
    layers = [[Atom(a) for a in atoms]]
    for _ in range(max_depth):
        previous = [f for layer in layers for f in layer]
        fresh = [Not(f) for f in layers[-1]]
        fresh.extend(Or(left, right) for left in layers[-1] for right in previous)
        fresh.extend(Or(left, right) for left in previous for right in layers[-1])
        # deduplicate while keeping order stable
        seen = set()
        layer = []
        for f in fresh:
            if f not in seen:
                seen.add(f)
                layer.append(f)
        layers.append(layer)
    return [f for layer in layers for f in layer]
