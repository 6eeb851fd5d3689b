"""Functional-dependency closure, literal-set consistency, satisfiability
and finite-premise entailment for the dependency normal form."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from knowval.syntax import (
    And,
    DepAtom,
    Formula,
    Not,
    RESERVED_AGENT,
    Top,
    agents_of,
    conjunction_all,
    signature_of,
    translate,
)
from knowval.semantics import PointedModel


class DependencyError(ValueError):
    pass


class FormulaTooLargeError(ValueError):
    """Raised when a normal form exceeds the distinct-atom guard."""


@dataclass(frozen=True)
class FD:
    lhs: frozenset[str]
    rhs: frozenset[str]

    def __post_init__(self):
        object.__setattr__(self, "lhs", frozenset(self.lhs))
        object.__setattr__(self, "rhs", frozenset(self.rhs))


@dataclass(frozen=True)
class FDSet:
    agent: str
    signature: frozenset[str]
    deps: frozenset[FD]

    def __post_init__(self):
        object.__setattr__(self, "signature", frozenset(self.signature))
        object.__setattr__(self, "deps", frozenset(self.deps))
        for fd in self.deps:
            if not fd.lhs <= self.signature or not fd.rhs <= self.signature:
                raise DependencyError(f"dependency {fd} outside signature")


@dataclass(frozen=True)
class Literal:
    positive: bool
    atom: DepAtom


def attribute_closure(fds: FDSet, consts: Iterable[str]) -> frozenset[str]:
    """Least superset of ``consts`` closed under the dependencies, by
    iteration to fixpoint."""
    closure = set(consts)
    if not closure <= fds.signature:
        raise DependencyError(
            f"constants outside signature: {sorted(closure - fds.signature)}"
        )
    changed = True
    while changed:
        changed = False
        for fd in fds.deps:
            if fd.lhs <= closure and not fd.rhs <= closure:
                closure |= fd.rhs
                changed = True
    return frozenset(closure)


def fd_implied(fds: FDSet, query: FD) -> bool:
    if not query.rhs <= fds.signature:
        raise DependencyError("query outside signature")
    return query.rhs <= attribute_closure(fds, query.lhs)


def literals_consistent(
    literals: Iterable[Literal], signature: Iterable[str] | None = None
) -> bool:
    """True iff, per agent, no negated atom is forced by the positive ones.

    A negative literal ~Kv_i(C,D) is refutable exactly when D is not
    contained in the closure of C under agent i's positive dependencies;
    then the canonical model satisfies the whole set.
    """
    literals = list(literals)
    sig = set(signature or ())
    for lit in literals:
        sig |= lit.atom.lhs | lit.atom.rhs
    positives: dict[str, set[FD]] = {}
    negatives: list[DepAtom] = []
    for lit in literals:
        if lit.positive:
            positives.setdefault(lit.atom.agent, set()).add(FD(lit.atom.lhs, lit.atom.rhs))
        else:
            negatives.append(lit.atom)
    for atom in negatives:
        # Projectivity: Kv(C,D) with D <= C is valid, so its negation is out.
        if atom.rhs <= atom.lhs:
            return False
    for atom in negatives:
        fds = FDSet(atom.agent, frozenset(sig), frozenset(positives.get(atom.agent, ())))
        if atom.rhs <= attribute_closure(fds, atom.lhs):
            return False
    return True


# --- DNF over dependency atoms ---

def _collect_atoms(nf: Formula, seen: dict) -> None:
    if isinstance(nf, DepAtom):
        seen.setdefault(nf, None)
    elif isinstance(nf, Not):
        _collect_atoms(nf.sub, seen)
    elif isinstance(nf, And):
        _collect_atoms(nf.left, seen)
        _collect_atoms(nf.right, seen)
    elif not isinstance(nf, Top):
        raise DependencyError(f"not a normal form: {nf!r}")


def to_dnf(nf: Formula, max_atoms: int = 16) -> list[dict]:
    """Disjunctive normal form as a list of ``{atom: polarity}`` maps, in
    textual expansion order.  Guarded by a distinct-atom count."""
    atoms: dict = {}
    _collect_atoms(nf, atoms)
    if len(atoms) > max_atoms:
        raise FormulaTooLargeError(
            f"formula too large: {len(atoms)} dependency atoms (limit {max_atoms})"
        )

    def expand(f: Formula, positive: bool) -> list[dict]:
        if isinstance(f, Top):
            return [{}] if positive else []
        if isinstance(f, DepAtom):
            return [{f: positive}]
        if isinstance(f, Not):
            return expand(f.sub, not positive)
        if isinstance(f, And):
            if positive:
                out = []
                for dl in expand(f.left, True):
                    for dr in expand(f.right, True):
                        merged = dict(dl)
                        ok = True
                        for atom, pol in dr.items():
                            if merged.get(atom, pol) != pol:
                                ok = False
                                break
                            merged[atom] = pol
                        if ok:
                            out.append(merged)
                return out
            return expand(f.left, False) + expand(f.right, False)
        raise DependencyError(f"not a normal form: {f!r}")

    return expand(nf, True)


def satisfiable(
    nf: Formula, *, mode: str | None = None, max_atoms: int = 16
) -> Optional[PointedModel]:
    """Canonical pointed model for the first consistent disjunct, or None.

    The returned model is binary-valued; its point satisfies every literal
    of the chosen disjunct and hence the whole formula.
    """
    from knowval.canonical import (  # local import; canonical builds on this module
        CanonicalModelSpec,
        canonical_model_multi,
        canonical_model_single,
    )

    sig = frozenset(signature_of(nf))
    agents = agents_of(nf)
    if mode is None:
        mode = "multi" if any(a != RESERVED_AGENT for a in agents) else "single"
    if mode not in ("single", "multi"):
        raise ValueError(f"unknown mode {mode!r}")

    for disjunct in to_dnf(nf, max_atoms=max_atoms):
        lits = [Literal(pol, atom) for atom, pol in disjunct.items()]
        if not literals_consistent(lits, sig):
            continue
        per_agent: dict[str, set[FD]] = {}
        if mode == "single":
            per_agent[RESERVED_AGENT] = set()
        else:
            for a in sorted(agents) or ["1"]:
                per_agent[a] = set()
        for lit in lits:
            if lit.positive:
                per_agent.setdefault(lit.atom.agent, set()).add(
                    FD(lit.atom.lhs, lit.atom.rhs)
                )
        spec = CanonicalModelSpec(
            signature=sig,
            per_agent={
                a: FDSet(a, sig, frozenset(deps)) for a, deps in per_agent.items()
            },
            mode=mode,
        )
        if mode == "single":
            return canonical_model_single(spec)
        return canonical_model_multi(spec)
    return None


def entails(
    premises: Iterable[Formula],
    goal: Formula,
    *,
    mode: str | None = None,
    max_atoms: int = 16,
) -> bool:
    """Finite-premise entailment, decided as unsatisfiability of
    premises and the negated goal."""
    premises = list(premises)
    test = conjunction_all(premises + [Not(goal)])
    if mode is None:
        mentioned = agents_of(test)
        mode = "multi" if any(a != RESERVED_AGENT for a in mentioned) else "single"
    nf = translate(test)
    return satisfiable(nf, mode=mode, max_atoms=max_atoms) is None
