"""Verifier for Hilbert-style derivations in the single- and multi-agent
inspection systems.

A proof is a sequence of lines, each justified as a premise, an axiom
schema instance, a propositional tautology, or an application of modus
ponens or necessitation.  Premise dependence is tracked so necessitation
only applies to theorem lines.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from knowval.syntax import (
    And,
    DepAtom,
    Formula,
    FormulaError,
    Inspect,
    Kv,
    Not,
    RESERVED_AGENT,
    Top,
    agents_of,
    diamond,
    implication,
    parse_formula,
    print_formula,
    valid_const,
)

AXIOM_RULES = ("taut", "dist", "learn", "nf", "det", "comm", "ir", "rir")
ALL_RULES = ("premise",) + AXIOM_RULES + ("mp", "nec")


@dataclass(frozen=True)
class ProofLine:
    formula: Formula
    rule: str
    refs: tuple[int, ...] = ()
    const: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "refs", tuple(self.refs))


@dataclass(frozen=True)
class Proof:
    mode: str
    lines: tuple[ProofLine, ...]
    conclusion: Formula

    def __post_init__(self):
        object.__setattr__(self, "lines", tuple(self.lines))


@dataclass(frozen=True)
class Verdict:
    accepted: bool
    line: int | None = None
    reason: str | None = None

    def __bool__(self) -> bool:
        return self.accepted

    def __str__(self) -> str:
        if self.accepted:
            return "accepted"
        return f"rejected line {self.line}: {self.reason}"


# --- schema templates and unification ---

@dataclass(frozen=True, slots=True)
class FVar(Formula):
    name: str


@dataclass(frozen=True)
class IdVar:
    name: str


_PHI, _PSI = FVar("phi"), FVar("psi")
_C, _D, _I = IdVar("c"), IdVar("d"), IdVar("i")


def _unify_id(slot, value: str, binding: dict) -> bool:
    if isinstance(slot, IdVar):
        bound = binding.setdefault(slot.name, value)
        return bound == value
    return slot == value


def _unify(template, f: Formula, binding: dict) -> bool:
    if isinstance(template, FVar):
        bound = binding.setdefault(template.name, f)
        return bound == f
    if isinstance(template, Top):
        return isinstance(f, Top)
    if isinstance(template, Not):
        return isinstance(f, Not) and _unify(template.sub, f.sub, binding)
    if isinstance(template, And):
        return (
            isinstance(f, And)
            and _unify(template.left, f.left, binding)
            and _unify(template.right, f.right, binding)
        )
    if isinstance(template, Kv):
        return (
            isinstance(f, Kv)
            and _unify_id(template.agent, f.agent, binding)
            and _unify_id(template.const, f.const, binding)
        )
    if isinstance(template, Inspect):
        return (
            isinstance(f, Inspect)
            and _unify_id(template.const, f.const, binding)
            and _unify(template.sub, f.sub, binding)
        )
    raise FormulaError(f"bad template node {template!r}")


def _match_any(templates, f: Formula):
    for template in templates:
        binding: dict = {}
        if _unify(template, f, binding):
            return binding
    return None


def _biconditional(fwd, bwd):
    return [fwd, bwd, And(fwd, bwd), And(bwd, fwd)]


_TEMPLATES = {
    "dist": [
        implication(
            Inspect(_C, implication(_PHI, _PSI)),
            implication(Inspect(_C, _PHI), Inspect(_C, _PSI)),
        )
    ],
    "learn": [Inspect(_C, Kv(_I, _C))],
    "nf": [implication(Kv(_I, _C), Inspect(_D, Kv(_I, _C)))],
    "det": _biconditional(
        implication(diamond(_C, _PHI), Inspect(_C, _PHI)),
        implication(Inspect(_C, _PHI), diamond(_C, _PHI)),
    ),
    "comm": _biconditional(
        implication(Inspect(_C, Inspect(_D, _PHI)), Inspect(_D, Inspect(_C, _PHI))),
        implication(Inspect(_D, Inspect(_C, _PHI)), Inspect(_C, Inspect(_D, _PHI))),
    ),
    "ir": [implication(Kv(_I, _C), implication(Inspect(_C, _PHI), _PHI))],
    "rir": [implication(Kv(_I, _C), implication(Inspect(_C, _PHI), _PHI))],
}


# --- tautology checking ---

def _modal_atoms(f: Formula, out: dict) -> None:
    """Maximal subformulas whose head is non-boolean, treated as atoms."""
    if isinstance(f, (Kv, Inspect, DepAtom)):
        out.setdefault(f, None)
    elif isinstance(f, Not):
        _modal_atoms(f.sub, out)
    elif isinstance(f, And):
        _modal_atoms(f.left, out)
        _modal_atoms(f.right, out)
    elif not isinstance(f, Top):
        raise FormulaError(f"unexpected node {f!r}")


def is_tautology(f: Formula, max_atoms: int = 16) -> bool:
    atoms: dict = {}
    _modal_atoms(f, atoms)
    atoms = list(atoms)
    if len(atoms) > max_atoms:
        raise FormulaError(
            f"formula too large: {len(atoms)} modal atoms (limit {max_atoms})"
        )

    def ev(g: Formula, assign: dict) -> bool:
        if isinstance(g, Top):
            return True
        if isinstance(g, Not):
            return not ev(g.sub, assign)
        if isinstance(g, And):
            return ev(g.left, assign) and ev(g.right, assign)
        return assign[g]

    for values in itertools.product((False, True), repeat=len(atoms)):
        if not ev(f, dict(zip(atoms, values))):
            return False
    return True


# --- the checker ---

def check_proof(proof: Proof, max_taut_atoms: int = 16) -> Verdict:
    """Accepts iff every line is a correct schema instance or rule
    application and the conclusion matches the last line."""
    if proof.mode not in ("single", "multi"):
        return Verdict(False, None, f"unknown mode {proof.mode!r}")
    if not proof.lines:
        return Verdict(False, None, "empty proof")
    deps: list[frozenset[int]] = []
    for idx, line in enumerate(proof.lines, start=1):
        verdict = _check_line(proof, idx, line, deps, max_taut_atoms)
        if verdict is not None:
            return verdict
    if proof.lines[-1].formula != proof.conclusion:
        return Verdict(False, len(proof.lines), "conclusion does not match last line")
    return Verdict(True)


def _check_line(proof, idx, line, deps, max_taut_atoms):
    f = line.formula
    rule = line.rule

    def reject(reason):
        return Verdict(False, idx, reason)

    if rule not in ALL_RULES:
        return reject(f"unknown rule {rule!r}")
    if proof.mode == "single" and not agents_of(f) <= {RESERVED_AGENT}:
        return reject("agent subscript in a single-mode proof")
    if rule not in ("mp", "nec") and line.refs:
        return reject(f"rule {rule!r} takes no line references")

    if rule == "premise":
        deps.append(frozenset((idx,)))
        return None

    if rule == "taut":
        try:
            ok = is_tautology(f, max_taut_atoms)
        except FormulaError as exc:
            return reject(str(exc))
        if not ok:
            return reject("not a propositional tautology")
        deps.append(frozenset())
        return None

    if rule in ("dist", "learn", "nf", "det", "comm", "ir", "rir"):
        if rule == "ir" and proof.mode == "multi":
            return reject("IR is not available in multi mode")
        binding = _match_any(_TEMPLATES[rule], f)
        if binding is None:
            return reject(f"not an instance of the {rule.upper()} schema")
        if rule == "rir":
            phi = binding["phi"]
            agent = binding["i"]
            if not agents_of(phi) <= {agent}:
                return reject("RIR side condition: formula mentions another agent")
        deps.append(frozenset())
        return None

    # rules with references
    for r in line.refs:
        if not 1 <= r < idx:
            return reject(f"reference to line {r} is out of range")

    if rule == "mp":
        if len(line.refs) != 2:
            return reject("MP takes exactly two line references")
        i, j = line.refs
        antecedent = proof.lines[i - 1].formula
        if proof.lines[j - 1].formula != implication(antecedent, f):
            return reject("modus ponens mismatch")
        deps.append(deps[i - 1] | deps[j - 1])
        return None

    # nec
    if len(line.refs) != 1:
        return reject("NEC takes exactly one line reference")
    if line.const is None or not valid_const(line.const):
        return reject("NEC needs a constant")
    (i,) = line.refs
    if deps[i - 1]:
        return reject("necessitation on a premise-dependent line")
    if f != Inspect(line.const, proof.lines[i - 1].formula):
        return reject("necessitation mismatch")
    deps.append(frozenset())
    return None


# --- JSON proof files ---

def proof_from_dict(doc: dict) -> Proof:
    if not isinstance(doc, dict):
        raise FormulaError("proof document must be a JSON object")
    unknown = set(doc) - {"mode", "lines", "conclusion"}
    if unknown:
        raise FormulaError(f"unknown proof fields: {sorted(unknown)}")
    mode = doc.get("mode", "single")
    if mode not in ("single", "multi"):
        raise FormulaError(f"unknown mode {mode!r}")
    lines = []
    for n, item in enumerate(doc.get("lines", []), start=1):
        extra = set(item) - {"formula", "rule", "refs", "const"}
        if extra:
            raise FormulaError(f"unknown line fields: {sorted(extra)}")
        if "formula" not in item or "rule" not in item:
            raise FormulaError(f"line {n} needs 'formula' and 'rule'")
        lines.append(
            ProofLine(
                parse_formula(item["formula"], mode),
                item["rule"],
                tuple(item.get("refs", ())),
                item.get("const"),
            )
        )
    if "conclusion" not in doc:
        raise FormulaError("proof document needs a conclusion")
    return Proof(mode, tuple(lines), parse_formula(doc["conclusion"], mode))


def proof_to_dict(proof: Proof) -> dict:
    lines = []
    for line in proof.lines:
        item: dict = {"formula": print_formula(line.formula), "rule": line.rule}
        if line.refs:
            item["refs"] = list(line.refs)
        if line.const is not None:
            item["const"] = line.const
        lines.append(item)
    return {
        "mode": proof.mode,
        "lines": lines,
        "conclusion": print_formula(proof.conclusion),
    }
