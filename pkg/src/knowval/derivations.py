"""Derivation fixtures: concrete Hilbert proofs of the derived schemas
(seriality, the primed and multi-step distribution/learning/no-forgetting
/irrelevance schemas) and of projectivity, transitivity and additivity.

Each fixture is built from primitive lines only, so the checker kernel
stays minimal; the builders below emit the standard tautology-and-MP
glue (implication chaining, conjunction introduction, lifting an
implication through a box).
"""

from __future__ import annotations

from knowval.proofcheck import Proof, ProofLine
from knowval.syntax import (
    And,
    Formula,
    Inspect,
    Kv,
    Not,
    RESERVED_AGENT,
    TOP,
    boxes,
    diamond,
    implication,
    match_implication,
)


class _Builder:
    def __init__(self, mode: str = "single"):
        self.mode = mode
        self.lines: list[ProofLine] = []

    def formula(self, i: int) -> Formula:
        return self.lines[i - 1].formula

    def _add(self, formula, rule, refs=(), const=None) -> int:
        self.lines.append(ProofLine(formula, rule, tuple(refs), const))
        return len(self.lines)

    def premise(self, f: Formula) -> int:
        return self._add(f, "premise")

    def taut(self, f: Formula) -> int:
        return self._add(f, "taut")

    def axiom(self, rule: str, f: Formula) -> int:
        return self._add(f, rule)

    def mp(self, i: int, j: int) -> int:
        split = match_implication(self.formula(j))
        if split is None or split[0] != self.formula(i):
            raise AssertionError(f"bad MP construction at lines {i}, {j}")
        return self._add(split[1], "mp", (i, j))

    def nec(self, const: str, i: int) -> int:
        return self._add(Inspect(const, self.formula(i)), "nec", (i,), const)

    # -- derived moves, expanded into primitive lines --

    def chain(self, i: int, j: int) -> int:
        """From |- A->B and |- B->C conclude |- A->C."""
        a, _ = match_implication(self.formula(i))
        _, c = match_implication(self.formula(j))
        t = self.taut(
            implication(
                self.formula(i), implication(self.formula(j), implication(a, c))
            )
        )
        return self.mp(j, self.mp(i, t))

    def conj(self, i: int, j: int) -> int:
        """From |- A and |- B conclude |- A & B."""
        fi, fj = self.formula(i), self.formula(j)
        t = self.taut(implication(fi, implication(fj, And(fi, fj))))
        return self.mp(j, self.mp(i, t))

    def lift(self, const: str, i: int) -> int:
        """From |- A->B conclude |- [c]A -> [c]B."""
        a, b = match_implication(self.formula(i))
        n = self.nec(const, i)
        d = self.axiom(
            "dist",
            implication(
                Inspect(const, implication(a, b)),
                implication(Inspect(const, a), Inspect(const, b)),
            ),
        )
        return self.mp(n, d)

    def impl_under_boxes(self, box_list, phi: Formula, psi: Formula) -> int:
        """|- [B]phi -> ([B]psi -> [B](phi & psi)) for a box prefix B."""
        x, y, z = phi, psi, And(phi, psi)
        cur = self.taut(implication(x, implication(y, z)))
        for c in reversed(list(box_list)):
            lifted = self.lift(c, cur)
            d = self.axiom(
                "dist",
                implication(
                    Inspect(c, implication(y, z)),
                    implication(Inspect(c, y), Inspect(c, z)),
                ),
            )
            cur = self.chain(lifted, d)
            x, y, z = Inspect(c, x), Inspect(c, y), Inspect(c, z)
        return cur

    def conj_under_boxes(self, box_list, phi, psi, i: int, j: int) -> int:
        """From |- [B]phi and |- [B]psi conclude |- [B](phi & psi)."""
        h = self.impl_under_boxes(box_list, phi, psi)
        return self.mp(j, self.mp(i, h))

    def build(self) -> Proof:
        return Proof(self.mode, tuple(self.lines), self.lines[-1].formula)


def _kv(c: str, agent: str = RESERVED_AGENT) -> Formula:
    return Kv(agent, c)


def _seriality(c: str = "c") -> Proof:
    b = _Builder()
    top = b.taut(TOP)
    boxed = b.nec(c, top)
    det = b.axiom("det", implication(Inspect(c, TOP), diamond(c, TOP)))
    b.mp(boxed, det)
    return b.build()


def _ir_prime(c: str = "c", d: str = "d") -> Proof:
    # Kv(c) -> (phi -> [c]phi), via IR on the negated formula and DET.
    b = _Builder()
    phi = _kv(d)
    ir = b.axiom(
        "ir", implication(_kv(c), implication(Inspect(c, Not(phi)), Not(phi)))
    )
    contra = implication(_kv(c), implication(phi, Not(Inspect(c, Not(phi)))))
    flip = b.taut(implication(b.formula(ir), contra))
    step = b.mp(ir, flip)
    det = b.axiom("det", implication(diamond(c, phi), Inspect(c, phi)))
    goal = implication(_kv(c), implication(phi, Inspect(c, phi)))
    glue = b.taut(implication(b.formula(step), implication(b.formula(det), goal)))
    b.mp(det, b.mp(step, glue))
    return b.build()


def _forward_split(b: _Builder, box_list, phi, psi) -> int:
    """|- [B](phi & psi) -> ([B]phi & [B]psi)."""
    left = b.taut(implication(And(phi, psi), phi))
    for c in reversed(list(box_list)):
        left = b.lift(c, left)
    right = b.taut(implication(And(phi, psi), psi))
    for c in reversed(list(box_list)):
        right = b.lift(c, right)
    boxed = boxes(box_list, And(phi, psi))
    goal = implication(boxed, And(boxes(box_list, phi), boxes(box_list, psi)))
    glue = b.taut(
        implication(b.formula(left), implication(b.formula(right), goal))
    )
    return b.mp(right, b.mp(left, glue))


def _backward_join(b: _Builder, box_list, phi, psi) -> int:
    """|- ([B]phi & [B]psi) -> [B](phi & psi)."""
    h = b.impl_under_boxes(box_list, phi, psi)
    goal = implication(
        And(boxes(box_list, phi), boxes(box_list, psi)),
        boxes(box_list, And(phi, psi)),
    )
    glue = b.taut(implication(b.formula(h), goal))
    return b.mp(h, glue)


def _dist_prime(c: str = "c") -> Proof:
    b = _Builder()
    phi, psi = _kv("d"), _kv("e")
    fwd = _forward_split(b, [c], phi, psi)
    bwd = _backward_join(b, [c], phi, psi)
    b.conj(fwd, bwd)
    return b.build()


def _multi_dist(c1: str = "c1", c2: str = "c2") -> Proof:
    b = _Builder()
    phi, psi = _kv("d"), _kv("e")
    inner = b.axiom(
        "dist",
        implication(
            Inspect(c2, implication(phi, psi)),
            implication(Inspect(c2, phi), Inspect(c2, psi)),
        ),
    )
    lifted = b.lift(c1, inner)
    outer = b.axiom(
        "dist",
        implication(
            Inspect(c1, implication(Inspect(c2, phi), Inspect(c2, psi))),
            implication(
                Inspect(c1, Inspect(c2, phi)), Inspect(c1, Inspect(c2, psi))
            ),
        ),
    )
    b.chain(lifted, outer)
    return b.build()


def _multi_dist_prime(c1: str = "c1", c2: str = "c2") -> Proof:
    b = _Builder()
    phi, psi = _kv("d"), _kv("e")
    fwd = _forward_split(b, [c1, c2], phi, psi)
    bwd = _backward_join(b, [c1, c2], phi, psi)
    b.conj(fwd, bwd)
    return b.build()


def _multi_learn(c1: str = "c1", c2: str = "c2", agent: str = RESERVED_AGENT,
                 mode: str = "single") -> Proof:
    b = _Builder(mode)
    learn1 = b.axiom("learn", Inspect(c1, Kv(agent, c1)))
    swapped = b.nec(c2, learn1)
    comm = b.axiom(
        "comm",
        implication(
            Inspect(c2, Inspect(c1, Kv(agent, c1))),
            Inspect(c1, Inspect(c2, Kv(agent, c1))),
        ),
    )
    first = b.mp(swapped, comm)
    learn2 = b.axiom("learn", Inspect(c2, Kv(agent, c2)))
    second = b.nec(c1, learn2)
    b.conj_under_boxes([c1, c2], Kv(agent, c1), Kv(agent, c2), first, second)
    return b.build()


def _multi_nf(c1="c1", c2="c2", d1="d1", d2="d2") -> Proof:
    b = _Builder()

    def keeps(x: str) -> int:
        # |- Kv(x) -> [d1][d2]Kv(x)
        inner = b.axiom("nf", implication(_kv(x), Inspect(d2, _kv(x))))
        lifted = b.lift(d1, inner)
        outer = b.axiom("nf", implication(_kv(x), Inspect(d1, _kv(x))))
        return b.chain(outer, lifted)

    keep1 = keeps(c1)
    keep2 = keeps(c2)
    join = b.impl_under_boxes([d1, d2], _kv(c1), _kv(c2))
    both = And(_kv(c1), _kv(c2))
    goal = implication(both, boxes([d1, d2], both))
    glue = b.taut(
        implication(
            b.formula(keep1),
            implication(b.formula(keep2), implication(b.formula(join), goal)),
        )
    )
    b.mp(join, b.mp(keep2, b.mp(keep1, glue)))
    return b.build()


def _multi_ir(c1: str = "c1", c2: str = "c2") -> Proof:
    b = _Builder()
    phi = _kv("d")
    inner = b.axiom(
        "ir", implication(_kv(c2), implication(Inspect(c2, phi), phi))
    )
    outer = b.axiom(
        "ir",
        implication(
            _kv(c1),
            implication(Inspect(c1, Inspect(c2, phi)), Inspect(c2, phi)),
        ),
    )
    goal = implication(
        And(_kv(c1), _kv(c2)),
        implication(Inspect(c1, Inspect(c2, phi)), phi),
    )
    glue = b.taut(
        implication(b.formula(outer), implication(b.formula(inner), goal))
    )
    b.mp(inner, b.mp(outer, glue))
    return b.build()


def _multi_nec_expansion(c1: str = "c1", c2: str = "c2") -> Proof:
    b = _Builder()
    theorem = b.axiom("learn", Inspect("d", _kv("d")))
    b.nec(c1, b.nec(c2, theorem))
    return b.build()


def _projectivity(c1: str = "c1", c2: str = "c2") -> Proof:
    # Kv({c1,c2},{c1}), i.e. [c1][c2]Kv(c1).
    b = _Builder()
    learn = b.axiom("learn", Inspect(c1, _kv(c1)))
    swapped = b.nec(c2, learn)
    comm = b.axiom(
        "comm",
        implication(
            Inspect(c2, Inspect(c1, _kv(c1))), Inspect(c1, Inspect(c2, _kv(c1)))
        ),
    )
    b.mp(swapped, comm)
    return b.build()


def _transitivity(c="c", d="d", e="e", agent=RESERVED_AGENT, mode="single") -> Proof:
    b = _Builder(mode)
    irrule = "ir" if mode == "single" else "rir"
    kv_e, kv_d = Kv(agent, e), Kv(agent, d)
    nf = b.axiom("nf", implication(kv_e, Inspect(c, kv_e)))
    lifted = b.lift(d, nf)
    comm = b.axiom(
        "comm",
        implication(Inspect(d, Inspect(c, kv_e)), Inspect(c, Inspect(d, kv_e))),
    )
    swap = b.chain(lifted, comm)  # [d]Kv(e) -> [c][d]Kv(e)
    ir = b.axiom(irrule, implication(kv_d, implication(Inspect(d, kv_e), kv_e)))
    lifted_ir = b.lift(c, ir)
    dist = b.axiom(
        "dist",
        implication(
            Inspect(c, implication(Inspect(d, kv_e), kv_e)),
            implication(Inspect(c, Inspect(d, kv_e)), Inspect(c, kv_e)),
        ),
    )
    inner = b.chain(lifted_ir, dist)  # [c]Kv(d) -> ([c][d]Kv(e) -> [c]Kv(e))
    goal = implication(
        Inspect(c, kv_d), implication(Inspect(d, kv_e), Inspect(c, kv_e))
    )
    glue = b.taut(
        implication(b.formula(swap), implication(b.formula(inner), goal))
    )
    b.mp(inner, b.mp(swap, glue))
    return b.build()


def _additivity(c="c", d="d", e="e") -> Proof:
    b = _Builder()
    _backward_join(b, [c], _kv(d), _kv(e))
    return b.build()


def builtin_derivations() -> list[tuple[str, Proof]]:
    """Named, checker-validated derivations of the derived schemas and of
    the three dependency inference rules, at small concrete arity."""
    return [
        ("seriality(c)", _seriality()),
        ("IR'(c,d)", _ir_prime()),
        ("DIST'(c;d,e)", _dist_prime()),
        ("multi-DIST(c1,c2;d,e)", _multi_dist()),
        ("multi-DIST'(c1,c2;d,e)", _multi_dist_prime()),
        ("multi-LEARN(c1,c2)", _multi_learn()),
        ("multi-NF(c1,c2;d1,d2)", _multi_nf()),
        ("multi-IR(c1,c2;d)", _multi_ir()),
        ("multi-NEC(c1,c2;d)", _multi_nec_expansion()),
        ("projectivity(c1,c2)", _projectivity()),
        ("transitivity(c,d,e)", _transitivity()),
        ("additivity(c;d,e)", _additivity()),
        ("multi-LEARN-agent1(c1,c2)", _multi_learn(agent="1", mode="multi")),
        ("transitivity-agent1(c,d,e)", _transitivity(agent="1", mode="multi")),
    ]
