"""3-SAT parsing and every SAT -> nonnegative-polynomial encoding.

Encodings (by target degree):
  deg14     product of squared distances to the 7 satisfying patterns per clause
  deg8      one auxiliary variable v per clause, 4-pattern product + (v or z)
  deg6      clause-sum factors (s-1)^2(s-2)^2(s-3)^2 + boolean penalties
  deg4      (x+y+v-1)^2(x+y+v-2)^2 + (z-v)^2(z-v-1)^2 + penalties
  quadratic (x+y+z-3u-2v-w)^2 + (u+v+w-1)^2, three aux per clause, no penalty

Negation is substituted as the linear form 1-x before expansion.  All
coefficients are exact integers, so degree and zero-set statements are
decidable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .errors import ArityMismatch, InstanceTooLarge, ParseError
from .polynomial import SparsePolynomial

# ---------------------------------------------------------------------------
# formula types


@dataclass(frozen=True)
class Literal:
    var: int
    negated: bool = False

    def __repr__(self):
        return f"{'~' if self.negated else ''}x{self.var}"


Clause = Tuple[Literal, ...]


@dataclass
class CnfFormula:
    num_vars: int
    clauses: List[Clause]

    def __post_init__(self):
        if not self.clauses:
            raise ValueError("formula needs at least one clause")
        for cl in self.clauses:
            if not 1 <= len(cl) <= 3:
                raise ValueError(f"clause width {len(cl)} not in 1..3")
            vs = [l.var for l in cl]
            if len(set(vs)) != len(vs):
                raise ValueError(f"clause {cl} repeats a variable")
            if any(not 0 <= v < self.num_vars for v in vs):
                raise ValueError(f"clause {cl} has a variable out of range")

    def clause_satisfied(self, cl: Clause, assignment: Sequence[bool]) -> bool:
        return any(assignment[l.var] != l.negated for l in cl)

    def satisfied(self, assignment: Sequence[bool]) -> bool:
        return all(self.clause_satisfied(cl, assignment) for cl in self.clauses)


def parse_dimacs(text: str) -> CnfFormula:
    """Parse standard DIMACS CNF with clause width at most 3."""
    num_vars = None
    declared = None
    clauses: List[Clause] = []
    pending: List[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ParseError(f"line {lineno}: malformed header {line!r}")
            try:
                num_vars, declared = int(parts[2]), int(parts[3])
            except ValueError:
                raise ParseError(f"line {lineno}: malformed header {line!r}")
            continue
        if num_vars is None:
            raise ParseError(f"line {lineno}: clause before 'p cnf' header")
        try:
            nums = [int(tok) for tok in line.split()]
        except ValueError:
            raise ParseError(f"line {lineno}: non-integer token in {line!r}")
        for v in nums:
            if v == 0:
                if not pending:
                    raise ParseError(f"line {lineno}: empty clause")
                if len(pending) > 3:
                    raise ParseError(
                        f"line {lineno}: clause width {len(pending)} > 3")
                lits = tuple(Literal(abs(v) - 1, v < 0) for v in pending)
                for l in lits:
                    if l.var >= num_vars:
                        raise ParseError(
                            f"line {lineno}: variable {l.var + 1} out of range")
                clauses.append(lits)
                pending = []
            else:
                pending.append(v)
    if pending:
        raise ParseError("trailing clause without terminating 0")
    if num_vars is None:
        raise ParseError("missing 'p cnf' header")
    if declared is not None and declared != len(clauses):
        # header count is advisory in the wild; keep the actual clauses
        pass
    return CnfFormula(num_vars, clauses)


def format_dimacs(f: CnfFormula) -> str:
    lines = [f"p cnf {f.num_vars} {len(f.clauses)}"]
    for cl in f.clauses:
        lines.append(" ".join(str(-(l.var + 1) if l.negated else l.var + 1)
                              for l in cl) + " 0")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# encodings


@dataclass
class EncodedInstance:
    poly: SparsePolynomial
    original_vars: int
    aux_vars: int
    var_names: List[str]
    encoding_id: str
    # per-clause summands: (original vars used, aux vars used, polynomial part)
    # in the full variable space; boolean penalties are not parts (they vanish
    # on the lattice).
    parts: List[Tuple[Tuple[int, ...], Tuple[int, ...], SparsePolynomial]] = field(
        default_factory=list)


def _lit_form(lit: Literal, num_vars: int) -> SparsePolynomial:
    """x or 1-x as a linear polynomial."""
    if lit.negated:
        return SparsePolynomial.linear(num_vars, {lit.var: -1}, 1)
    return SparsePolynomial.linear(num_vars, {lit.var: 1})


def _pattern_product(forms: List[SparsePolynomial], patterns: List[Tuple[int, ...]],
                     num_vars: int) -> SparsePolynomial:
    """Product over patterns of the squared Euclidean distance factors."""
    acc = SparsePolynomial.constant(num_vars, 1)
    for pat in patterns:
        factor = SparsePolynomial.zero(num_vars)
        for form, bit in zip(forms, pat):
            d = form - SparsePolynomial.constant(num_vars, bit)
            factor = factor + d.square()
        acc = acc * factor
    return acc


# canonical clause polynomials keyed by (encoding, negation bits); computed on
# three or four fresh local variables and renamed per clause.
_canon_cache: Dict[Tuple[str, Tuple[bool, ...]], SparsePolynomial] = {}

_PATTERNS_OR3 = [(a, b, c) for a in (0, 1) for b in (0, 1) for c in (0, 1)
                 if a or b or c]
# (x, y, v) with v = x or y
_PATTERNS_V_EQ_OR = [(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 1)]
_PATTERNS_OR2 = [(0, 1), (1, 0), (1, 1)]


def _canonical(encoding: str, negs: Tuple[bool, ...]) -> SparsePolynomial:
    key = (encoding, negs)
    cached = _canon_cache.get(key)
    if cached is not None:
        return cached
    if encoding == "deg14":
        nv = 3
        forms = [_lit_form(Literal(i, negs[i]), nv) for i in range(3)]
        poly = _pattern_product(forms, _PATTERNS_OR3, nv)
    elif encoding == "deg8":
        nv = 4  # local var 3 is the clause's v
        lx, ly, lz = (_lit_form(Literal(i, negs[i]), nv) for i in range(3))
        lv = SparsePolynomial.variable(nv, 3)
        poly = _pattern_product([lx, ly, lv], _PATTERNS_V_EQ_OR, nv)
        poly = poly + _pattern_product([lv, lz], _PATTERNS_OR2, nv)
    else:
        raise ValueError(encoding)
    _canon_cache[key] = poly
    return poly


def encode_or2(x: Literal, y: Literal, num_vars: Optional[int] = None) -> SparsePolynomial:
    """Degree-6 polynomial vanishing on booleans exactly when x or y holds."""
    if x.var == y.var:
        raise ValueError("encode_or2 needs two distinct variables")
    nv = num_vars if num_vars is not None else max(x.var, y.var) + 1
    return _pattern_product([_lit_form(x, nv), _lit_form(y, nv)], _PATTERNS_OR2, nv)


def boolean_penalty(var_indices: Sequence[int], num_vars: int) -> SparsePolynomial:
    """Sum of x^2 (1-x)^2 over the given variables; zero exactly on {0,1}."""
    acc = SparsePolynomial.zero(num_vars)
    for i in var_indices:
        x = SparsePolynomial.variable(num_vars, i)
        one_minus = SparsePolynomial.linear(num_vars, {i: -1}, 1)
        acc = acc + (x.square() * one_minus.square())
    return acc


def _require_width3(f: CnfFormula, encoding: str):
    for cl in f.clauses:
        if len(cl) != 3:
            raise ArityMismatch(f"{encoding} encoding requires width-3 clauses, "
                                f"got width {len(cl)}")


def _clause_sum(cl: Clause, num_vars: int) -> SparsePolynomial:
    acc = SparsePolynomial.zero(num_vars)
    for lit in cl:
        acc = acc + _lit_form(lit, num_vars)
    return acc


def encode_deg14(f: CnfFormula) -> EncodedInstance:
    _require_width3(f, "deg14")
    nv = f.num_vars
    poly = SparsePolynomial.zero(nv)
    parts = []
    for cl in f.clauses:
        negs = tuple(l.negated for l in cl)
        mapping = {i: cl[i].var for i in range(3)}
        part = _canonical("deg14", negs).rename_vars(mapping, nv)
        poly = poly + part
        parts.append((tuple(l.var for l in cl), (), part))
    names = [f"x{i}" for i in range(nv)]
    return EncodedInstance(poly, nv, 0, names, "deg14", parts)


def encode_deg8(f: CnfFormula) -> EncodedInstance:
    _require_width3(f, "deg8")
    n, m = f.num_vars, len(f.clauses)
    nv = n + m
    poly = SparsePolynomial.zero(nv)
    parts = []
    for i, cl in enumerate(f.clauses):
        aux = n + i
        negs = tuple(l.negated for l in cl)
        mapping = {0: cl[0].var, 1: cl[1].var, 2: cl[2].var, 3: aux}
        part = _canonical("deg8", negs).rename_vars(mapping, nv)
        poly = poly + part
        parts.append((tuple(l.var for l in cl), (aux,), part))
    names = [f"x{i}" for i in range(n)] + [f"v{i}" for i in range(m)]
    return EncodedInstance(poly, n, m, names, "deg8", parts)


def encode_deg6(f: CnfFormula) -> EncodedInstance:
    nv = f.num_vars
    poly = SparsePolynomial.zero(nv)
    parts = []
    for cl in f.clauses:
        s = _clause_sum(cl, nv)
        part = SparsePolynomial.constant(nv, 1)
        for j in range(1, len(cl) + 1):
            part = part * (s - SparsePolynomial.constant(nv, j)).square()
        poly = poly + part
        parts.append((tuple(l.var for l in cl), (), part))
    poly = poly + boolean_penalty(range(nv), nv)
    names = [f"x{i}" for i in range(nv)]
    return EncodedInstance(poly, nv, 0, names, "deg6", parts)


def encode_deg4(f: CnfFormula) -> EncodedInstance:
    n = f.num_vars
    wide = [i for i, cl in enumerate(f.clauses) if len(cl) == 3]
    aux_of = {ci: n + k for k, ci in enumerate(wide)}
    m_aux = len(wide)
    nv = n + m_aux
    poly = SparsePolynomial.zero(nv)
    parts = []
    for ci, cl in enumerate(f.clauses):
        if len(cl) == 3:
            aux = aux_of[ci]
            lx, ly, lz = (_lit_form(l, nv) for l in cl)
            v = SparsePolynomial.variable(nv, aux)
            left = lx + ly + v
            part = ((left - SparsePolynomial.constant(nv, 1)).square()
                    * (left - SparsePolynomial.constant(nv, 2)).square())
            zmv = lz - v
            part = part + (zmv.square()
                           * (zmv - SparsePolynomial.constant(nv, 1)).square())
            parts.append((tuple(l.var for l in cl), (aux,), part))
        else:
            s = _clause_sum(cl, nv)
            part = SparsePolynomial.constant(nv, 1)
            for j in range(1, len(cl) + 1):
                part = part * (s - SparsePolynomial.constant(nv, j)).square()
            parts.append((tuple(l.var for l in cl), (), part))
        poly = poly + part
    poly = poly + boolean_penalty(range(nv), nv)
    names = [f"x{i}" for i in range(n)] + [f"v{i}" for i in range(m_aux)]
    return EncodedInstance(poly, n, m_aux, names, "deg4", parts)


def encode_quadratic(f: CnfFormula) -> EncodedInstance:
    """Degree-2 encoding; the boolean constraint is left to the geometric step."""
    _require_width3(f, "quadratic")
    n, m = f.num_vars, len(f.clauses)
    nv = n + 3 * m
    poly = SparsePolynomial.zero(nv)
    parts = []
    names = [f"x{i}" for i in range(n)]
    for i, cl in enumerate(f.clauses):
        u, v, w = n + 3 * i, n + 3 * i + 1, n + 3 * i + 2
        s = _clause_sum(cl, nv)
        sel = SparsePolynomial.linear(nv, {u: 3, v: 2, w: 1})
        part = (s - sel).square()
        one = SparsePolynomial.linear(nv, {u: 1, v: 1, w: 1}, -1)
        part = part + one.square()
        poly = poly + part
        parts.append((tuple(l.var for l in cl), (u, v, w), part))
        names += [f"u{i}", f"v{i}", f"w{i}"]
    return EncodedInstance(poly, n, 3 * m, names, "quadratic", parts)


ENCODERS = {
    "deg14": encode_deg14,
    "deg8": encode_deg8,
    "deg6": encode_deg6,
    "deg4": encode_deg4,
    "quadratic": encode_quadratic,
}


# ---------------------------------------------------------------------------
# gate encodings (degree-2 building blocks for circuit-style reductions)

GATE_KINDS = ("AND", "OR", "XOR", "ADDER_BIT")


def encode_gate(kind: str, inputs: Sequence[int], outputs: Sequence[int],
                carries: Sequence[int] = (), num_vars: Optional[int] = None) -> SparsePolynomial:
    from .errors import ArityMismatch
    used = list(inputs) + list(outputs) + list(carries)
    if len(set(used)) != len(used):
        raise ArityMismatch("gate variables must be distinct")
    nv = num_vars if num_vars is not None else max(used) + 1
    if kind == "AND":
        if len(inputs) != 2 or len(outputs) != 1 or carries:
            raise ArityMismatch("AND takes 2 inputs, 1 output")
        x, y = (SparsePolynomial.variable(nv, i) for i in inputs)
        z = SparsePolynomial.variable(nv, outputs[0])
        return (z - x * y).square()
    if kind == "OR":
        if len(inputs) != 2 or len(outputs) != 1 or carries:
            raise ArityMismatch("OR takes 2 inputs, 1 output")
        x, y = (SparsePolynomial.variable(nv, i) for i in inputs)
        z = SparsePolynomial.variable(nv, outputs[0])
        one = SparsePolynomial.constant(nv, 1)
        return (z - one + (one - x) * (one - y)).square()
    if kind == "XOR":
        if len(inputs) != 2 or len(outputs) != 1 or carries:
            raise ArityMismatch("XOR takes 2 inputs, 1 output")
        x, y = (SparsePolynomial.variable(nv, i) for i in inputs)
        z = SparsePolynomial.variable(nv, outputs[0])
        return ((x - y).square() - z).square()
    if kind == "ADDER_BIT":
        if len(inputs) != 2 or len(outputs) != 1 or len(carries) != 2:
            raise ArityMismatch("ADDER_BIT takes 2 inputs, 1 output, 2 carries")
        x, y = (SparsePolynomial.variable(nv, i) for i in inputs)
        z = SparsePolynomial.variable(nv, outputs[0])
        cin = SparsePolynomial.variable(nv, carries[0])
        cout = SparsePolynomial.variable(nv, carries[1])
        return (x + y + cin - cout.scale(2) - z).square()
    raise ValueError(f"unknown gate kind {kind!r}")


# ---------------------------------------------------------------------------
# SAT oracle (DPLL with unit propagation)


def sat_oracle(f: CnfFormula) -> Optional[List[bool]]:
    """Satisfying assignment or None.  DPLL; intended for desk-scale formulas."""
    if f.num_vars > 64:
        raise InstanceTooLarge(f"{f.num_vars} variables exceeds oracle bound")
    clauses = [[(-(l.var + 1) if l.negated else l.var + 1) for l in cl]
               for cl in f.clauses]
    assign: Dict[int, bool] = {}

    def solve(clauses: List[List[int]]) -> bool:
        # unit propagation
        while True:
            unit = next((c[0] for c in clauses if len(c) == 1), None)
            if unit is None:
                break
            var, val = abs(unit), unit > 0
            assign[var] = val
            new = []
            for c in clauses:
                if unit in c:
                    continue
                reduced = [l for l in c if l != -unit]
                if not reduced:
                    return False
                new.append(reduced)
            clauses = new
        if not clauses:
            return True
        var = abs(clauses[0][0])
        for val in (True, False):
            lit = var if val else -var
            saved = dict(assign)
            if solve([[lit]] + clauses):
                return True
            assign.clear()
            assign.update(saved)
        return False

    if not solve(clauses):
        return None
    return [assign.get(i + 1, False) for i in range(f.num_vars)]


# ---------------------------------------------------------------------------
# exact boolean-lattice minimum

_INT64_SAFE = 1 << 55


def _collapse_bool(poly: SparsePolynomial, var_order: Sequence[int]) -> Dict[int, int]:
    """Coefficients grouped by support mask: on {0,1} points a monomial's value
    is 1 exactly when every variable in its support is 1."""
    idx = {v: i for i, v in enumerate(var_order)}
    out: Dict[int, int] = {}
    for mono, coeff in poly.terms.items():
        mask = 0
        for v, _ in mono:
            mask |= 1 << idx[v]
        out[mask] = out.get(mask, 0) + coeff
    return {m: c for m, c in out.items() if c}


def _part_table(part: SparsePolynomial, orig: Tuple[int, ...],
                aux: Tuple[int, ...]) -> List[int]:
    """table[pattern over orig vars] = min over aux assignments, exact."""
    order = list(orig) + list(aux)
    collapsed = _collapse_bool(part, order)
    no, na = len(orig), len(aux)
    table = []
    for p in range(1 << no):
        best = None
        for q in range(1 << na):
            a = p | (q << no)
            val = sum(c for m, c in collapsed.items() if m & ~a == 0)
            best = val if best is None else min(best, val)
        table.append(best)
    return table


def lattice_min(enc: EncodedInstance) -> int:
    """Exact minimum of enc.poly over the boolean lattice {0,1}^(n+aux).

    Aux variables appear in exactly one clause part, and boolean penalties
    vanish on the lattice, so the minimum decomposes: minimize each part over
    its own aux variables, then scan the 2^n original assignments.
    """
    n = enc.original_vars
    if n > 24:
        raise InstanceTooLarge(f"{n} original variables exceeds lattice scan bound")
    tables = [( orig, _part_table(part, orig, aux))
              for orig, aux, part in enc.parts]
    size = 1 << n
    max_abs = max((max(abs(v) for v in t) for _, t in tables), default=0)
    if max_abs * max(1, len(tables)) < _INT64_SAFE:
        masks = np.arange(size, dtype=np.int64)
        total = np.zeros(size, dtype=np.int64)
        for orig, table in tables:
            pat = np.zeros(size, dtype=np.int64)
            for j, v in enumerate(orig):
                pat |= ((masks >> v) & 1) << j
            total += np.asarray(table, dtype=np.int64)[pat]
        return int(total.min())
    # arbitrary-precision fallback
    best = None
    for mask in range(size):
        s = 0
        for orig, table in tables:
            p = 0
            for j, v in enumerate(orig):
                p |= ((mask >> v) & 1) << j
            s += table[p]
        best = s if best is None else min(best, s)
        if best == 0:
            return 0
    return best


# ---------------------------------------------------------------------------
# random instances (tests and CLI demos)


def random_cnf(rng: np.random.Generator, num_vars: int, num_clauses: int,
               width: int = 3) -> CnfFormula:
    if num_vars < width:
        raise ValueError("need at least `width` variables")
    clauses = []
    for _ in range(num_clauses):
        vs = rng.choice(num_vars, size=width, replace=False)
        clauses.append(tuple(Literal(int(v), bool(rng.integers(2))) for v in vs))
    return CnfFormula(num_vars, clauses)
