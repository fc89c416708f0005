"""Pauli operators in symplectic form and GF(2) stabilizer-group algebra.

Bit vectors are Python integers used as packed words: bit ``i`` of ``x``
(``z``) is set when the operator has an X (Z) component on qubit ``i``.
Row operations during elimination act on the concatenated word
``x | (z << n)``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

_LETTERS = {(0, 0): "I", (1, 0): "X", (0, 1): "Z", (1, 1): "Y"}


def popcount(v: int) -> int:
    return bin(v).count("1")


@dataclass(frozen=True)
class PauliOperator:
    """An n-qubit Pauli ``i**phase * X^x Z^z`` stored in XZ-ordered form.

    ``phase`` is the exponent of ``i`` in front of the ordered product, so a
    Hermitian operator with letter ``Y`` on qubit ``q`` carries one factor of
    ``i`` per Y.  :attr:`sign` converts back to the usual Hermitian sign.
    """

    n: int
    x: int = 0
    z: int = 0
    phase: int = 0

    def __post_init__(self):
        object.__setattr__(self, "phase", self.phase % 4)

    # construction helpers
    @classmethod
    def identity(cls, n: int) -> "PauliOperator":
        return cls(n, 0, 0, 0)

    @classmethod
    def from_letters(cls, letters: Dict[int, str] | str, n: Optional[int] = None,
                     sign: int = 1) -> "PauliOperator":
        """Build a Hermitian Pauli from ``{qubit: 'X'|'Y'|'Z'}`` or a string."""
        if isinstance(letters, str):
            n = len(letters) if n is None else n
            letters = {i: c for i, c in enumerate(letters) if c not in "I_."}
        if n is None:
            raise ValueError("qubit count required")
        x = z = 0
        ny = 0
        for q, c in letters.items():
            c = c.upper()
            if c in ("X", "Y"):
                x |= 1 << q
            if c in ("Z", "Y"):
                z |= 1 << q
            if c == "Y":
                ny += 1
            if c not in "XYZI":
                raise ValueError(f"bad Pauli letter {c!r}")
        base = 0 if sign == 1 else 2
        return cls(n, x, z, base + ny)

    @classmethod
    def from_support(cls, n: int, qubits: Iterable[int], letter: str) -> "PauliOperator":
        return cls.from_letters({q: letter for q in qubits}, n)

    # views
    @property
    def hermitian(self) -> bool:
        return (self.phase - popcount(self.x & self.z)) % 2 == 0

    @property
    def sign(self) -> int:
        """+1 or -1 for Hermitian operators; raises for +-i multiples."""
        k = (self.phase - popcount(self.x & self.z)) % 4
        if k % 2:
            raise ValueError("operator carries an imaginary phase")
        return 1 if k == 0 else -1

    @property
    def support(self) -> int:
        return self.x | self.z

    @property
    def weight(self) -> int:
        return popcount(self.x | self.z)

    def letter(self, q: int) -> str:
        return _LETTERS[((self.x >> q) & 1, (self.z >> q) & 1)]

    def letters(self) -> Dict[int, str]:
        out = {}
        s = self.support
        while s:
            low = s & -s
            q = low.bit_length() - 1
            out[q] = self.letter(q)
            s ^= low
        return out

    def word(self) -> int:
        return self.x | (self.z << self.n)

    def unsigned(self) -> "PauliOperator":
        """Hermitian representative with sign +1."""
        return PauliOperator(self.n, self.x, self.z, popcount(self.x & self.z))

    def same_up_to_phase(self, other: "PauliOperator") -> bool:
        return self.x == other.x and self.z == other.z

    def is_identity(self) -> bool:
        return self.x == 0 and self.z == 0

    def __mul__(self, other: "PauliOperator") -> "PauliOperator":
        return multiply(self, other)

    def __str__(self) -> str:
        body = "".join(self.letter(q) for q in range(self.n))
        if self.hermitian:
            return ("+" if self.sign == 1 else "-") + body
        k = (self.phase - popcount(self.x & self.z)) % 4
        return ("+i" if k == 1 else "-i") + body


def from_word(n: int, w: int) -> PauliOperator:
    mask = (1 << n) - 1
    x, z = w & mask, w >> n
    return PauliOperator(n, x, z, popcount(x & z))


def symplectic_product(a: PauliOperator, b: PauliOperator) -> int:
    return (popcount(a.x & b.z) + popcount(a.z & b.x)) & 1


def word_product(n: int, a: int, b: int) -> int:
    mask = (1 << n) - 1
    return (popcount(a & (b >> n)) + popcount((a >> n) & b & mask)) & 1


def commutes(a: PauliOperator, b: PauliOperator) -> bool:
    if a.n != b.n:
        raise ValueError("qubit counts differ")
    return symplectic_product(a, b) == 0


def multiply(a: PauliOperator, b: PauliOperator) -> PauliOperator:
    if a.n != b.n:
        raise ValueError("qubit counts differ")
    # Z^z1 X^x2 = (-1)^{|z1 & x2|} X^x2 Z^z1
    phase = a.phase + b.phase + 2 * popcount(a.z & b.x)
    return PauliOperator(a.n, a.x ^ b.x, a.z ^ b.z, phase)


def product(ops: Sequence[PauliOperator], n: Optional[int] = None) -> PauliOperator:
    if not ops:
        if n is None:
            raise ValueError("empty product needs n")
        return PauliOperator.identity(n)
    out = ops[0]
    for p in ops[1:]:
        out = multiply(out, p)
    return out


@dataclass
class PauliGroupBasis:
    """A list of generators with per-generator kind tags."""

    n: int
    generators: List[PauliOperator] = field(default_factory=list)
    kinds: List[str] = field(default_factory=list)

    def __post_init__(self):
        if not self.kinds:
            self.kinds = ["stabilizer"] * len(self.generators)
        if len(self.kinds) != len(self.generators):
            raise ValueError("one kind tag per generator")

    def add(self, p: PauliOperator, kind: str = "stabilizer") -> None:
        self.generators.append(p)
        self.kinds.append(kind)

    def words(self) -> List[int]:
        return [g.word() for g in self.generators]

    def __len__(self) -> int:
        return len(self.generators)


def _as_words(basis) -> Tuple[int, List[int]]:
    if isinstance(basis, PauliGroupBasis):
        return basis.n, basis.words()
    ops = list(basis)
    if not ops:
        return 0, []
    if isinstance(ops[0], int):
        return 0, ops
    return ops[0].n, [p.word() for p in ops]


# GF(2) elimination -----------------------------------------------------------

class Eliminator:
    """Incremental row-echelon form over GF(2) with combination tracking.

    Each stored row remembers which input rows were summed to produce it, so
    membership queries can return a witness combination.
    """

    def __init__(self):
        self.pivots: Dict[int, Tuple[int, int]] = {}  # pivot bit -> (row, combo)
        self.count = 0

    def reduce(self, w: int) -> Tuple[int, int]:
        combo = 0
        while w:
            top = w.bit_length() - 1
            hit = self.pivots.get(top)
            if hit is None:
                return w, combo
            w ^= hit[0]
            combo ^= hit[1]
        return 0, combo

    def add(self, w: int) -> bool:
        """Insert row; return True when it was independent."""
        idx = self.count
        self.count += 1
        r, combo = self.reduce(w)
        if r == 0:
            return False
        self.pivots[r.bit_length() - 1] = (r, combo ^ (1 << idx))
        return True

    @property
    def rank(self) -> int:
        return len(self.pivots)


def gf2_rank(rows: Iterable[int]) -> int:
    e = Eliminator()
    for r in rows:
        e.add(r)
    return e.rank


def rank(basis) -> int:
    """GF(2) rank of the stacked symplectic rows."""
    _, words = _as_words(basis)
    return gf2_rank(words)


def in_group(p: PauliOperator, basis) -> Optional[List[int]]:
    """Indices of generators whose product equals ``p`` up to phase, or None."""
    _, words = _as_words(basis)
    e = Eliminator()
    for w in words:
        e.add(w)
    r, combo = e.reduce(p.word())
    if r:
        return None
    # the combination refers to inserted rows; unpack bit positions
    out = []
    i = 0
    while combo:
        if combo & 1:
            out.append(i)
        combo >>= 1
        i += 1
    return out


def nullspace(rows: Sequence[int], ncols: int) -> List[int]:
    """Basis of {v : popcount(row & v) even for every row}."""
    pivots: Dict[int, int] = {}
    for r in rows:
        for c, pr in pivots.items():
            if (r >> c) & 1:
                r ^= pr
        if r == 0:
            continue
        c = (r & -r).bit_length() - 1
        for cc in list(pivots):
            if (pivots[cc] >> c) & 1:
                pivots[cc] ^= r
        pivots[c] = r
    basis = []
    for free in range(ncols):
        if free in pivots:
            continue
        v = 1 << free
        for c, pr in pivots.items():
            if (pr >> free) & 1:
                v |= 1 << c
        basis.append(v)
    return basis


def _swap_halves(n: int, w: int) -> int:
    mask = (1 << n) - 1
    return (w >> n) | ((w & mask) << n)


def centralizer(basis, n: Optional[int] = None) -> List[int]:
    """Words commuting with every generator (symplectic complement)."""
    m, words = _as_words(basis)
    n = m if n is None else n
    return nullspace([_swap_halves(n, w) for w in words], 2 * n)


class MalformedCode(ValueError):
    pass


def check_commuting(ops: Sequence[PauliOperator]) -> List[Tuple[int, int]]:
    bad = []
    for i in range(len(ops)):
        for j in range(i + 1, len(ops)):
            if symplectic_product(ops[i], ops[j]):
                bad.append((i, j))
    return bad


def symplectic_pairs(n: int, pool: List[int], avoid: Sequence[int] = ()) -> List[Tuple[int, int]]:
    """Symplectic Gram-Schmidt on ``pool`` modulo the span of ``avoid``.

    Returns pairs (a, b) with <a,b> = 1, all cross products zero.
    """
    stab = Eliminator()
    for w in avoid:
        stab.add(w)
    pool = [w for w in pool]
    pairs: List[Tuple[int, int]] = []
    while pool:
        a = pool.pop(0)
        if stab.reduce(a)[0] == 0:
            continue
        partner = None
        for idx, b in enumerate(pool):
            if word_product(n, a, b):
                partner = idx
                break
        if partner is None:
            # a commutes with the rest of the pool: it belongs to the centre
            stab.add(a)
            continue
        b = pool.pop(partner)
        pairs.append((a, b))
        new_pool = []
        for v in pool:
            if word_product(n, v, b):
                v ^= a
            if word_product(n, v, a):
                v ^= b
            new_pool.append(v)
        pool = new_pool
    return pairs


def extract_logicals(stabilizers, n: int) -> List[Tuple[PauliOperator, PauliOperator]]:
    """Canonical (X, Z) logical pairs of the stabilizer code.

    The k = n - rank pairs anticommute within a pair and commute with every
    stabilizer and every other pair.
    """
    if isinstance(stabilizers, PauliGroupBasis):
        ops = stabilizers.generators
    else:
        ops = list(stabilizers)
    if check_commuting(ops):
        raise MalformedCode("stabilizer generators do not commute")
    words = [p.word() for p in ops]
    norm = centralizer(words, n) if words else [1 << i for i in range(2 * n)]
    pairs = symplectic_pairs(n, norm, words)
    return [(from_word(n, a), from_word(n, b)) for a, b in pairs]


def commutation_matrix(ops: Sequence[PauliOperator]) -> List[List[int]]:
    return [[symplectic_product(a, b) for b in ops] for a in ops]


# distance search ---------------------------------------------------------------

EXCEEDS_CAP = None


@dataclass
class DistanceResult:
    weight: Optional[int]
    witness: Optional[PauliOperator]
    cap: int
    nodes: int = 0

    @property
    def exceeded(self) -> bool:
        return self.weight is None


def min_weight_logical(stabilizers, logicals: Sequence[PauliOperator], budget: int,
                       n: Optional[int] = None) -> DistanceResult:
    """Minimum-weight operator commuting with ``stabilizers`` and
    anticommuting with at least one of ``logicals``.

    Passing the bare logical operators of a subsystem code gives the dressed
    distance, since an operator lies in the gauge group exactly when it
    commutes with every bare logical.  A minimum-weight witness can be taken
    connected in the stabilizer interaction graph, so the search grows the
    support one violated stabilizer at a time with the lowest qubit as root.
    Returns ``weight=None`` when nothing is found within ``budget``.
    """
    ops = stabilizers.generators if isinstance(stabilizers, PauliGroupBasis) else list(stabilizers)
    if n is None:
        n = ops[0].n if ops else logicals[0].n
    # masks[q][letter] = stabilizers anticommuting with that single-qubit Pauli
    letters = ((1, 0), (1, 1), (0, 1))
    masks = [[0, 0, 0] for _ in range(n)]
    lmasks = [[0, 0, 0] for _ in range(n)]
    for si, s in enumerate(ops):
        for q in range(n):
            sx, sz = (s.x >> q) & 1, (s.z >> q) & 1
            if not (sx or sz):
                continue
            for li, (lx, lz) in enumerate(letters):
                if (lx & sz) ^ (lz & sx):
                    masks[q][li] |= 1 << si
    for li_op, L in enumerate(logicals):
        for q in range(n):
            sx, sz = (L.x >> q) & 1, (L.z >> q) & 1
            for li, (lx, lz) in enumerate(letters):
                if (lx & sz) ^ (lz & sx):
                    lmasks[q][li] |= 1 << li_op
    stab_support = []
    for s in ops:
        qs = []
        sup = s.support
        while sup:
            low = sup & -sup
            qs.append(low.bit_length() - 1)
            sup ^= low
        stab_support.append(qs)
    maxflip = max((popcount(mk) for row in masks for mk in row), default=1) or 1
    nodes = 0

    def search(limit: int):
        chosen: Dict[int, int] = {}

        def rec(root: int, syn: int, lsyn: int, w: int):
            nonlocal nodes
            nodes += 1
            if syn == 0:
                return lsyn != 0
            if w >= limit:
                return False
            need = -(-popcount(syn) // maxflip)
            if w + need > limit:
                return False
            s = (syn & -syn).bit_length() - 1
            for q in stab_support[s]:
                if q <= root or q in chosen:
                    continue
                for li in range(3):
                    if not (masks[q][li] >> s) & 1:
                        continue
                    chosen[q] = li
                    if rec(root, syn ^ masks[q][li], lsyn ^ lmasks[q][li], w + 1):
                        return True
                    del chosen[q]
            return False

        for root in range(n):
            for li in range(3):
                chosen.clear()
                chosen[root] = li
                if rec(root, masks[root][li], lmasks[root][li], 1):
                    return dict(chosen)
        return None

    for limit in range(1, budget + 1):
        found = search(limit)
        if found is not None:
            x = z = 0
            for q, li in found.items():
                lx, lz = letters[li]
                x |= lx << q
                z |= lz << q
            return DistanceResult(limit, PauliOperator(n, x, z, popcount(x & z)), budget, nodes)
    return DistanceResult(None, None, budget, nodes)


# export ---------------------------------------------------------------------------

def to_check_matrix(basis: PauliGroupBasis, k: Optional[int] = None) -> str:
    """Header line of JSON followed by one ``x...|z...`` row per generator."""
    n = basis.n
    header = {"n": n, "k": k, "kinds": list(basis.kinds)}
    lines = [json.dumps(header, sort_keys=True)]
    for g in basis.generators:
        xs = "".join(str((g.x >> q) & 1) for q in range(n))
        zs = "".join(str((g.z >> q) & 1) for q in range(n))
        lines.append(f"{xs}|{zs}")
    return "\n".join(lines) + "\n"


def from_check_matrix(text: str) -> Tuple[PauliGroupBasis, Optional[int]]:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    header = json.loads(lines[0])
    n = header["n"]
    gens = []
    for ln in lines[1:]:
        xs, zs = ln.split("|")
        x = sum(1 << q for q, c in enumerate(xs) if c == "1")
        z = sum(1 << q for q, c in enumerate(zs) if c == "1")
        gens.append(PauliOperator(n, x, z, popcount(x & z)))
    return PauliGroupBasis(n, gens, list(header["kinds"])), header.get("k")
