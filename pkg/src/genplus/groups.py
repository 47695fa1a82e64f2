"""Finitely presented groups: words, Fox derivatives, coset enumeration."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .chains import ModulePresentation, cokernel
from .matrix import MatrixR
from .rings import ZZ

Letter = tuple[int, int]  # (generator index, +1 or -1)


def _reduce(letters: Iterable[Letter]) -> tuple[Letter, ...]:
    out: list[Letter] = []
    for g, s in letters:
        if s not in (1, -1):
            raise ValueError(f"exponent sign must be +1 or -1, got {s}")
        if out and out[-1][0] == g and out[-1][1] == -s:
            out.pop()
        else:
            out.append((g, s))
    return tuple(out)


@dataclass(frozen=True)
class Word:
    """Freely reduced word; letters are ``(generator index, sign)`` pairs."""

    letters: tuple[Letter, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", _reduce(self.letters))

    @classmethod
    def gen(cls, i: int, power: int = 1) -> "Word":
        s = 1 if power > 0 else -1
        return cls(((i, s),) * abs(power))

    @classmethod
    def from_exponents(cls, pairs: Iterable[tuple[int, int]]) -> "Word":
        """Build from ``(generator, exponent)`` pairs, e.g. ``[(0, 2), (1, -1)]``."""
        letters = []
        for g, e in pairs:
            letters.extend([(g, 1 if e > 0 else -1)] * abs(e))
        return cls(tuple(letters))

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def inverse(self) -> "Word":
        return Word(tuple((g, -s) for g, s in reversed(self.letters)))

    def __pow__(self, n: int) -> "Word":
        base = self if n >= 0 else self.inverse()
        return Word(base.letters * abs(n))

    def is_trivial(self) -> bool:
        return not self.letters

    def generators_used(self) -> set[int]:
        return {g for g, _ in self.letters}

    def exponent_sum(self, j: int) -> int:
        return sum(s for g, s in self.letters if g == j)

    def relabel(self, mapping: Sequence[int]) -> "Word":
        return Word(tuple((mapping[g], s) for g, s in self.letters))


EMPTY = Word()


def word_ops(op: str, *words: Word) -> Word:
    """``reduce`` / ``invert`` one word, or ``concat`` several."""
    if op == "reduce":
        (w,) = words
        return Word(w.letters)
    if op == "invert":
        (w,) = words
        return w.inverse()
    if op == "concat":
        out = EMPTY
        for w in words:
            out = out * w
        return out
    raise ValueError(f"unknown word operation {op!r}")


class PresentationError(ValueError):
    pass


@dataclass(frozen=True)
class Presentation:
    generators: tuple[str, ...]
    relators: tuple[Word, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        object.__setattr__(self, "relators", tuple(self.relators))
        if len(set(self.generators)) != len(self.generators):
            raise PresentationError("generator names must be unique")
        n = len(self.generators)
        for w in self.relators:
            for g, _ in w:
                if not 0 <= g < n:
                    raise PresentationError(f"relator references unknown generator index {g}")

    @property
    def ngens(self) -> int:
        return len(self.generators)

    def index(self, name: str) -> int:
        try:
            return self.generators.index(name)
        except ValueError:
            raise PresentationError(f"unknown generator {name!r}") from None

    def word(self, spec: str) -> Word:
        from .parsing import parse_word
        return parse_word(spec, self.generators)

    def format_word(self, w: Word) -> str:
        return format_word(w, self.generators)

    def __str__(self) -> str:
        gens = " ".join(self.generators)
        rels = " ".join(self.format_word(w) for w in self.relators)
        return f"group {{ gens: {gens}; rels: {rels} }}"


def format_word(w: Word, names: Sequence[str]) -> str:
    if w.is_trivial():
        return "1"
    parts = []
    letters = list(w)
    i = 0
    while i < len(letters):
        g, s = letters[i]
        k = i
        while k < len(letters) and letters[k] == (g, s):
            k += 1
        e = (k - i) * s
        parts.append(names[g] if e == 1 else f"{names[g]}^{e}")
        i = k
    return "*".join(parts)


def quotient_presentation(P: Presentation, extra_relators: Sequence[Word],
                          extra_generators: Sequence[str] = ()) -> Presentation:
    """Append fresh generators (first) and then relators to ``P``."""
    return Presentation(P.generators + tuple(extra_generators), P.relators + tuple(extra_relators))


# -- Fox calculus ---------------------------------------------------------


@dataclass(frozen=True)
class FoxTerm:
    """Formal Z-combination of free-group words: ``((word, coeff), ...)``."""

    terms: tuple[tuple[Word, int], ...] = ()

    def __post_init__(self):
        acc: dict[Word, int] = {}
        for w, c in self.terms:
            acc[w] = acc.get(w, 0) + c
        clean = tuple(sorted(((w, c) for w, c in acc.items() if c),
                             key=lambda t: (len(t[0]), t[0].letters)))
        object.__setattr__(self, "terms", clean)

    def as_dict(self) -> dict[Word, int]:
        return dict(self.terms)

    def __add__(self, other: "FoxTerm") -> "FoxTerm":
        return FoxTerm(self.terms + other.terms)

    def __neg__(self) -> "FoxTerm":
        return FoxTerm(tuple((w, -c) for w, c in self.terms))

    def __sub__(self, other):
        return self + (-other)

    def left_mul(self, u: Word) -> "FoxTerm":
        return FoxTerm(tuple((u * w, c) for w, c in self.terms))

    def right_mul(self, u: Word) -> "FoxTerm":
        return FoxTerm(tuple((w * u, c) for w, c in self.terms))

    def __mul__(self, other: "FoxTerm") -> "FoxTerm":
        return FoxTerm(tuple((a * b, c * d) for a, c in self.terms for b, d in other.terms))

    def augmentation(self) -> int:
        return sum(c for _, c in self.terms)

    @classmethod
    def of(cls, w: Word, c: int = 1) -> "FoxTerm":
        return cls(((w, c),))


def fox_derivative(w: Word, j: int) -> FoxTerm:
    """Free derivative of ``w`` with respect to generator ``j``."""
    terms = []
    prefix: list[Letter] = []
    for g, s in w:
        if g == j:
            if s == 1:
                terms.append((Word(tuple(prefix)), 1))
                prefix.append((g, s))
            else:
                prefix.append((g, s))
                terms.append((Word(tuple(prefix)), -1))
        else:
            prefix.append((g, s))
    return FoxTerm(tuple(terms))


def abelianization(P: Presentation) -> ModulePresentation:
    """H_1 of the group: Z^gens modulo the exponent-sum rows of the relators."""
    rows = [[w.exponent_sum(j) for j in range(P.ngens)] for w in P.relators]
    return cokernel(MatrixR.from_rows(ZZ, rows, P.ngens))


# -- coset enumeration ----------------------------------------------------


@dataclass(frozen=True)
class Overflow:
    """Coset enumeration exceeded its budget (group infinite or budget too small)."""

    budget: int

    def __bool__(self):
        return False


class CayleyTable:
    """Regular right action of the generators on the elements of a finite group.

    Elements are numbered ``0..order-1`` with 0 the identity; ``action[j][c]``
    is ``c * x_j``.  ``reps[c]`` is a shortest-first representative word.
    """

    def __init__(self, presentation: Presentation, action: list[list[int]], reps: list[Word]):
        self.presentation = presentation
        self.action = action
        self.order = len(reps)
        self.reps = reps
        self.inverse_action = []
        for perm in action:
            inv = [0] * self.order
            for c, d in enumerate(perm):
                inv[d] = c
            self.inverse_action.append(inv)

    @property
    def ngens(self) -> int:
        return len(self.action)

    def step(self, c: int, letter: Letter) -> int:
        g, s = letter
        return self.action[g][c] if s == 1 else self.inverse_action[g][c]

    def evaluate(self, w: Word, start: int = 0) -> int:
        c = start
        act, inv = self.action, self.inverse_action
        for g, s in w:
            c = act[g][c] if s == 1 else inv[g][c]
        return c

    @cached_property
    def mult(self) -> list[list[int]]:
        """``mult[g][h]`` is the index of ``g*h``."""
        return [[self.evaluate(self.reps[h], g) for h in range(self.order)] for g in range(self.order)]

    @cached_property
    def inverses(self) -> list[int]:
        return [row.index(0) for row in self.mult]

    def generator_elements(self) -> list[int]:
        return [self.action[j][0] for j in range(self.ngens)]

    def check(self) -> None:
        """Verify the table invariants: permutations, relators trivial, transitivity."""
        n = self.order
        for perm in self.action:
            if sorted(perm) != list(range(n)):
                raise AssertionError("generator action is not a permutation")
        for w in self.presentation.relators:
            for c in range(n):
                if self.evaluate(w, c) != c:
                    raise AssertionError("a relator acts nontrivially")
        seen = {0}
        todo = [0]
        while todo:
            c = todo.pop()
            for perm in self.action + self.inverse_action:
                d = perm[c]
                if d not in seen:
                    seen.add(d)
                    todo.append(d)
        if len(seen) != n:
            raise AssertionError("action is not transitive")


DEFAULT_MAX_COSETS = 50000


def todd_coxeter(P: Presentation, max_cosets: int = DEFAULT_MAX_COSETS) -> CayleyTable | Overflow:
    """HLT coset enumeration over the trivial subgroup.

    Relators are scanned from every live coset in order, coincidences are
    processed immediately, and the final table is standardized by a
    breadth-first renumbering.  Returns :class:`Overflow` once more than
    ``max_cosets`` cosets have been defined.
    """
    if max_cosets < 1:
        raise ValueError("max_cosets must be positive")
    k = P.ngens
    ncols = 2 * k

    def col(letter: Letter) -> int:
        g, s = letter
        return 2 * g if s == 1 else 2 * g + 1

    def inv(c: int) -> int:
        return c ^ 1

    rels = [[col(l) for l in w] for w in P.relators if not w.is_trivial()]
    table: list[list[int | None]] = [[None] * ncols]
    parent = [0]

    class _Overflow(Exception):
        pass

    def define(c: int, x: int) -> int:
        n = len(table)
        if n >= max_cosets:
            raise _Overflow
        table.append([None] * ncols)
        parent.append(n)
        table[c][x] = n
        table[n][inv(x)] = c
        return n

    def rep(c: int) -> int:
        r = c
        while parent[r] != r:
            r = parent[r]
        while parent[c] != r:
            parent[c], c = r, parent[c]
        return r

    def merge(a: int, b: int, queue: list[int]) -> None:
        a, b = rep(a), rep(b)
        if a == b:
            return
        if a > b:
            a, b = b, a
        parent[b] = a
        queue.append(b)

    def coincidence(a: int, b: int) -> None:
        queue: list[int] = []
        merge(a, b, queue)
        i = 0
        while i < len(queue):
            g = queue[i]
            i += 1
            for x in range(ncols):
                d = table[g][x]
                if d is None:
                    continue
                table[d][inv(x)] = None
                mu, nu = rep(g), rep(d)
                if table[mu][x] is not None:
                    merge(nu, table[mu][x], queue)
                elif table[nu][inv(x)] is not None:
                    merge(mu, table[nu][inv(x)], queue)
                else:
                    table[mu][x] = nu
                    table[nu][inv(x)] = mu

    def scan_and_fill(alpha: int, w: list[int]) -> None:
        f, b = alpha, alpha
        i, j = 0, len(w) - 1
        while True:
            while i <= j and table[f][w[i]] is not None:
                f = table[f][w[i]]
                i += 1
            if i > j:
                if f != alpha:
                    coincidence(f, alpha)
                return
            while j >= i and table[b][inv(w[j])] is not None:
                b = table[b][inv(w[j])]
                j -= 1
            if j < i:
                coincidence(f, b)
                return
            if i == j:
                table[f][w[i]] = b
                table[b][inv(w[i])] = f
                return
            define(f, w[i])

    try:
        alpha = 0
        while alpha < len(table):
            if parent[alpha] == alpha:
                for w in rels:
                    scan_and_fill(alpha, w)
                    if parent[alpha] != alpha:
                        break
                if parent[alpha] == alpha:
                    for x in range(ncols):
                        if table[alpha][x] is None:
                            define(alpha, x)
            alpha += 1
    except _Overflow:
        return Overflow(max_cosets)

    # standardize: BFS over live cosets in column order
    number = {0: 0}
    order = [0]
    reps = [EMPTY]
    i = 0
    while i < len(order):
        c = order[i]
        for x in range(ncols):
            d = table[c][x]
            d = rep(d)
            if d not in number:
                number[d] = len(order)
                order.append(d)
                g, s = divmod(x, 2)
                reps.append(reps[i] * Word(((g, -1 if s else 1),)))
        i += 1
    action = [[number[rep(table[c][2 * j])] for c in order] for j in range(k)]
    ct = CayleyTable(P, action, reps)
    ct.check()
    return ct


def evaluate_word(cayley: CayleyTable, w: Word) -> int:
    return cayley.evaluate(w)


def group_order(P: Presentation, max_cosets: int = DEFAULT_MAX_COSETS) -> int | None:
    t = todd_coxeter(P, max_cosets)
    return None if isinstance(t, Overflow) else t.order


# -- homomorphisms --------------------------------------------------------


class HomomorphismError(ValueError):
    pass


@dataclass(frozen=True)
class GroupHom:
    """Homomorphism given by the images of the source generators.

    ``certified`` records a user assertion of validity for infinite targets
    where relator images cannot be checked.
    """

    source: Presentation
    target: Presentation
    images: tuple[Word, ...]
    certified: bool = False
    name_map: dict = field(default=None, compare=False, hash=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(self.images))
        if len(self.images) != self.source.ngens:
            raise HomomorphismError("need one image per source generator")
        for w in self.images:
            for g, _ in w:
                if not 0 <= g < self.target.ngens:
                    raise HomomorphismError("image references an unknown target generator")

    @classmethod
    def identity(cls, P: Presentation) -> "GroupHom":
        return cls(P, P, tuple(Word.gen(i) for i in range(P.ngens)))

    @classmethod
    def by_names(cls, source: Presentation, target: Presentation) -> "GroupHom":
        """Send each source generator to the target generator with the same name."""
        return cls(source, target, tuple(Word.gen(target.index(n)) for n in source.generators))

    @classmethod
    def trivial(cls, source: Presentation, target: Presentation) -> "GroupHom":
        return cls(source, target, tuple(EMPTY for _ in source.generators))

    def apply(self, w: Word) -> Word:
        out: list[Letter] = []
        for g, s in w:
            img = self.images[g]
            out.extend(img.letters if s == 1 else img.inverse().letters)
        return Word(tuple(out))

    def element_map(self, target_table: CayleyTable) -> list[int]:
        """Images (in ``target_table``) of the source generators."""
        return [target_table.evaluate(w) for w in self.images]

    def validate(self, target_table: CayleyTable | None = None) -> None:
        if target_table is None:
            if not self.certified:
                raise HomomorphismError("cannot verify a homomorphism into an unenumerated group "
                                        "without a certificate")
            return
        for r in self.source.relators:
            if target_table.evaluate(self.apply(r)) != 0:
                raise HomomorphismError(
                    f"relator {self.source.format_word(r)} does not map to the identity")

    def is_surjective(self, target_table: CayleyTable) -> bool:
        gens = [target_table.evaluate(w) for w in self.images]
        mult = target_table.mult
        seen = {0}
        todo = [0]
        while todo:
            c = todo.pop()
            for g in gens:
                for d in (mult[c][g], mult[c][target_table.inverses[g]]):
                    if d not in seen:
                        seen.add(d)
                        todo.append(d)
        return len(seen) == target_table.order

    def compose(self, after: "GroupHom") -> "GroupHom":
        """``after o self``."""
        if after.source != self.target:
            raise HomomorphismError("homomorphisms do not compose")
        return GroupHom(self.source, after.target, tuple(after.apply(w) for w in self.images),
                        certified=self.certified and after.certified)


def pushforward_elements(table: CayleyTable, hom: GroupHom, target: CayleyTable) -> list[int]:
    """Image in ``target`` of every element of ``table`` (via representative words)."""
    gen_img = hom.element_map(target)
    mult = target.mult
    inv = target.inverses
    out = [0] * table.order
    # reps are built by BFS, so each rep extends an earlier one by a letter
    index = {w: i for i, w in enumerate(table.reps)}
    for i, w in enumerate(table.reps):
        if w.is_trivial():
            continue
        prefix = Word(w.letters[:-1])
        g, s = w.letters[-1]
        e = gen_img[g] if s == 1 else inv[gen_img[g]]
        j = index.get(prefix)
        base = out[j] if j is not None else target.evaluate(hom.apply(prefix))
        out[i] = mult[base][e]
    return out

