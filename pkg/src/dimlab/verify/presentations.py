"""Free presentations F -> G given by finitely many relators."""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from ..errors import ParseError, PreconditionViolated, ResourceBound
from ..magnus import FreeWord, format_word, hall_basis, parse_word

MAX_RANK = 6
MAX_CLASS = 4


@dataclass(frozen=True)
class PresentationSpec:
    rank: int
    relators: tuple[FreeWord, ...] = ()
    include_gamma2: bool = False
    name: str = ""

    def __post_init__(self):
        for w in self.relators:
            if w.rank != self.rank:
                raise ParseError(f"relator {format_word(w)} has rank {w.rank}, expected {self.rank}")

    @classmethod
    def from_strings(cls, rank: int, relators: Iterable[str], include_gamma2: bool = False,
                     name: str = "") -> "PresentationSpec":
        return cls(rank, tuple(parse_word(r, rank) for r in relators), include_gamma2, name)

    @classmethod
    def abelian(cls, invariants: Sequence[int], name: str = "") -> "PresentationSpec":
        """Rank len(inv) presentation of the abelian group with these cyclic orders (0 for Z)."""
        n = len(invariants)
        rels = tuple(FreeWord.gen(n, i + 1) ** d for i, d in enumerate(invariants) if d)
        rels = tuple(r for r in rels if not r.is_identity())
        return cls(n, rels, True, name or "Z/" + "+Z/".join(map(str, invariants)))

    def all_relators(self) -> list[FreeWord]:
        """Relators with the weight-2 commutators expanded when include_gamma2 is set."""
        out = list(self.relators)
        if self.include_gamma2 and self.rank >= 2:
            out.extend(c.word(self.rank) for c in hall_basis(self.rank, 2).layer(2))
        return out

    def coproduct(self) -> "PresentationSpec":
        """F*F -> G: relators on both letter blocks plus x_i y_i^-1."""
        n = self.rank
        if 2 * n > MAX_RANK:
            raise ResourceBound(f"coproduct rank {2 * n} exceeds {MAX_RANK}")
        left = [w.relabel(2 * n, 0) for w in self.all_relators()]
        right = [w.relabel(2 * n, n) for w in self.all_relators()]
        glue = [FreeWord.gen(2 * n, i + 1) * ~FreeWord.gen(2 * n, n + i + 1) for i in range(n)]
        return PresentationSpec(2 * n, tuple(left + right + glue), False, f"{self.name}*{self.name}")

    def injections(self) -> tuple[list[FreeWord], list[FreeWord]]:
        """Images of the generators under the two coproduct injections."""
        n = self.rank
        i1 = [FreeWord.gen(2 * n, j + 1) for j in range(n)]
        i2 = [FreeWord.gen(2 * n, n + j + 1) for j in range(n)]
        return i1, i2

    def to_text(self) -> str:
        lines = [f"rank {self.rank}"]
        lines += [f"relator {format_word(w)}" for w in self.relators]
        if self.include_gamma2:
            lines.append("include-gamma2")
        return "\n".join(lines) + "\n"

    def describe(self) -> dict:
        return {"name": self.name, "rank": self.rank,
                "relators": [format_word(w) for w in self.relators],
                "include_gamma2": self.include_gamma2}


def parse_presentation(text: str, name: str = "") -> PresentationSpec:
    rank = None
    rels: list[str] = []
    gamma2 = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, rest = line.partition(" ")
        rest = rest.strip()
        if key == "rank":
            try:
                rank = int(rest)
            except ValueError:
                raise ParseError(f"line {lineno}: bad rank {rest!r}") from None
        elif key == "relator":
            rels.append(rest)
        elif key == "include-gamma2":
            gamma2 = True
        else:
            raise ParseError(f"line {lineno}: unknown directive {key!r}")
    if rank is None:
        raise ParseError("missing 'rank' line")
    return PresentationSpec.from_strings(rank, rels, gamma2, name)


def load_presentation(path: str | Path) -> PresentationSpec:
    p = Path(path)
    return parse_presentation(p.read_text(), p.stem)


def fg1_presentation(exponents: Sequence[int], xi: Sequence[str] = (), extra: Sequence[str] = ()) -> PresentationSpec:
    """Relators x_i^{e_i} xi_i (xi_i in gamma_2) and further gamma_2 relators, with e_m | ... | e_1."""
    m = len(exponents)
    check_divisibility_chain(exponents)
    xi_words = [parse_word(t, m) for t in xi] + [FreeWord.identity(m)] * (m - len(xi))
    extra_words = [parse_word(t, m) for t in extra]
    for w in xi_words + extra_words:
        if any(w.exponent_sums()):
            raise PreconditionViolated(f"{format_word(w)} is not in gamma_2(F)")
    rels = []
    for i, (e, x) in enumerate(zip(exponents, xi_words)):
        w = FreeWord.gen(m, i + 1) ** e * x
        if not w.is_identity():
            rels.append(w)
    rels += extra_words
    name = "e=(" + ",".join(map(str, exponents)) + ")"
    return PresentationSpec(m, tuple(rels), False, name)


def check_divisibility_chain(exponents: Sequence[int]) -> None:
    if any(e < 0 for e in exponents):
        raise PreconditionViolated("exponents must be non-negative")
    for a, b in zip(exponents, exponents[1:]):
        # e_{i+1} | e_i, with the usual convention that everything divides 0
        if (b == 0 and a != 0) or (b != 0 and a % b):
            raise PreconditionViolated(f"exponents {list(exponents)} are not a divisibility chain e_m|...|e_1")
