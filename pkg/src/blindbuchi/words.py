"""Finite presentations of ultimately periodic objects.

A lasso ``u|v`` denotes the infinite sequence u v v v ...  The same
presentation is used for words over a finite alphabet (LassoWord), for
sequences of non-negative integers (IntegerLasso), and for sequences of
(n, k) run-length blocks (BlockLasso).
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass


def _primitive_root(seq):
    """Shortest z with seq == z * m."""
    n = len(seq)
    for d in range(1, n + 1):
        if n % d == 0 and seq == seq[:d] * (n // d):
            return seq[:d]
    return seq


def _canonical_parts(prefix, period):
    """Shortest-period, earliest-alignment form of a lasso (prefix, period)."""
    period = _primitive_root(period)
    while prefix and prefix[-1] == period[-1]:
        prefix = prefix[:-1]
        period = period[-1:] + period[:-1]
    return prefix, period


@dataclass(frozen=True)
class LassoWord:
    """An ultimately periodic word u v v v ... with non-empty v."""

    prefix: str
    period: str

    def __post_init__(self):
        if not self.period:
            raise ValueError("lasso period must be non-empty")

    @property
    def letters(self) -> frozenset[str]:
        return frozenset(self.prefix + self.period)

    def letter_at(self, i: int) -> str:
        if i < 0:
            raise IndexError("negative letter index")
        if i < len(self.prefix):
            return self.prefix[i]
        return self.period[(i - len(self.prefix)) % len(self.period)]

    def expand(self, count: int) -> str:
        """The first `count` letters."""
        if count <= len(self.prefix):
            return self.prefix[:count]
        reps = (count - len(self.prefix)) // len(self.period) + 1
        return (self.prefix + self.period * reps)[:count]

    def canonical(self) -> "LassoWord":
        p, q = _canonical_parts(self.prefix, self.period)
        return LassoWord(p, q)

    def denotes_same_word(self, other: "LassoWord") -> bool:
        return self.canonical() == other.canonical()

    def __str__(self) -> str:
        return f"{self.prefix}|{self.period}"


@dataclass(frozen=True)
class IntegerLasso:
    """An ultimately periodic sequence of non-negative integers."""

    prefix: tuple[int, ...]
    period: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(self.prefix))
        object.__setattr__(self, "period", tuple(self.period))
        if not self.period:
            raise ValueError("lasso period must be non-empty")
        if any(m < 0 for m in self.prefix + self.period):
            raise ValueError("integer lasso values must be non-negative")

    def value_at(self, i: int) -> int:
        if i < len(self.prefix):
            return self.prefix[i]
        return self.period[(i - len(self.prefix)) % len(self.period)]

    def expand(self, count: int) -> tuple[int, ...]:
        return tuple(self.value_at(i) for i in range(count))

    def canonical(self) -> "IntegerLasso":
        p, q = _canonical_parts(self.prefix, self.period)
        return IntegerLasso(p, q)

    def __str__(self) -> str:
        left = ",".join(str(m) for m in self.prefix)
        right = ",".join(str(m) for m in self.period)
        return f"{left}|{right}"


@dataclass(frozen=True)
class BlockLasso:
    """An ultimately periodic sequence of (n, k) blocks, n, k >= 1.

    Block (n, k) stands for the letters a^n b^k.
    """

    prefix_blocks: tuple[tuple[int, int], ...]
    period_blocks: tuple[tuple[int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "prefix_blocks", tuple(tuple(b) for b in self.prefix_blocks))
        object.__setattr__(self, "period_blocks", tuple(tuple(b) for b in self.period_blocks))
        if not self.period_blocks:
            raise ValueError("block lasso period must be non-empty")
        for n, k in self.prefix_blocks + self.period_blocks:
            if n < 1 or k < 1:
                raise ValueError("block components must be >= 1")

    def block_at(self, i: int) -> tuple[int, int]:
        if i < len(self.prefix_blocks):
            return self.prefix_blocks[i]
        return self.period_blocks[(i - len(self.prefix_blocks)) % len(self.period_blocks)]

    def expand(self, count: int) -> list[tuple[int, int]]:
        return [self.block_at(i) for i in range(count)]

    def blocks(self):
        """Infinite generator of blocks."""
        i = 0
        while True:
            yield self.block_at(i)
            i += 1

    def to_word(self) -> LassoWord:
        """Re-expand the block sequence into the lasso word it denotes."""
        u = "".join("a" * n + "b" * k for n, k in self.prefix_blocks)
        v = "".join("a" * n + "b" * k for n, k in self.period_blocks)
        return LassoWord(u, v)

    def canonical(self) -> "BlockLasso":
        p, q = _canonical_parts(self.prefix_blocks, self.period_blocks)
        return BlockLasso(p, q)

    def __str__(self) -> str:
        left = ",".join(f"{n}:{k}" for n, k in self.prefix_blocks)
        right = ",".join(f"{n}:{k}" for n, k in self.period_blocks)
        return f"{left}|{right}"


def parse_lasso(text: str) -> LassoWord:
    """Parse the `u|v` lasso literal, e.g. `|ab` or `a|ba`."""
    if text.count("|") != 1:
        raise ValueError(f"lasso literal must contain exactly one '|': {text!r}")
    prefix, period = text.split("|")
    if not period:
        raise ValueError(f"lasso literal has an empty period: {text!r}")
    return LassoWord(prefix.strip(), period.strip())


def parse_integer_lasso(text: str) -> IntegerLasso:
    """Parse the `m0,m1|p0,p1` integer lasso literal, e.g. `|0` or `9,9|1`."""
    if text.count("|") != 1:
        raise ValueError(f"integer lasso literal must contain exactly one '|': {text!r}")
    left, right = text.split("|")

    def parse_side(side: str) -> tuple[int, ...]:
        side = side.strip()
        if not side:
            return ()
        try:
            values = tuple(int(tok) for tok in side.split(","))
        except ValueError:
            raise ValueError(f"bad integer list {side!r} in {text!r}") from None
        return values

    return IntegerLasso(parse_side(left), parse_side(right))


def parse_block_lasso(text: str) -> BlockLasso:
    """Parse the `n:k,n:k|n:k` block lasso literal, e.g. `|1:1` or `2:2|1:1,5:1`."""
    if text.count("|") != 1:
        raise ValueError(f"block lasso literal must contain exactly one '|': {text!r}")
    left, right = text.split("|")

    def parse_side(side: str) -> tuple[tuple[int, int], ...]:
        side = side.strip()
        if not side:
            return ()
        blocks = []
        for tok in side.split(","):
            if tok.count(":") != 1:
                raise ValueError(f"bad block {tok!r} in {text!r}")
            n, k = tok.split(":")
            blocks.append((int(n), int(k)))
        return tuple(blocks)

    return BlockLasso(parse_side(left), parse_side(right))


def is_block_word(w: LassoWord) -> bool:
    """True iff w starts with 'a' and repeats both letters forever.

    Exactly these words decompose into an infinite sequence of a^n b^k
    blocks.  Raises if w uses letters other than a and b.
    """
    stray = w.letters - {"a", "b"}
    if stray:
        raise ValueError(f"word uses letters outside {{a, b}}: {sorted(stray)}")
    first = w.prefix[0] if w.prefix else w.period[0]
    return first == "a" and "a" in w.period and "b" in w.period


def decompose_blocks(w: LassoWord) -> BlockLasso:
    """The unique block decomposition of w, canonically aligned.

    The block sequence of an ultimately periodic word is ultimately
    periodic; block starts past the prefix live at finitely many phases
    mod |v|, so a phase repeats within |v|+1 starts and the blocks between
    two equal-phase starts form a whole number of periods.
    """
    if not is_block_word(w):
        raise ValueError(f"word {w} does not decompose into blocks")
    ulen, vlen = len(w.prefix), len(w.period)
    need = ulen + 8 * vlen + 8
    while True:
        text = w.expand(need)
        blocks, starts = _scan_blocks(text)
        seen_phase: dict[int, int] = {}
        cut = None
        for idx, pos in enumerate(starts):
            if pos < ulen:
                continue
            phase = (pos - ulen) % vlen
            if phase in seen_phase:
                cut = (seen_phase[phase], idx)
                break
            seen_phase[phase] = idx
        if cut is not None:
            first, second = cut
            prefix = tuple(blocks[:first])
            period = tuple(blocks[first:second])
            return BlockLasso(prefix, period).canonical()
        need *= 2


def _scan_blocks(text: str) -> tuple[list[tuple[int, int]], list[int]]:
    """Complete a^n b^k blocks of `text` and their start positions."""
    blocks = []
    starts = []
    i = 0
    while i < len(text):
        start = i
        n = 0
        while i < len(text) and text[i] == "a":
            n += 1
            i += 1
        k = 0
        while i < len(text) and text[i] == "b":
            k += 1
            i += 1
        if i == len(text):
            break  # block may be truncated; ignore the tail
        blocks.append((n, k))
        starts.append(start)
    return blocks, starts


def unary_block_encode(x: IntegerLasso) -> LassoWord:
    """Encode each integer m as the letters a^(m+1) b^(m+1).

    Prefix integers land in the word prefix, period integers in the word
    period, so the image is again a lasso.
    """
    u = "".join("a" * (m + 1) + "b" * (m + 1) for m in x.prefix)
    v = "".join("a" * (m + 1) + "b" * (m + 1) for m in x.period)
    return LassoWord(u, v)


def unary_block_encode_prefix(gen: Callable[[int], int], count: int) -> str:
    """First `count` encoded blocks of an arbitrary integer sequence.

    `gen` may be non-periodic; only gen(0) .. gen(count-1) are consulted,
    so agreeing generators produce agreeing output prefixes.
    """
    parts = []
    for i in range(count):
        m = gen(i)
        if m < 0:
            raise ValueError(f"generator produced a negative value at index {i}: {m}")
        parts.append("a" * (m + 1) + "b" * (m + 1))
    return "".join(parts)


def liminf_value(x: IntegerLasso) -> int:
    """The limit inferior of the sequence: the minimum over the period."""
    return min(x.period)


def has_finite_liminf(x: IntegerLasso) -> bool:
    """Always true: an ultimately periodic sequence revisits min(period)."""
    return True


def diverges_to_infinity(x: IntegerLasso) -> bool:
    """Always false: the periodic tail never tends to infinity."""
    return False
