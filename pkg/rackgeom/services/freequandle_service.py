"""
Free quandles on k generators.

An element w g_i w^-1 of the free group is stored as (w, i) with w freely
reduced and not ending in g_i^{+-1}; the centralizer of g_i is absorbed by
that canonical form. Letters are signed 1-based generator indices and print
as x, y, z, w (capitals for inverses).
"""

import logging
import re
from itertools import product
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from rackgeom.core.config import settings
from rackgeom.core.errors import CapExceeded, DifferentComponents, InvalidArgument, ParseError
from rackgeom.models.freequandle import DistanceBracket, FQElement, FreeWord

logger = logging.getLogger(__name__)

GENERATOR_NAMES = "xyzw"

# internal form of an element, (conjugator, generator)
Key = Tuple[FreeWord, int]

_TOKEN = re.compile(r"\s*([A-Za-z])(?:\^(-?\d+))?")


def reduce(word: Iterable[int]) -> FreeWord:
    """Free reduction."""
    stack: List[int] = []
    for letter in word:
        if stack and stack[-1] == -letter:
            stack.pop()
        else:
            stack.append(letter)
    return tuple(stack)


def inverse(word: FreeWord) -> FreeWord:
    return tuple(-letter for letter in reversed(word))


def exponent_sum(word: Iterable[int], generator: int) -> int:
    return sum(1 if letter == generator else -1 for letter in word if abs(letter) == generator)


def _canonical_key(word: Iterable[int], generator: int) -> Key:
    w = list(reduce(word))
    while w and abs(w[-1]) == generator:
        w.pop()
    return tuple(w), generator


def _op_key(a: Key, b: Key, sign: int = 1) -> Key:
    wa, ia = a
    wb, ib = b
    return _canonical_key(wa + (sign * ia,) + inverse(wa) + wb, ib)


def _to_element(key: Key) -> FQElement:
    return FQElement.model_construct(conjugator=key[0], generator=key[1])


class FreeQuandleService:
    """Canonical forms, the quandle operation, balls, distances and quasimorphisms."""

    # -- algebra -------------------------------------------------------------------

    def canonical(self, word: Iterable[int], generator: int) -> FQElement:
        if generator < 1:
            raise InvalidArgument(f"generator index must be positive, got {generator}")
        return _to_element(_canonical_key(word, generator))

    def fq_op(self, a: FQElement, b: FQElement) -> FQElement:
        """a > b, conjugator reduce(w_a g_a w_a^-1 w_b)."""
        return _to_element(_op_key(a.key(), b.key()))

    def fq_inverse_op(self, a: FQElement, b: FQElement) -> FQElement:
        """psi_a^-1(b)."""
        return _to_element(_op_key(a.key(), b.key(), sign=-1))

    def basepoint(self, generator: int) -> FQElement:
        return _to_element(((), generator))

    def movers(self, k: int, conj_len: int) -> List[FQElement]:
        """All elements with conjugator length <= conj_len, shortest first."""
        self._check_generators(k)
        keys = []
        for length in range(conj_len + 1):
            for word in product(self._letters(k), repeat=length):
                if reduce(word) != word:
                    continue
                for i in range(1, k + 1):
                    if not word or abs(word[-1]) != i:
                        keys.append((word, i))
        return [_to_element(key) for key in keys]

    def _letters(self, k: int) -> List[int]:
        return [s * i for i in range(1, k + 1) for s in (1, -1)]

    def _check_generators(self, k: int) -> None:
        if not 1 <= k <= len(GENERATOR_NAMES):
            raise InvalidArgument(f"free quandles on 1..{len(GENERATOR_NAMES)} generators only")

    def _check_caps(self, radius: int, conj_len: int) -> None:
        if not 0 <= radius <= settings.FQ_MAX_RADIUS:
            raise InvalidArgument(f"radius must lie in 0..{settings.FQ_MAX_RADIUS}")
        if not 0 <= conj_len <= settings.FQ_MAX_CONJ_LEN:
            raise InvalidArgument(f"conjugator length must lie in 0..{settings.FQ_MAX_CONJ_LEN}")

    # -- text syntax ---------------------------------------------------------------

    def parse_word(self, text: str, k: int = 2, col_offset: int = 0) -> FreeWord:
        """Parse "xyY", "y^3 x^-2" or "1" (the empty word)."""
        letters: List[int] = []
        stripped = text.strip()
        if stripped in ("", "1"):
            return ()
        pos = 0
        while pos < len(text):
            if text[pos:].strip() == "":
                break
            match = _TOKEN.match(text, pos)
            if not match:
                raise ParseError(1, col_offset + pos + 1, f"unexpected {text[pos:].strip()[0]!r}")
            name = match.group(1)
            index = GENERATOR_NAMES[:k].find(name.lower()) + 1
            if index == 0:
                raise ParseError(1, col_offset + match.start(1) + 1, f"unknown generator {name!r}")
            letter = index if name.islower() else -index
            power = int(match.group(2)) if match.group(2) is not None else 1
            letters.extend([letter if power > 0 else -letter] * abs(power))
            pos = match.end()
        return reduce(letters)

    def parse_element(self, text: str, k: int = 2) -> FQElement:
        """
        Parse "WORD@GEN", e.g. "yyy@x" or "y^3@x" for (y^3, x).

        Raises:
            ParseError: With a 1-based column
        """
        self._check_generators(k)
        if text.count("@") != 1:
            raise ParseError(1, 1, "expected exactly one '@' between conjugator and generator")
        word_text, gen_text = text.split("@")
        gen_name = gen_text.strip()
        gen_col = len(word_text) + 2
        if len(gen_name) != 1 or gen_name not in GENERATOR_NAMES[:k]:
            raise ParseError(1, gen_col, f"generator must be one of {GENERATOR_NAMES[:k]!r}")
        word = self.parse_word(word_text, k)
        return self.canonical(word, GENERATOR_NAMES.index(gen_name) + 1)

    def format_word(self, word: FreeWord) -> str:
        if not word:
            return "1"
        parts = []
        i = 0
        while i < len(word):
            j = i
            while j < len(word) and word[j] == word[i]:
                j += 1
            name = GENERATOR_NAMES[abs(word[i]) - 1]
            run = j - i
            if run == 1:
                parts.append(name if word[i] > 0 else name.upper())
            else:
                parts.append(f"{name}^{run if word[i] > 0 else -run}")
            i = j
        return "".join(parts)

    def format_element(self, a: FQElement) -> str:
        return f"{self.format_word(a.conjugator)}@{GENERATOR_NAMES[a.generator - 1]}"

    # -- balls and distances -------------------------------------------------------

    def _expand(
        self, frontier: List[Key], seen: Dict[Key, int], movers: List[Key], depth: int, cap: int
    ) -> List[Key]:
        nxt: List[Key] = []
        for b in frontier:
            for s in movers:
                for sign in (1, -1):
                    c = _op_key(s, b, sign)
                    if c in seen:
                        continue
                    if len(seen) >= cap:
                        raise CapExceeded(f"free quandle search exceeds {cap} elements")
                    seen[c] = depth
                    nxt.append(c)
        return nxt

    def ball(
        self,
        k: int = 2,
        radius: Optional[int] = None,
        conj_len: Optional[int] = None,
        cap: Optional[int] = None,
        basepoints: Optional[Sequence[FQElement]] = None,
    ) -> Dict[FQElement, int]:
        """
        Elements within radius moves psi_s^{+-1} of the basepoints.

        Movers s range over elements with conjugator length <= conj_len.

        Returns:
            Dict mapping each element to the BFS layer it was first reached in

        Raises:
            CapExceeded: If more than cap elements are reached
        """
        self._check_generators(k)
        radius = settings.FQ_RADIUS if radius is None else radius
        conj_len = settings.FQ_CONJ_LEN if conj_len is None else conj_len
        cap = settings.FQ_BALL_CAP if cap is None else cap
        self._check_caps(radius, conj_len)

        starts = basepoints or [self.basepoint(i) for i in range(1, k + 1)]
        seen: Dict[Key, int] = {}
        for a in starts:
            seen.setdefault(a.key(), 0)
        movers = [m.key() for m in self.movers(k, conj_len)]
        frontier = list(seen)
        for depth in range(1, radius + 1):
            frontier = self._expand(frontier, seen, movers, depth, cap)
            if not frontier:
                break
        logger.debug(f"Ball k={k} r={radius} L={conj_len} holds {len(seen)} elements")
        return {_to_element(key): d for key, d in seen.items()}

    def abelian_lower_bound(self, a: FQElement, b: FQElement) -> int:
        """
        Lower bound on d(a, b) from the abelianization of w_a^-1 w_b.

        Each move shifts the abelianized conjugator by one signed unit vector,
        and the coordinate of the own generator is free.

        Raises:
            DifferentComponents: If a and b have different generators
        """
        if a.generator != b.generator:
            raise DifferentComponents(
                f"{self.format_element(a)} and {self.format_element(b)} lie in different components"
            )
        u = inverse(a.conjugator) + b.conjugator
        gens = {abs(letter) for letter in u} - {a.generator}
        return sum(abs(exponent_sum(u, j)) for j in gens)

    def fq_distance(
        self,
        a: FQElement,
        b: FQElement,
        k: int = 2,
        radius: Optional[int] = None,
        conj_len: Optional[int] = None,
        cap: Optional[int] = None,
    ) -> DistanceBracket:
        """
        Certified bracket on the rack distance in the free quandle.

        The upper bound comes from a layered bidirectional BFS whose total depth
        is at most radius, using movers of conjugator length <= conj_len. The
        search stops as soon as it meets the abelian lower bound. Reaching the
        element cap ends the search with the bracket found so far.

        Raises:
            DifferentComponents: If a and b have different generators
        """
        self._check_generators(k)
        radius = settings.FQ_DISTANCE_RADIUS if radius is None else radius
        conj_len = settings.FQ_CONJ_LEN if conj_len is None else conj_len
        cap = settings.FQ_BALL_CAP if cap is None else cap
        if not 0 <= radius <= 2 * settings.FQ_MAX_RADIUS:
            raise InvalidArgument(f"distance radius must lie in 0..{2 * settings.FQ_MAX_RADIUS}")
        self._check_caps(0, conj_len)
        for e in (a, b):
            if e.generator > k or any(abs(letter) > k for letter in e.conjugator):
                raise InvalidArgument(f"{self.format_element(e)} uses more than {k} generators")

        lower = self.abelian_lower_bound(a, b)

        def bracket(upper: Optional[int]) -> DistanceBracket:
            return DistanceBracket(
                lower=lower,
                upper=upper,
                exact=upper is not None and upper == lower,
                radius=radius,
                conj_len=conj_len,
            )

        if a.key() == b.key():
            return bracket(0)

        movers = [m.key() for m in self.movers(k, conj_len)]
        forward: Dict[Key, int] = {a.key(): 0}
        backward: Dict[Key, int] = {b.key(): 0}
        fronts = {"forward": [a.key()], "backward": [b.key()]}
        depths = {"forward": 0, "backward": 0}
        upper: Optional[int] = None
        try:
            while depths["forward"] + depths["backward"] < radius:
                side = "forward" if len(fronts["forward"]) <= len(fronts["backward"]) else "backward"
                seen, other = (forward, backward) if side == "forward" else (backward, forward)
                depths[side] += 1
                fronts[side] = self._expand(fronts[side], seen, movers, depths[side], cap // 2)
                meetings = [seen[c] + other[c] for c in fronts[side] if c in other]
                if meetings:
                    upper = min(meetings)
                    break
                if not fronts[side]:
                    break
        except CapExceeded:
            logger.warning(
                f"Distance search from {self.format_element(a)} to {self.format_element(b)} "
                f"hit the element cap {cap}"
            )
        return bracket(upper)

    def component_lower_diameter(
        self, k: int = 2, radius: Optional[int] = None, conj_len: int = 0, cap: Optional[int] = None
    ) -> int:
        """Certified lower bound on the diameter of the first component, seen inside a ball."""
        base = self.basepoint(1)
        sample = self.ball(k, radius, conj_len, cap, basepoints=[base])
        return max(self.abelian_lower_bound(base, b) for b in sample)

    # -- quasimorphisms ------------------------------------------------------------

    def hat_phi(self, a: FQElement) -> int:
        """
        Exponent sum of the element's own generator in its canonical conjugator.

        The canonical conjugator is the g' of the decomposition g = g' g_i^m
        with g' empty or ending in another generator.
        """
        return exponent_sum(a.conjugator, a.generator)

    def brooks_counting(self, word: Iterable[int], pattern: FreeWord) -> int:
        """Occurrences of pattern minus occurrences of its inverse in the reduced word."""
        w = reduce(word)
        pattern = reduce(pattern)
        if not pattern:
            raise InvalidArgument("Brooks pattern must be a nonempty reduced word")
        inv = inverse(pattern)
        n = len(pattern)
        count = 0
        for i in range(len(w) - n + 1):
            window = w[i:i + n]
            if window == pattern:
                count += 1
            if window == inv:
                count -= 1
        return count

    def hat_brooks(self, a: FQElement, pattern: FreeWord) -> int:
        return self.brooks_counting(a.conjugator, pattern)

    def quasimorphism_defect(
        self,
        f: Callable[[FQElement], Fraction],
        sample: Iterable[FQElement],
        movers: Sequence[FQElement],
    ) -> Fraction:
        """Max of |f(b) - f(s > b)| and |f(b) - f(psi_s^-1(b))| over the sample."""
        defect = Fraction(0)
        mover_keys = [s.key() for s in movers]
        for b in sample:
            fb = Fraction(f(b))
            for s in mover_keys:
                for sign in (1, -1):
                    moved = _to_element(_op_key(s, b.key(), sign))
                    defect = max(defect, abs(fb - Fraction(f(moved))))
        return defect


freequandle_service = FreeQuandleService()
