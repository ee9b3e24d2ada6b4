"""Reduced words in free groups of finite rank."""
from dataclasses import dataclass
from typing import Any, Dict, Iterable, Iterator, List, Optional, Tuple, Union

from .const import ALPHABET, IDENTITY_TOKENS, MAX_TEXT_RANK
from .exceptions import (
    IdentityWordException,
    InvalidLetterException,
    NotCyclicallyReducedException,
    RankMismatchException,
)

Codes = Tuple[int, ...]

# Letters are shifted into a private-use plane so str methods can scan words.
_SEARCH_BASE = 0x80000


def check_rank(rank: int) -> int:
    """Return `rank` if it is a valid free group rank."""
    if isinstance(rank, bool) or not isinstance(rank, int) or rank < 1:
        raise ValueError(f"Rank must be a positive integer, got {rank!r}")
    return rank


def letter_key(code: int) -> int:
    """Position of a letter in the order x1 < x1^-1 < x2 < x2^-1 < ..."""
    return 2 * (abs(code) - 1) + (0 if code > 0 else 1)


def letters_of_rank(rank: int) -> Codes:
    """Return all letters of the given rank in letter order."""
    return tuple(
        code for index in range(1, check_rank(rank) + 1) for code in (index, -index)
    )


def word_key(codes: Iterable[int]) -> Codes:
    """Lexicographic sort key of a letter sequence."""
    return tuple(letter_key(code) for code in codes)


def letter_char(code: int) -> str:
    """Return the text form of a single letter."""
    if abs(code) > MAX_TEXT_RANK:
        raise InvalidLetterException(f"No text form for generator {abs(code)}")
    char = ALPHABET[abs(code) - 1]
    return char if code > 0 else char.upper()


def _reduce_codes(codes: Iterable[int]) -> Codes:
    stack: List[int] = []
    for code in codes:
        if stack and stack[-1] == -code:
            stack.pop()
        else:
            stack.append(code)
    return tuple(stack)


def _inverse_codes(codes: Codes) -> Codes:
    return tuple(-code for code in reversed(codes))


def _strip(codes: Codes) -> Tuple[Codes, Codes]:
    """Split reduced `codes` as prefix, cyclically reduced core, prefix^-1."""
    i = 0
    while len(codes) - 2 * i >= 2 and codes[i] == -codes[-1 - i]:
        i += 1
    return codes[:i], codes[i : len(codes) - i]


def _least_rotation(codes: Codes) -> int:
    if not codes:
        return 0
    keys = word_key(codes)
    return min(range(len(keys)), key=lambda r: keys[r:] + keys[:r])


@dataclass(frozen=True)
class Letter:
    """A standard generator or its inverse."""

    generator: int
    sign: int = 1

    def __post_init__(self) -> None:
        """Validate letter."""
        if self.generator < 1:
            raise InvalidLetterException(f"Invalid generator index {self.generator}")
        if self.sign not in (1, -1):
            raise InvalidLetterException(f"Invalid sign {self.sign}")

    @classmethod
    def from_code(cls, code: int) -> "Letter":
        """Create letter from its signed generator index."""
        if code == 0:
            raise InvalidLetterException("0 is not a letter")
        return cls(abs(code), 1 if code > 0 else -1)

    @property
    def code(self) -> int:
        """Signed generator index."""
        return self.generator * self.sign

    def inverse(self) -> "Letter":
        """Return the inverse letter."""
        return Letter(self.generator, -self.sign)

    def __str__(self) -> str:
        return letter_char(self.code)


@dataclass(frozen=True)
class Word:
    """
    Element of the free group of rank `rank`.

    Letters are stored as signed generator indices and are always freely reduced:
    the constructor reduces whatever it is given.
    """

    rank: int
    letters: Codes = ()

    def __post_init__(self) -> None:
        """Validate and reduce letters."""
        check_rank(self.rank)
        codes = []
        for letter in self.letters:
            code = letter.code if isinstance(letter, Letter) else int(letter)
            if code == 0 or abs(code) > self.rank:
                raise InvalidLetterException(
                    f"Letter {code} out of range for rank {self.rank}"
                )
            codes.append(code)
        object.__setattr__(self, "letters", _reduce_codes(codes))

    @classmethod
    def identity(cls, rank: int) -> "Word":
        """Return the identity of F_rank."""
        return cls(rank)

    @classmethod
    def generator(cls, rank: int, index: int, sign: int = 1) -> "Word":
        """Return the standard generator x_index (or its inverse)."""
        return cls(rank, (Letter(index, sign).code,))

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Word":
        """Create word from its JSON form."""
        return parse_word(data["word"], data["rank"])

    @property
    def length(self) -> int:
        """Length of the reduced word."""
        return len(self.letters)

    @property
    def is_identity(self) -> bool:
        """Whether this is the identity."""
        return not self.letters

    @property
    def is_cyclically_reduced(self) -> bool:
        """Whether first and last letters are not mutually inverse."""
        return len(self.letters) < 2 or self.letters[0] != -self.letters[-1]

    def as_letters(self) -> List[Letter]:
        """Return the letters as `Letter` objects."""
        return [Letter.from_code(code) for code in self.letters]

    def as_dict(self) -> Dict[str, Any]:
        """Return the JSON form of the word."""
        return {"rank": self.rank, "word": str(self)}

    def __len__(self) -> int:
        return len(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        return multiply(self, other)

    def __invert__(self) -> "Word":
        return invert(self)

    def __pow__(self, exponent: int) -> "Word":
        return power(self, exponent)

    def __str__(self) -> str:
        return "".join(letter_char(code) for code in self.letters) or "1"

    def __repr__(self) -> str:
        return f"Word({self.rank}, {str(self)!r})"


@dataclass(frozen=True)
class CyclicWord:
    """Conjugacy class representative: canonical rotation of a cyclically reduced word."""

    rank: int
    letters: Codes = ()

    def __post_init__(self) -> None:
        """Validate and rotate letters."""
        codes = Word(self.rank, self.letters).letters
        if len(codes) >= 2 and codes[0] == -codes[-1]:
            raise NotCyclicallyReducedException(
                f"{Word(self.rank, codes)} is not cyclically reduced"
            )
        start = _least_rotation(codes)
        object.__setattr__(self, "letters", codes[start:] + codes[:start])

    @classmethod
    def of(cls, word: Word) -> "CyclicWord":
        """Return the conjugacy class representative of `word`."""
        return cyclic_reduce(word)[0]

    def as_word(self) -> Word:
        """Return the representative as a word."""
        return Word(self.rank, self.letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return str(self.as_word())


def parse_word(text: str, rank: Optional[int] = None) -> Word:
    """
    Parse word text such as `AbaaB`.

    Lowercase letters are generators, uppercase their inverses. When `rank` is not
    given the largest generator used determines it.
    """
    stripped = "".join(char for char in text if not char.isspace() and char not in "·*.")
    if stripped in IDENTITY_TOKENS:
        return Word.identity(rank or 1)
    codes = []
    for char in stripped:
        index = ALPHABET.find(char.lower())
        if index < 0:
            raise InvalidLetterException(f"Invalid letter `{char}` in {text!r}")
        codes.append(index + 1 if char.islower() else -(index + 1))
    if rank is None:
        rank = max(abs(code) for code in codes)
    return Word(rank, codes)


def reduce(rank: int, letters: Iterable[Union[int, Letter]]) -> Word:
    """Return the reduced word equal to the product of `letters`."""
    return Word(rank, tuple(letters))


def check_same_rank(*words: Union[Word, CyclicWord]) -> int:
    """Return the common rank of `words`."""
    ranks = {word.rank for word in words}
    if len(ranks) != 1:
        raise RankMismatchException(f"Mixed ranks: {sorted(ranks)}")
    return ranks.pop()


def multiply(g: Word, h: Word) -> Word:
    """Return the reduced product g·h."""
    rank = check_same_rank(g, h)
    left, right = g.letters, h.letters
    i = 0
    while i < min(len(left), len(right)) and left[-1 - i] == -right[i]:
        i += 1
    return Word(rank, left[: len(left) - i] + right[i:])


def invert(g: Word) -> Word:
    """Return g^-1."""
    return Word(g.rank, _inverse_codes(g.letters))


def power(g: Word, exponent: int) -> Word:
    """Return g^exponent for any integer exponent."""
    if exponent < 0:
        return power(invert(g), -exponent)
    prefix, core = _strip(g.letters)
    return Word(g.rank, prefix + core * exponent + _inverse_codes(prefix))


def conjugate(g: Word, u: Word) -> Word:
    """Return u·g·u^-1."""
    return multiply(multiply(u, g), invert(u))


def product(words: Iterable[Word], rank: int) -> Word:
    """Return the product of `words` in order."""
    result = Word.identity(rank)
    for word in words:
        result = multiply(result, word)
    return result


def cyclic_reduce(g: Word) -> Tuple[CyclicWord, Word]:
    """
    Return the cyclic core of `g` and a conjugator.

    The result satisfies g = conjugator · core · conjugator^-1, with the core in
    its canonical rotation.
    """
    prefix, core = _strip(g.letters)
    start = _least_rotation(core)
    return (
        CyclicWord(g.rank, core[start:] + core[:start]),
        Word(g.rank, prefix + core[:start]),
    )


def cyclic_split(g: Word) -> Tuple[Word, Word]:
    """Return (p, c) with g = p·c·p^-1 and c cyclically reduced, without rotating."""
    prefix, core = _strip(g.letters)
    return Word(g.rank, prefix), Word(g.rank, core)


def cyclic_core(g: Word) -> Word:
    """Return the cyclically reduced word obtained by stripping inverse ends."""
    return Word(g.rank, _strip(g.letters)[1])


def search_text(g: Word) -> str:
    """Encode the letters of `g` one character each, for substring scans."""
    return "".join(chr(_SEARCH_BASE + code) for code in g.letters)


def count_disjoint(w: Word, g: Word) -> int:
    """
    Return the little counting function c_w(g).

    Occurrences of a fixed pattern are intervals of equal length, so taking the
    leftmost occurrence that starts after the previous one ends is maximal.
    `str.count` scans exactly this way.
    """
    check_same_rank(w, g)
    if w.is_identity:
        raise IdentityWordException("Cannot count copies of the identity")
    return search_text(g).count(search_text(w))


def is_subword(w: Word, g: Word) -> bool:
    """Whether the reduced word of `w` occurs in the reduced word of `g`."""
    check_same_rank(w, g)
    return search_text(w) in search_text(g)


def are_conjugate(g: Word, h: Word) -> bool:
    """Whether g and h are conjugate in the free group."""
    check_same_rank(g, h)
    return cyclic_reduce(g)[0] == cyclic_reduce(h)[0]


def primitive_root(g: Word) -> Tuple[Word, int]:
    """Return (root, exponent) with g = root^exponent and root not a proper power."""
    if g.is_identity:
        raise IdentityWordException("The identity has no primitive root")
    prefix, core = _strip(g.letters)
    size = len(core)
    for period in range(1, size + 1):
        if size % period == 0 and core == core[:period] * (size // period):
            root = prefix + core[:period] + _inverse_codes(prefix)
            return Word(g.rank, root), size // period
    raise AssertionError("unreachable")  # pragma: no cover


def exponent_sums(g: Word) -> Tuple[int, ...]:
    """Return the image of `g` in the abelianisation Z^rank."""
    sums = [0] * g.rank
    for code in g.letters:
        sums[abs(code) - 1] += 1 if code > 0 else -1
    return tuple(sums)


def shortlex_key(g: Word) -> Tuple[int, Codes]:
    """Sort key: length first, then letter order."""
    return len(g.letters), word_key(g.letters)


def reduced_words(rank: int, max_len: int) -> Iterator[Word]:
    """Yield all reduced words of length <= max_len in shortlex order."""
    alphabet = letters_of_rank(rank)
    level: List[Codes] = [()]
    yield Word.identity(rank)
    for _ in range(max_len):
        level = [
            codes + (code,)
            for codes in level
            for code in alphabet
            if not codes or codes[-1] != -code
        ]
        for codes in level:
            yield Word(rank, codes)
