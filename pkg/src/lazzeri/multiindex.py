"""Multi-index combinatorics for exterior powers of R^n.

Degree-m multi-indices over {1, ..., n} as strictly increasing tuples,
the lexicographic ordering, permutation signs by inversion counting,
and the symmetric lexicographic ordering of the middle degree: first
the indices containing 1 (in lex order), then their complements, each
complement ordered so that (I, complement) is an even permutation of
(1, ..., n).

Multi-indices are 1-based tuples everywhere in the public API.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import comb

from .errors import InvalidArgumentsError


def lex_multiindices(n: int, m: int) -> list[tuple[int, ...]]:
    """All C(n, m) strictly increasing m-tuples in {1..n}, lex sorted."""
    if m < 1 or m > n:
        raise InvalidArgumentsError(f"need 1 <= m <= n, got m={m}, n={n}")
    return list(combinations(range(1, n + 1), m))


def sequence_sign(seq) -> int:
    """Sign of the permutation sorting `seq`, or 0 if entries repeat."""
    seq = tuple(seq)
    if len(set(seq)) != len(seq):
        return 0
    inversions = 0
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                inversions += 1
    return -1 if inversions % 2 else 1


def perm_sign(index_a, index_b) -> int:
    """Sign of the permutation taking the concatenation (a, b) to (1..n).

    Returns 0 when the two multi-indices share an entry.  The
    concatenation must otherwise be a permutation of 1..n with
    n = len(a) + len(b).
    """
    joined = tuple(index_a) + tuple(index_b)
    n = len(joined)
    sign = sequence_sign(joined)
    if sign == 0:
        return 0
    if set(joined) != set(range(1, n + 1)):
        raise InvalidArgumentsError(
            f"concatenation {joined} is not a permutation of 1..{n}"
        )
    return sign


def tilde(index, n: int) -> tuple[int, ...]:
    """Complement of `index`, ordered so (index, tilde) is even.

    The rule is deterministic: take the sorted complement; if the
    concatenated sign is -1, transpose its last two entries.  The
    input must be a strictly increasing half-degree multi-index
    containing 1.
    """
    index = tuple(index)
    if n % 2 != 0 or 2 * len(index) != n:
        raise InvalidArgumentsError(f"need n = 2m with len(index) = m, got {index}, n={n}")
    if index[0] != 1:
        raise InvalidArgumentsError(f"{index} does not contain the index 1")
    if any(index[i] >= index[i + 1] for i in range(len(index) - 1)):
        raise InvalidArgumentsError(f"{index} is not strictly increasing")
    if index[-1] > n:
        raise InvalidArgumentsError(f"{index} exceeds n={n}")
    complement = tuple(sorted(set(range(1, n + 1)) - set(index)))
    if sequence_sign(index + complement) == 1:
        return complement
    return complement[:-2] + (complement[-1], complement[-2])


@dataclass(frozen=True, eq=False)
class IndexTable:
    """Orderings and lookups for degree-m multi-indices in {1..n}.

    `lex` is the full lex-ordered basis index list.  When n = 2m the
    symmetric lexicographic data is populated: `script_i` (indices
    containing 1), `tilde_map`, the concatenated `symlex` ordering,
    and the half-dimension `half_dim` = C(n, m) / 2.  For other (n, m)
    those fields are None and only the lex ordering is usable.
    Instances are immutable; share them freely across threads.
    """

    n: int
    m: int
    lex: tuple[tuple[int, ...], ...]
    script_i: tuple[tuple[int, ...], ...] | None
    tilde_map: dict | None
    symlex: tuple[tuple[int, ...], ...] | None
    half_dim: int | None
    lex_position: dict
    # e_{symlex[u]} = symlex_sign[u] * e_{sorted(symlex[u])}
    symlex_lex_position: tuple[int, ...] | None
    symlex_sign: tuple[int, ...] | None
    # sorted complement tuple -> (symlex position, sign)
    sorted_to_symlex: dict | None

    @property
    def size(self) -> int:
        return len(self.lex)

    def symlex_coords(self, sorted_index) -> tuple[int, int]:
        """Position and sign of a sorted multi-index in the symlex basis.

        Returns (u, s) with e_{sorted_index} = s * e_{symlex[u]}.
        """
        if self.sorted_to_symlex is None:
            raise InvalidArgumentsError("symlex ordering requires n = 2m")
        key = tuple(sorted_index)
        if key not in self.sorted_to_symlex:
            raise InvalidArgumentsError(f"{key} is not a sorted degree-{self.m} index")
        return self.sorted_to_symlex[key]

    def to_dict(self) -> dict:
        """JSON-friendly description of the orderings."""
        data = {
            "n": self.n,
            "m": self.m,
            "lex_order": [list(t) for t in self.lex],
        }
        if self.symlex is not None:
            data["script_I"] = [list(t) for t in self.script_i]
            data["tilde"] = [[list(k), list(v)] for k, v in self.tilde_map.items()]
            data["symlex_order"] = [list(t) for t in self.symlex]
            data["N"] = self.half_dim
        return data


@lru_cache(maxsize=None)
def build_index_table(n: int, m: int | None = None, require_symlex: bool = False) -> IndexTable:
    """Build (and cache) the index table for degree m in {1..n}.

    m defaults to n // 2.  Symlex data is populated exactly when
    n = 2m; `require_symlex` turns its absence into an error.
    """
    if m is None:
        if n % 2 != 0:
            raise InvalidArgumentsError(f"n={n} is odd; pass m explicitly")
        m = n // 2
    lex = tuple(lex_multiindices(n, m))
    lex_position = {index: pos for pos, index in enumerate(lex)}

    if n != 2 * m:
        if require_symlex:
            raise InvalidArgumentsError(f"symlex ordering needs n = 2m, got n={n}, m={m}")
        return IndexTable(n, m, lex, None, None, None, None, lex_position, None, None, None)

    script = tuple(index for index in lex if index[0] == 1)
    assert len(script) == comb(n - 1, m - 1)
    tilde_map = {index: tilde(index, n) for index in script}
    symlex = script + tuple(tilde_map[index] for index in script)
    half = len(script)
    assert 2 * half == len(lex)

    positions = []
    signs = []
    sorted_lookup = {}
    for u, entry in enumerate(symlex):
        key = tuple(sorted(entry))
        positions.append(lex_position[key])
        s = sequence_sign(entry)
        signs.append(s)
        sorted_lookup[key] = (u, s)

    return IndexTable(
        n,
        m,
        lex,
        script,
        tilde_map,
        symlex,
        half,
        lex_position,
        tuple(positions),
        tuple(signs),
        sorted_lookup,
    )
