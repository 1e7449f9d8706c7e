"""Attack surfaces: the sets of tokens a typo adversary can produce.

Two surfaces are implemented. ``ed1`` allows a single edit (insert a
lowercase letter, delete a character, substitute a character for any
lowercase letter, or swap two adjacent characters) under the constraint that
the first and last characters of the token stay fixed. ``intperm`` allows
any reordering of a token's interior characters, endpoints fixed.

Both surfaces always include the unperturbed token itself.
"""

from __future__ import annotations

import math
from collections import Counter
from typing import Iterator

LOWERCASE = "abcdefghijklmnopqrstuvwxyz"
_LOWER_SET = frozenset(LOWERCASE)


def signature(token: str) -> str:
    """First character + sorted interior characters + last character.

    Two tokens are interior-permutation equivalent iff their signatures are
    equal. A single-character token is its own signature.
    """
    if not token:
        raise ValueError("token must be non-empty")
    if len(token) <= 2:
        return token
    return token[0] + "".join(sorted(token[1:-1])) + token[-1]


class AttackSurface:
    """Per-token perturbation rules. Subclasses are pure and stateless."""

    kind: str

    def perturbations(self, token: str) -> set[str]:
        """All distinct tokens the adversary can produce, including ``token``."""
        raise NotImplementedError

    def is_perturbation(self, original: str, candidate: str) -> bool:
        """Membership test, equivalent to ``candidate in perturbations(original)``."""
        raise NotImplementedError

    def perturbation_count(self, token: str) -> int:
        """``len(perturbations(token))`` without materializing the set."""
        raise NotImplementedError

    def class_key(self, token: str) -> str | None:
        """Equivalence key when the perturbation relation is an equivalence.

        If non-None, ``perturbations(t)`` is exactly the set of tokens whose
        key equals ``class_key(t)``. Surfaces without this structure return
        None and callers fall back to enumeration.
        """
        return None


class Ed1Surface(AttackSurface):
    """Single edit-distance-one typos with fixed first and last characters.

    For a token c1..cL the legal edits are: substitution of an interior
    position by one of the 26 lowercase letters; insertion of a lowercase
    letter in any of the L-1 slots strictly between existing characters;
    deletion of an interior position; swap of two adjacent interior
    positions. Results are counted as distinct strings, so edits that
    reproduce the token collapse into the identity.
    """

    kind = "ed1"

    def perturbations(self, token: str) -> set[str]:
        if not token:
            raise ValueError("token must be non-empty")
        out = {token}
        L = len(token)
        for i in range(1, L - 1):  # interior positions, 0-indexed
            head, tail = token[:i], token[i + 1 :]
            for ch in LOWERCASE:
                out.add(head + ch + tail)
            out.add(head + tail)  # deletion
        for s in range(1, L):  # insertion slots between characters
            head, tail = token[:s], token[s:]
            for ch in LOWERCASE:
                out.add(head + ch + tail)
        for i in range(1, L - 2):  # swaps where both positions are interior
            out.add(token[:i] + token[i + 1] + token[i] + token[i + 2 :])
        return out

    def perturbation_count(self, token: str) -> int:
        if not token:
            raise ValueError("token must be non-empty")
        L = len(token)
        if L == 1:
            return 1
        interior = token[1:-1]
        n = 1  # identity
        # Substitutions at interior position i give 26 strings, one of which
        # is the identity when the original character is itself a lowercase
        # letter. Strings from different positions never coincide (each
        # differs from the token at exactly its own position).
        n += sum(25 if c in _LOWER_SET else 26 for c in interior)
        # Inserting letter x after position s and after position s+1 yields
        # the same string iff the character between the slots equals x, so
        # each interior lowercase character voids exactly one of the
        # 26*(L-1) slot/letter combinations.
        n += 26 * (L - 1) - sum(c in _LOWER_SET for c in interior)
        # Deletions at interior positions i < j coincide iff c_i..c_j is a
        # constant run, so distinct deletions = number of runs.
        if interior:
            n += 1 + sum(
                interior[k] != interior[k - 1] for k in range(1, len(interior))
            )
        # A swap is the identity iff the pair is equal; distinct non-identity
        # swaps never coincide with each other or with substitutions (they
        # differ from the token at two positions).
        n += sum(token[i] != token[i + 1] for i in range(1, L - 2))
        return n

    def is_perturbation(self, original: str, candidate: str) -> bool:
        if not original or not candidate:
            raise ValueError("tokens must be non-empty")
        if candidate == original:
            return True
        L, M = len(original), len(candidate)
        if L == 1:
            return False
        if candidate[0] != original[0] or candidate[-1] != original[-1]:
            return False
        if M == L:
            diffs = [i for i in range(L) if candidate[i] != original[i]]
            if len(diffs) == 1:
                i = diffs[0]
                return 1 <= i <= L - 2 and candidate[i] in _LOWER_SET
            if len(diffs) == 2:
                i, j = diffs
                return (
                    j == i + 1
                    and 1 <= i
                    and j <= L - 2
                    and candidate[i] == original[j]
                    and candidate[j] == original[i]
                )
            return False
        if M == L + 1:
            return any(
                candidate[k] in _LOWER_SET
                and candidate[:k] + candidate[k + 1 :] == original
                for k in range(1, M - 1)
            )
        if M == L - 1:
            return any(
                original[:i] + original[i + 1 :] == candidate
                for i in range(1, L - 1)
            )
        return False


class InternalPermutationSurface(AttackSurface):
    """Arbitrary reorderings of interior characters, endpoints fixed."""

    kind = "intperm"

    def perturbations(self, token: str) -> set[str]:
        if not token:
            raise ValueError("token must be non-empty")
        if len(token) <= 3:
            return {token}
        first, last = token[0], token[-1]
        return {
            first + "".join(mid) + last
            for mid in _distinct_permutations(sorted(token[1:-1]))
        }

    def perturbation_count(self, token: str) -> int:
        if not token:
            raise ValueError("token must be non-empty")
        interior = token[1:-1]
        n = math.factorial(len(interior))
        for mult in Counter(interior).values():
            n //= math.factorial(mult)
        return n

    def is_perturbation(self, original: str, candidate: str) -> bool:
        if not original or not candidate:
            raise ValueError("tokens must be non-empty")
        return len(original) == len(candidate) and signature(original) == signature(
            candidate
        )

    def class_key(self, token: str) -> str:
        return signature(token)


def _distinct_permutations(items: list[str]) -> Iterator[list[str]]:
    """Yield each distinct arrangement of ``items`` exactly once.

    ``items`` must be pre-sorted; arrangements come out in lexicographic
    order via the classic next-permutation step.
    """
    seq = list(items)
    n = len(seq)
    if n == 0:
        yield []
        return
    while True:
        yield list(seq)
        # find rightmost ascent
        i = n - 2
        while i >= 0 and seq[i] >= seq[i + 1]:
            i -= 1
        if i < 0:
            return
        j = n - 1
        while seq[j] <= seq[i]:
            j -= 1
        seq[i], seq[j] = seq[j], seq[i]
        seq[i + 1 :] = reversed(seq[i + 1 :])


_SURFACES = {
    Ed1Surface.kind: Ed1Surface,
    InternalPermutationSurface.kind: InternalPermutationSurface,
}


def get_surface(kind: str) -> AttackSurface:
    """Instantiate a surface from its CLI/config id ("ed1" or "intperm")."""
    try:
        return _SURFACES[kind]()
    except KeyError:
        raise ValueError(
            f"unknown attack surface {kind!r}; expected one of {sorted(_SURFACES)}"
        ) from None
