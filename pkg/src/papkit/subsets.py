"""Index subsets as integer bitmasks.

Statistic indices run from 0 to n-1 internally; a mask ``m`` contains
statistic ``i`` iff bit ``i`` of ``m`` is set.  Masks are plain ints so
they can key dicts and be serialized directly.
"""

from __future__ import annotations

from typing import Iterator

MAX_STATISTICS = 16


class InstanceTooLargeError(ValueError):
    """Raised when a problem exceeds the supported number of statistics."""


def full_mask(n: int) -> int:
    """Mask containing all of 0..n-1."""
    _check_n(n)
    return (1 << n) - 1


def enumerate_subsets(n: int) -> list[int]:
    """All 2^n subset masks of {0,..,n-1} in increasing bit order."""
    _check_n(n)
    return list(range(1 << n))


def is_subset(inner: int, outer: int) -> bool:
    """True iff every index in ``inner`` is also in ``outer``."""
    return inner & outer == inner

def mask_size(mask: int) -> int:
    return bin(mask).count("1")


def members(mask: int) -> tuple[int, ...]:
    """Indices contained in ``mask``, ascending."""
    out = []
    i = 0
    m = mask
    while m:
        if m & 1:
            out.append(i)
        m >>= 1
        i += 1
    return tuple(out)


def submasks(mask: int) -> Iterator[int]:
    """All subsets of ``mask`` (including 0 and ``mask`` itself).

    Standard descending-submask walk; runs in O(2^|mask|).
    """
    s = mask
    while True:
        yield s
        if s == 0:
            return
        s = (s - 1) & mask


def restrict(indices: tuple[int, ...], mask: int) -> tuple[int, ...]:
    """Keep only the coordinates of a full index tuple that lie in ``mask``."""
    return tuple(indices[i] for i in members(mask))


def restrict_partial(indices: tuple[int, ...], mask: int, sub: int) -> tuple[int, ...]:
    """Restrict a partial outcome on ``mask`` to ``sub`` ⊆ ``mask``."""
    if not is_subset(sub, mask):
        raise ValueError(f"{sub:b} is not a subset of {mask:b}")
    pos = {stat: k for k, stat in enumerate(members(mask))}
    return tuple(indices[pos[i]] for i in members(sub))


def _check_n(n: int) -> None:
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    if n > MAX_STATISTICS:
        raise InstanceTooLargeError(
            f"n={n} exceeds the supported maximum of {MAX_STATISTICS} statistics"
        )
