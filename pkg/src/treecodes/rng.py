"""Counter-based deterministic randomness, keyed by (seed, context labels).

Streams are independent per key, so parallel trials can draw without shared
state and results merge deterministically.  Built on SHA-256 as a PRF; no
cryptographic claim is made or needed, only cross-platform reproducibility.
"""

from __future__ import annotations

import hashlib
from typing import Iterable, List, TypeVar

T = TypeVar("T")


class DetStream:
    """An infinite deterministic byte stream with convenience draws."""

    def __init__(self, seed: int, *context: object) -> None:
        self._key = f"{seed}|" + "|".join(str(c) for c in context)
        self._counter = 0
        self._buf = b""

    def _refill(self) -> None:
        h = hashlib.sha256(f"{self._key}|{self._counter}".encode()).digest()
        self._counter += 1
        self._buf += h

    def bytes(self, k: int) -> bytes:
        while len(self._buf) < k:
            self._refill()
        out, self._buf = self._buf[:k], self._buf[k:]
        return out

    def u64(self) -> int:
        return int.from_bytes(self.bytes(8), "big")

    def randbelow(self, n: int) -> int:
        """Uniform draw from 0..n-1 (rejection sampling, unbiased)."""
        if n <= 0:
            raise ValueError("randbelow needs n >= 1")
        k = max(1, (n - 1).bit_length())
        nbytes = (k + 7) // 8
        mask = (1 << k) - 1
        while True:
            v = int.from_bytes(self.bytes(nbytes), "big") & mask
            if v < n:
                return v

    def shuffled(self, items: Iterable[T]) -> List[T]:
        """Fisher-Yates shuffle of a copy of items."""
        out = list(items)
        for i in range(len(out) - 1, 0, -1):
            j = self.randbelow(i + 1)
            out[i], out[j] = out[j], out[i]
        return out

    def distinct_pair(self, n: int) -> tuple[int, int]:
        """An ordered pair of distinct values from 0..n-1."""
        a = self.randbelow(n)
        b = self.randbelow(n - 1)
        if b >= a:
            b += 1
        return a, b

    def choices(self, n: int, k: int) -> List[int]:
        return [self.randbelow(n) for _ in range(k)]
