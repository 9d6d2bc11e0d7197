"""
Chunked parallel scanning shared by every exhaustive enumeration.
"""
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Callable, List, Optional, Tuple

from config import CHUNK_SIZE, DEFAULT_THREADS, MAX_ENUMERATION
from .errors import EnumerationLimitError

ProgressCallback = Callable[[str, float], None]


@dataclass(frozen=True)
class ScanOptions:
    """Limits and parallelism for exhaustive scans."""

    max_enum: int = MAX_ENUMERATION
    threads: int = DEFAULT_THREADS
    chunk_size: int = CHUNK_SIZE
    progress_callback: Optional[ProgressCallback] = None

    def check_limit(self, what: str, count: int) -> None:
        """Refuse scans larger than max_enum."""
        if count > self.max_enum:
            raise EnumerationLimitError(what, count, self.max_enum)


def resolve_options(options: Optional[ScanOptions]) -> ScanOptions:
    return options if options is not None else ScanOptions()


class ChunkScanner:
    """Runs a per-block task over [0, total) on a thread pool."""

    def __init__(self, options: Optional[ScanOptions] = None, label: str = "scan"):
        self.options = resolve_options(options)
        self.label = label
        self.progress_lock = threading.Lock()
        self._done = 0
        self._total = 0

    def blocks(self, total: int) -> List[Tuple[int, int]]:
        """Split the index range into contiguous blocks."""
        size = max(1, self.options.chunk_size)
        return [(start, min(start + size, total)) for start in range(0, total, size)]

    def _report(self, finished: int):
        with self.progress_lock:
            self._done += finished
            done = self._done
        if self.options.progress_callback and self._total:
            self.options.progress_callback(self.label, 100.0 * done / self._total)

    def _rounds(self, total: int):
        blocks = self.blocks(total)
        width = max(1, self.options.threads)
        for i in range(0, len(blocks), width):
            yield blocks[i:i + width]

    def map_blocks(self, task: Callable[[int, int], Any], total: int) -> List[Any]:
        """Apply task(start, stop) to every block; results in block order."""
        self._done, self._total = 0, total
        results: List[Any] = []
        with ThreadPoolExecutor(max_workers=max(1, self.options.threads)) as pool:
            for round_blocks in self._rounds(total):
                futures = [pool.submit(task, start, stop) for start, stop in round_blocks]
                for (start, stop), future in zip(round_blocks, futures):
                    results.append(future.result())
                    self._report(stop - start)
        return results

    def first_hit(self, task: Callable[[int, int], Optional[Tuple[int, Any]]], total: int):
        """Smallest-index hit over all blocks, or None.

        task(start, stop) returns (global_index, payload) for the first hit in
        its block, or None. Scanning stops after the round containing a hit.
        """
        self._done, self._total = 0, total
        with ThreadPoolExecutor(max_workers=max(1, self.options.threads)) as pool:
            for round_blocks in self._rounds(total):
                futures = [pool.submit(task, start, stop) for start, stop in round_blocks]
                hits = []
                for (start, stop), future in zip(round_blocks, futures):
                    hit = future.result()
                    if hit is not None:
                        hits.append(hit)
                    self._report(stop - start)
                if hits:
                    return min(hits, key=lambda h: h[0])
        return None
