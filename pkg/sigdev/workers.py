"""Ordered thread-pool fan-out for independent numerical jobs."""

from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor, as_completed


def parallel_map[T, R](
    fn: Callable[[T], R],
    items: Sequence[T],
    max_workers: int = 1,
) -> list[R]:
    """Apply ``fn`` to every item, return results in input order.

    ``max_workers <= 1`` runs inline. Exceptions from a job propagate to the caller.
    """
    if max_workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]

    results: list[R | None] = [None] * len(items)
    with ThreadPoolExecutor(max_workers=min(max_workers, len(items))) as pool:
        futures = {pool.submit(fn, item): i for i, item in enumerate(items)}
        for fut in as_completed(futures):
            results[futures[fut]] = fut.result()
    return results  # type: ignore[return-value]
