"""Order-preserving process pool map; results never depend on ``jobs``."""
import os
from concurrent.futures import ProcessPoolExecutor


def default_jobs():
    try:
        return max(1, int(os.environ.get("FFDIOPH_JOBS", "1")))
    except ValueError:
        return 1


def pmap(func, items, jobs=None):
    items = list(items)
    jobs = default_jobs() if jobs is None else max(1, int(jobs))
    if jobs == 1 or len(items) < 2:
        return [func(it) for it in items]
    with ProcessPoolExecutor(max_workers=min(jobs, len(items))) as ex:
        return list(ex.map(func, items, chunksize=max(1, len(items) // (4 * jobs))))
