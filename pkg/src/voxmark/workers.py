"""
Workers Module - voxmark
------------------------
Runs independent jobs (per-utterance extraction, per-fold training) serially
or on a process pool. Results always come back in input order, so the output
never depends on the job count.
"""
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Callable, List, Sequence

log = logging.getLogger(__name__)


def guarded(fn: Callable[[Any], Any], item) -> dict:
    """Call fn(item) and report success or failure as a plain dict."""
    t0 = time.perf_counter()
    try:
        value = fn(item)
        return {"ok": True, "value": value, "elapsed": round(time.perf_counter() - t0, 4)}
    except Exception as e:
        return {"ok": False, "error": e, "elapsed": round(time.perf_counter() - t0, 4)}


def _call(args):
    fn, item = args
    return guarded(fn, item)


def run_jobs(fn: Callable[[Any], Any], items: Sequence[Any], jobs: int = 1) -> List[dict]:
    """Map `fn` over items. `fn` must be a module-level function when jobs > 1."""
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        return [guarded(fn, item) for item in items]
    workers = min(jobs, len(items))
    log.debug("running %d jobs on %d worker processes", len(items), workers)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_call, [(fn, item) for item in items]))
