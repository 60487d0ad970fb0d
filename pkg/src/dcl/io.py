"""File helpers shared by the CLI and the library writers.

All writers go through :func:`atomic_write` so an interrupted run never
leaves a truncated artifact behind.
"""

import contextlib
import csv
import io
import json
import os
import tempfile
from concurrent.futures import ThreadPoolExecutor


def worker_count(default=None):
    """Number of worker threads, capped by the ``DCL_THREADS`` env var."""
    env = os.environ.get("DCL_THREADS")
    cap = os.cpu_count() or 1
    if env:
        try:
            cap = max(1, int(env))
        except ValueError:
            raise ValueError(f"DCL_THREADS must be an integer, got {env!r}") from None
    if default is not None:
        return max(1, min(default, cap))
    return cap


def ordered_map(func, items, workers=None):
    """Map ``func`` over ``items`` and return results in input order."""
    items = list(items)
    n = worker_count() if workers is None else workers
    if n <= 1 or len(items) <= 1:
        return [func(it) for it in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(func, items))


def _read_umask():
    mask = os.umask(0)
    os.umask(mask)
    return mask


# read once at import; os.umask is process-wide and racy under threads
_UMASK = _read_umask()


@contextlib.contextmanager
def atomic_write(path, mode="w", **kwargs):
    """Write to a temp file in the target directory, then rename over ``path``."""
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, mode, **kwargs) as fh:
            yield fh
            fh.flush()
            os.fsync(fh.fileno())
        os.chmod(tmp, 0o666 & ~_UMASK)
        os.replace(tmp, path)
    except BaseException:
        with contextlib.suppress(OSError):
            os.unlink(tmp)
        raise


def write_json(path, obj):
    with atomic_write(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_csv(path, header, rows, fmt="{:.9g}"):
    """Write rows of numbers/strings; floats are formatted with ``fmt``."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt.format(v) if isinstance(v, float) else v for v in row])
    with atomic_write(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(buf.getvalue())


def write_text(path, text):
    with atomic_write(path, "w", encoding="utf-8") as fh:
        fh.write(text)
